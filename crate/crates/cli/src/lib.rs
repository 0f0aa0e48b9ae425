//! Command line front end: argument and config handling plus one thin
//! adapter per subcommand.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{run, Outcome};
pub use config::RunConfig;

/// Exit code for bad input (usage, parse, domain errors).
pub const EXIT_INPUT: i32 = 1;
/// Exit code when the result differs from `--expect`.
pub const EXIT_EXPECTATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ctree", version, about = "Complex trees: tips, tipsets, parameter scans and certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: Args,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate phi on a finite or eventually periodic word.
    Tip,
    /// Render the tree up to --depth.
    Tree,
    /// Render the depth-limited tipset sample.
    Tipset,
    /// Label a parameter grid with the --tests m2,m0,disconnect.
    Scan,
    /// Root cloud of the relation defects up to --level.
    Mcloud,
    /// Root cloud of node and tip equations up to --order.
    M0cloud,
    /// Similarity dimension (and M2 membership for a family).
    Dim,
    /// Connectivity verdict from relations and disk covers.
    Check,
    /// Exact piece overlap (--u, --v) or overlap localization (--letters).
    Overlap,
    /// Post-critical set of the relations.
    Pcf,
    /// Check the declared relations of a family at sampled parameters.
    VerifyFamily,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Tip => "tip",
            Command::Tree => "tree",
            Command::Tipset => "tipset",
            Command::Scan => "scan",
            Command::Mcloud => "mcloud",
            Command::M0cloud => "m0cloud",
            Command::Dim => "dim",
            Command::Check => "check",
            Command::Overlap => "overlap",
            Command::Pcf => "pcf",
            Command::VerifyFamily => "verify-family",
        }
    }
}

#[derive(Clone, Debug, Default, clap::Args)]
pub struct Args {
    /// JSON file with default values for any of these options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Preset family: ternary-up, ternary-down, binary-b1..b3, plusminus, conjugate, ngon:<n>.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Comma-separated complex letters, e.g. "i/2,1/2,-i/2".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alphabet: Option<String>,
    /// Family definition JSON file.
    #[arg(long, global = true)]
    pub family: Option<PathBuf>,
    /// Family parameter.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Word such as 13~2 (period after '~') or 1322.
    #[arg(long, global = true)]
    pub word: Option<String>,
    /// Relations such as "13~2=21~2;31~2=23~2".
    #[arg(long, global = true)]
    pub relations: Option<String>,
    /// First word for `overlap`.
    #[arg(long, global = true)]
    pub u: Option<String>,
    /// Second word for `overlap`.
    #[arg(long, global = true)]
    pub v: Option<String>,
    /// Pair of first letters for overlap localization, e.g. "1,3".
    #[arg(long, global = true)]
    pub letters: Option<String>,
    /// Word length for `tree` and `tipset`.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Cover level for `check` and `overlap`, word length for `mcloud`.
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Word length for `m0cloud`.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Tolerance for `dim` and `verify-family`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Cap on polynomials, disks or segments.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Viewport "re0,im0,re1,im1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub viewport: Option<String>,
    /// Resolution "WxH".
    #[arg(long, global = true)]
    pub res: Option<String>,
    /// Scan tests, e.g. "m2,m0".
    #[arg(long, global = true)]
    pub tests: Option<String>,
    /// Tail periods, e.g. "1,2" or "2,13".
    #[arg(long, global = true)]
    pub tails: Option<String>,
    /// Number of sampled parameters for `verify-family`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Seed for sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Ray angle in radians for `dim --alpha`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub angle: Option<f64>,
    /// Dimension whose locus `dim` traces along the ray.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Target point for the escape test in `check`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub target: Option<String>,
    /// Backward steps in the escape test.
    #[arg(long, global = true)]
    pub escape_depth: Option<usize>,
    /// Largest frontier the escape test keeps before giving up.
    #[arg(long, global = true)]
    pub frontier_cap: Option<usize>,
    /// Overlay the relation cloud of this level on a scan.
    #[arg(long, global = true)]
    pub overlay: Option<usize>,
    /// Output file name, relative to --out-dir.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for output files (created if missing).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for parallel commands.
    #[arg(long, global = true, env = "CTREE_WORKERS")]
    pub workers: Option<usize>,
    /// Expected verdict; a mismatch exits with status 2.
    #[arg(long, global = true)]
    pub expect: Option<String>,
    /// Draw the trunk from 0 to the root.
    #[arg(long, global = true)]
    pub trunk: bool,
    /// Color tipset points by first letter.
    #[arg(long, global = true)]
    pub color_pieces: bool,
}

impl Args {
    fn into_config(self, command: Command) -> RunConfig {
        RunConfig {
            command: Some(command.name().to_string()),
            preset: self.preset,
            alphabet: self.alphabet,
            family: self.family,
            z: self.z,
            word: self.word,
            relations: self.relations,
            u: self.u,
            v: self.v,
            letters: self.letters,
            depth: self.depth,
            level: self.level,
            order: self.order,
            tol: self.tol,
            budget: self.budget,
            viewport: self.viewport,
            res: self.res,
            tests: self.tests,
            tails: self.tails,
            samples: self.samples,
            seed: self.seed,
            angle: self.angle,
            alpha: self.alpha,
            target: self.target,
            escape_depth: self.escape_depth,
            frontier_cap: self.frontier_cap,
            overlay: self.overlay,
            out: self.out,
            out_dir: self.out_dir,
            workers: self.workers,
            expect: self.expect,
            trunk: self.trunk.then_some(true),
            color_pieces: self.color_pieces.then_some(true),
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    let command = cli.command;
    let config_path = cli.args.config.clone();
    let result = (|| {
        let mut cfg = cli.args.into_config(command);
        if let Some(path) = config_path {
            cfg = cfg.or(RunConfig::load(&path)?);
        }
        cfg.validate()?;
        run(command, &cfg, stdout)
    })();
    match result {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::ExpectationFailed(msg)) => {
            let _ = writeln!(stderr, "expectation failed: {msg}");
            EXIT_EXPECTATION
        }
        // a closed stdout (e.g. piping into `head`) is not an error
        Err(e)
            if e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_INPUT
        }
    }
}
