use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use complex_trees::connectivity::{
    certify_disconnected_with_budget, letter_graph_connected, member_escape_test, overlap_localization,
    Certificate, CertificateKind, DEFAULT_DISK_BUDGET, DEFAULT_ESCAPE_DEPTH, DEFAULT_FRONTIER_CAP,
};
use complex_trees::dimension::{alpha_locus_on_ray, similarity_dimension, sum_of_squares};
use complex_trees::family::{preset, ParametricFamily};
use complex_trees::parse::{
    format_complex, parse_alphabet, parse_complex, parse_ep_word, parse_finite_word, parse_relations,
};
use complex_trees::render::{
    render_tipset, render_tree, scan_grid, write_cloud, write_image, Geometry, ScanConfig, ScanTests,
    TreeStyle, LABEL_DISCONNECTED, LABEL_DOMAIN, LABEL_M0, LABEL_M2,
};
use complex_trees::roots::{m0_root_cloud, m_root_cloud, CloudOptions, RootCloud, DEFAULT_PAIR_BUDGET};
use complex_trees::tree::post_critical_set;
use complex_trees::{Alphabet, FiniteWord, Relation, DEFAULT_RELATION_TOL};
use num_complex::Complex64;

use crate::{Command, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ExpectationFailed(String),
}

/// Runs one command against a resolved configuration, writing the report
/// to `out`.
pub fn run(command: Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Tip => tip(cfg, out),
        Command::Tree => tree(cfg, out, false),
        Command::Tipset => tree(cfg, out, true),
        Command::Scan => scan(cfg, out),
        Command::Mcloud => cloud(cfg, out, false),
        Command::M0cloud => cloud(cfg, out, true),
        Command::Dim => dim(cfg, out),
        Command::Check => check(cfg, out),
        Command::Overlap => overlap(cfg, out),
        Command::Pcf => pcf(cfg, out),
        Command::VerifyFamily => verify_family(cfg, out),
    }
}

fn family(cfg: &RunConfig) -> Result<Option<ParametricFamily>> {
    if let Some(name) = &cfg.preset {
        return Ok(Some(preset(name)?));
    }
    if let Some(path) = &cfg.family {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read family file {}", path.display()))?;
        let fam = ParametricFamily::from_json(&text).with_context(|| format!("in {}", path.display()))?;
        return Ok(Some(fam));
    }
    Ok(None)
}

fn require_family(cfg: &RunConfig) -> Result<ParametricFamily> {
    family(cfg)?.ok_or_else(|| anyhow!("this command needs --preset or --family"))
}

fn parameter(cfg: &RunConfig) -> Result<Option<Complex64>> {
    cfg.z.as_deref().map(parse_complex).transpose().context("bad --z")
}

fn alphabet(cfg: &RunConfig) -> Result<Alphabet> {
    if let Some(text) = &cfg.alphabet {
        return parse_alphabet(text).context("bad --alphabet");
    }
    let fam = family(cfg)?.ok_or_else(|| anyhow!("give --alphabet, or a family with --z"))?;
    let z = parameter(cfg)?.ok_or_else(|| anyhow!("a family needs a parameter --z"))?;
    Ok(fam.eval(z)?)
}

fn relations(cfg: &RunConfig, fam: Option<&ParametricFamily>) -> Result<Vec<Relation>> {
    match (&cfg.relations, fam) {
        (Some(text), _) => parse_relations(text).context("bad --relations"),
        (None, Some(f)) => Ok(f.relations().to_vec()),
        (None, None) => Ok(Vec::new()),
    }
}

/// `WxH`, or a single number for a square image.
fn parse_res(text: &str) -> Result<(usize, usize)> {
    let (w, h) = text.split_once(['x', 'X']).unwrap_or((text, text));
    let bad = || anyhow!("resolution must look like 256x256, got {text:?}");
    Ok((w.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?))
}

fn geometry(cfg: &RunConfig, default_res: usize, default_view: (Complex64, Complex64)) -> Result<Geometry> {
    let (w, h) = match &cfg.res {
        Some(r) => parse_res(r)?,
        None => (default_res, default_res),
    };
    let (min, max) = match &cfg.viewport {
        Some(v) => {
            let nums: Vec<f64> = v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .context("viewport must be four numbers re0,im0,re1,im1")?;
            let [a, b, c, d] = nums[..] else {
                bail!("viewport must be four numbers re0,im0,re1,im1");
            };
            (Complex64::new(a, b), Complex64::new(c, d))
        }
        None => default_view,
    };
    Ok(Geometry::new(w, h, min, max)?)
}

fn output_path(cfg: &RunConfig, default_name: &str) -> Result<PathBuf> {
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    Ok(dir.join(cfg.out.clone().unwrap_or_else(|| PathBuf::from(default_name))))
}

fn with_workers<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> Result<T> {
    match cfg.workers {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
        None => Ok(f()),
    }
}

fn expect(cfg: &RunConfig, actual: &str) -> Outcome {
    match &cfg.expect {
        Some(e) if normalize(e) != normalize(actual) => {
            Outcome::ExpectationFailed(format!("expected {e}, got {actual}"))
        }
        _ => Outcome::Success,
    }
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase()
}

fn kind_name(kind: CertificateKind) -> &'static str {
    match kind {
        CertificateKind::Disconnected => "disconnected",
        CertificateKind::Connected => "connected",
        CertificateKind::Excluded => "excluded",
        CertificateKind::NotExcluded => "not-excluded",
        CertificateKind::Inconclusive => "inconclusive",
    }
}

fn tip(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let a = alphabet(cfg)?;
    let word = cfg.word.as_deref().ok_or_else(|| anyhow!("tip needs --word"))?;
    let value = if word.contains('~') {
        a.phi_ep(&parse_ep_word(word)?)?
    } else {
        a.phi(&parse_finite_word(word)?)?
    };
    writeln!(out, "{}", format_complex(value))?;
    Ok(Outcome::Success)
}

fn tree(cfg: &RunConfig, out: &mut dyn Write, tipset: bool) -> Result<Outcome> {
    let a = alphabet(cfg)?;
    let r = a.bounding_radius() * 1.05;
    let one = Complex64::new(1.0, 0.0);
    let g = geometry(cfg, 512, (one - Complex64::new(r, r), one + Complex64::new(r, r)))?;
    let (img, name) = if tipset {
        let depth = cfg.depth.unwrap_or(10);
        (render_tipset(&a, depth, g, cfg.color_pieces.unwrap_or(false))?, "tipset.ppm")
    } else {
        let depth = cfg.depth.unwrap_or(8);
        let style = TreeStyle { trunk: cfg.trunk.unwrap_or(false) };
        (render_tree(&a, depth, g, style)?, "tree.ppm")
    };
    let path = output_path(cfg, name)?;
    write_image(&img, &path)?;
    writeln!(out, "wrote {} ({}x{})", path.display(), g.width, g.height)?;
    Ok(Outcome::Success)
}

fn cloud_options(cfg: &RunConfig, fam: &ParametricFamily) -> Result<CloudOptions> {
    let tails = match &cfg.tails {
        Some(text) => Some(
            text.split(',')
                .map(|t| parse_finite_word(t.trim()))
                .collect::<complex_trees::Result<Vec<FiniteWord>>>()
                .context("bad --tails")?,
        ),
        None => None,
    };
    if let Some(t) = &tails {
        if t.iter().any(|w| w.is_empty()) {
            bail!("tails must be nonempty words");
        }
        if t.iter().any(|w| w.max_symbol().is_some_and(|s| s as usize >= fam.len())) {
            bail!("tail letters must be at most {}", fam.len());
        }
    }
    Ok(CloudOptions {
        tails,
        budget: cfg.budget.unwrap_or(DEFAULT_PAIR_BUDGET),
        ..CloudOptions::default()
    })
}

fn scan(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let fam = require_family(cfg)?;
    let tests = ScanTests::parse(cfg.tests.as_deref().unwrap_or("m2,m0"))?;
    let g = geometry(cfg, 256, fam.sample_box)?;
    let defaults = ScanConfig::default();
    let scan_cfg = ScanConfig {
        escape_depth: cfg.escape_depth.unwrap_or(defaults.escape_depth),
        frontier_cap: cfg.frontier_cap.unwrap_or(defaults.frontier_cap),
        disconnect_k: cfg.level.unwrap_or(defaults.disconnect_k),
        disk_budget: cfg.budget.unwrap_or(defaults.disk_budget),
        workers: cfg.workers.unwrap_or(defaults.workers),
    };
    let labels = scan_grid(&fam, tests, g, &scan_cfg)?;
    let mut img = labels.to_image();
    if let Some(level) = cfg.overlay {
        let opts = cloud_options(cfg, &fam)?;
        let cloud = with_workers(cfg, || m_root_cloud(&fam, level, &opts))??;
        img.overlay_cloud(&cloud, [220, 30, 30]);
    }
    let path = output_path(cfg, "scan.ppm")?;
    write_image(&img, &path)?;
    writeln!(
        out,
        "wrote {} ({}x{}): m2 {}, m0 {}, disconnected {}, outside domain {}",
        path.display(),
        g.width,
        g.height,
        labels.count(LABEL_M2),
        labels.count(LABEL_M0),
        labels.count(LABEL_DISCONNECTED),
        labels.count(LABEL_DOMAIN),
    )?;
    Ok(Outcome::Success)
}

fn cloud(cfg: &RunConfig, out: &mut dyn Write, m0: bool) -> Result<Outcome> {
    let fam = require_family(cfg)?;
    let opts = cloud_options(cfg, &fam)?;
    let cloud: RootCloud = if m0 {
        let order = cfg.order.or(cfg.level).unwrap_or(6);
        with_workers(cfg, || m0_root_cloud(&fam, order, &opts))??
    } else {
        let level = cfg.level.unwrap_or(6);
        with_workers(cfg, || m_root_cloud(&fam, level, &opts))??
    };
    match &cfg.out {
        Some(_) => {
            let path = output_path(cfg, "cloud.csv")?;
            write_cloud(&cloud, &path)?;
            writeln!(
                out,
                "{} points from {} polynomials; wrote {}",
                cloud.len(),
                cloud.polynomials,
                path.display()
            )?;
        }
        None => write!(out, "{}", cloud.to_csv())?,
    }
    Ok(Outcome::Success)
}

fn dim(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let fam = family(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-15);
    let have_point = cfg.alphabet.is_some() || cfg.z.is_some();
    if have_point {
        let a = alphabet(cfg)?;
        let d = similarity_dimension(&a, tol)?;
        writeln!(out, "alpha = {}", d.alpha)?;
        writeln!(out, "residual = {:e}", d.residual)?;
        writeln!(out, "iterations = {}", d.iterations)?;
        let s = sum_of_squares(&a);
        writeln!(out, "sum |c|^2 = {s}")?;
        writeln!(out, "m2: {}", s > 1.0)?;
    }
    if let (Some(target), Some(fam)) = (cfg.alpha, &fam) {
        let angle = cfg.angle.unwrap_or(0.0);
        let loci = alpha_locus_on_ray(fam, angle, target, tol.max(1e-14))?;
        let text: Vec<String> = loci.iter().map(|t| t.to_string()).collect();
        writeln!(out, "alpha = {target} at |z| = {}", text.join(", "))?;
    } else if !have_point {
        bail!("dim needs --alphabet, --z, or a family with --alpha");
    }
    Ok(Outcome::Success)
}

fn verdict(cfg: &RunConfig, a: &Alphabet, rels: &[Relation], out: &mut dyn Write) -> Result<Certificate> {
    if let Some(t) = &cfg.target {
        let target = parse_complex(t).context("bad --target")?;
        return Ok(member_escape_test(
            a,
            target,
            cfg.escape_depth.unwrap_or(DEFAULT_ESCAPE_DEPTH),
            cfg.frontier_cap.unwrap_or(DEFAULT_FRONTIER_CAP),
        )?);
    }
    let tol = cfg.tol.unwrap_or(DEFAULT_RELATION_TOL);
    let mut holding = Vec::new();
    for r in rels {
        let res = a.check_relation(r)?;
        let ok = res <= tol;
        writeln!(out, "relation {r}: residual {res:e} ({})", if ok { "holds" } else { "fails" })?;
        if ok {
            holding.push(r.clone());
        }
    }
    if letter_graph_connected(a.len(), &holding) {
        return Ok(Certificate::new(CertificateKind::Connected, 0)
            .with_detail("verified relations connect every first-level piece"));
    }
    Ok(certify_disconnected_with_budget(
        a,
        cfg.level.unwrap_or(12),
        cfg.budget.unwrap_or(DEFAULT_DISK_BUDGET),
    )?)
}

fn check(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let fam = family(cfg)?;
    let a = alphabet(cfg)?;
    let rels = relations(cfg, fam.as_ref())?;
    let cert = verdict(cfg, &a, &rels, out)?;
    writeln!(out, "{}", cert.to_json())?;
    Ok(expect(cfg, kind_name(cert.kind)))
}

fn parse_letter_pair(text: &str, n: usize) -> Result<(u16, u16)> {
    let (j, k) = text.split_once(',').ok_or_else(|| anyhow!("--letters must look like 1,3"))?;
    let letter = |s: &str| -> Result<u16> {
        let l: usize = s.trim().parse().context("bad letter")?;
        if l == 0 || l > n {
            bail!("letters must be between 1 and {n}");
        }
        Ok((l - 1) as u16)
    };
    Ok((letter(j)?, letter(k)?))
}

fn overlap(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let a = alphabet(cfg)?;
    if let (Some(u), Some(v)) = (&cfg.u, &cfg.v) {
        let (u, v) = (parse_finite_word(u)?, parse_finite_word(v)?);
        let tol = cfg.tol.unwrap_or(DEFAULT_RELATION_TOL);
        let exact = a.exact_piece_overlap(&u, &v, tol)?;
        let h = a.neighbor_map(&u, &v)?;
        writeln!(
            out,
            "neighbor map h(z) = {} + ({})(z - 1)",
            format_complex(h.node),
            format_complex(h.scale)
        )?;
        writeln!(out, "identity: {}", h.is_identity(tol))?;
        writeln!(out, "exact overlap F_{u} = F_{v}: {exact}")?;
        return Ok(expect(cfg, if exact { "true" } else { "false" }));
    }
    let letters = cfg
        .letters
        .as_deref()
        .ok_or_else(|| anyhow!("overlap needs --u and --v, or --letters j,k"))?;
    let (j, k) = parse_letter_pair(letters, a.len())?;
    let m = cfg.level.unwrap_or(6);
    let pairs = overlap_localization(&a, j, k, m)?;
    writeln!(out, "{} intersecting disk pairs at level {m}", pairs.len())?;
    for p in pairs.iter().take(20) {
        writeln!(out, "{} {} {}", p.v, p.w, format_complex(p.midpoint))?;
    }
    Ok(expect(cfg, if pairs.is_empty() { "empty" } else { "nonempty" }))
}

fn pcf(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let fam = family(cfg)?;
    let rels = relations(cfg, fam.as_ref())?;
    if rels.is_empty() {
        bail!("pcf needs --relations or a family with declared relations");
    }
    let set = post_critical_set(&rels);
    let words: Vec<String> = set.iter().map(|w| w.to_string()).collect();
    writeln!(out, "{{{}}}", words.join(", "))?;
    // eventually periodic words always have finite shift orbits
    writeln!(out, "p.c.f.: true (cardinality {})", set.len())?;
    Ok(expect(cfg, "true"))
}

fn verify_family(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let fam = require_family(cfg)?;
    let samples = cfg.samples.unwrap_or(100);
    let tol = cfg.tol.unwrap_or(1e-12);
    let worst = fam.verify_identity(samples, cfg.seed())?;
    let ok = worst <= tol;
    let count = fam.relations().len();
    writeln!(out, "family {} ({count} relation{})", fam.name, if count == 1 { "" } else { "s" })?;
    writeln!(out, "max residual over {samples} samples: {worst:e}")?;
    writeln!(out, "verified: {ok}")?;
    Ok(expect(cfg, if ok { "pass" } else { "fail" }))
}
