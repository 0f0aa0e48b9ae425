//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use complex_trees::connectivity::{
    certify_disconnected, disk_cover, member_escape_test, CertificateKind, DEFAULT_ESCAPE_DEPTH,
    DEFAULT_FRONTIER_CAP,
};
use complex_trees::dimension::{alpha_locus_on_ray, in_m2, similarity_dimension};
use complex_trees::family::{preset, ParametricFamily};
use complex_trees::parse::{parse_ep_word, parse_finite_word, parse_relation};
use complex_trees::roots::{m0_root_cloud, m_root_cloud, polynomial_roots, CloudOptions};
use complex_trees::tree::post_critical_set;
use complex_trees::{Alphabet, EpWord};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tau() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Direct partial sum `1 + w1 + w1 w2 + ..` over the first `terms` letters.
fn partial_sum(letters: &[Complex64], w: &EpWord, terms: usize) -> Complex64 {
    let mut sum = c(1.0, 0.0);
    let mut prod = c(1.0, 0.0);
    for s in w.symbols().take(terms) {
        prod *= letters[s as usize];
        sum += prod;
    }
    sum
}

fn random_alphabet(rng: &mut ChaCha8Rng) -> Alphabet {
    loop {
        let n = rng.gen_range(2..=4);
        let letters: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.05..=0.9), rng.gen_range(-PI..PI)))
            .collect();
        if let Ok(a) = Alphabet::new(letters) {
            return a;
        }
    }
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random_alphabet(&mut rng);
        let r = a.contraction();
        let n = a.len();
        for _ in 0..10 {
            let pre: Vec<usize> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(1..=n)).collect();
            let per: Vec<usize> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(1..=n)).collect();
            let w = EpWord::from_one_based(&pre, &per).map_err(|e| e.to_string())?;
            let closed = a.phi_ep(&w).map_err(|e| e.to_string())?;
            let direct = partial_sum(a.letters(), &w, 200);
            let err = (closed - direct).norm();
            let bound = r.powi(201) / (1.0 - r) + 1e-12;
            ensure(err <= bound, || format!("{w} on {:?}: error {err:e} > {bound:e}", a.letters()))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("1000 words, worst error {worst:.1e}"))
}

fn real(coeffs: &[f64]) -> Vec<Complex64> {
    coeffs.iter().map(|&x| c(x, 0.0)).collect()
}

fn has_root(coeffs: &[f64], z: Complex64, tol: f64) -> Result<(), String> {
    let roots = polynomial_roots(&real(coeffs)).map_err(|e| e.to_string())?;
    ensure(roots.iter().any(|r| (r.z - z).norm() <= tol), || {
        format!("{z} not among the roots of {coeffs:?}")
    })
}

fn criterion_2() -> Check {
    let s7 = 7f64.sqrt() / 4.0;
    has_root(&[1.0, 1.0, 2.0], c(-0.25, s7), 1e-8)?;
    has_root(&[1.0, 1.0, 2.0], c(-0.25, -s7), 1e-8)?;
    has_root(&[1.0, 0.0, -2.0, -4.0], c(-0.5, 0.5), 1e-8)?;
    has_root(&[1.0, -1.0, 0.0, -4.0], c(-0.25, s7), 1e-8)?;
    has_root(&[1.0, -1.0, 0.0, -2.0, -4.0], c(0.0, 0.5f64.sqrt()), 1e-8)?;
    Ok("all five roots within 1e-8".into())
}

fn criterion_3() -> Check {
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let rel = parse_relation("133~2=211~2").map_err(|e| e.to_string())?;
    let defect = fam.relation_defect(&rel).map_err(|e| e.to_string())?;
    let roots = polynomial_roots(defect.numerator().coeffs()).map_err(|e| e.to_string())?;
    let want = [c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5)];
    for w in want {
        ensure(roots.iter().any(|r| (r.z - w).norm() <= 1e-8), || format!("missing root {w}"))?;
    }
    for r in &roots {
        ensure(want.iter().any(|w| (r.z - w).norm() <= 1e-8), || format!("extra root {}", r.z))?;
    }
    Ok(format!("defect {defect}"))
}

fn criterion_4() -> Check {
    let mut report = Vec::new();
    for name in ["ternary-up", "ternary-down", "binary-b1", "binary-b2", "binary-b3"] {
        let fam = preset(name).map_err(|e| e.to_string())?;
        let worst = fam.verify_identity(100, 4).map_err(|e| e.to_string())?;
        ensure(worst < 1e-12, || format!("{name}: residual {worst:e}"))?;
        report.push(format!("{name} {worst:.0e}"));
    }
    // c2 = 1 + z^2/(z + 1) = (1 + z + z^2)/(1 + z), same relation as binary-b2
    let text = r#"{"n": 2,
        "letters": [{"num": [[0,0],[1,0]], "den": [[1,0]]},
                    {"num": [[1,0],[1,0],[1,0]], "den": [[1,0],[1,0]]}],
        "relations": [{"left": {"pre": [1,1,1], "per": [2]},
                       "right": {"pre": [2,1,1], "per": [2]}}]}"#;
    let fam = ParametricFamily::from_json(text)
        .map_err(|e| e.to_string())?
        .with_sample_box(c(-1.0, -1.0), c(1.0, 1.0));
    let worst = fam.verify_identity(100, 4).map_err(|e| e.to_string())?;
    ensure(worst < 1e-12, || format!("1 + z^2/(z+1): residual {worst:e}"))?;
    report.push(format!("1+z^2/(z+1) {worst:.0e}"));
    Ok(report.join(", "))
}

fn criterion_5() -> Check {
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let z = c(-0.25, 3f64.sqrt() / 4.0);
    let a = fam.eval(z).map_err(|e| e.to_string())?;
    let rel = parse_relation("11~2=33~2").map_err(|e| e.to_string())?;
    let res = a.check_relation(&rel).map_err(|e| e.to_string())?;
    ensure(res < 1e-12, || format!("residual {res:e}"))?;
    Ok(format!("residual {res:.1e}"))
}

fn criterion_6() -> Check {
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let a = fam.eval(c(0.0, 0.5)).map_err(|e| e.to_string())?;
    let d = similarity_dimension(&a, 1e-15).map_err(|e| e.to_string())?;
    let want = 3f64.ln() / 2f64.ln();
    ensure((d.alpha - want).abs() <= 1e-9, || format!("alpha {} vs {want}", d.alpha))?;
    let (outer, inner) = (tau() / 2.0, 1.0 / (2.0 * tau()));
    for t in [outer, inner] {
        for angle in [0.3, 1.9, -2.5] {
            let a = fam.eval(Complex64::from_polar(t, angle)).map_err(|e| e.to_string())?;
            let s: f64 = a.letters().iter().map(|l| l.norm_sqr()).sum();
            ensure((s - 1.0).abs() <= 1e-9, || format!("sum |c|^2 = {s} at |z| = {t}"))?;
        }
    }
    for angle in [0.3, 1.9, -2.5] {
        let loci = alpha_locus_on_ray(&fam, angle, 2.0, 1e-13).map_err(|e| e.to_string())?;
        ensure(loci.len() == 2, || format!("{} loci at angle {angle}", loci.len()))?;
        ensure((loci[0] - inner).abs() <= 1e-9 && (loci[1] - outer).abs() <= 1e-9, || {
            format!("loci {loci:?} vs [{inner}, {outer}]")
        })?;
    }
    Ok(format!("alpha = {}, loci 1/(2 tau) and tau/2", d.alpha))
}

fn criterion_7() -> Check {
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (inner, outer) = (1.0 / (2.0 * tau()), tau() / 2.0);
    let bands_in = [(0.25 + 1e-3, inner - 1e-3), (outer + 1e-3, 1.0 - 1e-3)];
    for k in 0..1000 {
        let (lo, hi) = bands_in[k % 2];
        let z = Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI));
        ensure(in_m2(&fam, z).map_err(|e| e.to_string())?, || format!("{z} should be in M2"))?;
    }
    for _ in 0..1000 {
        let z = Complex64::from_polar(rng.gen_range(inner + 1e-3..outer - 1e-3), rng.gen_range(-PI..PI));
        ensure(!in_m2(&fam, z).map_err(|e| e.to_string())?, || format!("{z} should not be in M2"))?;
    }
    Ok("1000 inside, 1000 outside".into())
}

/// Smallest gap between disks of different groups, by exhaustive scan.
fn partition_gap(a: &Alphabet, level: usize, partition: &[Vec<usize>]) -> Result<f64, String> {
    let cover = disk_cover(a, level).map_err(|e| e.to_string())?;
    let group_of = |i: usize| {
        let first = cover.word(i).first().unwrap() as usize + 1;
        partition.iter().position(|g| g.contains(&first)).unwrap()
    };
    let mut gap = f64::INFINITY;
    for i in 0..cover.len() {
        for j in i + 1..cover.len() {
            if group_of(i) != group_of(j) {
                let (d1, d2) = (cover.disks[i], cover.disks[j]);
                gap = gap.min((d1.center - d2.center).norm() - d1.radius - d2.radius);
            }
        }
    }
    Ok(gap)
}

fn criterion_8() -> Check {
    let mut report = Vec::new();
    for (letters, max_level) in [(vec![c(0.3, 0.2), c(-0.3, -0.2)], 12), (vec![c(0.1, 0.0), c(-0.1, 0.0)], 1)] {
        let a = Alphabet::new(letters).map_err(|e| e.to_string())?;
        let cert = certify_disconnected(&a, 12).map_err(|e| e.to_string())?;
        ensure(cert.kind == CertificateKind::Disconnected && cert.level <= max_level, || {
            format!("{:?}: {}", a.letters(), cert.to_json())
        })?;
        ensure(cert.partition.len() >= 2, || "partition has one group".into())?;
        let gap = partition_gap(&a, cert.level, &cert.partition)?;
        ensure(gap > 0.0, || format!("groups touch: gap {gap:e}"))?;
        report.push(format!("k = {} (gap {gap:.2e})", cert.level));
    }
    Ok(report.join(", "))
}

fn criterion_9() -> Check {
    let fam = preset("plusminus").map_err(|e| e.to_string())?;
    let cloud = m_root_cloud(&fam, 12, &CloudOptions::default()).map_err(|e| e.to_string())?;
    ensure(!cloud.is_empty(), || "empty cloud".into())?;
    let min = cloud.points.iter().map(|p| p.z.norm()).fold(f64::INFINITY, f64::min);
    ensure(min >= 0.5 - 1e-6, || format!("point with |c| = {min}"))?;
    Ok(format!(
        "{} points from {} polynomials, min |c| = {min:.9}",
        cloud.len(),
        cloud.polynomials
    ))
}

fn escape(a: &Alphabet) -> Result<CertificateKind, String> {
    member_escape_test(a, c(0.0, 0.0), DEFAULT_ESCAPE_DEPTH, DEFAULT_FRONTIER_CAP)
        .map(|cert| cert.kind)
        .map_err(|e| e.to_string())
}

fn criterion_10() -> Check {
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let z0 = c(-0.25, 7f64.sqrt() / 4.0);
    let a0 = fam.eval(z0).map_err(|e| e.to_string())?;
    let tip = a0.phi_ep(&parse_ep_word("11~2").unwrap()).map_err(|e| e.to_string())?;
    ensure(tip.norm() < 1e-12, || format!("|phi(11~2)| = {:e}", tip.norm()))?;
    ensure(escape(&a0)? == CertificateKind::NotExcluded, || "z0 excluded".into())?;
    let a9 = fam.eval(c(0.9, 0.0)).map_err(|e| e.to_string())?;
    ensure(escape(&a9)? == CertificateKind::Excluded, || "0.9 not excluded".into())?;

    let cloud = m0_root_cloud(&fam, 6, &CloudOptions::default()).map_err(|e| e.to_string())?;
    for p in &cloud.points {
        let a = fam.eval(p.z).map_err(|e| e.to_string())?;
        ensure(escape(&a)? == CertificateKind::NotExcluded, || {
            format!("cloud point {} ({}) excluded", p.z, p.provenance)
        })?;
    }
    for (word, want) in [("111~2", c(0.119492, 0.813835)), ("1111~2", c(-0.621035, 0.502297))] {
        let phi = fam.phi_ep_symbolic(&parse_ep_word(word).unwrap()).map_err(|e| e.to_string())?;
        let roots = polynomial_roots(phi.numerator().coeffs()).map_err(|e| e.to_string())?;
        ensure(roots.iter().any(|r| (r.z - want).norm() <= 1e-5), || {
            format!("phi({word}) = 0 has no root near {want}")
        })?;
        ensure(cloud.contains(want, 1e-5), || format!("m0 cloud misses {want}"))?;
    }
    Ok(format!("{} m0 cloud points all not excluded", cloud.len()))
}

fn criterion_11() -> Check {
    let a = Alphabet::new(vec![c(2.0 / 3.0, 0.0), c(-0.6, 0.0)]).map_err(|e| e.to_string())?;
    let node = a.phi(&parse_finite_word("121").unwrap()).map_err(|e| e.to_string())?;
    ensure((node - 1.0).norm() < 1e-12, || format!("phi(121) = {node}"))?;
    let tip = a.phi_ep(&parse_ep_word("~121").unwrap()).map_err(|e| e.to_string())?;
    ensure((tip - 1.0).norm() < 1e-12, || format!("phi(~121) = {tip}"))?;
    let cert = member_escape_test(&a, c(1.0, 0.0), DEFAULT_ESCAPE_DEPTH, DEFAULT_FRONTIER_CAP)
        .map_err(|e| e.to_string())?;
    ensure(cert.kind == CertificateKind::NotExcluded, || "root excluded from the tipset".into())?;
    Ok(format!("|phi(~121) - 1| = {:.1e}", (tip - 1.0).norm()))
}

fn criterion_12() -> Check {
    // 1 + x + x^2 - x^3: take the root near 0.737 e^{-2.176 i}
    let roots = polynomial_roots(&real(&[1.0, 1.0, 1.0, -1.0])).map_err(|e| e.to_string())?;
    let guess = Complex64::from_polar(0.737, -2.176);
    let cr = roots
        .iter()
        .min_by(|x, y| (x.z - guess).norm().total_cmp(&(y.z - guess).norm()))
        .unwrap()
        .z;
    let a = Alphabet::new(vec![cr, -cr]).map_err(|e| e.to_string())?;
    let (u, v) = (parse_finite_word("1112").unwrap(), parse_finite_word("2112").unwrap());
    let nodes = (a.phi(&u).unwrap() - a.phi(&v).unwrap()).norm();
    let prods = (a.product(&u).unwrap() - a.product(&v).unwrap()).norm();
    let exact = a.exact_piece_overlap(&u, &v, 1e-9).map_err(|e| e.to_string())?;
    let h = a.neighbor_map(&u, &v).map_err(|e| e.to_string())?;
    ensure(exact && h.is_identity(1e-9), || {
        format!(
            "c = {cr:.8}: |phi(1112) - phi(2112)| = {nodes:.1e} but |prod(1112) - prod(2112)| = {prods:.3}; \
             h(z) = {:.6} + {:.6}(z - 1) is not the identity",
            h.node, h.scale
        )
    })?;
    Ok(format!("c = {cr:.8}"))
}

fn criterion_13() -> Check {
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let set = post_critical_set(fam.relations());
    let want: std::collections::BTreeSet<EpWord> = ["3~2", "~2", "1~2"]
        .iter()
        .map(|w| parse_ep_word(w).unwrap())
        .collect();
    ensure(set == want, || format!("{set:?}"))?;
    Ok("{3~2, ~2, 1~2}".into())
}

fn criterion_14() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let status = Command::new(env!("CARGO_BIN_EXE_ctree"))
            .args(["scan", "--preset", "ternary-up", "--tests", "m2,m0", "--res", "256x256"])
            .arg("--out-dir")
            .arg(dir.path())
            .args(["--out", name])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        std::fs::read(dir.path().join(name)).map_err(|e| e.to_string())
    };
    let first = run("a.ppm")?;
    let second = run("b.ppm")?;
    ensure(first == second, || "scans differ".into())?;
    let header = b"P6\n256 256\n255\n";
    ensure(first.starts_with(header) && first.len() == header.len() + 3 * 256 * 256, || {
        "malformed PPM".into()
    })?;
    let fam = preset("ternary-up").map_err(|e| e.to_string())?;
    let g = complex_trees::render::Geometry::new(256, 256, fam.sample_box.0, fam.sample_box.1)
        .map_err(|e| e.to_string())?;
    let pixels = &first[header.len()..];
    let mut m0 = 0;
    for (i, px) in pixels.chunks_exact(3).enumerate() {
        if px == complex_trees::render::PALETTE_M0 {
            m0 += 1;
            let z = g.pixel_center(i % 256, i / 256);
            ensure(fam.is_admissible(z), || format!("m0 pixel at inadmissible {z}"))?;
        }
    }
    let frac = m0 as f64 / (256.0 * 256.0);
    ensure((0.01..=0.6).contains(&frac), || format!("m0 fraction {frac}"))?;
    Ok(format!("identical PPMs, m0 fraction {frac:.3}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 14] = [
        ("closed-form tip points", criterion_1),
        ("published polynomial roots", criterion_2),
        ("relation defect factorization", criterion_3),
        ("family identities", criterion_4),
        ("Sierpinski relation", criterion_5),
        ("similarity dimension and loci", criterion_6),
        ("M2 annuli", criterion_7),
        ("disconnection certificates", criterion_8),
        ("plusminus cloud bound", criterion_9),
        ("root connectivity", criterion_10),
        ("node-to-root property", criterion_11),
        ("exact overlap in the Rauzy tree", criterion_12),
        ("post-critical set", criterion_13),
        ("scan determinism", criterion_14),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let result = f();
        let dt = t0.elapsed();
        match result {
            Ok(msg) => println!("PASS [{:2}] {name}: {msg} ({dt:.1?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{:2}] {name}: {msg} ({dt:.1?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
