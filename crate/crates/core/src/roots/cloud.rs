use std::collections::{HashMap, HashSet};
use std::hash::{DefaultHasher, Hash, Hasher};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{roots_of, ROOT_CLUSTER_TOL};
use crate::family::ParametricFamily;
use crate::parse::format_real;
use crate::poly::Polynomial;
use crate::tree::{EpWord, FiniteWord, Relation};
use crate::{Error, Result};

/// Cap on the number of distinct relation (or node) polynomials examined.
pub const DEFAULT_PAIR_BUDGET: usize = 1_000_000;

/// A root is kept only if the equation it came from holds numerically at
/// the root to this accuracy.
const VERIFY_TOL: f64 = 1e-6;

/// Defects whose coefficients all fall below this fraction of the largest
/// term vanish identically: they come from relations that hold on the whole
/// family.
const IDENTITY_REL: f64 = 1e-12;

const BATCH: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudPoint {
    pub z: Complex64,
    pub degree: usize,
    pub residual: f64,
    /// The relation `a=b` or the equation `phi(v)=0` that produced the point.
    pub provenance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RootCloud {
    pub points: Vec<CloudPoint>,
    /// Number of distinct polynomials whose roots were extracted.
    pub polynomials: usize,
    /// Polynomials skipped because they vanish identically.
    pub identities: usize,
}

#[derive(Clone, Debug)]
pub struct CloudOptions {
    /// Periods used as tails; `None` selects the family default.
    pub tails: Option<Vec<FiniteWord>>,
    /// Skip defects that vanish identically (the declared relations and
    /// everything they imply). Without this their numerical noise produces
    /// meaningless roots.
    pub exclude_declared: bool,
    pub budget: usize,
    pub cluster_radius: f64,
}

impl Default for CloudOptions {
    fn default() -> Self {
        Self {
            tails: None,
            exclude_declared: true,
            budget: DEFAULT_PAIR_BUDGET,
            cluster_radius: ROOT_CLUSTER_TOL,
        }
    }
}

impl RootCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.points.iter().any(|p| (p.z - z).norm() <= tol)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,degree,residual,provenance\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{:e},{}\n",
                format_real(p.z.re),
                format_real(p.z.im),
                p.degree,
                p.residual,
                p.provenance
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("clouds serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Letters written over a common denominator: `c_a = letters[a] / den`.
struct CommonForm {
    den: Polynomial,
    letters: Vec<Polynomial>,
}

fn common_form(fam: &ParametricFamily) -> CommonForm {
    let mut factors: Vec<Polynomial> = Vec::new();
    let mut monic = Vec::with_capacity(fam.len());
    for r in fam.letters() {
        let lead = r.denominator().leading();
        let d = r.denominator().monic();
        if !factors.contains(&d) {
            factors.push(d.clone());
        }
        monic.push((r.numerator().scale(1.0 / lead), d));
    }
    let product = |skip: Option<&Polynomial>| {
        let mut skipped = false;
        factors.iter().fold(Polynomial::constant(Complex64::new(1.0, 0.0)), |acc, f| {
            if !skipped && Some(f) == skip {
                skipped = true;
                acc
            } else {
                &acc * f
            }
        })
    };
    CommonForm {
        den: product(None),
        letters: monic.iter().map(|(num, d)| num * &product(Some(d))).collect(),
    }
}

fn quantize(p: &Polynomial, state: &mut DefaultHasher) {
    p.coeffs().len().hash(state);
    for c in p.coeffs() {
        ((c.re * 1e9).round() as i64).hash(state);
        ((c.im * 1e9).round() as i64).hash(state);
    }
}

fn state_key(parts: &[&Polynomial]) -> u64 {
    let mut h = DefaultHasher::new();
    for p in parts {
        quantize(p, &mut h);
    }
    h.finish()
}

/// Hash of `p` up to a nonzero scalar factor.
fn projective_key(p: &Polynomial) -> u64 {
    let pivot = p
        .coeffs()
        .iter()
        .copied()
        .find(|c| c.norm() >= 0.5 * p.norm_inf())
        .unwrap_or(Complex64::new(1.0, 0.0));
    state_key(&[&p.scale(1.0 / pivot)])
}

/// `x` with coefficients below `rel * scale` zeroed.
fn clean(x: Polynomial, scale: f64, rel: f64) -> Polynomial {
    let bound = rel * scale;
    Polynomial::new(
        x.coeffs()
            .iter()
            .map(|&c| if c.norm() <= bound { Complex64::new(0.0, 0.0) } else { c })
            .collect(),
    )
}

/// One equation `e(z) = 0` awaiting root extraction, plus what is needed to
/// re-check it numerically at a candidate root.
struct Job {
    poly: Polynomial,
    check: Check,
}

enum Check {
    Relation(Relation),
    Node(FiniteWord),
    Tip(EpWord),
}

impl Check {
    fn provenance(&self) -> String {
        match self {
            Check::Relation(r) => r.to_string(),
            Check::Node(v) => format!("phi({v})=0"),
            Check::Tip(w) => format!("phi({w})=0"),
        }
    }

    fn residual(&self, fam: &ParametricFamily, z: Complex64) -> Option<f64> {
        let a = fam.eval(z).ok()?;
        match self {
            Check::Relation(r) => a.check_relation(r).ok(),
            Check::Node(v) => a.phi(v).ok().map(|x| x.norm()),
            Check::Tip(w) => a.phi_ep(w).ok().map(|x| x.norm()),
        }
    }
}

fn solve_batch(fam: &ParametricFamily, jobs: &[Job]) -> Vec<CloudPoint> {
    let per_job: Vec<Vec<CloudPoint>> = jobs
        .par_iter()
        .map(|job| {
            let Ok(roots) = roots_of(&job.poly) else {
                return Vec::new();
            };
            roots
                .iter()
                .filter(|r| job.check.residual(fam, r.z).is_some_and(|res| res <= VERIFY_TOL))
                .map(|r| CloudPoint {
                    z: r.z,
                    degree: job.poly.degree().unwrap_or(0),
                    residual: r.residual,
                    provenance: job.check.provenance(),
                })
                .collect()
        })
        .collect();
    per_job.into_iter().flatten().collect()
}

/// Accumulates equations, solves them in parallel batches and merges the
/// admissible roots in a fixed order.
struct Collector<'a> {
    fam: &'a ParametricFamily,
    opts: &'a CloudOptions,
    seen: HashSet<u64>,
    batch: Vec<Job>,
    points: Vec<CloudPoint>,
    identities: usize,
}

impl<'a> Collector<'a> {
    fn new(fam: &'a ParametricFamily, opts: &'a CloudOptions) -> Self {
        Self {
            fam,
            opts,
            seen: HashSet::new(),
            batch: Vec::new(),
            points: Vec::new(),
            identities: 0,
        }
    }

    fn push(&mut self, poly: Polynomial, scale: f64, check: impl FnOnce() -> Check) -> Result<()> {
        let poly = clean(poly, scale, f64::EPSILON);
        if poly.norm_inf() <= IDENTITY_REL * scale {
            self.identities += 1;
            if self.opts.exclude_declared || poly.is_zero() {
                return Ok(());
            }
        }
        if !self.seen.insert(projective_key(&poly)) {
            return Ok(());
        }
        if self.seen.len() > self.opts.budget {
            return Err(Error::BudgetExceeded {
                what: "relation polynomials",
                needed: self.seen.len() as u128,
                limit: self.opts.budget as u128,
            });
        }
        self.batch.push(Job { poly, check: check() });
        if self.batch.len() >= BATCH {
            self.flush();
        }
        Ok(())
    }

    fn flush(&mut self) {
        let jobs = std::mem::take(&mut self.batch);
        self.points.extend(solve_batch(self.fam, &jobs));
    }

    fn finish(mut self) -> RootCloud {
        self.flush();
        RootCloud {
            points: dedupe(self.points, self.opts.cluster_radius),
            polynomials: self.seen.len(),
            identities: self.identities,
        }
    }
}

/// Keeps the first point of every cluster of radius `radius`.
fn dedupe(points: Vec<CloudPoint>, radius: f64) -> Vec<CloudPoint> {
    let cell = radius.max(f64::MIN_POSITIVE);
    let key = |z: Complex64| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    let mut out = Vec::new();
    for p in points {
        let (kx, ky) = key(p.z);
        let close = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                grid.get(&(kx + dx, ky + dy))
                    .is_some_and(|v| v.iter().any(|q| (q - p.z).norm() <= radius))
            })
        });
        if !close {
            grid.entry((kx, ky)).or_default().push(p.z);
            out.push(p);
        }
    }
    out
}

/// Rotations of every tail, so that exact-length prefixes followed by
/// these tails cover all shorter prefixes as well.
fn rotation_closure(tails: &[FiniteWord]) -> Result<Vec<FiniteWord>> {
    let mut out = Vec::new();
    for t in tails {
        if t.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let s = t.symbols();
        for k in 0..s.len() {
            let rotated = FiniteWord::new([&s[k..], &s[..k]].concat())?;
            // canonicalize through the eventually periodic form
            let period = EpWord::periodic(rotated)?.period();
            if !out.contains(&period) {
                out.push(period);
            }
        }
    }
    Ok(out)
}

fn resolve_tails(fam: &ParametricFamily, opts: &CloudOptions) -> Result<Vec<FiniteWord>> {
    let tails = opts.tails.clone().unwrap_or_else(|| fam.default_tails());
    if let Some(t) = tails.iter().find(|t| t.max_symbol().is_some_and(|s| s as usize >= fam.len())) {
        return Err(Error::SymbolOutOfRange {
            symbol: t.max_symbol().unwrap_or(0) as usize + 1,
            n: fam.len(),
        });
    }
    rotation_closure(&tails)
}

/// `(numerator, denominator)` of the tail term `(phi(t) - 1)/(1 - prod(t))`.
fn tail_parts(fam: &ParametricFamily, t: &FiniteWord) -> Result<(Polynomial, Polynomial)> {
    let k = fam.period_tail_symbolic(t)?;
    Ok((k.numerator().clone(), k.denominator().clone()))
}

struct PairState {
    delta: Polynomial,
    prod_u: Polynomial,
    prod_v: Polynomial,
    u: Vec<u16>,
    v: Vec<u16>,
}

/// Roots of the relation defects `phi(u t~) - phi(v s~)` over all prefix
/// pairs `u, v` of length at most `m` with different first letters and all
/// tails `t, s`.
///
/// Each admissible root is a parameter where the tree acquires a relation
/// beyond those of the whole family, so the cloud approximates the unstable
/// set. Pairs are enumerated at exact length `m` against the rotation
/// closure of the tails, which also covers all shorter prefixes; prefix
/// states with equal polynomial data are merged.
pub fn m_root_cloud(fam: &ParametricFamily, m: usize, opts: &CloudOptions) -> Result<RootCloud> {
    if !fam.is_symbolic() {
        return Err(Error::ConjugateFamilyUnsupported);
    }
    if m == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let tails = resolve_tails(fam, opts)?;
    let form = common_form(fam);
    let n = fam.len() as u16;
    let parts: Vec<(Polynomial, Polynomial)> =
        tails.iter().map(|t| tail_parts(fam, t)).collect::<Result<_>>()?;
    // for each tail pair: (M_t M_s, N_t M_s, N_s M_t)
    let mut pair_terms = Vec::new();
    for (i, (nt, mt)) in parts.iter().enumerate() {
        for (j, (ns, ms)) in parts.iter().enumerate() {
            pair_terms.push((i, j, mt * ms, nt * ms, ns * mt));
        }
    }

    let mut level: Vec<PairState> = Vec::new();
    let mut seen = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let (pa, pb) = (&form.letters[a as usize], &form.letters[b as usize]);
            let s = PairState {
                delta: pa - pb,
                prod_u: pa.clone(),
                prod_v: pb.clone(),
                u: vec![a],
                v: vec![b],
            };
            if seen.insert(state_key(&[&s.delta, &s.prod_u, &s.prod_v])) {
                level.push(s);
            }
        }
    }
    let mut collector = Collector::new(fam, opts);
    let emit = |s: &PairState, collector: &mut Collector| -> Result<()> {
        for (i, j, x, y, w) in &pair_terms {
            let t1 = &s.delta * x;
            let t2 = &s.prod_u * y;
            let t3 = &s.prod_v * w;
            let scale = t1.norm_inf().max(t2.norm_inf()).max(t3.norm_inf());
            let poly = &(&t1 + &t2) - &t3;
            collector.push(poly, scale, || {
                let left = EpWord::new(FiniteWord::new(s.u.clone()).expect("bounded"), tails[*i].clone());
                let right = EpWord::new(FiniteWord::new(s.v.clone()).expect("bounded"), tails[*j].clone());
                Check::Relation(
                    Relation::new(left.expect("tails are nonempty"), right.expect("tails are nonempty"))
                        .expect("first letters differ"),
                )
            })?;
        }
        Ok(())
    };
    for depth in 1..m {
        let last = depth + 1 == m;
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for s in &level {
            for a in 0..n {
                for b in 0..n {
                    let (pa, pb) = (&form.letters[a as usize], &form.letters[b as usize]);
                    let prod_u = &s.prod_u * pa;
                    let prod_v = &s.prod_v * pb;
                    let delta = &(&(&s.delta * &form.den) + &prod_u) - &prod_v;
                    if !seen.insert(state_key(&[&delta, &prod_u, &prod_v])) {
                        continue;
                    }
                    let mut u = s.u.clone();
                    u.push(a);
                    let mut v = s.v.clone();
                    v.push(b);
                    let child = PairState { delta, prod_u, prod_v, u, v };
                    if last {
                        emit(&child, &mut collector)?;
                    } else {
                        next.push(child);
                    }
                }
            }
            if seen.len() > opts.budget {
                return Err(Error::BudgetExceeded {
                    what: "prefix pair states",
                    needed: seen.len() as u128,
                    limit: opts.budget as u128,
                });
            }
        }
        if last {
            return Ok(collector.finish());
        }
        level = next;
    }
    // m == 1
    for s in &level {
        emit(s, &mut collector)?;
    }
    Ok(collector.finish())
}

/// Roots of the node equations `phi(v) = 0` for `1 <= |v| <= m`, together
/// with the tip equations `phi(u t~) = 0` for `|u| <= m` and the tails of
/// the options. Every such root makes the tree root-connected.
pub fn m0_root_cloud(fam: &ParametricFamily, m: usize, opts: &CloudOptions) -> Result<RootCloud> {
    if !fam.is_symbolic() {
        return Err(Error::ConjugateFamilyUnsupported);
    }
    let tails = resolve_tails(fam, opts)?;
    let parts: Vec<(Polynomial, Polynomial)> =
        tails.iter().map(|t| tail_parts(fam, t)).collect::<Result<_>>()?;
    let form = common_form(fam);
    let n = fam.len() as u16;
    let one = Polynomial::constant(Complex64::new(1.0, 0.0));
    // (Phi, Pi, word) with phi(v) = Phi / den^|v| and prod(v) = Pi / den^|v|
    let mut level = vec![(one.clone(), one, Vec::<u16>::new())];
    let mut collector = Collector::new(fam, opts);
    for depth in 0..=m {
        for (phi, prod, word) in &level {
            if depth > 0 {
                let word = FiniteWord::new(word.clone())?;
                collector.push(phi.clone(), phi.norm_inf(), || Check::Node(word))?;
            }
            for ((nt, mt), t) in parts.iter().zip(&tails) {
                let a = phi * mt;
                let b = prod * nt;
                let scale = a.norm_inf().max(b.norm_inf());
                let tip = EpWord::new(FiniteWord::new(word.clone())?, t.clone())?;
                collector.push(&a + &b, scale, || Check::Tip(tip))?;
            }
        }
        if depth == m {
            break;
        }
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for (phi, prod, word) in &level {
            for a in 0..n {
                let pa = &form.letters[a as usize];
                let prod2 = prod * pa;
                let phi2 = &(phi * &form.den) + &prod2;
                if seen.insert(state_key(&[&phi2, &prod2])) {
                    let mut w = word.clone();
                    w.push(a);
                    next.push((phi2, prod2, w));
                }
            }
        }
        if next.len() > opts.budget {
            return Err(Error::BudgetExceeded {
                what: "node states",
                needed: next.len() as u128,
                limit: opts.budget as u128,
            });
        }
        level = next;
    }
    Ok(collector.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::preset;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn common_denominator_of_ternary_up() {
        let form = common_form(&preset("ternary-up").unwrap());
        assert_eq!(form.den, Polynomial::from_real(&[0.0, 1.0]));
        assert_eq!(form.letters[0], Polynomial::from_real(&[0.0, 0.0, 1.0]));
        assert_eq!(form.letters[1], Polynomial::from_real(&[0.0, 0.5]));
        assert_eq!(form.letters[2], Polynomial::from_real(&[0.25]));
    }

    #[test]
    fn rotation_closure_of_tails() {
        let t = FiniteWord::from_one_based(&[1, 2]).unwrap();
        let closed = rotation_closure(&[t]).unwrap();
        assert_eq!(closed.len(), 2);
        let tt = FiniteWord::from_one_based(&[2, 2]).unwrap();
        assert_eq!(rotation_closure(&[tt]).unwrap().len(), 1);
    }

    #[test]
    fn ternary_up_level_three() {
        let fam = preset("ternary-up").unwrap();
        let cloud = m_root_cloud(&fam, 3, &CloudOptions::default()).unwrap();
        let s3 = 3f64.sqrt() / 4.0;
        for z in [c(0.0, 0.5), c(0.0, -0.5), c(-0.25, s3), c(-0.25, -s3)] {
            assert!(cloud.contains(z, 1e-8), "missing {z}");
        }
        for p in &cloud.points {
            assert!(fam.is_admissible(p.z));
        }
    }

    #[test]
    fn m0_contains_node_root() {
        let fam = preset("ternary-up").unwrap();
        let cloud = m0_root_cloud(&fam, 2, &CloudOptions::default()).unwrap();
        let z0 = c(-0.25, 7f64.sqrt() / 4.0);
        assert!(cloud.contains(z0, 1e-10));
        assert!(cloud.contains(z0.conj(), 1e-10));
    }

    #[test]
    fn budget_is_enforced() {
        let fam = preset("plusminus").unwrap();
        let opts = CloudOptions { budget: 10, ..CloudOptions::default() };
        assert!(matches!(
            m_root_cloud(&fam, 6, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn csv_and_json() {
        let fam = preset("ternary-up").unwrap();
        let cloud = m0_root_cloud(&fam, 2, &CloudOptions::default()).unwrap();
        let csv = cloud.to_csv();
        assert!(csv.starts_with("re,im,degree,residual,provenance\n"));
        assert_eq!(csv.lines().count(), cloud.len() + 1);
        assert_eq!(RootCloud::from_json(&cloud.to_json()).unwrap(), cloud);
    }

    #[test]
    fn conjugate_family_is_rejected() {
        let fam = preset("conjugate").unwrap();
        assert_eq!(
            m_root_cloud(&fam, 2, &CloudOptions::default()),
            Err(Error::ConjugateFamilyUnsupported)
        );
    }
}
