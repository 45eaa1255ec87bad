//! The acceptance suite as a deterministic report.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::AffineHyperplane;
use crate::error::Result;
use crate::kl::{KlOracle, KlTable};
use crate::rootsys::{LatticeVector, Rational, RootSystem, Weight};
use crate::sigchar::{jantzen_signature_split, sl2_norm_sign, SignatureEngine, SignatureLevels};
use crate::signs::{g2_table, Signs};
use crate::skl::{verify_main_theorem, ADescent};
use crate::weyl::CoxeterGroup;
use crate::IntPolynomial;

pub const MAIN_THEOREM_SYSTEMS: [&str; 6] = ["A1", "A2", "A3", "B2", "B3", "G2"];
pub const KL_SYSTEMS: [&str; 5] = ["A2", "A3", "B2", "B3", "G2"];
pub const LEMMA_EXHAUSTIVE: [&str; 7] = ["A2", "B2", "G2", "A3", "B3", "C3", "A4"];
pub const LEMMA_SAMPLED: [&str; 4] = ["B4", "C4", "D4", "F4"];
/// Every `LEMMA_STRIDE`-th element is sampled in the rank-4 lemma checks.
pub const LEMMA_STRIDE: usize = 17;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: &str, name: &str, passed: bool, detail: String) -> Self {
        CriterionResult { id: id.into(), name: name.into(), passed, detail }
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:<3} {:<42} {}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// All-compact, each single noncompact simple root, and all-noncompact, without repeats.
pub fn gradings(rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    out.extend((1..=rank).map(|i| vec![i]));
    out.push((1..=rank).collect());
    out.dedup();
    out
}

fn system(label: &str, nc: &[usize]) -> RootSystem {
    RootSystem::from_label(label, nc).expect("built-in label")
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// Main theorem at `λ = −ρ` on every listed system and grading.
pub fn criterion_main_theorem() -> Result<CriterionResult> {
    let configs: Vec<(&str, Vec<usize>)> = MAIN_THEOREM_SYSTEMS
        .iter()
        .flat_map(|&l| gradings(system(l, &[]).rank()).into_iter().map(move |g| (l, g)))
        .collect();
    let reports = configs
        .par_iter()
        .map(|(l, nc)| {
            let rs = system(l, nc);
            verify_main_theorem(&rs, &-&rs.rho(), ADescent::Corrected)
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: usize = reports.iter().map(|r| r.pairs.len()).sum();
    let mismatches: usize = reports.iter().map(|r| r.mismatches).sum();
    Ok(CriterionResult::new(
        "1",
        "main theorem, exhaustive",
        mismatches == 0,
        format!("{} configurations, {pairs} pairs, {mismatches} mismatches", reports.len()),
    ))
}

/// The hard-coded G₂ table against both sign formulas.
pub fn criterion_g2_table() -> Result<CriterionResult> {
    let mut checked_2 = 0;
    let mut checked_1 = 0;
    let mut bad = Vec::new();
    for nc in gradings(2) {
        let signs = Signs::new(&system("G2", &nc))?;
        let rs = signs.root_system().clone();
        let g = signs.group();
        for (gamma, row) in g2_table() {
            for (word, _) in &row {
                let s = g.parse_word(word)?;
                for n in 1..=4 {
                    let value = signs.epsilon_hyperplane(&gamma, n, s)?;
                    // (2): s = x·s_α with xs_α > x and xα = γ.
                    for a in (0..2).filter(|&a| g.is_right_descent(s, a)) {
                        let x = g.right_mul(s, a);
                        if g.apply_root(x, &rs.simple_root(a)) != gamma {
                            continue;
                        }
                        checked_2 += 1;
                        let expected = if rs.epsilon_grading(&gamma.scale(n)) == 0 { 1 } else { -1 };
                        if value != expected {
                            bad.push(format!("(2) γ={gamma} s={word} N={n} nc={nc:?}"));
                        }
                    }
                    // (1): simple-root rows.
                    if gamma.height() == 1 {
                        checked_1 += 1;
                        let expected = if rs.is_compact_root(&gamma) || n % 2 == 0 { 1 } else { -1 };
                        if value != expected {
                            bad.push(format!("(1) γ={gamma} s={word} N={n} nc={nc:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(CriterionResult::new(
        "2",
        "G2 sign table",
        bad.is_empty(),
        format!(
            "{checked_2} checks of (2), {checked_1} of (1), {} mismatches{}",
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(": {}", join(bad.iter().take(5))) }
        ),
    ))
}

/// Violation counts of the four lemmas on one system.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaCounts {
    pub checked: usize,
    pub positivity: usize,
    pub containment: usize,
    pub s2: usize,
    pub s3: usize,
}

pub fn lemma_counts(label: &str, stride: usize) -> Result<LemmaCounts> {
    let signs = Signs::new(&system(label, &[]))?;
    let rs = signs.root_system().clone();
    let g = signs.group();
    let mut c = LemmaCounts::default();
    for gamma in rs.positive_roots() {
        let w = signs.w_gamma(gamma)?;
        let elem = g.from_word(&w.word)?;
        c.positivity += g.inversion_set(g.inverse(elem)).iter().filter(|b| rs.inner(b, gamma) <= 0).count();
    }
    for x in g.elements().step_by(stride) {
        for a in (0..rs.rank()).filter(|&a| !g.is_right_descent(x, a)) {
            c.checked += 1;
            let gamma = g.apply_root(x, &rs.simple_root(a));
            let xs_inv = g.inverse(g.right_mul(x, a));
            let witness = match signs.w_gamma_adapted(x, a) {
                Ok(w) => {
                    let elem = g.from_word(&w.word)?;
                    c.positivity +=
                        g.inversion_set(g.inverse(elem)).iter().filter(|b| rs.inner(b, &gamma) <= 0).count();
                    w
                }
                Err(_) => {
                    c.containment += 1;
                    signs.w_gamma(&gamma)?
                }
            };
            let sets = signs.pairing_sets_for(&witness, xs_inv);
            c.s2 += sets.s2.len();
            if !signs.in_g2_subsystem(&gamma) {
                c.s3 += sets.s3.len();
            }
        }
    }
    Ok(c)
}

/// The four lemmas as separate lines: exhaustive to rank 3 and `A4`, sampled on the other rank-4 types.
pub fn criterion_lemmas() -> Result<Vec<CriterionResult>> {
    let runs: Vec<(&str, usize)> = LEMMA_EXHAUSTIVE
        .iter()
        .map(|&l| (l, 1))
        .chain(LEMMA_SAMPLED.iter().map(|&l| (l, LEMMA_STRIDE)))
        .collect();
    let counts = runs
        .par_iter()
        .map(|&(l, stride)| lemma_counts(l, stride).map(|c| (l, c)))
        .collect::<Result<Vec<_>>>()?;
    let checked: usize = counts.iter().map(|(_, c)| c.checked).sum();
    let line = |id: &str, name: &str, f: fn(&LemmaCounts) -> usize| {
        let total: usize = counts.iter().map(|(_, c)| f(c)).sum();
        let per = counts.iter().filter(|(_, c)| f(c) > 0).map(|(l, c)| format!("{l} {}", f(c)));
        let detail = if total == 0 {
            format!("{checked} (x, α) pairs, 0 violations")
        } else {
            format!("{checked} (x, α) pairs, {total} violations ({})", join(per))
        };
        CriterionResult::new(id, name, total == 0, detail)
    };
    Ok(vec![
        line("3a", "positivity lemma", |c| c.positivity),
        line("3b", "containment lemma", |c| c.containment),
        line("3c", "pairing lemma, S2 empty", |c| c.s2),
        line("3d", "pairing lemma, S3 empty outside G2", |c| c.s3),
    ])
}

/// Recursion against the R-polynomial oracle, plus the standard invariants.
pub fn criterion_kl() -> Result<CriterionResult> {
    let results = KL_SYSTEMS
        .par_iter()
        .map(|&l| -> Result<(usize, usize, usize, bool)> {
            let group = Arc::new(CoxeterGroup::weyl(&system(l, &[]))?);
            let oracle = KlOracle::new(Arc::clone(&group));
            let mut table = KlTable::new(Arc::clone(&group));
            let g = &*group;
            let rank2 = g.num_generators() == 2;
            let one_plus_q = IntPolynomial::new(vec![1, 1]);
            let (mut pairs, mut mismatch, mut invariant, mut saw) = (0, 0, 0, false);
            for u in g.elements() {
                for v in g.elements() {
                    pairs += 1;
                    let p = table.kl_poly(u, v);
                    if &p != oracle.kl_poly(u, v) {
                        mismatch += 1;
                    }
                    saw |= p == one_plus_q;
                    let ok = if !g.bruhat_leq(u, v) {
                        p.is_zero()
                    } else if u == v {
                        p == IntPolynomial::one()
                    } else {
                        p.coeff(0) == 1
                            && 2 * p.degree().unwrap_or(0) < g.length(v) - g.length(u)
                            && (!rank2 || p == IntPolynomial::one())
                    };
                    if !ok {
                        invariant += 1;
                    }
                }
            }
            Ok((pairs, mismatch, invariant, saw && l == "A3"))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: usize = results.iter().map(|r| r.0).sum();
    let mismatch: usize = results.iter().map(|r| r.1).sum();
    let invariant: usize = results.iter().map(|r| r.2).sum();
    let a3_one_plus_q = results.iter().any(|r| r.3);
    Ok(CriterionResult::new(
        "4",
        "classical KL, recursion vs oracle",
        mismatch == 0 && invariant == 0 && a3_one_plus_q,
        format!(
            "{pairs} pairs, {mismatch} mismatches, {invariant} invariant violations, A3 has 1+q: {a3_one_plus_q}"
        ),
    ))
}

/// Rank-one characters against the sl₂ norm recurrence.
pub fn criterion_rank_one() -> Result<CriterionResult> {
    const H: usize = 8;
    let mut checked = 0;
    let mut bad = Vec::new();
    for nc in [vec![], vec![1]] {
        let rs = system("A1", &nc);
        let e = SignatureEngine::new(&rs, H)?;
        let compact = nc.is_empty();
        let w = |p: Rational| Weight(vec![p]);
        let wall = |n: i64| AffineHyperplane::new(LatticeVector(vec![1]), n);
        let mut ch = e.wallach_character(&w(Rational::new(1, 2)))?;
        let mut results = vec![(Rational::new(1, 2), ch.clone())];
        for n in 1..=2 {
            let from = w(Rational::new(2 * n - 1, 2));
            let to = w(Rational::new(2 * n + 1, 2));
            let to_alcove = e.affine().alcove_of(&to)?;
            let eps = e.alcove_sign(&to_alcove, &wall(n))?;
            let reflected = e.wallach_character(&w(Rational::new(1 - 2 * n, 2)))?;
            ch = e.wall_cross(&ch, &from, &to, &wall(n), eps, &reflected)?;
            results.push((Rational::new(2 * n + 1, 2), ch.clone()));
        }
        results.push((Rational::new(-3, 2), e.wallach_character(&w(Rational::new(-3, 2)))?));
        for (p, ch) in results {
            let via_sum = e.signature_character_alcove_sum(&w(p))?.character;
            for k in 0..=H {
                checked += 1;
                let expected = sl2_norm_sign(p, compact, k as u32) as i64;
                let mu = LatticeVector(vec![k as i64]);
                if ch.coeff(&mu) != expected || via_sum.coeff(&mu) != expected {
                    bad.push(format!("{} λ={p} level {k}", if compact { "compact" } else { "noncompact" }));
                }
            }
        }
    }
    Ok(CriterionResult::new(
        "5",
        "rank-1 signatures vs sl2 oracle",
        bad.is_empty(),
        format!(
            "{checked} coefficients, {} mismatches{}",
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(": {}", join(bad.iter().take(5))) }
        ),
    ))
}

pub const ALCOVE_SAMPLES: [(&str, &[usize], &str); 21] = [
    ("A1", &[1], "3/2"),
    ("A1", &[], "3/2"),
    ("A1", &[1], "5/2"),
    ("A1", &[], "7/3"),
    ("A1", &[1], "-5/2"),
    ("A2", &[1], "3/2,-1/5"),
    ("A2", &[2], "3/2,-1/5"),
    ("A2", &[1], "-1/5,3/2"),
    ("A2", &[2], "5/4,1/7"),
    ("A2", &[1], "7/5,-2/3"),
    ("A2", &[2], "-2/3,7/5"),
    ("A2", &[1], "1/3,4/3"),
    ("A2", &[2], "6/5,-7/4"),
    ("A2", &[1], "1/4,1/3"),
    ("A1", &[1], "7/2"),
    ("A1", &[], "10/3"),
    ("A2", &[1], "5/2,-1/5"),
    ("A2", &[2], "7/3,-1/4"),
    ("A2", &[1, 2], "-1/4,7/3"),
    ("A2", &[], "9/4,-4/5"),
    ("A2", &[1], "12/5,-3/2"),
];
pub const MAX_SAMPLE_GALLERY: usize = 4;

/// Subset sum against iterated wall crossing, plus path invariance and the Kostant bound.
pub fn criterion_alcove_sum() -> Result<Vec<CriterionResult>> {
    const H: usize = 8;
    let mut samples = 0;
    let mut unequal = Vec::new();
    let mut path_differs = Vec::new();
    let mut kostant = 0;
    let mut max_len = 0;
    for (label, nc, lambda) in ALCOVE_SAMPLES {
        let e = SignatureEngine::new(&system(label, nc), H)?;
        let l: Weight = lambda.parse()?;
        let sum = e.signature_character_alcove_sum(&l)?;
        if sum.gallery.len() > MAX_SAMPLE_GALLERY {
            continue;
        }
        samples += 1;
        max_len = max_len.max(sum.gallery.len());
        let tag = format!("{label}{nc:?} λ={lambda}");
        if e.wall_crossing_along(&l, &sum.gallery)? != sum.character {
            unequal.push(tag.clone());
        }
        let waypoint = Weight(vec![Rational::new(1, 3); l.rank()]);
        let other = e.affine().gallery_through(&sum.alcove, &[waypoint])?;
        if e.alcove_sum_with_gallery(&l, other)?.character != sum.character {
            path_differs.push(tag);
        }
        kostant += e.kostant_violations(&sum.character).len();
    }
    let enough = samples >= 10;
    Ok(vec![
        CriterionResult::new(
            "6",
            "alcove subset sum vs wall crossing",
            enough && unequal.is_empty(),
            format!(
                "{samples} samples, galleries up to length {max_len}, {} unequal{}",
                unequal.len(),
                if unequal.is_empty() { String::new() } else { format!(": {}", join(&unequal)) }
            ),
        ),
        CriterionResult::new(
            "6b",
            "path invariance (second gallery)",
            path_differs.is_empty(),
            format!(
                "{} of {samples} differ{}",
                path_differs.len(),
                if path_differs.is_empty() { String::new() } else { format!(": {}", join(&path_differs)) }
            ),
        ),
        CriterionResult::new(
            "6c",
            "Kostant multiplicity bound",
            kostant == 0,
            format!("{kostant} coefficients above P(μ)"),
        ),
    ])
}

/// Signatures of the deformed form for `t > 0` and `t < 0`, counted entry by entry.
fn split_by_entries(levels: &SignatureLevels) -> ((u64, u64), (u64, u64)) {
    let mut pos = (0, 0);
    let mut neg = (0, 0);
    for (j, &(p, q)) in levels.levels.iter().enumerate() {
        // Level j carries tʲ times its form.
        for sign in std::iter::repeat_n(1i8, p as usize).chain(std::iter::repeat_n(-1, q as usize)) {
            if sign > 0 {
                pos.0 += 1
            } else {
                pos.1 += 1
            }
            if sign * if j % 2 == 1 { -1 } else { 1 } > 0 {
                neg.0 += 1
            } else {
                neg.1 += 1
            }
        }
    }
    (pos, neg)
}

/// Exhaustive over level lists of length ≤ 4 with entries in `0..3`.
pub fn criterion_jantzen() -> CriterionResult {
    let mut cases = 0;
    let mut bad = 0;
    for len in 0..=4u32 {
        for code in 0..9u64.pow(len) {
            let levels: Vec<(u64, u64)> = (0..len)
                .map(|j| {
                    let d = code / 9u64.pow(j) % 9;
                    (d / 3, d % 3)
                })
                .collect();
            let levels = SignatureLevels { levels };
            let (pos, neg) = jantzen_signature_split(&levels);
            cases += 1;
            if (pos, neg) != split_by_entries(&levels) || pos.0 + pos.1 != neg.0 + neg.1 {
                bad += 1;
            }
        }
    }
    CriterionResult::new(
        "7",
        "Jantzen signature split",
        bad == 0,
        format!("{cases} level lists, {bad} mismatches"),
    )
}

/// Criteria 1–7.
pub fn run_criteria() -> Result<Vec<CriterionResult>> {
    let mut out = vec![criterion_main_theorem()?, criterion_g2_table()?];
    out.extend(criterion_lemmas()?);
    out.push(criterion_kl()?);
    out.push(criterion_rank_one()?);
    out.extend(criterion_alcove_sum()?);
    out.push(criterion_jantzen());
    Ok(out)
}

/// Criteria 1–7, then determinism: a second evaluation must serialize identically.
pub fn run_sweep() -> Result<SweepReport> {
    let mut criteria = run_criteria()?;
    let first = serde_json::to_string(&criteria).expect("serializable");
    let second = serde_json::to_string(&run_criteria()?).expect("serializable");
    criteria.push(CriterionResult::new(
        "8",
        "determinism (repeated evaluation)",
        first == second,
        format!("{} bytes, {}", first.len(), if first == second { "identical" } else { "different" }),
    ));
    let passed = criteria.iter().filter(|c| c.passed).count();
    Ok(SweepReport { failed: criteria.len() - passed, passed, criteria })
}
