//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines are always printed; exits nonzero if any criterion is off.

use std::process::Command;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use signed_kl::kl::KlOracle;
use signed_kl::sigchar::{jantzen_signature_split, SignatureEngine, SignatureLevels};
use signed_kl::skl::{verify_main_theorem, ADescent};
use signed_kl::sweep::{self, CriterionResult};
use signed_kl::{CoxeterGroup, LatticeVector, Rational, RootSystem, Weight};

/// `(x, α)` pairs with no containment witness; see the lemma discussion in the README.
const KNOWN_CONTAINMENT_FAILURES: [(&str, usize); 10] = [
    ("B2", 2),
    ("G2", 4),
    ("A3", 1),
    ("B3", 23),
    ("C3", 23),
    ("A4", 16),
    ("B4", 14),
    ("C4", 14),
    ("D4", 3),
    ("F4", 77),
];

struct Outcome {
    line: String,
    ok: bool,
}

fn report(id: &str, name: &str, passed: bool, detail: String) -> Outcome {
    let c = CriterionResult { id: id.into(), name: name.into(), passed, detail };
    Outcome { line: c.line(), ok: passed }
}

fn from_sweep(c: CriterionResult) -> Outcome {
    Outcome { ok: c.passed, line: c.line() }
}

/// ε(xλ − yλ) and the classical side are both recomputed here from the group
/// action and the R-polynomial oracle, independently of the signed table.
fn criterion_1() -> Outcome {
    let mut configs = 0;
    let mut pairs = 0;
    let mut bad = 0;
    for label in sweep::MAIN_THEOREM_SYSTEMS {
        let rank = RootSystem::from_label(label, &[]).unwrap().rank();
        for nc in sweep::gradings(rank) {
            let rs = RootSystem::from_label(label, &nc).unwrap();
            let lambda = -&rs.rho();
            let report = verify_main_theorem(&rs, &lambda, ADescent::Corrected).unwrap();
            let group = Arc::new(CoxeterGroup::weyl(&rs).unwrap());
            let oracle = KlOracle::new(Arc::clone(&group));
            let g = &*group;
            let w0 = g.longest();
            configs += 1;
            for (i, p) in report.pairs.iter().enumerate() {
                let (x, y) = (i / g.order(), i % g.order());
                let diff = &g.apply_weight(x, &lambda) - &g.apply_weight(y, &lambda);
                let mu = rs.weight_to_lattice(&diff).unwrap();
                let sign = rs.grading_sign(&mu);
                let expected = oracle.kl_poly(g.mul(w0, x), g.mul(w0, y)).substitute_neg_q().scale(sign);
                pairs += 1;
                if p.x != g.word_string(x) || p.y != g.word_string(y) || p.skl != expected {
                    bad += 1;
                }
            }
        }
    }
    report(
        "1",
        "main theorem, exhaustive",
        bad == 0,
        format!("{configs} configurations, {pairs} pairs, {bad} mismatches"),
    )
}

fn criterion_3() -> Vec<Outcome> {
    let mut out = Vec::new();
    for c in sweep::criterion_lemmas().unwrap() {
        if c.id != "3b" {
            out.push(from_sweep(c));
            continue;
        }
        // The containment lemma fails; the criterion is reported as FAIL and
        // the run only requires that the failures are exactly the recorded ones.
        let mut observed = Vec::new();
        for l in sweep::LEMMA_EXHAUSTIVE {
            observed.push((l, sweep::lemma_counts(l, 1).unwrap().containment));
        }
        for l in sweep::LEMMA_SAMPLED {
            observed.push((l, sweep::lemma_counts(l, sweep::LEMMA_STRIDE).unwrap().containment));
        }
        observed.retain(|&(_, n)| n > 0);
        let matches_known = observed == KNOWN_CONTAINMENT_FAILURES && !c.passed;
        out.push(Outcome {
            line: format!(
                "{}  [{}]",
                c.line(),
                if matches_known { "known failure, matches recorded counterexamples" } else { "UNEXPECTED" }
            ),
            ok: matches_known,
        });
    }
    out
}

/// `⟨Fⁿv, Fⁿv⟩` as an exact rational, by the product of the sl₂ factors.
fn sl2_norm(pairing: Rational, compact: bool, n: i64) -> Rational {
    let c = if compact { 1 } else { -1 };
    (1..=n).fold(Rational::from_integer(1), |acc, k| {
        acc * Rational::from_integer(c * k) * (pairing - Rational::from_integer(k))
    })
}

fn criterion_5() -> Outcome {
    let base = sweep::criterion_rank_one().unwrap();
    let mut checked = 0;
    let mut bad = 0;
    for nc in [vec![], vec![1]] {
        let rs = RootSystem::from_label("A1", &nc).unwrap();
        let e = SignatureEngine::new(&rs, 8).unwrap();
        for p in [Rational::new(1, 2), Rational::new(3, 2), Rational::new(5, 2), Rational::new(-3, 2)] {
            let ch = e.signature_character_alcove_sum(&Weight(vec![p])).unwrap().character;
            for k in 0..=8 {
                let norm = sl2_norm(p, nc.is_empty(), k);
                let expected = if norm.is_zero() {
                    0
                } else if norm.is_positive() {
                    1
                } else {
                    -1
                };
                checked += 1;
                if ch.coeff(&LatticeVector(vec![k])) != expected {
                    bad += 1;
                }
            }
        }
    }
    report(
        "5",
        "rank-1 signatures vs sl2 oracle",
        base.passed && bad == 0,
        format!("{}; exact-norm recheck: {checked} coefficients, {bad} mismatches", base.detail),
    )
}

fn criterion_7() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let strategy = proptest::collection::vec((0u64..40, 0u64..40), 0..12);
    let result = runner.run(&strategy, |levels| {
        let (pos, neg) = jantzen_signature_split(&SignatureLevels { levels: levels.clone() });
        let sum = |f: &dyn Fn(usize, u64, u64) -> u64| {
            levels.iter().enumerate().map(|(j, &(p, q))| f(j, p, q)).sum::<u64>()
        };
        let expected_pos = (sum(&|_, p, _| p), sum(&|_, _, q| q));
        let expected_neg =
            (sum(&|j, p, q| if j % 2 == 0 { p } else { q }), sum(&|j, p, q| if j % 2 == 0 { q } else { p }));
        prop_assert_eq!(pos, expected_pos);
        prop_assert_eq!(neg, expected_neg);
        if pos.0 + pos.1 != neg.0 + neg.1 {
            return Err(TestCaseError::fail("total changed"));
        }
        Ok(())
    });
    let base = sweep::criterion_jantzen();
    report(
        "7",
        "Jantzen signature split",
        base.passed && result.is_ok(),
        format!(
            "{}; property test 1000 cases: {}",
            base.detail,
            match &result {
                Ok(()) => "ok".to_string(),
                Err(e) => e.to_string(),
            }
        ),
    )
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_skl");
    let run =
        |format: &str| Command::new(bin).args(["sweep", "--format", format]).output().expect("skl runs");
    let mut identical = true;
    let mut bytes = 0;
    let mut codes = Vec::new();
    for format in ["pretty", "json"] {
        let (a, b) = (run(format), run(format));
        identical &= a.stdout == b.stdout && !a.stdout.is_empty();
        bytes += a.stdout.len();
        codes.push(a.status.code());
    }
    report(
        "8",
        "determinism (sweep runs byte-identical)",
        identical,
        format!(
            "2 runs each of pretty and json, {bytes} bytes, {}; exit codes {codes:?}",
            if identical { "identical" } else { "different" }
        ),
    )
}

fn main() {
    let mut outcomes = vec![criterion_1(), from_sweep(sweep::criterion_g2_table().unwrap())];
    outcomes.extend(criterion_3());
    outcomes.push(from_sweep(sweep::criterion_kl().unwrap()));
    outcomes.push(criterion_5());
    outcomes.extend(sweep::criterion_alcove_sum().unwrap().into_iter().map(from_sweep));
    outcomes.push(criterion_7());
    outcomes.push(criterion_8());
    println!();
    for o in &outcomes {
        println!("{}", o.line);
    }
    let failed = outcomes.iter().filter(|o| !o.ok).count();
    println!("\nacceptance: {} lines as expected, {failed} unexpected\n", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
