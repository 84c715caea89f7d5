//! End-to-end verification suite.
//!
//! Each check recomputes one identity from scratch with exact arithmetic and
//! records pass/fail with a short detail line. Randomized checks draw from a
//! seeded ChaCha generator so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bps::{
    bps_to_gw, bps_to_gw_family, check_integrality, gw_to_bps, gw_to_bps_family, verify_blowup_bps_invariance,
    ClassDescriptor, ClassRecord, InsertionList,
};
use crate::correspondence::{
    closed_form, convolve, deconvolve, generating_function_check, localization, verify_closed_form,
    CorrespondenceKind, GenusSequence,
};
use crate::degeneration::{
    enumerate_admissible_triples, enumerate_partitions, evaluate_degeneration, minus_degree_label, preset,
    survivors_report, zeta, Caps, InvariantTable, Partition, TableKey,
};
use crate::error::Result;
use crate::rational::Rational;
use crate::series::{sinc_half, EvenSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub order: usize,
    pub caps: Caps,
    pub seed: u64,
    /// Random samples per randomized check.
    pub samples: usize,
    pub survivor_genus: u32,
    pub survivor_marks: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            order: 10,
            caps: Caps::default(),
            seed: 20_140_601,
            samples: 50,
            survivor_genus: 5,
            survivor_marks: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// A small random rational `p/q` with `|p| ≤ 20`, `1 ≤ q ≤ 12`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-20..=20), rng.gen_range(1..=12))
}

pub fn random_sequence(rng: &mut impl Rng, order: usize) -> GenusSequence {
    GenusSequence::from_values((0..=order).map(|_| random_rational(rng)).collect())
}

/// Like [`random_sequence`] but with a nonzero constant term.
pub fn random_invertible_sequence(rng: &mut impl Rng, order: usize) -> GenusSequence {
    let mut s = random_sequence(rng, order);
    while s.values[0].is_zero() {
        s.values[0] = random_rational(rng);
    }
    s
}

/// Expected survivor profile per preset: `(preset, δ-degree, reported value)`.
/// Every preset keeps only `μ = (1)`.
pub const EXPECTED_SURVIVORS: [(&str, u32, Option<i64>); 5] = [
    ("p3-point", 0, None),
    ("p3tilde-point", 0, None),
    ("p3-point-tau", 2, None),
    ("curve-plus", 0, Some(0)),
    ("curve-tilde-plus", 0, Some(0)),
];

fn outcome(id: &str, statement: &str, result: Result<(bool, String)>) -> CheckResult {
    let (passed, detail) = match result {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        id: id.to_string(),
        statement: statement.to_string(),
        passed,
        detail,
    }
}

fn closed_form_check(kind: CorrespondenceKind, order: usize) -> Result<(bool, String)> {
    let r = verify_closed_form(kind, order)?;
    let bad: Vec<usize> = r
        .per_genus
        .iter()
        .chain(&r.series)
        .filter(|c| !c.matches)
        .map(|c| c.genus)
        .collect();
    Ok((r.passed, format!("g ≤ {order}, mismatched genera {bad:?}")))
}

fn exceptional_tau_check(order: usize) -> Result<(bool, String)> {
    let (ok, detail) = closed_form_check(CorrespondenceKind::ExceptionalTau, order)?;
    let (h, p) = localization::specialization(CorrespondenceKind::ExceptionalTau, order);
    let c = deconvolve(&h, &p)?;
    let expected = GenusSequence::impulse(order).linear_combination(
        &Rational::from_integer(3),
        &closed_form(CorrespondenceKind::PointDescendant, order),
        &Rational::from_integer(-2),
    )?;
    let combo = c.values == expected.values;
    Ok((ok && combo, format!("{detail}; 3·unit − 2·C[point-descendant] {}", if combo { "matches" } else { "differs" })))
}

fn generating_function(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<(bool, String)> {
    let mut failures = 0;
    for _ in 0..cfg.samples {
        let p = random_sequence(rng, cfg.order);
        if !generating_function_check(&p).passed {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{} samples at G = {}, {failures} failures", cfg.samples, cfg.order)))
}

fn survivors(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, delta, reported) in EXPECTED_SURVIVORS {
        let r = survivors_report(&preset(name)?, cfg.survivor_genus, cfg.survivor_marks, &cfg.caps)?;
        let exact = r.profiles.len() == 1
            && r.profiles[0].mu == [1]
            && r.profiles[0].delta_degrees == [delta]
            && r.profiles[0].reported.values().next().copied() == reported
            && r.per_genus.iter().all(|g| g.profiles.len() == 1);
        ok &= exact;
        notes.push(format!("{name}: {}", if exact { "ok" } else { "unexpected profiles" }));
    }
    Ok((
        ok,
        format!("g ≤ {}, m ≤ {}; {}", cfg.survivor_genus, cfg.survivor_marks, notes.join(", ")),
    ))
}

/// Tables for the point preset: `I_g` on the plus side, `K_g` on the minus
/// side, one generic minus insertion.
pub fn point_preset_tables(i: &GenusSequence, k: &GenusSequence) -> Result<(InvariantTable, InvariantTable)> {
    let mut plus = InvariantTable::new();
    let mut minus = InvariantTable::new();
    for (g, v) in i.values.iter().enumerate() {
        plus.insert(TableKey::new(g as u32, "L", vec!["[pt]".into()], vec![(1, 4, 0)]), v.clone())?;
    }
    for (g, v) in k.values.iter().enumerate() {
        minus.insert(
            TableKey::new(g as u32, minus_degree_label(1), vec!["α1".into()], vec![(1, 0, 0)]),
            v.clone(),
        )?;
    }
    Ok((plus, minus))
}

fn degeneration_oracle(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<(bool, String)> {
    let order = cfg.order.min(6);
    let p = preset("p3-point")?;
    let mut failures = 0;
    let rounds = cfg.samples.clamp(1, 10);
    for _ in 0..rounds {
        let i = random_sequence(rng, order);
        let k = random_sequence(rng, order);
        let (plus, minus) = point_preset_tables(&i, &k)?;
        let expected = convolve(&i, &k)?;
        for g in 0..=order {
            let h = evaluate_degeneration(&p.problem(g as u32, 1), &plus, &minus, &p.geometry, &cfg.caps)?;
            if h != expected.values[g] {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{rounds} table pairs, g ≤ {order}, {failures} mismatches")))
}

fn bps_round_trip(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<(bool, String)> {
    let order = cfg.order.min(8);
    let mut failures = 0;
    for s in 0..cfg.samples {
        if s % 2 == 0 {
            let c1 = rng.gen_range(1..=6);
            let class = ClassDescriptor::new(vec![1, rng.gen_range(0..=3)], c1)?;
            let gw = random_sequence(rng, order);
            let bps = gw_to_bps(&gw, &class, &InsertionList::empty())?;
            if bps_to_gw(&bps)?.values != gw.values {
                failures += 1;
            }
        } else {
            let base = [1, rng.gen_range(-3..=3)];
            let top = rng.gen_range(1..=4);
            let family: Vec<ClassRecord> = (1..=top)
                .map(|d| {
                    let class = ClassDescriptor::new(base.iter().map(|c| c * d).collect(), 0)?;
                    Ok(ClassRecord::new(class, InsertionList::empty(), random_sequence(rng, order).values))
                })
                .collect::<Result<_>>()?;
            let bps = gw_to_bps_family(&family)?;
            let back = bps_to_gw_family(&bps)?;
            if family.iter().zip(&back).any(|(a, b)| a.values != b.values) {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{} samples at G = {order}, {failures} failures", cfg.samples)))
}

fn bps_invariance(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<(bool, String)> {
    let order = cfg.order.min(8);
    let mut failures = 0;
    for _ in 0..cfg.samples {
        let p = random_sequence(rng, order);
        for (kind, shift) in [(CorrespondenceKind::PointPrimary, 2), (CorrespondenceKind::Curve, 1)] {
            let c1 = shift + rng.gen_range(0..=5);
            if !verify_blowup_bps_invariance(&p, c1, kind)?.passed {
                failures += 1;
            }
        }
    }
    let two_point = closed_form(CorrespondenceKind::PointPrimary, order);
    let line = ClassDescriptor::new(vec![1], 4)?;
    let n = gw_to_bps(&two_point, &line, &InsertionList::empty())?;
    let concrete = n.values == GenusSequence::impulse(order).values && check_integrality(&n).integral;
    Ok((
        failures == 0 && concrete,
        format!(
            "{} samples per kind, {failures} failures; two-point line in P3 n = {}",
            cfg.samples,
            if concrete { "(1, 0, ...), integral" } else { "unexpected" }
        ),
    ))
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> EvenSeries {
    EvenSeries::new(random_sequence(rng, order).values)
}

fn properties(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<(bool, String)> {
    let order = cfg.order.min(8);
    let mut failures = Vec::new();
    for _ in 0..cfg.samples {
        let (a, b, c) = (
            random_series(rng, order),
            random_series(rng, order),
            random_series(rng, order),
        );
        if a.mul(&b).mul(&c) != a.mul(&b.mul(&c)) || a.mul(&b) != b.mul(&a) {
            failures.push("multiplication");
        }
        if a.mul(&(&b + &c)) != &a.mul(&b) + &a.mul(&c) {
            failures.push("distributivity");
        }
        if &(&a + &b) - &b != a {
            failures.push("addition");
        }
        let p = random_invertible_sequence(rng, order);
        let k = random_sequence(rng, order);
        if deconvolve(&convolve(&k, &p)?, &p)?.values != k.values {
            failures.push("deconvolve∘convolve");
        }
        if let Ok(inv) = a.inverse() {
            if a.mul(&inv) != EvenSeries::unit(order) {
                failures.push("inverse");
            }
        }
    }
    if sinc_half(order).pow(2)? != EvenSeries::new(closed_form(CorrespondenceKind::PointPrimary, order).values) {
        failures.push("sinc²");
    }
    if zeta(&Partition::new(vec![1])?) != Rational::one() {
        failures.push("zeta((1))");
    }
    if enumerate_partitions(5).len() != 7 {
        failures.push("p(5)");
    }
    let small = Caps {
        max_mu: 2,
        max_components: 2,
        max_degree: 2,
        ..cfg.caps.clone()
    };
    let mut triples = 0;
    for name in ["p3-point", "p3tilde-point", "curve-plus"] {
        let p = preset(name)?;
        for g in 0..=2 {
            for m in 0..=2 {
                let run = enumerate_admissible_triples(&p.problem(g, m), &p.geometry, &small)?;
                triples += run.triples.len();
                if run.triples.iter().any(|t| !t.genus_relation_holds() || !t.is_connected()) {
                    failures.push("genus relation");
                }
            }
        }
    }
    failures.sort_unstable();
    failures.dedup();
    Ok((
        failures.is_empty(),
        format!(
            "{} series samples, {triples} triples re-checked; failures {failures:?}",
            cfg.samples
        ),
    ))
}

/// Runs every check. Errors inside a check are reported as failures of that
/// check rather than aborting the run.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = cfg.order;
    let checks = vec![
        outcome(
            "point-primary",
            "blow-up at a point, two point insertions: C_g = (−1)^g·2/(2g+2)! = [sinc²]_g",
            closed_form_check(CorrespondenceKind::PointPrimary, g),
        ),
        outcome(
            "point-descendant",
            "blow-up at a point, τ1 of a point: C_g = (−1)^g/(2g+1)! = [sin u/u]_g",
            closed_form_check(CorrespondenceKind::PointDescendant, g),
        ),
        outcome(
            "exceptional-tau",
            "blow-up at a point, τ1 E: C_g = 3δ_{g,0} − 2(−1)^g/(2g+1)!",
            exceptional_tau_check(g),
        ),
        outcome(
            "curve",
            "blow-up along a curve: C_g = (−1)^g/((2g+1)!·4^g) = [sinc(u/2)]_g",
            closed_form_check(CorrespondenceKind::Curve, g),
        ),
        outcome(
            "generating-function",
            "F^X = sinc(u/2)² · F^X̃ for random P",
            generating_function(&mut rng, cfg),
        ),
        outcome(
            "survivors",
            "dimension constraint leaves a single (μ, δ) profile on each preset",
            survivors(cfg),
        ),
        outcome(
            "degeneration-oracle",
            "degeneration sum on the point preset equals convolve(I, K)",
            degeneration_oracle(&mut rng, cfg),
        ),
        outcome(
            "bps-round-trip",
            "bps_to_gw ∘ gw_to_bps = id (c1 > 0 and c1 = 0 families)",
            bps_round_trip(&mut rng, cfg),
        ),
        outcome(
            "bps-invariance",
            "BPS numbers are invariant under point and curve blow-ups",
            bps_invariance(&mut rng, cfg),
        ),
        outcome(
            "properties",
            "series ring axioms, deconvolution, partitions, genus relation",
            properties(&mut rng, cfg),
        ),
    ];
    let passed = checks.iter().all(|c| c.passed);
    SuiteReport {
        config: cfg.clone(),
        checks,
        passed,
    }
}
