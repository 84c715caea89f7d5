//! Generalized BPS numbers.
//!
//! For a class `A` with `∫_A c1(X) > 0` the BPS numbers `n_g` of a GW
//! sequence are defined by
//!
//! ```text
//! Σ_g u^{2g} GW_g = Σ_g u^{2g} n_g · S(u)^{2g−2+c1(A)},    S(u) = sin(u/2)/(u/2)
//! ```
//!
//! and for `∫_A c1(X) = 0` (no insertions) by the multiple-cover sum
//!
//! ```text
//! Σ_g u^{2g} GW_{g,A} = Σ_{d | A} (1/d) Σ_g u^{2g} n_{g,A/d} · (sin(du/2)/(u/2))^{2g−2}.
//! ```
//!
//! Both are lower-triangular in the genus with unit diagonal, so the inverse
//! direction is forward substitution. In the second case classes are coupled
//! through their divisors: a class is solved only after every `A/d` with
//! `d > 1` has been solved.
//!
//! BPS numbers satisfy the divisor equation and vanish when a class of degree
//! 0 or 1 is inserted; [`InsertionList::reduce`] implements both rules.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::correspondence::{apply_blowup, CorrespondenceKind, GenusCheck, GenusSequence};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::{sinc_half, sinc_scaled, EvenSeries};

/// A nonzero class `A ∈ H_2(X, Z)` in a user-chosen lattice basis, with
/// `∫_A c1(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassDescriptor {
    coords: Vec<i64>,
    c1_pairing: i64,
}

impl ClassDescriptor {
    pub fn new(coords: Vec<i64>, c1_pairing: i64) -> Result<Self> {
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::InvalidClass("class must be nonzero".into()));
        }
        Ok(ClassDescriptor { coords, c1_pairing })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn c1_pairing(&self) -> i64 {
        self.c1_pairing
    }

    /// Largest `d` dividing every coordinate.
    pub fn divisibility(&self) -> i64 {
        self.coords.iter().fold(0i64, |acc, &c| acc.gcd(&c))
    }

    /// All `d ≥ 1` with `A/d` integral, ascending.
    pub fn divisors(&self) -> Vec<i64> {
        let n = self.divisibility();
        (1..=n).filter(|d| n % d == 0).collect()
    }

    /// `A/d` with `∫_{A/d} c1 = c1(A)/d`.
    pub fn divide(&self, d: i64) -> Result<ClassDescriptor> {
        if d < 1 || self.coords.iter().any(|c| c % d != 0) || self.c1_pairing % d != 0 {
            return Err(Error::InvalidClass(format!(
                "{:?} (c1 = {}) is not divisible by {d}",
                self.coords, self.c1_pairing
            )));
        }
        ClassDescriptor::new(self.coords.iter().map(|c| c / d).collect(), self.c1_pairing / d)
    }
}

/// One cohomology insertion: its real degree, and for degree-2 classes the
/// divisor pairing `D·A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(u32, Option<Rational>)", into = "(u32, Option<Rational>)")]
pub struct Insertion {
    pub degree: u32,
    pub pairing: Option<Rational>,
}

impl From<(u32, Option<Rational>)> for Insertion {
    fn from((degree, pairing): (u32, Option<Rational>)) -> Self {
        Insertion { degree, pairing }
    }
}

impl From<Insertion> for (u32, Option<Rational>) {
    fn from(i: Insertion) -> Self {
        (i.degree, i.pairing)
    }
}

impl Insertion {
    pub fn divisor(pairing: Rational) -> Self {
        Insertion {
            degree: 2,
            pairing: Some(pairing),
        }
    }

    pub fn class(degree: u32) -> Self {
        Insertion {
            degree,
            pairing: None,
        }
    }
}

/// Insertions `α_1, ..., α_m`. Accepted degrees are 0, 1, 2, 4 and 6; a
/// pairing is present exactly on degree-2 items.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Insertion>", into = "Vec<Insertion>")]
pub struct InsertionList(Vec<Insertion>);

impl TryFrom<Vec<Insertion>> for InsertionList {
    type Error = Error;

    fn try_from(items: Vec<Insertion>) -> Result<Self> {
        InsertionList::new(items)
    }
}

impl From<InsertionList> for Vec<Insertion> {
    fn from(l: InsertionList) -> Self {
        l.0
    }
}

impl InsertionList {
    pub fn new(items: Vec<Insertion>) -> Result<Self> {
        for (i, item) in items.iter().enumerate() {
            match (item.degree, &item.pairing) {
                (2, Some(_)) | (0 | 1 | 4 | 6, None) => {}
                (2, None) => {
                    return Err(Error::UnsupportedInsertion(format!(
                        "item {i}: degree-2 insertion needs its divisor pairing"
                    )))
                }
                (0 | 1 | 4 | 6, Some(_)) => {
                    return Err(Error::UnsupportedInsertion(format!(
                        "item {i}: only degree-2 insertions carry a pairing"
                    )))
                }
                (d, _) => {
                    return Err(Error::UnsupportedInsertion(format!(
                        "item {i}: degree {d} (supported: 0, 1, 2, 4, 6)"
                    )))
                }
            }
        }
        Ok(InsertionList(items))
    }

    pub fn empty() -> Self {
        InsertionList(Vec::new())
    }

    pub fn items(&self) -> &[Insertion] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &InsertionList) -> InsertionList {
        InsertionList(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Divisor equation and vanishing rule.
    ///
    /// Each degree-2 item is removed and multiplies the scalar by its pairing.
    /// Any degree-0 or degree-1 item makes the scalar 0 and empties the list.
    /// What remains has degree 4 or 6.
    pub fn reduce(&self) -> (Rational, InsertionList) {
        if self.0.iter().any(|i| i.degree <= 1) {
            return (Rational::zero(), InsertionList::empty());
        }
        let mut scalar = Rational::one();
        let mut rest = Vec::new();
        for item in &self.0 {
            match &item.pairing {
                Some(p) => scalar *= p,
                None => rest.push(item.clone()),
            }
        }
        (scalar, InsertionList(rest))
    }
}

/// A genus-indexed sequence attached to a class and insertion list. Used for
/// both BPS numbers and the GW invariants they are computed from.
///
/// JSON: `{"class": [1, 0], "c1_pairing": 4, "insertions": [[2, "3"], [4, null]], "values": ["1", "0"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawClassRecord", into = "RawClassRecord")]
pub struct ClassRecord {
    pub class: ClassDescriptor,
    pub insertions: InsertionList,
    pub values: Vec<Rational>,
}

pub type BpsRecord = ClassRecord;
pub type GwRecord = ClassRecord;

#[derive(Serialize, Deserialize)]
struct RawClassRecord {
    class: Vec<i64>,
    c1_pairing: i64,
    #[serde(default)]
    insertions: InsertionList,
    values: Vec<Rational>,
}

impl TryFrom<RawClassRecord> for ClassRecord {
    type Error = Error;

    fn try_from(raw: RawClassRecord) -> Result<Self> {
        if raw.values.is_empty() {
            return Err(Error::InvalidProblem("values must not be empty".into()));
        }
        Ok(ClassRecord {
            class: ClassDescriptor::new(raw.class, raw.c1_pairing)?,
            insertions: raw.insertions,
            values: raw.values,
        })
    }
}

impl From<ClassRecord> for RawClassRecord {
    fn from(r: ClassRecord) -> Self {
        RawClassRecord {
            class: r.class.coords,
            c1_pairing: r.class.c1_pairing,
            insertions: r.insertions,
            values: r.values,
        }
    }
}

impl ClassRecord {
    pub fn new(class: ClassDescriptor, insertions: InsertionList, values: Vec<Rational>) -> Self {
        ClassRecord {
            class,
            insertions,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn to_sequence(&self, label: impl Into<String>) -> GenusSequence {
        GenusSequence::new(label, self.class.c1_pairing, self.values.clone())
    }
}

/// `S^{2h−2+c}` for `h = 0..=order`, with `S` the given kernel.
fn kernel_powers(kernel: &EvenSeries, offset: i64) -> Result<Vec<EvenSeries>> {
    let order = kernel.order();
    let step = kernel.mul(kernel);
    let mut current = kernel.pow(offset - 2)?;
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        out.push(current.clone());
        current = current.mul(&step);
    }
    Ok(out)
}

/// Σ_h n_h u^{2h} K^{2h−2+offset}, truncated at the kernel order.
fn expand(n: &[Rational], kernel: &EvenSeries, offset: i64) -> Result<EvenSeries> {
    let powers = kernel_powers(kernel, offset)?;
    let order = kernel.order();
    let mut out = EvenSeries::zero(order);
    for (h, nh) in n.iter().enumerate().take(order + 1) {
        if nh.is_zero() {
            continue;
        }
        out = &out + &powers[h].shift(h).scale(nh);
    }
    Ok(out)
}

/// Forward substitution for `gw = Σ_h n_h u^{2h} K^{2h−2+offset}`; the kernel
/// must have constant term 1 so the system has unit diagonal.
fn solve(gw: &[Rational], kernel: &EvenSeries, offset: i64) -> Result<Vec<Rational>> {
    debug_assert!(kernel.constant_term().is_one());
    let powers = kernel_powers(kernel, offset)?;
    let mut n: Vec<Rational> = Vec::with_capacity(gw.len());
    for g in 0..gw.len() {
        let mut acc = gw[g].clone();
        for (h, nh) in n.iter().enumerate() {
            acc -= &(nh * &powers[h].coeffs()[g - h]);
        }
        n.push(acc);
    }
    Ok(n)
}

fn check_c1(c1: i64) -> Result<()> {
    if c1 < 0 {
        Err(Error::NegativeC1(c1))
    } else {
        Ok(())
    }
}

/// BPS numbers of a single class.
///
/// For `c1(A) = 0` only primitive classes can be handled here, since the
/// multiple-cover sum needs the data of every `A/d`; use
/// [`gw_to_bps_family`] otherwise.
pub fn gw_to_bps(gw: &GenusSequence, class: &ClassDescriptor, insertions: &InsertionList) -> Result<BpsRecord> {
    let c1 = class.c1_pairing;
    check_c1(c1)?;
    if gw.values.is_empty() {
        return Err(Error::InvalidProblem("empty GW sequence".into()));
    }
    let (scalar, reduced) = insertions.reduce();
    if c1 == 0 {
        if !reduced.is_empty() {
            return Err(Error::InsertionsWithZeroC1);
        }
        if class.divisibility() > 1 {
            let d = class.divisibility();
            let missing = class.divide(d).map(|c| c.coords).unwrap_or_default();
            return Err(Error::MissingDivisorData(missing));
        }
    }
    let values = if scalar.is_zero() {
        vec![Rational::zero(); gw.values.len()]
    } else {
        solve(&gw.values, &sinc_half(gw.order()), c1)?
    };
    Ok(ClassRecord::new(class.clone(), insertions.clone(), values))
}

/// GW sequence of a single class from its BPS numbers (see [`gw_to_bps`]).
pub fn bps_to_gw(bps: &BpsRecord) -> Result<GenusSequence> {
    let c1 = bps.class.c1_pairing;
    check_c1(c1)?;
    if c1 == 0 && bps.class.divisibility() > 1 {
        let mut family = bps_to_gw_family(std::slice::from_ref(bps))?;
        return Ok(family.remove(0));
    }
    let series = expand(&bps.values, &sinc_half(bps.order()), c1)?;
    Ok(GenusSequence::new("GW", c1, series.into_coeffs()))
}

fn sort_by_divisibility(records: &[ClassRecord]) -> Result<Vec<usize>> {
    let mut seen = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        if seen.insert(r.class.coords.clone(), i).is_some() {
            return Err(Error::InvalidProblem(format!(
                "class {:?} appears twice in the family",
                r.class.coords
            )));
        }
        if r.values.len() != records[0].values.len() {
            return Err(Error::LengthMismatch {
                left: records[0].values.len(),
                right: r.values.len(),
            });
        }
    }
    let mut idx: Vec<usize> = (0..records.len()).collect();
    idx.sort_by_key(|&i| (records[i].class.divisibility(), records[i].class.coords.clone()));
    Ok(idx)
}

/// Σ_{d | A, d > 1} (1/d) Σ_g n_{g,A/d} u^{2g} (sin(du/2)/(u/2))^{2g−2}.
fn multiple_cover_tail(
    class: &ClassDescriptor,
    order: usize,
    lookup: &BTreeMap<Vec<i64>, Vec<Rational>>,
) -> Result<EvenSeries> {
    let mut tail = EvenSeries::zero(order);
    for d in class.divisors().into_iter().filter(|&d| d > 1) {
        let base = class.divide(d)?;
        let n = lookup
            .get(&base.coords)
            .ok_or_else(|| Error::MissingDivisorData(base.coords.clone()))?;
        let term = expand(n, &sinc_scaled(d, order), 0)?;
        tail = &tail + &term.scale(&Rational::new(1, d));
    }
    Ok(tail)
}

/// BPS numbers for a family of classes.
///
/// Classes with `c1 > 0` are independent. Classes with `c1 = 0` are solved
/// in order of increasing divisibility so that every `A/d` is known before
/// `A`; a missing `A/d` is an error. Output order follows the input.
pub fn gw_to_bps_family(family: &[GwRecord]) -> Result<Vec<BpsRecord>> {
    let order_idx = sort_by_divisibility(family)?;
    let mut solved: BTreeMap<Vec<i64>, Vec<Rational>> = BTreeMap::new();
    let mut out: Vec<Option<BpsRecord>> = vec![None; family.len()];
    for i in order_idx {
        let rec = &family[i];
        let c1 = rec.class.c1_pairing;
        check_c1(c1)?;
        let (scalar, reduced) = rec.insertions.reduce();
        let values = if c1 > 0 {
            if scalar.is_zero() {
                vec![Rational::zero(); rec.values.len()]
            } else {
                solve(&rec.values, &sinc_half(rec.order()), c1)?
            }
        } else {
            if !reduced.is_empty() || !scalar.is_one() {
                return Err(Error::InsertionsWithZeroC1);
            }
            let tail = multiple_cover_tail(&rec.class, rec.order(), &solved)?;
            let residual: Vec<Rational> = rec
                .values
                .iter()
                .zip(tail.coeffs())
                .map(|(a, b)| a - b)
                .collect();
            solve(&residual, &sinc_half(rec.order()), 0)?
        };
        solved.insert(rec.class.coords.clone(), values.clone());
        out[i] = Some(ClassRecord::new(rec.class.clone(), rec.insertions.clone(), values));
    }
    Ok(out.into_iter().map(|r| r.expect("every record solved")).collect())
}

/// GW sequences for a family of BPS records; inverse of [`gw_to_bps_family`].
pub fn bps_to_gw_family(family: &[BpsRecord]) -> Result<Vec<GenusSequence>> {
    sort_by_divisibility(family)?;
    let lookup: BTreeMap<Vec<i64>, Vec<Rational>> = family
        .iter()
        .map(|r| (r.class.coords.clone(), r.values.clone()))
        .collect();
    family
        .iter()
        .map(|rec| {
            let c1 = rec.class.c1_pairing;
            check_c1(c1)?;
            let series = if c1 > 0 {
                let (scalar, _) = rec.insertions.reduce();
                if scalar.is_zero() {
                    EvenSeries::zero(rec.order())
                } else {
                    expand(&rec.values, &sinc_half(rec.order()), c1)?
                }
            } else {
                let (scalar, reduced) = rec.insertions.reduce();
                if !reduced.is_empty() || !scalar.is_one() {
                    return Err(Error::InsertionsWithZeroC1);
                }
                let own = expand(&rec.values, &sinc_half(rec.order()), 0)?;
                &own + &multiple_cover_tail(&rec.class, rec.order(), &lookup)?
            };
            Ok(GenusSequence::new(
                format!("GW{:?}", rec.class.coords),
                c1,
                series.into_coeffs(),
            ))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub class: Vec<i64>,
    pub per_genus: Vec<bool>,
    pub integral: bool,
    pub offending: Vec<usize>,
}

/// Audits denominators. Non-integral output is reported, not rejected:
/// synthetic input need not come from a geometry.
pub fn check_integrality(bps: &BpsRecord) -> IntegralityReport {
    let per_genus: Vec<bool> = bps.values.iter().map(Rational::is_integer).collect();
    let offending: Vec<usize> = per_genus
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(g, _)| g)
        .collect();
    IntegralityReport {
        class: bps.class.coords.clone(),
        integral: offending.is_empty(),
        per_genus,
        offending,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BpsInvarianceReport {
    pub kind: CorrespondenceKind,
    pub c1_downstairs: i64,
    pub c1_upstairs: i64,
    /// `n^X_{g,A}([pt] or [C], α...)` from the blown-down sequence.
    pub downstairs: Vec<Rational>,
    /// `n^{X̃}_{g,p^!A−e}(p^*α...)` from the upstairs sequence.
    pub upstairs: Vec<Rational>,
    pub per_genus: Vec<GenusCheck>,
    pub passed: bool,
}

/// `∫ c1` drop from `A` to `p^!A − e`: 2 for a point blow-up, 1 for a curve.
pub fn c1_shift(kind: CorrespondenceKind) -> Result<i64> {
    match kind {
        CorrespondenceKind::PointPrimary => Ok(2),
        CorrespondenceKind::Curve => Ok(1),
        other => Err(Error::InvalidProblem(format!(
            "BPS invariance is stated for point-primary and curve blow-ups, not {other}"
        ))),
    }
}

/// Blows `p` (the upstairs sequence) down with `kind` and checks that the BPS
/// numbers of the two sides coincide genus by genus.
pub fn verify_blowup_bps_invariance(
    p: &GenusSequence,
    c1_downstairs: i64,
    kind: CorrespondenceKind,
) -> Result<BpsInvarianceReport> {
    let shift = c1_shift(kind)?;
    let c1_upstairs = c1_downstairs - shift;
    check_c1(c1_upstairs)?;
    let h = apply_blowup(kind, p);
    let primitive = |c1| ClassDescriptor::new(vec![1], c1);
    let down = gw_to_bps(&h, &primitive(c1_downstairs)?, &InsertionList::empty())?;
    let up = gw_to_bps(p, &primitive(c1_upstairs)?, &InsertionList::empty())?;
    let per_genus: Vec<GenusCheck> = down
        .values
        .iter()
        .zip(&up.values)
        .enumerate()
        .map(|(g, (a, b))| GenusCheck {
            genus: g,
            matches: a == b,
            solved: (a != b).then(|| a.clone()),
            expected: (a != b).then(|| b.clone()),
        })
        .collect();
    let passed = per_genus.iter().all(|c| c.matches);
    Ok(BpsInvarianceReport {
        kind,
        c1_downstairs,
        c1_upstairs,
        downstairs: down.values,
        upstairs: up.values,
        per_genus,
        passed,
    })
}
