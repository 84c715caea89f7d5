//! Degeneration formula combinatorics.
//!
//! A degeneration of `X` into `X⁺ ∪_Z X⁻` writes an absolute invariant of
//! `X` as a sum over partitions `μ` of the contact with `Z`, weighted by
//! `𝔷(μ) = |Aut μ| ∏ μ_i`, of products of relative invariants of the two
//! sides over admissible triples `(Γ⁺, Γ⁻, I)`.
//!
//! The plus side is modeled concretely: a small lattice of curve classes with
//! linear functionals for `∫c1`, the pairing with `Z` and any extra
//! constraints. The minus side is opaque; its components are recorded only by
//! their pairing with `Z`. The dimension constraint then amounts to the plus
//! side relative invariant being degree-matched, since the minus side is
//! assumed degree-matched and the absolute problem is.
//!
//! Enumeration is staged. A skeleton `(μ, δ-degrees, A⁺)` fixes everything
//! the dimension constraint sees, so [`enumerate_surviving_triples`] filters
//! skeletons before expanding them into graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

// ---------------------------------------------------------------------------
// Partitions

/// A partition in weakly decreasing form. The empty partition stands for
/// `μ = ∅` (no contact with `Z`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    /// Sorts `parts` into canonical order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidProblem("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|μ|`
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `ℓ(μ)`
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part value to number of occurrences.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "({})", self.parts.iter().join(","))
    }
}

/// All partitions of `n`, lexicographically descending: `(n)` first,
/// `(1,...,1)` last. `n = 0` gives the empty partition alone.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for first in (1..=rest.min(max)).rev() {
            prefix.push(first);
            go(rest - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `𝔷(μ) = |Aut μ| · ∏ μ_i`, where `|Aut μ|` is the product of the
/// factorials of the part multiplicities.
pub fn zeta(mu: &Partition) -> Rational {
    let aut: Rational = mu
        .multiplicities()
        .values()
        .map(|&k| Rational::from_bigint(factorial(k as u32)))
        .product();
    let prod: Rational = mu.parts.iter().map(|&p| Rational::from_integer(p as i64)).product();
    aut * prod
}

// ---------------------------------------------------------------------------
// Geometry

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

/// `functional · A⁺ (relation) value`, applied to the total plus class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub label: String,
    pub functional: Vec<i64>,
    pub relation: Relation,
    pub value: i64,
}

impl LinearConstraint {
    pub fn holds(&self, x: &[i64]) -> bool {
        let v = dot(&self.functional, x);
        match self.relation {
            Relation::Eq => v == self.value,
            Relation::Ge => v >= self.value,
            Relation::Le => v <= self.value,
        }
    }
}

/// A functional evaluated on surviving plus classes and shown in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedFunctional {
    pub label: String,
    pub functional: Vec<i64>,
}

/// The plus side of a degeneration and the divisor `Z`.
///
/// Plus classes are nonnegative integer combinations of `basis`; this is the
/// effective cone for every preset. `divisor_coh_degrees` lists the real
/// degrees of a basis `{δ_i}` of `H*(Z)`; it must be symmetric under
/// `d ↦ divisor_dim − d` so each slot can pair with its dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryModel {
    pub name: String,
    pub basis: Vec<String>,
    pub c1_plus: Vec<i64>,
    pub divisor_pairing: Vec<i64>,
    pub divisor_dim: u32,
    pub divisor_coh_degrees: Vec<u32>,
    #[serde(default)]
    pub constraints: Vec<LinearConstraint>,
    #[serde(default)]
    pub reported: Vec<ReportedFunctional>,
}

fn dot(f: &[i64], x: &[i64]) -> i64 {
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

impl GeometryModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let g: GeometryModel =
            serde_json::from_str(text).map_err(|e| Error::InvalidGeometry(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn lattice_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGeometry(m));
        let r = self.lattice_rank();
        if r == 0 {
            return bad("basis must be nonempty".into());
        }
        let check_len = |what: &str, f: &[i64]| {
            if f.len() != r {
                Err(Error::InvalidGeometry(format!(
                    "{what} has length {} but the lattice has rank {r}",
                    f.len()
                )))
            } else {
                Ok(())
            }
        };
        check_len("c1_plus", &self.c1_plus)?;
        check_len("divisor_pairing", &self.divisor_pairing)?;
        for c in &self.constraints {
            check_len(&format!("constraint {:?}", c.label), &c.functional)?;
        }
        for c in &self.reported {
            check_len(&format!("reported functional {:?}", c.label), &c.functional)?;
        }
        if self.divisor_dim == 0 || !self.divisor_dim.is_multiple_of(2) {
            return bad(format!("divisor_dim {} must be positive and even", self.divisor_dim));
        }
        if self.divisor_coh_degrees.is_empty() {
            return bad("divisor_coh_degrees must be nonempty".into());
        }
        for &d in &self.divisor_coh_degrees {
            if d % 2 != 0 || d > self.divisor_dim {
                return bad(format!(
                    "cohomology degree {d} must be even and at most {}",
                    self.divisor_dim
                ));
            }
        }
        let mut degs = self.divisor_coh_degrees.clone();
        degs.sort_unstable();
        let mut dual: Vec<u32> = degs.iter().map(|d| self.divisor_dim - d).collect();
        dual.sort_unstable();
        if degs != dual {
            return bad(format!(
                "divisor_coh_degrees {:?} are not symmetric under d -> {} - d",
                self.divisor_coh_degrees, self.divisor_dim
            ));
        }
        Ok(())
    }

    pub fn c1(&self, x: &[i64]) -> i64 {
        dot(&self.c1_plus, x)
    }

    pub fn z_pairing(&self, x: &[i64]) -> i64 {
        dot(&self.divisor_pairing, x)
    }

    pub fn satisfies_constraints(&self, x: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    /// Number of basis classes of `H*(Z)` in real degree `d`.
    pub fn multiplicity(&self, d: u32) -> usize {
        self.divisor_coh_degrees.iter().filter(|&&e| e == d).count()
    }

    /// Distinct cohomology degrees of `Z`, descending.
    pub fn distinct_degrees(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.divisor_coh_degrees.iter().copied().collect();
        set.into_iter().rev().collect()
    }

    /// Human-readable class label, e.g. `F+2e`.
    pub fn label(&self, x: &[i64]) -> String {
        let terms: Vec<String> = x
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| **c != 0)
            .map(|(c, name)| match c {
                1 => name.clone(),
                -1 => format!("-{name}"),
                c => format!("{c}{name}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+").replace("+-", "-")
        }
    }

    pub fn reported_values(&self, x: &[i64]) -> BTreeMap<String, i64> {
        self.reported
            .iter()
            .map(|r| (r.label.clone(), dot(&r.functional, x)))
            .collect()
    }

    fn c1_positive(&self) -> bool {
        self.c1_plus.iter().all(|&c| c > 0)
    }
}

/// Which side of the degeneration an insertion is supported on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// An insertion `τ_k α`: its label and real degree `deg α + 2k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    pub label: String,
    pub degree: u32,
    pub side: Side,
}

impl Insertion {
    pub fn new(label: impl Into<String>, degree: u32, side: Side) -> Self {
        Insertion {
            label: label.into(),
            degree,
            side,
        }
    }
}

/// An absolute invariant to be degenerated: genus and insertions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationProblem {
    pub genus: u32,
    pub insertions: Vec<Insertion>,
}

impl DegenerationProblem {
    pub fn validate(&self) -> Result<()> {
        for (i, ins) in self.insertions.iter().enumerate() {
            if ins.degree % 2 != 0 {
                return Err(Error::UnsupportedInsertion(format!(
                    "insertion {i} ({}) has odd degree {}",
                    ins.label, ins.degree
                )));
            }
        }
        Ok(())
    }

    fn indices(&self, side: Side) -> Vec<usize> {
        (0..self.insertions.len())
            .filter(|&i| self.insertions[i].side == side)
            .collect()
    }

    fn degree_sum(&self, side: Side) -> i64 {
        self.insertions
            .iter()
            .filter(|i| i.side == side)
            .map(|i| i.degree as i64)
            .sum()
    }
}

/// A named geometry together with the insertions it carries on the plus side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub geometry: GeometryModel,
    pub plus_insertions: Vec<Insertion>,
}

pub const PRESET_NAMES: [&str; 7] = [
    "p3-point",
    "p3tilde-point",
    "p3-point-tau",
    "curve-plus",
    "curve-tilde-plus",
    "p3tilde-point-e2",
    "p3tilde-point-tau-e",
];

impl Preset {
    /// The plus insertions followed by `minus_marks` generic minus-side
    /// insertions `α1, α2, ...` of degree 2.
    pub fn problem(&self, genus: u32, minus_marks: usize) -> DegenerationProblem {
        let mut insertions = self.plus_insertions.clone();
        insertions.extend((1..=minus_marks).map(|i| Insertion::new(format!("α{i}"), 2, Side::Minus)));
        DegenerationProblem { genus, insertions }
    }
}

fn p3_relative_h() -> GeometryModel {
    GeometryModel {
        name: "P3 relative to a hyperplane".into(),
        basis: vec!["L".into()],
        c1_plus: vec![4],
        divisor_pairing: vec![1],
        divisor_dim: 4,
        divisor_coh_degrees: vec![0, 2, 4],
        constraints: vec![],
        reported: vec![],
    }
}

/// Blow-up of P3 at a point relative to a hyperplane; `F` is the fiber of
/// the projection to P2 and `e` a line in the exceptional plane.
fn p3tilde_relative_h() -> GeometryModel {
    GeometryModel {
        name: "P3 blown up at a point, relative to a hyperplane".into(),
        basis: vec!["F".into(), "e".into()],
        c1_plus: vec![2, 2],
        divisor_pairing: vec![1, 0],
        divisor_dim: 4,
        divisor_coh_degrees: vec![0, 2, 4],
        constraints: vec![LinearConstraint {
            label: "A+.E".into(),
            functional: vec![1, -1],
            relation: Relation::Eq,
            value: 1,
        }],
        reported: vec![],
    }
}

/// `P_C(N_C ⊕ O)` for a line `C ⊂ P3`, relative to the section at infinity.
/// `F` is a line in a fiber, `C0` the zero section.
fn curve_plus() -> GeometryModel {
    GeometryModel {
        name: "P(N+O) over a line in P3, relative to the infinity section".into(),
        basis: vec!["F".into(), "C0".into()],
        c1_plus: vec![3, 4],
        divisor_pairing: vec![1, 0],
        divisor_dim: 4,
        divisor_coh_degrees: vec![0, 2, 2, 4],
        constraints: vec![],
        reported: vec![ReportedFunctional {
            label: "c1(X)|C on pi_*A+".into(),
            functional: vec![0, 4],
        }],
    }
}

/// `P_E(N_E ⊕ O)` for the exceptional divisor `E ≅ P1×P1` of the blow-up of
/// P3 along a line. `F` is the fiber line, `f` and `s` the ruling and a
/// section of `E` in the zero section.
fn curve_tilde_plus() -> GeometryModel {
    GeometryModel {
        name: "P(N_E+O) over the exceptional divisor of a line blow-up".into(),
        basis: vec!["F".into(), "f".into(), "s".into()],
        c1_plus: vec![2, 1, 3],
        divisor_pairing: vec![1, 0, 0],
        divisor_dim: 4,
        divisor_coh_degrees: vec![0, 2, 2, 4],
        constraints: vec![LinearConstraint {
            label: "A+.E".into(),
            functional: vec![1, -1, 1],
            relation: Relation::Eq,
            value: 1,
        }],
        reported: vec![ReportedFunctional {
            label: "c1(X)|C on pi_*A+".into(),
            functional: vec![0, 0, 4],
        }],
    }
}

pub fn preset(name: &str) -> Result<Preset> {
    let plus = |label: &str, degree| vec![Insertion::new(label, degree, Side::Plus)];
    let (description, geometry, plus_insertions) = match name {
        "p3-point" => ("point class on P3 relative to H", p3_relative_h(), plus("[pt]", 6)),
        "p3tilde-point" => ("no plus insertion on the blown-up P3", p3tilde_relative_h(), vec![]),
        "p3-point-tau" => ("tau_1 of the point class on P3", p3_relative_h(), plus("τ1[pt]", 8)),
        "curve-plus" => ("class of the curve in P(N+O)", curve_plus(), plus("[C]", 4)),
        "curve-tilde-plus" => ("exceptional divisor in P(N_E+O)", curve_tilde_plus(), plus("E", 2)),
        "p3tilde-point-e2" => ("-E^2 on the blown-up P3", p3tilde_relative_h(), plus("-E^2", 4)),
        "p3tilde-point-tau-e" => ("tau_1 E on the blown-up P3", p3tilde_relative_h(), plus("τ1E", 4)),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(Preset {
        name: name.to_string(),
        description: description.to_string(),
        geometry,
        plus_insertions,
    })
}

// ---------------------------------------------------------------------------
// Graphs and triples

/// Degree of a component: a lattice class on the plus side, only the pairing
/// with `Z` on the opaque minus side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degree {
    Lattice(Vec<i64>),
    DivisorPairing(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RelativeGraphComponent {
    pub genus: u32,
    pub degree: Degree,
    /// Indices into the problem's insertion list, ascending.
    pub abs_marks: Vec<usize>,
    /// Contact orders, descending.
    pub rel_marks: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RelativeGraph {
    pub components: Vec<RelativeGraphComponent>,
}

impl RelativeGraph {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_genus(&self) -> u32 {
        self.components.iter().map(|c| c.genus).sum()
    }
}

/// A relative mark of contact order `contact` joining plus component `plus`
/// to minus component `minus`. The minus slot carries a dual class of real
/// degree `delta_degree`; the plus slot the complementary degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub contact: u32,
    pub delta_degree: u32,
    pub plus: usize,
    pub minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdmissibleTriple {
    pub genus: u32,
    pub mu: Partition,
    pub gamma_plus: RelativeGraph,
    pub gamma_minus: RelativeGraph,
    pub matching: Vec<Edge>,
}

impl AdmissibleTriple {
    /// Minus-side δ-degrees listed along the parts of `μ`.
    pub fn delta_degrees(&self) -> Vec<u32> {
        let mut e: Vec<(u32, u32)> = self.matching.iter().map(|e| (e.contact, e.delta_degree)).collect();
        e.sort_unstable_by(|a, b| b.cmp(a));
        e.into_iter().map(|(_, d)| d).collect()
    }

    pub fn plus_class(&self, rank: usize) -> Vec<i64> {
        let mut total = vec![0; rank];
        for c in &self.gamma_plus.components {
            if let Degree::Lattice(x) = &c.degree {
                for (t, v) in total.iter_mut().zip(x) {
                    *t += v;
                }
            }
        }
        total
    }

    /// `g = g⁺ + g⁻ + ℓ(μ) + 1 − |Γ⁺| − |Γ⁻|`, checked as an integer identity.
    pub fn genus_relation_holds(&self) -> bool {
        let lhs = self.genus as i64;
        let rhs = self.gamma_plus.total_genus() as i64 + self.gamma_minus.total_genus() as i64
            + self.mu.length() as i64
            + 1
            - self.gamma_plus.len() as i64
            - self.gamma_minus.len() as i64;
        lhs == rhs
    }

    /// Whether the graph obtained by gluing along the matching is connected.
    pub fn is_connected(&self) -> bool {
        glued_connected(self.gamma_plus.len(), self.gamma_minus.len(), &self.matching)
    }
}

fn glued_connected(kp: usize, km: usize, edges: &[Edge]) -> bool {
    let n = kp + km;
    if n == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in edges {
        let a = find(&mut parent, e.plus);
        let b = find(&mut parent, kp + e.minus);
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|i| find(&mut parent, i) == root)
}

/// Minimum over all relabelings of the components on each side.
fn canonical(
    genus: u32,
    mu: &Partition,
    plus: &[RelativeGraphComponent],
    minus: &[RelativeGraphComponent],
    edges: &[Edge],
) -> AdmissibleTriple {
    let mut best: Option<AdmissibleTriple> = None;
    for pp in (0..plus.len()).permutations(plus.len()) {
        let mut pinv = vec![0; plus.len()];
        for (new, &old) in pp.iter().enumerate() {
            pinv[old] = new;
        }
        for mp in (0..minus.len()).permutations(minus.len()) {
            let mut minv = vec![0; minus.len()];
            for (new, &old) in mp.iter().enumerate() {
                minv[old] = new;
            }
            let mut matching: Vec<Edge> = edges
                .iter()
                .map(|e| Edge {
                    plus: pinv[e.plus],
                    minus: minv[e.minus],
                    ..*e
                })
                .collect();
            matching.sort_unstable();
            let cand = AdmissibleTriple {
                genus,
                mu: mu.clone(),
                gamma_plus: RelativeGraph {
                    components: pp.iter().map(|&o| plus[o].clone()).collect(),
                },
                gamma_minus: RelativeGraph {
                    components: mp.iter().map(|&o| minus[o].clone()).collect(),
                },
                matching,
            };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("at least one component")
}

// ---------------------------------------------------------------------------
// Dimension constraint

/// Outcome of the dimension constraint for one triple (all dimensions real).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterOutcome {
    pub passed: bool,
    /// Virtual dimension of the plus moduli space.
    pub dim_plus: i64,
    /// Degree of the plus insertions and plus relative slots.
    pub required_plus: i64,
    pub dim_minus: i64,
    pub dim_absolute: i64,
    /// `dim⁺ + dim⁻` against `dim + divisor_dim · ℓ(μ)`.
    pub lhs_total: i64,
    pub rhs_total: i64,
    /// Reduced form with the values substituted.
    pub equation: String,
}

fn check_dimension(
    geometry: &GeometryModel,
    problem: &DegenerationProblem,
    mu: &Partition,
    plus_class: &[i64],
    deltas: &[u32],
    has_plus: bool,
) -> FilterOutcome {
    let dim_z = geometry.divisor_dim as i64;
    let m_plus = problem.indices(Side::Plus).len() as i64;
    let d_plus = problem.degree_sum(Side::Plus);
    let d_minus = problem.degree_sum(Side::Minus);
    let ell = mu.length() as i64;
    let size = mu.size() as i64;
    let sum_delta: i64 = deltas.iter().map(|&d| d as i64).sum();
    let c1 = geometry.c1(plus_class);

    let (dim_plus, required_plus) = if has_plus {
        (
            2 * c1 + 2 * m_plus + 2 * ell - 2 * size,
            d_plus + ell * dim_z - sum_delta,
        )
    } else {
        (0, d_plus)
    };
    let dim_minus = d_minus + sum_delta;
    let dim_absolute = d_plus + d_minus;
    let lhs_total = dim_plus + dim_minus;
    let rhs_total = dim_absolute + dim_z * ell;
    let passed = dim_plus == required_plus && (has_plus || m_plus == 0);

    let k = d_plus / 2 - m_plus;
    let ell_coeff = dim_z / 2 - 1;
    let mut rhs_terms = Vec::new();
    if k != 0 || ell_coeff == 0 {
        rhs_terms.push(k.to_string());
    }
    match ell_coeff {
        0 => {}
        1 => rhs_terms.push("ℓ(μ)".into()),
        c => rhs_terms.push(format!("{c}ℓ(μ)")),
    }
    let rhs_sym = rhs_terms.join(" + ").replace("+ -", "- ");
    let lhs_val = sum_delta / 2 + c1 - size;
    let rhs_val = k + ell_coeff * ell;
    let equation = if has_plus {
        format!(
            "½Σdeg δ + ∫c1(A⁺) − |μ| = {rhs_sym}: {} + {c1} − {size} {} {rhs_val}",
            sum_delta / 2,
            if lhs_val == rhs_val { "=" } else { "≠" }
        )
    } else {
        format!("no plus side: plus insertion degree {d_plus} must vanish")
    };
    FilterOutcome {
        passed,
        dim_plus,
        required_plus,
        dim_minus,
        dim_absolute,
        lhs_total,
        rhs_total,
        equation,
    }
}

/// The dimension constraint for a triple of `problem`.
///
/// The minus side is assumed degree-matched, so the constraint holds exactly
/// when the plus relative invariant is degree-matched. Genus does not enter:
/// in real dimension six the virtual dimension is independent of it.
pub fn dimension_filter(
    triple: &AdmissibleTriple,
    problem: &DegenerationProblem,
    geometry: &GeometryModel,
) -> FilterOutcome {
    check_dimension(
        geometry,
        problem,
        &triple.mu,
        &triple.plus_class(geometry.lattice_rank()),
        &triple.delta_degrees(),
        !triple.gamma_plus.is_empty(),
    )
}

// ---------------------------------------------------------------------------
// Enumeration

/// Limits on the enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Components per side.
    pub max_components: usize,
    /// Largest `|μ|`.
    pub max_mu: u32,
    /// Coordinate bound for plus classes when no exact bound is available.
    pub max_degree: i64,
    /// Number of distinct triples before the enumeration gives up.
    pub max_triples: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_components: 3,
            max_mu: 6,
            max_degree: 6,
            max_triples: 100_000,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        if self.max_components == 0 || self.max_mu == 0 || self.max_degree <= 0 || self.max_triples == 0 {
            return Err(Error::InvalidProblem("caps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub triples: Vec<AdmissibleTriple>,
    /// `(μ, δ-degrees, A⁺)` combinations considered.
    pub skeletons_examined: usize,
    /// Of those, how many failed the dimension constraint (pruned runs only).
    pub skeletons_eliminated: usize,
    /// Whether every plus class allowed by the dimension constraint was in
    /// range, rather than only those inside the `max_degree` box.
    pub class_search_exact: bool,
    /// Limits that may have cut off part of the sum.
    pub truncations: BTreeSet<String>,
}

/// All admissible triples for `problem`, without the dimension constraint.
pub fn enumerate_admissible_triples(
    problem: &DegenerationProblem,
    geometry: &GeometryModel,
    caps: &Caps,
) -> Result<Enumeration> {
    Enumerator::new(problem, geometry, caps, false)?.run()
}

/// Admissible triples that pass [`dimension_filter`]. Skeletons are filtered
/// before graphs are built.
pub fn enumerate_surviving_triples(
    problem: &DegenerationProblem,
    geometry: &GeometryModel,
    caps: &Caps,
) -> Result<Enumeration> {
    Enumerator::new(problem, geometry, caps, true)?.run()
}

/// All index vectors with `v[i] < radices[i]`, in lexicographic order.
fn mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    if radices.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; radices.len()];
    loop {
        out.push(cur.clone());
        let mut i = radices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radices[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

struct Enumerator<'a> {
    problem: &'a DegenerationProblem,
    geometry: &'a GeometryModel,
    caps: &'a Caps,
    prune: bool,
    plus_marks: Vec<usize>,
    minus_marks: Vec<usize>,
    out: BTreeSet<AdmissibleTriple>,
    examined: usize,
    eliminated: usize,
    truncations: BTreeSet<String>,
}

impl<'a> Enumerator<'a> {
    fn new(
        problem: &'a DegenerationProblem,
        geometry: &'a GeometryModel,
        caps: &'a Caps,
        prune: bool,
    ) -> Result<Self> {
        problem.validate()?;
        geometry.validate()?;
        caps.validate()?;
        Ok(Enumerator {
            problem,
            geometry,
            caps,
            prune,
            plus_marks: problem.indices(Side::Plus),
            minus_marks: problem.indices(Side::Minus),
            out: BTreeSet::new(),
            examined: 0,
            eliminated: 0,
            truncations: BTreeSet::new(),
        })
    }

    fn exact(&self) -> bool {
        self.prune && self.geometry.c1_positive()
    }

    fn run(mut self) -> Result<Enumeration> {
        self.empty_partition()?;
        for n in 1..=self.caps.max_mu {
            for mu in enumerate_partitions(n) {
                self.partition(&mu)?;
            }
        }
        self.truncations
            .insert(format!("partitions with |μ| > {} are not enumerated", self.caps.max_mu));
        if !self.exact() {
            self.truncations.insert(format!(
                "plus classes are limited to coordinates ≤ {}",
                self.caps.max_degree
            ));
        }
        Ok(Enumeration {
            class_search_exact: self.exact(),
            triples: self.out.into_iter().collect(),
            skeletons_examined: self.examined,
            skeletons_eliminated: self.eliminated,
            truncations: self.truncations,
        })
    }

    fn push(&mut self, t: AdmissibleTriple) -> Result<()> {
        self.out.insert(t);
        if self.out.len() > self.caps.max_triples {
            return Err(Error::CapExceeded(format!(
                "more than {} admissible triples",
                self.caps.max_triples
            )));
        }
        Ok(())
    }

    /// Per-coordinate bound for plus classes of a given `c1` ceiling.
    fn bounds(&self, c1_max: Option<i64>) -> Vec<i64> {
        self.geometry
            .c1_plus
            .iter()
            .map(|&c| match c1_max {
                Some(t) if self.exact() => (t.max(0) / c).max(self.caps.max_degree),
                _ => self.caps.max_degree,
            })
            .collect()
    }

    /// Plus classes in the box with the given `Z` pairing that satisfy the
    /// geometry's constraints.
    fn classes(&self, z: i64, bounds: &[i64]) -> Vec<Vec<i64>> {
        let radices: Vec<usize> = bounds.iter().map(|&b| b as usize + 1).collect();
        mixed_radix(&radices)
            .into_iter()
            .map(|v| v.into_iter().map(|c| c as i64).collect::<Vec<i64>>())
            .filter(|x| self.geometry.z_pairing(x) == z && self.geometry.satisfies_constraints(x))
            .collect()
    }

    fn check(&mut self, mu: &Partition, class: &[i64], deltas: &[u32], has_plus: bool) -> bool {
        self.examined += 1;
        if !self.prune {
            return true;
        }
        let ok = check_dimension(self.geometry, self.problem, mu, class, deltas, has_plus).passed;
        if !ok {
            self.eliminated += 1;
        }
        ok
    }

    /// `μ = ∅`: the whole curve lies on one side.
    fn empty_partition(&mut self) -> Result<()> {
        let mu = Partition::empty();
        let g = self.problem.genus;
        if self.minus_marks.is_empty() {
            let k = self.problem.degree_sum(Side::Plus) / 2 - self.plus_marks.len() as i64;
            for class in self.classes(0, &self.bounds(Some(k))) {
                if !self.check(&mu, &class, &[], true) {
                    continue;
                }
                let stable = class.iter().any(|&c| c != 0) || 2 * g as i64 - 2 + self.plus_marks.len() as i64 > 0;
                if !stable {
                    continue;
                }
                let comp = RelativeGraphComponent {
                    genus: g,
                    degree: Degree::Lattice(class),
                    abs_marks: self.plus_marks.clone(),
                    rel_marks: vec![],
                };
                let t = canonical(g, &mu, &[comp], &[], &[]);
                self.push(t)?;
            }
        }
        if self.plus_marks.is_empty() {
            let zero = vec![0; self.geometry.lattice_rank()];
            if self.geometry.satisfies_constraints(&zero) && self.check(&mu, &zero, &[], false) {
                let comp = RelativeGraphComponent {
                    genus: g,
                    degree: Degree::DivisorPairing(0),
                    abs_marks: self.minus_marks.clone(),
                    rel_marks: vec![],
                };
                let t = canonical(g, &mu, &[], &[comp], &[]);
                self.push(t)?;
            }
        }
        Ok(())
    }

    /// δ-degree assignments along the parts of `μ`, non-increasing within
    /// runs of equal parts.
    fn delta_assignments(&self, mu: &Partition) -> Vec<Vec<u32>> {
        let degrees = self.geometry.distinct_degrees();
        let parts = mu.parts();
        let mut out = Vec::new();
        fn go(i: usize, parts: &[u32], degrees: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == parts.len() {
                out.push(cur.clone());
                return;
            }
            for &d in degrees {
                if i > 0 && parts[i] == parts[i - 1] && d > cur[i - 1] {
                    continue;
                }
                cur.push(d);
                go(i + 1, parts, degrees, cur, out);
                cur.pop();
            }
        }
        go(0, parts, &degrees, &mut Vec::new(), &mut out);
        out
    }

    fn partition(&mut self, mu: &Partition) -> Result<()> {
        let ell = mu.length() as i64;
        let k = self.problem.degree_sum(Side::Plus) / 2 - self.plus_marks.len() as i64;
        let ell_coeff = self.geometry.divisor_dim as i64 / 2 - 1;
        let c1_max = k + ell_coeff * ell + mu.size() as i64;
        let classes = self.classes(mu.size() as i64, &self.bounds(Some(c1_max)));
        for deltas in self.delta_assignments(mu) {
            for class in &classes {
                if !self.check(mu, class, &deltas, true) {
                    continue;
                }
                if mu.length() > self.caps.max_components {
                    self.truncations.insert(format!(
                        "graphs with more than {} components per side are not enumerated (ℓ(μ) = {})",
                        self.caps.max_components,
                        mu.length()
                    ));
                }
                self.expand(mu, class, &deltas)?;
            }
        }
        Ok(())
    }

    /// Splits of `class` into `contacts.len()` nonnegative classes whose `Z`
    /// pairings are the given contact sums.
    fn class_splits(&self, class: &[i64], contacts: &[i64]) -> Vec<Vec<Vec<i64>>> {
        if contacts.len() == 1 {
            return vec![vec![class.to_vec()]];
        }
        let radices: Vec<usize> = class.iter().map(|&c| c as usize + 1).collect();
        let mut out = Vec::new();
        for v in mixed_radix(&radices) {
            let first: Vec<i64> = v.into_iter().map(|c| c as i64).collect();
            if self.geometry.z_pairing(&first) != contacts[0] {
                continue;
            }
            let rest: Vec<i64> = class.iter().zip(&first).map(|(a, b)| a - b).collect();
            for mut tail in self.class_splits(&rest, &contacts[1..]) {
                tail.insert(0, first.clone());
                out.push(tail);
            }
        }
        out
    }

    fn expand(&mut self, mu: &Partition, class: &[i64], deltas: &[u32]) -> Result<()> {
        let g = self.problem.genus as i64;
        let ell = mu.length();
        let max_k = self.caps.max_components.min(ell);
        for kp in 1..=max_k {
            for km in 1..=max_k {
                let genus_total = g + kp as i64 + km as i64 - ell as i64 - 1;
                if genus_total < 0 {
                    continue;
                }
                let cells = mixed_radix(&vec![kp * km; ell]);
                for cell in cells {
                    let pairs: Vec<(usize, usize)> = cell.iter().map(|&c| (c / km, c % km)).collect();
                    // Components are unlabeled: require first use in index order.
                    if !first_use_ordered(pairs.iter().map(|p| p.0), kp)
                        || !first_use_ordered(pairs.iter().map(|p| p.1), km)
                    {
                        continue;
                    }
                    let edges: Vec<Edge> = pairs
                        .iter()
                        .enumerate()
                        .map(|(i, &(p, q))| Edge {
                            contact: mu.parts()[i],
                            delta_degree: deltas[i],
                            plus: p,
                            minus: q,
                        })
                        .collect();
                    if !glued_connected(kp, km, &edges) {
                        continue;
                    }
                    self.decorate(mu, class, &edges, kp, km, genus_total as u32)?;
                }
            }
        }
        Ok(())
    }

    fn decorate(
        &mut self,
        mu: &Partition,
        class: &[i64],
        edges: &[Edge],
        kp: usize,
        km: usize,
        genus_total: u32,
    ) -> Result<()> {
        let mut cp = vec![0i64; kp];
        let mut cm = vec![0i64; km];
        let mut rel_p = vec![Vec::new(); kp];
        let mut rel_m = vec![Vec::new(); km];
        for e in edges {
            cp[e.plus] += e.contact as i64;
            cm[e.minus] += e.contact as i64;
            rel_p[e.plus].push(e.contact);
            rel_m[e.minus].push(e.contact);
        }
        for r in rel_p.iter_mut().chain(rel_m.iter_mut()) {
            r.sort_unstable_by(|a, b| b.cmp(a));
        }
        let splits = self.class_splits(class, &cp);
        let plus_assign = mixed_radix(&vec![kp; self.plus_marks.len()]);
        let minus_assign = mixed_radix(&vec![km; self.minus_marks.len()]);
        let genera = compositions(genus_total, kp + km);
        for split in &splits {
            for pa in &plus_assign {
                for ma in &minus_assign {
                    for gs in &genera {
                        let plus: Vec<RelativeGraphComponent> = (0..kp)
                            .map(|i| RelativeGraphComponent {
                                genus: gs[i],
                                degree: Degree::Lattice(split[i].clone()),
                                abs_marks: marks_for(&self.plus_marks, pa, i),
                                rel_marks: rel_p[i].clone(),
                            })
                            .collect();
                        let minus: Vec<RelativeGraphComponent> = (0..km)
                            .map(|j| RelativeGraphComponent {
                                genus: gs[kp + j],
                                degree: Degree::DivisorPairing(cm[j]),
                                abs_marks: marks_for(&self.minus_marks, ma, j),
                                rel_marks: rel_m[j].clone(),
                            })
                            .collect();
                        // Every component meets Z, so its degree is nonzero
                        // and it is stable.
                        let t = canonical(self.problem.genus, mu, &plus, &minus, edges);
                        self.push(t)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn first_use_ordered(seq: impl Iterator<Item = usize>, k: usize) -> bool {
    let mut next = 0;
    for x in seq {
        if x > next {
            return false;
        }
        if x == next {
            next += 1;
        }
    }
    next == k
}

fn marks_for(indices: &[usize], assignment: &[usize], component: usize) -> Vec<usize> {
    indices
        .iter()
        .zip(assignment)
        .filter(|(_, &c)| c == component)
        .map(|(&i, _)| i)
        .collect()
}

// ---------------------------------------------------------------------------
// Survivor reports

/// A surviving `(μ, δ-degrees)` profile and the reported functionals of
/// its plus class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SurvivorProfile {
    pub mu: Vec<u32>,
    pub delta_degrees: Vec<u32>,
    pub reported: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorEntry {
    pub genus: u32,
    pub minus_marks: usize,
    pub mu: Vec<u32>,
    pub delta_degrees: Vec<u32>,
    pub genus_split: [u32; 2],
    pub components: [usize; 2],
    pub plus_class: String,
    pub reported: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusSurvivors {
    pub genus: u32,
    pub minus_marks: usize,
    pub skeletons_examined: usize,
    pub skeletons_eliminated: usize,
    pub profiles: Vec<SurvivorProfile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorsReport {
    pub preset: String,
    pub caps: Caps,
    pub class_search_exact: bool,
    pub truncations: Vec<String>,
    /// Distinct profiles over all genera and mark counts.
    pub profiles: Vec<SurvivorProfile>,
    pub per_genus: Vec<GenusSurvivors>,
    pub survivors: Vec<SurvivorEntry>,
}

/// Surviving triples of a geometry for every genus `≤ g_max` and every
/// number `≤ max_minus_marks` of generic minus-side insertions.
pub fn survivors_for(
    name: &str,
    geometry: &GeometryModel,
    plus_insertions: &[Insertion],
    g_max: u32,
    max_minus_marks: usize,
    caps: &Caps,
) -> Result<SurvivorsReport> {
    let template = Preset {
        name: name.to_string(),
        description: String::new(),
        geometry: geometry.clone(),
        plus_insertions: plus_insertions.to_vec(),
    };
    let mut per_genus = Vec::new();
    let mut survivors = Vec::new();
    let mut all_profiles = BTreeSet::new();
    let mut truncations = BTreeSet::new();
    let mut exact = true;
    for m in 0..=max_minus_marks {
        for g in 0..=g_max {
            let problem = template.problem(g, m);
            let run = enumerate_surviving_triples(&problem, geometry, caps)?;
            exact &= run.class_search_exact;
            truncations.extend(run.truncations);
            let mut profiles = BTreeSet::new();
            for t in &run.triples {
                let class = t.plus_class(geometry.lattice_rank());
                let reported = geometry.reported_values(&class);
                let profile = SurvivorProfile {
                    mu: t.mu.parts().to_vec(),
                    delta_degrees: t.delta_degrees(),
                    reported: reported.clone(),
                };
                profiles.insert(profile.clone());
                all_profiles.insert(profile);
                survivors.push(SurvivorEntry {
                    genus: g,
                    minus_marks: m,
                    mu: t.mu.parts().to_vec(),
                    delta_degrees: t.delta_degrees(),
                    genus_split: [t.gamma_plus.total_genus(), t.gamma_minus.total_genus()],
                    components: [t.gamma_plus.len(), t.gamma_minus.len()],
                    plus_class: geometry.label(&class),
                    reported,
                });
            }
            per_genus.push(GenusSurvivors {
                genus: g,
                minus_marks: m,
                skeletons_examined: run.skeletons_examined,
                skeletons_eliminated: run.skeletons_eliminated,
                profiles: profiles.into_iter().collect(),
            });
        }
    }
    Ok(SurvivorsReport {
        preset: name.to_string(),
        caps: caps.clone(),
        class_search_exact: exact,
        truncations: truncations.into_iter().collect(),
        profiles: all_profiles.into_iter().collect(),
        per_genus,
        survivors,
    })
}

pub fn survivors_report(
    preset: &Preset,
    g_max: u32,
    max_minus_marks: usize,
    caps: &Caps,
) -> Result<SurvivorsReport> {
    survivors_for(
        &preset.name,
        &preset.geometry,
        &preset.plus_insertions,
        g_max,
        max_minus_marks,
        caps,
    )
}

// ---------------------------------------------------------------------------
// Invariant tables and evaluation

/// Key of a connected relative invariant: genus, degree label, sorted
/// insertion labels and sorted `(contact, slot degree, basis index)` triples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TableKey {
    pub genus: u32,
    pub degree: String,
    pub insertions: Vec<String>,
    pub relative: Vec<(u32, u32, usize)>,
}

impl TableKey {
    pub fn new(
        genus: u32,
        degree: impl Into<String>,
        mut insertions: Vec<String>,
        mut relative: Vec<(u32, u32, usize)>,
    ) -> Self {
        insertions.sort();
        relative.sort_unstable();
        TableKey {
            genus,
            degree: degree.into(),
            insertions,
            relative,
        }
    }
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = self
            .relative
            .iter()
            .map(|(c, d, b)| format!("({c},{d},{b})"))
            .join(",");
        write!(
            f,
            "genus {} degree {} insertions [{}] relative [{}]",
            self.genus,
            self.degree,
            self.insertions.join(","),
            rel
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub genus: u32,
    pub degree: String,
    #[serde(default)]
    pub insertions: Vec<String>,
    #[serde(default)]
    pub relative: Vec<(u32, u32, usize)>,
    pub value: Rational,
}

/// Connected relative invariants of one side. Invariants of disconnected
/// graphs are products over components.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct InvariantTable {
    entries: BTreeMap<TableKey, Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    entries: Vec<TableEntry>,
}

impl TryFrom<RawTable> for InvariantTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        let mut t = InvariantTable::default();
        for e in raw.entries {
            t.insert(TableKey::new(e.genus, e.degree, e.insertions, e.relative), e.value)?;
        }
        Ok(t)
    }
}

impl From<InvariantTable> for RawTable {
    fn from(t: InvariantTable) -> Self {
        RawTable {
            entries: t
                .entries
                .into_iter()
                .map(|(k, value)| TableEntry {
                    genus: k.genus,
                    degree: k.degree,
                    insertions: k.insertions,
                    relative: k.relative,
                    value,
                })
                .collect(),
        }
    }
}

impl InvariantTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: TableKey, value: Rational) -> Result<()> {
        if self.entries.contains_key(&key) {
            return Err(Error::DuplicateInvariant(key.to_string()));
        }
        self.entries.insert(key, value);
        Ok(())
    }

    pub fn get(&self, key: &TableKey) -> Result<&Rational> {
        self.entries
            .get(key)
            .ok_or_else(|| Error::MissingInvariant(key.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Degree label used for minus components, which are known only through
/// their pairing with `Z`.
pub fn minus_degree_label(z: i64) -> String {
    format!("[Z={z}]")
}

fn component_key(
    comp: &RelativeGraphComponent,
    index: usize,
    side: Side,
    edges: &[Edge],
    basis: &[usize],
    problem: &DegenerationProblem,
    geometry: &GeometryModel,
) -> TableKey {
    let degree = match &comp.degree {
        Degree::Lattice(x) => geometry.label(x),
        Degree::DivisorPairing(z) => minus_degree_label(*z),
    };
    let insertions = comp
        .abs_marks
        .iter()
        .map(|&i| problem.insertions[i].label.clone())
        .collect();
    let relative = edges
        .iter()
        .zip(basis)
        .filter(|(e, _)| match side {
            Side::Plus => e.plus == index,
            Side::Minus => e.minus == index,
        })
        .map(|(e, &b)| {
            let d = match side {
                Side::Plus => geometry.divisor_dim - e.delta_degree,
                Side::Minus => e.delta_degree,
            };
            (e.contact, d, b)
        })
        .collect();
    TableKey::new(comp.genus, degree, insertions, relative)
}

/// Contribution of one triple without the `𝔷(μ)` weight: the sum over dual
/// basis choices of the product of component invariants.
fn triple_contribution(
    t: &AdmissibleTriple,
    problem: &DegenerationProblem,
    plus_table: &InvariantTable,
    minus_table: &InvariantTable,
    geometry: &GeometryModel,
) -> Result<Rational> {
    let radices: Vec<usize> = t
        .matching
        .iter()
        .map(|e| geometry.multiplicity(e.delta_degree))
        .collect();
    let mut sum = Rational::zero();
    for basis in mixed_radix(&radices) {
        let mut prod = Rational::one();
        for (i, comp) in t.gamma_plus.components.iter().enumerate() {
            let key = component_key(comp, i, Side::Plus, &t.matching, &basis, problem, geometry);
            prod *= plus_table.get(&key)?;
        }
        for (j, comp) in t.gamma_minus.components.iter().enumerate() {
            let key = component_key(comp, j, Side::Minus, &t.matching, &basis, problem, geometry);
            prod *= minus_table.get(&key)?;
        }
        sum += prod;
    }
    Ok(sum)
}

/// `Σ_μ 𝔷(μ) Σ_δ Σ_η ⟨…|δ⟩⁺ ⟨…|δ^∨⟩⁻` over triples passing the dimension
/// constraint.
pub fn evaluate_degeneration(
    problem: &DegenerationProblem,
    plus_table: &InvariantTable,
    minus_table: &InvariantTable,
    geometry: &GeometryModel,
    caps: &Caps,
) -> Result<Rational> {
    let run = enumerate_surviving_triples(problem, geometry, caps)?;
    let mut total = Rational::zero();
    for t in &run.triples {
        total += zeta(&t.mu) * triple_contribution(t, problem, plus_table, minus_table, geometry)?;
    }
    Ok(total)
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn zeta_bounds_and_order_invariance(mut parts in prop::collection::vec(1u32..5, 1..6), seed in any::<u64>()) {
            let mu = Partition::new(parts.clone()).unwrap();
            let z = zeta(&mu);
            prop_assert!(z >= Rational::from_integer(mu.length() as i64));
            prop_assert!(z >= Rational::from_integer(mu.parts()[0] as i64));
            let k = parts.len();
            parts.rotate_left((seed as usize) % k);
            prop_assert_eq!(zeta(&Partition::new(parts).unwrap()), z);
        }

        #[test]
        fn partitions_are_canonical_and_distinct(n in 1u32..10) {
            let ps = enumerate_partitions(n);
            let set: BTreeSet<_> = ps.iter().cloned().collect();
            prop_assert_eq!(set.len(), ps.len());
            for p in &ps {
                prop_assert_eq!(p.size(), n);
                prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
            }
        }

        #[test]
        fn enumerated_triples_satisfy_genus_relation(g in 0u32..3, m in 0usize..3, idx in 0usize..3) {
            let name = ["p3-point", "p3tilde-point", "curve-plus"][idx];
            let p = preset(name).unwrap();
            let caps = Caps { max_mu: 2, max_components: 2, max_degree: 2, ..Caps::default() };
            let run = enumerate_admissible_triples(&p.problem(g, m), &p.geometry, &caps).unwrap();
            for t in &run.triples {
                prop_assert!(t.genus_relation_holds(), "{:?}", t);
                prop_assert!(t.is_connected());
                let marks: usize = t.gamma_plus.components.iter().chain(&t.gamma_minus.components)
                    .map(|c| c.abs_marks.len()).sum();
                prop_assert_eq!(marks, p.plus_insertions.len() + m);
                prop_assert_eq!(p.geometry.z_pairing(&t.plus_class(p.geometry.lattice_rank())), t.mu.size() as i64);
            }
        }

        #[test]
        fn relabeling_insertions_relabels_triples(g in 0u32..2, rot in 0usize..3) {
            let geometry = p3_relative_h();
            let caps = Caps { max_mu: 2, max_components: 2, max_degree: 2, ..Caps::default() };
            let base = vec![
                Insertion::new("[pt]", 6, Side::Plus),
                Insertion::new("a", 2, Side::Minus),
                Insertion::new("b", 4, Side::Minus),
            ];
            // perm[new] = old
            let mut perm: Vec<usize> = (0..3).collect();
            perm.rotate_left(rot);
            let permuted: Vec<Insertion> = perm.iter().map(|&o| base[o].clone()).collect();
            let a = enumerate_admissible_triples(&DegenerationProblem { genus: g, insertions: base }, &geometry, &caps).unwrap();
            let b = enumerate_admissible_triples(&DegenerationProblem { genus: g, insertions: permuted }, &geometry, &caps).unwrap();
            let relabel = |t: &AdmissibleTriple| {
                let fix = |c: &RelativeGraphComponent| {
                    let mut c = c.clone();
                    c.abs_marks = c.abs_marks.iter().map(|&i| perm[i]).sorted().collect();
                    c
                };
                let plus: Vec<_> = t.gamma_plus.components.iter().map(fix).collect();
                let minus: Vec<_> = t.gamma_minus.components.iter().map(fix).collect();
                canonical(t.genus, &t.mu, &plus, &minus, &t.matching)
            };
            let mapped: BTreeSet<AdmissibleTriple> = b.triples.iter().map(relabel).collect();
            let original: BTreeSet<AdmissibleTriple> = a.triples.into_iter().collect();
            prop_assert_eq!(mapped, original);
        }
    }
}
