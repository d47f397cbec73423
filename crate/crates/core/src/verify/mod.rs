//! Windowed verification that `L_k(Q)` is the pullback of
//!
//! ```text
//!            π1
//!   L(Q) ---------> L(Q')
//!    |                |
//!  f |                | δ
//!    v                v
//!   L(Q'')⊗k[u^±] --> L(Q')⊗k[u^±]
//!            π2 ⊗ id
//! ```
//!
//! for a trimmable pair. Every statement is checked on finite-dimensional
//! windows: basis monomials of bounded length, one degree at a time, with a
//! longer length bound on the side where preimages have to be found.
//!
//! The checks are:
//!
//! * `homomorphisms`: the four maps preserve the relations and the grading;
//! * `commutes`: both routes around the square agree on window monomials;
//! * `con1`: `ker π1 ∩ ker f = 0`;
//! * `con2`: `δ⁻¹((π2⊗id)(A2)) = π1(L(Q))` inside `L(Q')`;
//! * `con3`: `f(ker π1) = ker(π2⊗id)`;
//! * `surjectivity`, `injectivity`, `graded-uniqueness`: properties of the
//!   individual maps;
//! * `kernel-ideal`: `ker π1` is spanned by the words `x y*` through `v0`;
//! * `special-edge-independence`: a second run with a different choice of
//!   special edges gives the same verdicts.

pub mod oracle;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, TrimmabilityReport};
use crate::linalg::{combine, intersection, kernel, preimage, unit_vector, Echelon, Interner, SparseVec};
use crate::lpa::{Element, Generator, Lpa, LpaError, Monomial, SpecialEdgeChoice, TensorElement};
use crate::morphisms::{
    ideal_span, tensor_with_identity, AnyMap, Codomain, DescriptorError, GeneratorMap, HomDescriptor, HomKind,
    HomReport, MorphismError, Trimmed,
};
use crate::scalar::{Rational, Scalar};

pub use oracle::{OracleError, OracleModel};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid window: {0}")]
    BadWindow(String),
    #[error("graph is not trimmable at {}: {}", .0.v0, .0.failure.as_ref().map(|f| f.to_string()).unwrap_or_default())]
    NotTrimmable(Box<TrimmabilityReport>),
    #[error("override for {role} does not match the diagram")]
    BadOverride { role: HomKind },
    #[error(transparent)]
    Morphism(MorphismError),
    #[error(transparent)]
    Descriptor(DescriptorError),
    #[error(transparent)]
    Lpa(#[from] LpaError),
}

impl From<MorphismError> for VerifyError {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::NotTrimmable(r) => VerifyError::NotTrimmable(r),
            other => VerifyError::Morphism(other),
        }
    }
}

impl From<DescriptorError> for VerifyError {
    fn from(e: DescriptorError) -> Self {
        match e {
            DescriptorError::Morphism(m) => m.into(),
            other => VerifyError::Descriptor(other),
        }
    }
}

/// Length and degree bounds for the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationWindow {
    /// Longest monomial `|α| + |β|` on the side being tested.
    pub max_len: usize,
    /// Longest monomial on the side where preimages are searched.
    pub slack_len: usize,
    /// Degrees `-max_degree..=max_degree` are checked.
    pub max_degree: i64,
}

impl Default for TruncationWindow {
    fn default() -> Self {
        TruncationWindow {
            max_len: 4,
            slack_len: 6,
            max_degree: 2,
        }
    }
}

impl TruncationWindow {
    pub fn new(max_len: usize, slack_len: usize, max_degree: i64) -> Result<Self, VerifyError> {
        if slack_len < max_len {
            return Err(VerifyError::BadWindow(format!(
                "slack length {slack_len} is smaller than length {max_len}"
            )));
        }
        if max_degree < 0 {
            return Err(VerifyError::BadWindow(format!("degree bound {max_degree} is negative")));
        }
        Ok(TruncationWindow {
            max_len,
            slack_len,
            max_degree,
        })
    }

    /// Slack length at which every window element of `ker(π2 ⊗ id)` has a
    /// preimage in the slack window: `α β* ⊗ uᵈ` lifts to `α x0ʲ β*` with
    /// `|j| = |d - (|α| - |β|)|`, so the lift has length at most
    /// `2 max_len + max_degree`.
    pub fn retry_len(&self) -> usize {
        (self.slack_len + 2).max(2 * self.max_len + self.max_degree as usize)
    }

    fn degrees(&self) -> impl Iterator<Item = i64> {
        -self.max_degree..=self.max_degree
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed at the slack length but passed once the slack was enlarged:
    /// the window, not the statement, was too small.
    WindowBoundary,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeVerdict {
    pub degree: i64,
    pub status: Status,
    /// Dimensions of the two sides being compared (or of the kernel).
    pub dims: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Size of the witness: number of terms, then the longest monomial.
    #[serde(skip)]
    pub witness_size: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeVerdict>,
    pub seconds: f64,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            status: Status::Pass,
            witness: None,
            detail: None,
            degrees: Vec::new(),
            seconds: 0.0,
        }
    }

    fn fail(&mut self, witness: String, detail: Option<String>) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.witness = Some(witness);
            self.detail = detail;
        }
    }

    /// Folds per-degree verdicts into the overall status. The witness is the
    /// smallest one among the failing degrees, ties going to the degree
    /// closest to zero.
    fn absorb_degrees(&mut self) {
        let bad = self
            .degrees
            .iter()
            .filter(|d| d.status == Status::Fail)
            .min_by_key(|d| (d.witness_size, d.degree.abs(), d.degree));
        if let Some(bad) = bad {
            self.status = Status::Fail;
            self.witness = bad.witness.clone();
            self.detail = Some(format!("degree {}", bad.degree));
        } else if let Some(edge) = self.degrees.iter().find(|d| d.status == Status::WindowBoundary) {
            self.status = Status::WindowBoundary;
            self.witness = edge.witness.clone();
            self.detail = Some(format!("degree {} needs a longer slack window", edge.degree));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PullbackReport {
    pub v0: String,
    pub loop_edge: String,
    pub window: TruncationWindow,
    pub special_edges: Vec<String>,
    pub rotated_special_edges: Vec<String>,
    pub maps: BTreeMap<String, HomReport>,
    pub checks: Vec<CheckReport>,
    pub failed: Vec<String>,
    pub passed: bool,
    pub exit_code: i32,
    pub seconds: f64,
}

impl PullbackReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The four maps over the algebras of a trimmable pair.
#[derive(Debug, Clone)]
pub struct Diagram<K: Scalar = Rational> {
    pub trimmed: Trimmed,
    pub pi1: GeneratorMap<K, Element<K>>,
    pub pi2: GeneratorMap<K, Element<K>>,
    pub f: GeneratorMap<K, TensorElement<K>>,
    pub delta: GeneratorMap<K, TensorElement<K>>,
}

impl<K: Scalar> Diagram<K> {
    pub fn new(q: &Arc<Lpa>, v0: &str) -> Result<Self, VerifyError> {
        let trimmed = Trimmed::new(q, v0)?;
        Ok(Diagram {
            pi1: trimmed.pi1()?,
            pi2: trimmed.pi2()?,
            f: trimmed.f()?,
            delta: trimmed.delta()?,
            trimmed,
        })
    }

    /// Replaces one of the maps by the one a descriptor builds over the same
    /// algebras.
    pub fn apply_override(&mut self, d: &HomDescriptor) -> Result<(), VerifyError> {
        let role = d.role()?;
        match (role, d.build_in::<K>(&self.trimmed)?) {
            (HomKind::Pi1, AnyMap::Plain(m)) => self.pi1 = m,
            (HomKind::Pi2, AnyMap::Plain(m)) => self.pi2 = m,
            (HomKind::F, AnyMap::Tensor(m)) => self.f = m,
            (HomKind::Delta, AnyMap::Tensor(m)) => self.delta = m,
            _ => return Err(VerifyError::BadOverride { role }),
        }
        Ok(())
    }

    fn map_reports(&self) -> BTreeMap<String, HomReport> {
        [
            ("pi1", self.pi1.report()),
            ("pi2", self.pi2.report()),
            ("f", self.f.report()),
            ("delta", self.delta.report()),
        ]
        .into_iter()
        .map(|(n, r)| (n.to_string(), r.clone()))
        .collect()
    }
}

type Key = (Monomial, i64);

fn vector<K: Scalar, C: Codomain<K>>(space: &mut Interner<Key>, c: &C) -> SparseVec<K> {
    c.coordinates()
        .into_iter()
        .map(|(k, x)| (space.intern(&k), x))
        .collect()
}

fn render<K: Scalar, C: Codomain<K>>(lpa: &Arc<Lpa>, space: &Interner<Key>, v: &SparseVec<K>) -> String {
    C::from_coordinates(lpa, v.iter().map(|(&i, c)| (space.key(i).clone(), c.clone()))).to_string()
}

/// Renders a coordinate vector over a list of domain monomials.
fn render_over<K: Scalar>(lpa: &Arc<Lpa>, mons: &[Monomial], v: &SparseVec<K>) -> String {
    Element::<K>::from_coordinates(lpa, v.iter().map(|(&i, c)| ((mons[i].clone(), 0), c.clone()))).to_string()
}

/// Number of terms of `v`, then the length of its longest monomial.
fn size<K: Scalar>(v: &SparseVec<K>, len: impl Fn(usize) -> usize) -> (usize, usize) {
    (v.len(), v.keys().map(|&i| len(i)).max().unwrap_or(0))
}

fn of_degree(mons: &[Monomial], d: i64) -> Vec<Monomial> {
    mons.iter().filter(|m| m.degree() == d).cloned().collect()
}

fn window_units<K: Scalar>(n: usize) -> Vec<SparseVec<K>> {
    (0..n).map(unit_vector).collect()
}

/// First row of `a` outside `b`, or of `b` outside `a`.
fn span_difference<K: Scalar>(a: &Echelon<K>, b: &Echelon<K>) -> Option<(bool, SparseVec<K>)> {
    if let Some(r) = a.not_in(b).next() {
        return Some((true, r.clone()));
    }
    b.not_in(a).next().map(|r| (false, r.clone()))
}

/// Windowed data shared by the checks.
struct Windows {
    p_short: Vec<Monomial>,
    slack: usize,
    p_long: Vec<Monomial>,
    a1_short: Vec<Monomial>,
    a2_short: Vec<Monomial>,
}

impl Windows {
    fn new(t: &Trimmed, w: &TruncationWindow) -> Self {
        Windows {
            p_short: t.q.basis_monomials(w.max_len),
            slack: w.slack_len,
            p_long: t.q.basis_monomials(w.slack_len),
            a1_short: t.qp.basis_monomials(w.max_len),
            a2_short: t.qpp.basis_monomials(w.max_len),
        }
    }
}

fn timed<F>(f: F) -> Result<CheckReport, VerifyError>
where
    F: FnOnce() -> Result<CheckReport, VerifyError>,
{
    let start = Instant::now();
    let mut r = f()?;
    r.seconds = start.elapsed().as_secs_f64();
    Ok(r)
}

fn check_homomorphisms<K: Scalar>(dg: &Diagram<K>) -> CheckReport {
    let mut r = CheckReport::new("homomorphisms");
    for (name, rep) in dg.map_reports() {
        if let Some(bad) = rep.first_failure() {
            r.fail(
                format!("{name}: {}", bad.failure.clone().unwrap_or_default()),
                Some(format!("{name} breaks the {:?} relations", bad.class)),
            );
        } else if !rep.graded {
            r.fail(
                format!("{name}: {}", rep.grading_failure.clone().unwrap_or_default()),
                Some(format!("{name} is not graded")),
            );
        }
    }
    r
}

/// `δ ∘ π1 = (π2 ⊗ id) ∘ f` on every window monomial of `L(Q)`.
pub fn check_commutes<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow) -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new("commutes");
    let q = &dg.trimmed.q;
    for m in q.basis_monomials(w.max_len) {
        let a = Element::<K>::monomial(q, m.clone());
        let left = dg.delta.apply(&dg.pi1.apply(&a)?)?;
        let right = tensor_with_identity(&dg.pi2, &dg.f.apply(&a)?)?;
        if left != right {
            r.fail(
                m.display(q.graph()),
                Some(format!("delta(pi1(m)) = {left}, (pi2 ⊗ id)(f(m)) = {right}")),
            );
            break;
        }
    }
    Ok(r)
}

/// `ker π1 ∩ ker f = 0` on window monomials of each degree.
pub fn check_con1<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow) -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new("con1");
    let q = &dg.trimmed.q;
    let all = q.basis_monomials(w.max_len);
    let top = w.max_len as i64;
    for d in -top..=top {
        let mons = of_degree(&all, d);
        if mons.is_empty() {
            continue;
        }
        let mut a1 = Interner::new();
        let mut a2 = Interner::new();
        let mut images = Vec::new();
        for m in &mons {
            let a = Element::<K>::monomial(q, m.clone());
            let mut v: SparseVec<K> = SparseVec::new();
            for (i, c) in vector(&mut a1, &dg.pi1.apply(&a)?) {
                v.insert(2 * i, c);
            }
            for (i, c) in vector(&mut a2, &dg.f.apply(&a)?) {
                v.insert(2 * i + 1, c);
            }
            images.push(v);
        }
        let ker = kernel(&images);
        let smallest = ker.iter().min_by_key(|k| size(k, |i| mons[i].len()));
        r.degrees.push(DegreeVerdict {
            degree: d,
            status: if ker.is_empty() { Status::Pass } else { Status::Fail },
            dims: (mons.len(), ker.len()),
            witness: smallest.map(|k| render_over(q, &mons, k)),
            witness_size: smallest.map_or((0, 0), |k| size(k, |i| mons[i].len())),
        });
    }
    r.absorb_degrees();
    Ok(r)
}

fn con2_at<K: Scalar>(dg: &Diagram<K>, win: &Windows, slack: usize, d: i64) -> Result<DegreeVerdict, VerifyError> {
    let t = &dg.trimmed;
    let a1_mons = of_degree(&win.a1_short, d);
    let n = a1_mons.len();
    let mut a1: Interner<Key> = Interner::new();
    for m in &a1_mons {
        a1.intern(&(m.clone(), 0));
    }

    // π1 of the slack window of L(Q), cut down to the window of L(Q').
    let p_long = if slack == win.slack { win.p_long.clone() } else { t.q.basis_monomials(slack) };
    let mut pi1_images = Vec::new();
    for m in p_long.iter().filter(|m| m.degree() == d) {
        pi1_images.push(vector(&mut a1, &dg.pi1.apply(&Element::<K>::monomial(&t.q, m.clone()))?));
    }
    let rhs = intersection(&pi1_images, &window_units(n));

    // δ⁻¹ of (π2 ⊗ id) applied to the slack window of L(Q'') ⊗ u^d.
    let mut b: Interner<Key> = Interner::new();
    let mut target = Echelon::new();
    for m in t.qpp.basis_monomials(slack) {
        let mut x = TensorElement::<K>::zero(&t.qpp);
        x.add_term(m, d, K::one());
        target.insert(vector(&mut b, &tensor_with_identity(&dg.pi2, &x)?));
    }
    let mut delta_images = Vec::new();
    for m in &a1_mons {
        delta_images.push(vector(&mut b, &dg.delta.apply(&Element::<K>::monomial(&t.qp, m.clone()))?));
    }
    let lhs = Echelon::from_vectors(&preimage(&delta_images, &target));

    let diff = span_difference(&lhs, &rhs);
    Ok(DegreeVerdict {
        degree: d,
        status: if diff.is_none() { Status::Pass } else { Status::Fail },
        dims: (lhs.rank(), rhs.rank()),
        witness_size: diff.as_ref().map_or((0, 0), |(_, v)| size(v, |i| a1.key(i).0.len())),
        witness: diff.map(|(in_lhs, v)| {
            let side = if in_lhs { "in the preimage, not in the image of pi1" } else { "in the image of pi1, not in the preimage" };
            format!("{} ({side})", render::<K, Element<K>>(&t.qp, &a1, &v))
        }),
    })
}

/// `δ⁻¹((π2⊗id)(A2)) = π1(L(Q))` in each degree of the window of `L(Q')`.
pub fn check_con2<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow) -> Result<CheckReport, VerifyError> {
    per_degree_with_slack("con2", dg, w, con2_at)
}

fn con3_at<K: Scalar>(dg: &Diagram<K>, win: &Windows, slack: usize, d: i64) -> Result<DegreeVerdict, VerifyError> {
    let t = &dg.trimmed;
    let n = win.a2_short.len();
    let mut a2: Interner<Key> = Interner::new();
    for m in &win.a2_short {
        a2.intern(&(m.clone(), d));
    }

    // ker(π2 ⊗ id) on the window of L(Q'') ⊗ u^d.
    let mut b: Interner<Key> = Interner::new();
    let mut q2_images = Vec::new();
    for m in &win.a2_short {
        let mut x = TensorElement::<K>::zero(&t.qpp);
        x.add_term(m.clone(), d, K::one());
        q2_images.push(vector(&mut b, &tensor_with_identity(&dg.pi2, &x)?));
    }
    let rhs = Echelon::from_vectors(&kernel(&q2_images));

    // f applied to ker π1 on the slack window of L(Q) in degree d.
    let p_long = if slack == win.slack { win.p_long.clone() } else { t.q.basis_monomials(slack) };
    let p_mons = of_degree(&p_long, d);
    let mut a1: Interner<Key> = Interner::new();
    let mut pi1_images = Vec::new();
    let mut f_images = Vec::new();
    for m in &p_mons {
        let a = Element::<K>::monomial(&t.q, m.clone());
        pi1_images.push(vector(&mut a1, &dg.pi1.apply(&a)?));
        f_images.push(vector(&mut a2, &dg.f.apply(&a)?));
    }
    let f_of_kernel: Vec<SparseVec<K>> = kernel(&pi1_images).iter().map(|k| combine(k, &f_images)).collect();
    let lhs = intersection(&f_of_kernel, &window_units(n));

    let diff = span_difference(&lhs, &rhs);
    Ok(DegreeVerdict {
        degree: d,
        status: if diff.is_none() { Status::Pass } else { Status::Fail },
        dims: (lhs.rank(), rhs.rank()),
        witness_size: diff.as_ref().map_or((0, 0), |(_, v)| size(v, |i| a2.key(i).0.len())),
        witness: diff.map(|(in_lhs, v)| {
            let side = if in_lhs { "in f(ker pi1), not in ker(pi2 ⊗ id)" } else { "in ker(pi2 ⊗ id), not in f(ker pi1)" };
            format!("{} ({side})", render::<K, TensorElement<K>>(&t.qpp, &a2, &v))
        }),
    })
}

/// `f(ker π1) = ker(π2 ⊗ id)` in each degree of the window of
/// `L(Q'') ⊗ k[u, u⁻¹]`.
pub fn check_con3<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow) -> Result<CheckReport, VerifyError> {
    per_degree_with_slack("con3", dg, w, con3_at)
}

type DegreeCheck<K> = fn(&Diagram<K>, &Windows, usize, i64) -> Result<DegreeVerdict, VerifyError>;

/// Runs a per-degree check at the slack length; a failing degree is retried
/// at [`TruncationWindow::retry_len`] and reported as a window boundary if it
/// then passes.
fn per_degree_with_slack<K: Scalar>(
    name: &str,
    dg: &Diagram<K>,
    w: &TruncationWindow,
    at: DegreeCheck<K>,
) -> Result<CheckReport, VerifyError> {
    let win = Windows::new(&dg.trimmed, w);
    let mut r = CheckReport::new(name);
    for d in w.degrees() {
        let mut v = at(dg, &win, w.slack_len, d)?;
        if v.status == Status::Fail && at(dg, &win, w.retry_len(), d)?.status == Status::Pass {
            v.status = Status::WindowBoundary;
        }
        r.degrees.push(v);
    }
    r.absorb_degrees();
    Ok(r)
}

/// Kernel of a map on the window monomials of its domain.
fn window_kernel<K: Scalar, C: Codomain<K>>(
    h: &GeneratorMap<K, C>,
    max_len: usize,
) -> Result<(usize, Option<String>), VerifyError> {
    let mons = h.domain().basis_monomials(max_len);
    let mut space = Interner::new();
    let mut images = Vec::new();
    for m in &mons {
        images.push(vector(&mut space, &h.apply(&Element::<K>::monomial(h.domain(), m.clone()))?));
    }
    let ker = kernel(&images);
    let smallest = ker.iter().min_by_key(|k| size(k, |i| mons[i].len()));
    Ok((ker.len(), smallest.map(|k| render_over(h.domain(), &mons, k))))
}

/// `π1` and `π2` hit every window monomial of `L(Q')`.
fn check_surjectivity<K: Scalar>(dg: &Diagram<K>, win: &Windows) -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new("surjectivity");
    let qp = &dg.trimmed.qp;
    for h in [&dg.pi1, &dg.pi2] {
        for m in &win.a1_short {
            let word: Vec<Generator> = qp
                .word(m)
                .into_iter()
                .map(|g| h.domain().generator_by_name(&qp.generator_name(g)))
                .collect::<Result<_, _>>()?;
            let source = Element::<K>::normal_form(h.domain(), &word)?;
            let target = Element::<K>::monomial(qp, m.clone());
            if h.apply(&source)? != target {
                r.fail(
                    format!("{}: {}", h.name(), m.display(qp.graph())),
                    Some(format!("{} does not reach this monomial from its namesake", h.name())),
                );
            }
        }
    }
    Ok(r)
}

struct KernelSizes {
    rows: Vec<(String, bool, bool, usize, Option<String>)>,
}

impl KernelSizes {
    fn compute<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow) -> Result<Self, VerifyError> {
        let mut rows = Vec::new();
        let valid = |r: &HomReport| r.relations_hold() && r.graded;
        for (name, rep, k) in [
            ("pi1", dg.pi1.report(), window_kernel(&dg.pi1, w.max_len)?),
            ("pi2", dg.pi2.report(), window_kernel(&dg.pi2, w.max_len)?),
            ("f", dg.f.report(), window_kernel(&dg.f, w.max_len)?),
            ("delta", dg.delta.report(), window_kernel(&dg.delta, w.max_len)?),
        ] {
            rows.push((name.to_string(), valid(rep), rep.vertex_images_nonzero, k.0, k.1));
        }
        Ok(KernelSizes { rows })
    }

    fn get(&self, name: &str) -> &(String, bool, bool, usize, Option<String>) {
        self.rows.iter().find(|r| r.0 == name).expect("known map")
    }
}

/// `f` and `δ` have zero kernel on the window.
fn check_injectivity(k: &KernelSizes) -> CheckReport {
    let mut r = CheckReport::new("injectivity");
    for name in ["f", "delta"] {
        let (_, _, _, dim, witness) = k.get(name);
        if *dim > 0 {
            r.fail(
                format!("{name}: {}", witness.clone().unwrap_or_default()),
                Some(format!("{name} has a kernel of dimension {dim} on the window")),
            );
        }
    }
    r
}

/// Graded homomorphisms that are nonzero on every vertex are injective, and
/// the projections, which kill `v0`, are not.
fn check_graded_uniqueness(k: &KernelSizes) -> CheckReport {
    let mut r = CheckReport::new("graded-uniqueness");
    let mut notes = Vec::new();
    for (name, valid, nonzero, dim, witness) in &k.rows {
        if !valid {
            notes.push(format!("{name}: not a graded homomorphism, skipped"));
            continue;
        }
        notes.push(format!("{name}: kernel dimension {dim}"));
        let consistent = if *nonzero { *dim == 0 } else { *dim > 0 };
        if !consistent {
            let w = witness.clone().unwrap_or_else(|| "zero kernel".to_string());
            r.fail(format!("{name}: {w}"), None);
        }
    }
    r.detail = Some(match r.detail.take() {
        Some(d) => format!("{d}; {}", notes.join("; ")),
        None => notes.join("; "),
    });
    r
}

/// `ker π1` on the window equals the span of the words `x y*` through `v0`,
/// cut down to the window.
fn check_kernel_ideal<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow, win: &Windows) -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new("kernel-ideal");
    let q = &dg.trimmed.q;
    let mut space: Interner<Key> = Interner::new();
    let mut images = Vec::new();
    for m in &win.p_short {
        space.intern(&(m.clone(), 0));
    }
    let mut a1 = Interner::new();
    for m in &win.p_short {
        images.push(vector(&mut a1, &dg.pi1.apply(&Element::<K>::monomial(q, m.clone()))?));
    }
    let ker = Echelon::from_vectors(&kernel(&images));
    let spanning: Vec<SparseVec<K>> = ideal_span::<K>(q, &dg.trimmed.v0, w.slack_len)?
        .iter()
        .map(|e| vector(&mut space, e))
        .collect();
    let ideal = intersection(&spanning, &window_units(win.p_short.len()));
    if let Some((in_kernel, v)) = span_difference(&ker, &ideal) {
        let side = if in_kernel { "in ker pi1, not in the ideal" } else { "in the ideal, not in ker pi1" };
        r.fail(format!("{} ({side})", render::<K, Element<K>>(q, &space, &v)), None);
    }
    r.detail.get_or_insert(format!("dimension {} on both sides", ker.rank()));
    Ok(r)
}

fn run_checks<K: Scalar>(dg: &Diagram<K>, w: &TruncationWindow) -> Result<Vec<CheckReport>, VerifyError> {
    let win = Windows::new(&dg.trimmed, w);
    let mut out = vec![timed(|| Ok(check_homomorphisms(dg)))?];
    out.push(timed(|| check_commutes(dg, w))?);
    out.push(timed(|| check_con1(dg, w))?);
    out.push(timed(|| check_con2(dg, w))?);
    out.push(timed(|| check_con3(dg, w))?);
    out.push(timed(|| check_surjectivity(dg, &win))?);
    let start = Instant::now();
    let sizes = KernelSizes::compute(dg, w)?;
    let shared = start.elapsed().as_secs_f64() / 2.0;
    let mut inj = check_injectivity(&sizes);
    inj.seconds = shared;
    let mut gut = check_graded_uniqueness(&sizes);
    gut.seconds = shared;
    out.push(inj);
    out.push(gut);
    out.push(timed(|| check_kernel_ideal(dg, w, &win))?);
    Ok(out)
}

fn build_diagram<K: Scalar>(q: &Arc<Lpa>, v0: &str, overrides: &[HomDescriptor]) -> Result<Diagram<K>, VerifyError> {
    let mut dg = Diagram::new(q, v0)?;
    for d in overrides {
        dg.apply_override(d)?;
    }
    Ok(dg)
}

/// Runs every check on the window, then reruns them with the special edges
/// rotated and compares the verdicts.
pub fn verify_theorem<K: Scalar>(
    g: &Graph,
    v0: &str,
    w: TruncationWindow,
    overrides: &[HomDescriptor],
) -> Result<PullbackReport, VerifyError> {
    let start = Instant::now();
    let q = Lpa::new(g.clone());
    let dg = build_diagram::<K>(&q, v0, overrides)?;
    let mut checks = run_checks(&dg, &w)?;

    let rotated_choice = SpecialEdgeChoice::rotated(g, 1);
    let rq = Lpa::with_choice(g.clone(), rotated_choice)?;
    let rotated = {
        let rstart = Instant::now();
        let rdg = build_diagram::<K>(&rq, v0, overrides)?;
        let rchecks = run_checks(&rdg, &w)?;
        let mut r = CheckReport::new("special-edge-independence");
        let mismatched: Vec<String> = checks
            .iter()
            .zip(&rchecks)
            .filter(|(a, b)| a.status != b.status)
            .map(|(a, b)| format!("{}: {:?} vs {:?}", a.name, a.status, b.status))
            .collect();
        if !mismatched.is_empty() {
            r.fail(mismatched[0].clone(), Some(mismatched.join("; ")));
        }
        r.seconds = rstart.elapsed().as_secs_f64();
        r
    };
    checks.push(rotated);

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| c.name.clone())
        .collect();
    let passed = failed.is_empty();
    Ok(PullbackReport {
        v0: v0.to_string(),
        loop_edge: dg.trimmed.x0.clone(),
        window: w,
        special_edges: q.special().describe(g),
        rotated_special_edges: rq.special().describe(g),
        maps: dg.map_reports(),
        checks,
        failed,
        passed,
        exit_code: if passed { 0 } else { 3 },
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn display7() -> Graph {
        Graph::new(
            ["v0", "v1", "v2"],
            [("x0", "v0", "v0"), ("e1", "v1", "v2"), ("e2", "v1", "v0")],
        )
        .unwrap()
    }

    fn small() -> TruncationWindow {
        TruncationWindow::new(3, 4, 1).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(TruncationWindow::new(4, 3, 2).is_err());
        assert!(TruncationWindow::new(4, 6, -1).is_err());
        assert_eq!(TruncationWindow::default(), TruncationWindow::new(4, 6, 2).unwrap());
    }

    #[test]
    fn display7_passes_on_a_small_window() {
        let r = verify_theorem::<Rational>(&display7(), "v0", small(), &[]).unwrap();
        assert!(r.passed, "failed: {:?}", r.failed);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.loop_edge, "x0");
        assert_eq!(r.special_edges, ["v0=x0", "v1=e1"]);
        assert_eq!(r.rotated_special_edges, ["v0=x0", "v1=e2"]);
    }

    #[test]
    fn commuting_square_on_single_monomials() {
        let q = Lpa::new(display7());
        let dg: Diagram = Diagram::new(&q, "v0").unwrap();
        for text in ["e1", "x0", "e2 . x0^*"] {
            let a: Element = crate::lpa::text::parse_element(&q, text).unwrap();
            let left = dg.delta.apply(&dg.pi1.apply(&a).unwrap()).unwrap();
            let right = tensor_with_identity(&dg.pi2, &dg.f.apply(&a).unwrap()).unwrap();
            assert_eq!(left, right, "{text}");
        }
    }

    #[test]
    fn untrimmable_graphs_are_refused() {
        let g = Graph::new(
            ["v0", "v1", "v2"],
            [("x0", "v0", "v0"), ("e1", "v2", "v1"), ("e2", "v1", "v0")],
        )
        .unwrap();
        match verify_theorem::<Rational>(&g, "v0", small(), &[]) {
            Err(VerifyError::NotTrimmable(r)) => assert!(r.failure.is_some()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn corrupted_delta_breaks_the_square_at_e1() {
        let d = HomDescriptor::from_json(
            r#"{"kind": "custom", "role": "delta", "v0": "v0",
                "graph": {"vertices": ["v0", "v1", "v2"], "edges": [
                  {"id": "x0", "src": "v0", "tgt": "v0"},
                  {"id": "e1", "src": "v1", "tgt": "v2"},
                  {"id": "e2", "src": "v1", "tgt": "v0"}]},
                "images": {"e1": "e1 @ u^2"}}"#,
        )
        .unwrap();
        let r = verify_theorem::<Rational>(&display7(), "v0", small(), &[d]).unwrap();
        let c = r.check("commutes").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.as_deref(), Some("e1"));
        assert_eq!(r.exit_code, 3);
    }
}
