//! Equivalence of torus-orbifold data: a face-structure isomorphism `ψ` of
//! the bases, a unimodular `δ` and signs with `ξ′(ψ(F)) = ±δ·ξ(F)`.
//!
//! `ψ` is taken combinatorially: a facet bijection carrying face records
//! onto face records of the same codimension, records with equal facet sets
//! being interchangeable. For surfaces the screen also matches genus and
//! boundary cycle lengths. Whether this always captures a diffeomorphism of
//! manifolds with corners is not claimed.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charfun::{face_stratum, validate_r_characteristic, CharFunError, CharFunction};
use crate::corners::{surface_profile, validate_nice, CornersComplex};
use crate::families::{BundleFlag, OrbifoldDescriptor};
use crate::lattice::{
    extend_to_basis, hermite_normal_form, rank, saturation, AbelianGroup, IntMatrix, IntVector,
};
use crate::report::ValidityReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("equivalence is only decided for trivial bundles")]
    AbstractBundle,
    #[error("dimension {left} against dimension {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("base is not a nice manifold with corners: {0}")]
    InvalidComplex(ValidityReport),
    #[error("not an r-characteristic function: {0}")]
    InvalidCharFunction(ValidityReport),
    #[error(transparent)]
    CharFun(#[from] CharFunError),
}

/// Base, characteristic function and bundle flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub base: CornersComplex,
    #[serde(rename = "char")]
    pub charfun: CharFunction,
    pub bundle: BundleFlag,
}

impl From<&OrbifoldDescriptor> for Dataset {
    fn from(d: &OrbifoldDescriptor) -> Self {
        Dataset { base: d.base.clone(), charfun: d.charfun.clone(), bundle: d.bundle }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn apply(self, v: &IntVector) -> IntVector {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => v.neg(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceWitness {
    pub psi: BTreeMap<String, String>,
    pub delta: IntMatrix,
    pub signs: BTreeMap<String, Sign>,
}

/// Cheap invariants of a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenProfile {
    #[serde(with = "crate::dec")]
    pub dim: usize,
    #[serde(with = "crate::dec")]
    pub facets: usize,
    #[serde(with = "crate::dec")]
    pub vertices: usize,
    /// Number of face records of codimension `1, 2, …`.
    #[serde(with = "crate::dec::seq")]
    pub faces_by_codim: Vec<usize>,
    /// Genus and sorted boundary cycle lengths, for surfaces.
    pub surface: Option<SurfaceShape>,
    /// Local groups of all faces as a sorted multiset of `(codim, group)`.
    pub local_groups: Vec<(String, AbelianGroup)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceShape {
    #[serde(with = "crate::dec")]
    pub genus: usize,
    #[serde(with = "crate::dec::seq")]
    pub cycles: Vec<usize>,
}

/// A differing invariant, which certifies inequivalence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Refutation {
    pub invariant: String,
    pub left: String,
    pub right: String,
}

fn check_dataset(d: &Dataset) -> Result<(), EquivalenceError> {
    if d.bundle != BundleFlag::Trivial {
        return Err(EquivalenceError::AbstractBundle);
    }
    let nice = validate_nice(&d.base);
    if !nice.is_valid() {
        return Err(EquivalenceError::InvalidComplex(nice));
    }
    let r = validate_r_characteristic(&d.base, &d.charfun)?;
    if !r.is_valid() {
        return Err(EquivalenceError::InvalidCharFunction(r));
    }
    Ok(())
}

fn check_pair(d1: &Dataset, d2: &Dataset) -> Result<(), EquivalenceError> {
    check_dataset(d1)?;
    check_dataset(d2)?;
    if d1.base.dim != d2.base.dim {
        return Err(EquivalenceError::DimensionMismatch { left: d1.base.dim, right: d2.base.dim });
    }
    Ok(())
}

pub fn screen_profile(d: &Dataset) -> Result<ScreenProfile, EquivalenceError> {
    let c = &d.base;
    let mut faces_by_codim = vec![0; c.dim];
    let mut local_groups = Vec::new();
    for r in &c.faces {
        if (1..=c.dim).contains(&r.codim) {
            faces_by_codim[r.codim - 1] += 1;
        }
        let s = face_stratum(c, &d.charfun, &r.id)?;
        local_groups.push((s.codim.to_string(), s.local_group));
    }
    local_groups.sort();
    let surface = (c.dim == 2)
        .then(|| surface_profile(c).ok())
        .flatten()
        .map(|p| {
            let mut cycles = p.cycle_lengths();
            cycles.sort_unstable();
            SurfaceShape { genus: p.genus, cycles }
        });
    Ok(ScreenProfile {
        dim: c.dim,
        facets: c.facets.len(),
        vertices: c.vertex_count(),
        faces_by_codim,
        surface,
        local_groups,
    })
}

/// The first differing invariant, if any.
pub fn invariant_screen(d1: &Dataset, d2: &Dataset) -> Result<Option<Refutation>, EquivalenceError> {
    check_pair(d1, d2)?;
    let (p1, p2) = (screen_profile(d1)?, screen_profile(d2)?);
    let (v1, v2) = (serde_json::to_value(&p1).expect("serializes"), serde_json::to_value(&p2).expect("serializes"));
    const ORDER: [&str; 6] = ["dim", "facets", "vertices", "faces_by_codim", "surface", "local_groups"];
    Ok(ORDER.iter().find(|k| v1[**k] != v2[**k]).map(|k| Refutation {
        invariant: k.to_string(),
        left: v1[*k].to_string(),
        right: v2[*k].to_string(),
    }))
}

/// Count of face records per `(facet set, codim)`.
type Shape = BTreeMap<(BTreeSet<String>, usize), usize>;

fn shape(c: &CornersComplex) -> Shape {
    let mut s = Shape::new();
    for r in &c.faces {
        *s.entry((r.facet_set.clone(), r.codim)).or_default() += 1;
    }
    s
}

fn map_set(psi: &BTreeMap<String, String>, set: &BTreeSet<String>) -> Option<BTreeSet<String>> {
    set.iter().map(|f| psi.get(f).cloned()).collect()
}

struct Search<'a> {
    d1: &'a Dataset,
    d2: &'a Dataset,
    shape2: Shape,
    /// Entries of the source shape, grouped by the position of the last
    /// facet (in source facet order) they involve.
    checks: Vec<Vec<(BTreeSet<String>, usize, usize)>>,
    /// Source facets whose vectors pin `δ`, in facet order.
    basis: Vec<String>,
}

impl<'a> Search<'a> {
    fn new(d1: &'a Dataset, d2: &'a Dataset) -> Self {
        let facets = &d1.base.facets;
        let pos: BTreeMap<&String, usize> = facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut checks = vec![Vec::new(); facets.len()];
        for ((set, codim), count) in shape(&d1.base) {
            if let Some(last) = set.iter().filter_map(|f| pos.get(f)).max() {
                checks[*last].push((set, codim, count));
            }
        }
        let n = d1.base.dim;
        let mut basis = Vec::new();
        let mut rows: Vec<IntVector> = Vec::new();
        for f in facets {
            let v = d1.charfun.get(f).expect("covered").clone();
            rows.push(v);
            if rank(&IntMatrix::new(n, rows.clone()).expect("dimension n")) == rows.len() {
                basis.push(f.clone());
            } else {
                rows.pop();
            }
        }
        Search { d1, d2, shape2: shape(&d2.base), checks, basis }
    }

    fn consistent(&self, psi: &BTreeMap<String, String>, k: usize) -> bool {
        self.checks[k].iter().all(|(set, codim, count)| {
            let image = map_set(psi, set).expect("all facets of the set are assigned");
            self.shape2.get(&(image, *codim)) == Some(count)
        })
    }

    fn run(&self) -> Option<EquivalenceWitness> {
        let mut psi = BTreeMap::new();
        let mut used = BTreeSet::new();
        self.extend(0, &mut psi, &mut used)
    }

    fn extend(
        &self,
        k: usize,
        psi: &mut BTreeMap<String, String>,
        used: &mut BTreeSet<String>,
    ) -> Option<EquivalenceWitness> {
        let facets = &self.d1.base.facets;
        if k == facets.len() {
            return self.vectors_for(psi);
        }
        for g in &self.d2.base.facets {
            if used.contains(g) {
                continue;
            }
            psi.insert(facets[k].clone(), g.clone());
            used.insert(g.clone());
            if self.consistent(psi, k) {
                if let Some(w) = self.extend(k + 1, psi, used) {
                    return Some(w);
                }
            }
            used.remove(g);
            psi.remove(&facets[k]);
        }
        None
    }

    /// Signs on the basis facets, `+` before `−`, determine `δ`; the other
    /// signs are then forced.
    fn vectors_for(&self, psi: &BTreeMap<String, String>) -> Option<EquivalenceWitness> {
        let n = self.d1.base.dim;
        let r = self.basis.len();
        let xs: Vec<IntVector> = self.basis.iter().map(|f| self.d1.charfun.get(f).expect("covered").clone()).collect();
        let targets: Vec<IntVector> =
            self.basis.iter().map(|f| self.d2.charfun.get(&psi[f]).expect("covered").clone()).collect();
        for mask in 0u64..(1u64 << r) {
            let sign = |i: usize| if mask >> (r - 1 - i) & 1 == 1 { Sign::Minus } else { Sign::Plus };
            let ys: Vec<IntVector> = targets.iter().enumerate().map(|(i, y)| sign(i).apply(y)).collect();
            let Some(delta) = solve_delta(n, &xs, &ys) else { continue };
            if let Some(signs) = forced_signs(self.d1, self.d2, psi, &delta) {
                return Some(EquivalenceWitness { psi: psi.clone(), delta, signs });
            }
        }
        None
    }
}

fn forced_signs(
    d1: &Dataset,
    d2: &Dataset,
    psi: &BTreeMap<String, String>,
    delta: &IntMatrix,
) -> Option<BTreeMap<String, Sign>> {
    let mut signs = BTreeMap::new();
    for f in &d1.base.facets {
        let image = delta.apply(d1.charfun.get(f)?).ok()?;
        let target = d2.charfun.get(psi.get(f)?)?;
        let s = if &image == target {
            Sign::Plus
        } else if image.neg() == *target {
            Sign::Minus
        } else {
            return None;
        };
        signs.insert(f.clone(), s);
    }
    Some(signs)
}

/// A unimodular `δ` with `δ·xᵢ = yᵢ` for independent `xᵢ`, if one exists.
///
/// The rational map `xᵢ ↦ yᵢ` must carry the saturation of the `xᵢ` onto
/// the saturation of the `yᵢ`; saturated sublattices are direct summands,
/// so bases of both extend to bases of ℤⁿ, which fixes `δ`.
fn solve_delta(n: usize, xs: &[IntVector], ys: &[IntVector]) -> Option<IntMatrix> {
    let r = xs.len();
    let x = IntMatrix::new(n, xs.to_vec()).ok()?;
    let y = IntMatrix::new(n, ys.to_vec()).ok()?;
    if rank(&y) != r {
        return None;
    }
    // r independent columns of x
    let mut pivots: Vec<usize> = Vec::new();
    let xt = x.transpose();
    for j in 0..n {
        pivots.push(j);
        let sub: Vec<IntVector> = pivots.iter().map(|&p| xt.rows()[p].clone()).collect();
        if rank(&IntMatrix::new(r, sub).ok()?) < pivots.len() {
            pivots.pop();
        }
    }
    let restrict = |v: &IntVector| IntVector::new(pivots.iter().map(|&p| v.get(p).clone()).collect());
    let xp = IntMatrix::new(r, xs.iter().map(restrict).collect()).ok()?;
    let det = xp.determinant().ok()?;
    let adj_y = xp.adjugate().ok()?.mul(&y).ok()?;
    let a = saturation(&x);
    let mut images = Vec::with_capacity(r);
    for row in a.rows() {
        // c·x = row with c = row_P · adj(x_P) / det, so the image is c·y
        let scaled = IntMatrix::new(r, vec![restrict(row)]).ok()?.mul(&adj_y).ok()?;
        let scaled = &scaled.rows()[0];
        if scaled.entries().iter().any(|e| !(e % &det).is_zero()) {
            return None;
        }
        images.push(IntVector::new(scaled.entries().iter().map(|e| e / &det).collect()));
    }
    let b = IntMatrix::new(n, images).ok()?;
    if hermite_normal_form(&b) != saturation(&y) {
        return None;
    }
    let u = extend_to_basis(&a)?;
    let v = extend_to_basis(&b)?;
    v.transpose().mul(&u.transpose().unimodular_inverse()?).ok()
}

/// Searches facet bijections in source facet order, each facet trying
/// target facets in target order, and returns the first witness found.
pub fn data_equivalent(d1: &Dataset, d2: &Dataset) -> Result<Option<EquivalenceWitness>, EquivalenceError> {
    if invariant_screen(d1, d2)?.is_some() {
        return Ok(None);
    }
    Ok(Search::new(d1, d2).run())
}

/// Checks every condition a witness claims, independently of the search.
pub fn verify_witness(d1: &Dataset, d2: &Dataset, w: &EquivalenceWitness) -> ValidityReport {
    let mut report = ValidityReport::new();
    let dom: BTreeSet<&String> = w.psi.keys().collect();
    let cod: BTreeSet<&String> = w.psi.values().collect();
    let f1: BTreeSet<&String> = d1.base.facets.iter().collect();
    let f2: BTreeSet<&String> = d2.base.facets.iter().collect();
    if dom != f1 || cod != f2 || cod.len() != w.psi.len() {
        report.push("witness-psi", "psi is not a bijection between the facet lists", Vec::<String>::new());
        return report;
    }
    let mut mapped = Shape::new();
    for ((set, codim), count) in shape(&d1.base) {
        let image = map_set(&w.psi, &set).expect("psi is total");
        *mapped.entry((image, codim)).or_default() += count;
    }
    if mapped != shape(&d2.base) {
        report.push("witness-faces", "psi does not carry face records onto face records", Vec::<String>::new());
    }
    let n = d1.base.dim;
    let unimodular = w.delta.nrows() == n
        && w.delta.ncols() == n
        && w.delta.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
    if !unimodular {
        report.push("witness-delta", "delta is not a unimodular n × n matrix", Vec::<String>::new());
        return report;
    }
    if w.signs.keys().collect::<BTreeSet<_>>() != f1 {
        report.push("witness-signs", "signs do not cover the source facets", Vec::<String>::new());
        return report;
    }
    for f in &d1.base.facets {
        let ok = match (d1.charfun.get(f), d2.charfun.get(&w.psi[f])) {
            (Some(x), Some(y)) => w.delta.apply(x).map(|dx| w.signs[f].apply(&dx) == *y).unwrap_or(false),
            _ => false,
        };
        if !ok {
            report.push("witness-vectors", format!("vector condition fails at facet {f}"), [f.clone()]);
        }
    }
    report
}

/// `(ψ⁻¹, δ⁻¹, s∘ψ⁻¹)`, a witness in the opposite direction.
pub fn invert_witness(w: &EquivalenceWitness) -> Option<EquivalenceWitness> {
    let psi: BTreeMap<String, String> = w.psi.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
    let signs = w.psi.iter().map(|(a, b)| w.signs.get(a).map(|s| (b.clone(), *s))).collect::<Option<_>>()?;
    Some(EquivalenceWitness { psi, delta: w.delta.unimodular_inverse()?, signs })
}
