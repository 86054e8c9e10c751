//! rs-characteristic functions on manifolds with marked facets, the search
//! for an auxiliary primitive vector, and cobordism certificates relating a
//! torus orbifold to orbifold projective spaces.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::digest;
use crate::charfun::{
    check_cover, face_matrix, validate_characteristic, validate_r_characteristic, CharFunError,
    CharFunction,
};
use crate::corners::{
    product_with_interval, validate_marked, validate_nice, vertex_cut, vertex_cut_bottom,
    CornersComplex, CornersError, FaceRecord, MarkedManifold, BOTTOM,
};
use crate::families::{
    lens_from_interval, make_orbifold, BundleFlag, FamilyError, LensDescriptor, OrbifoldDescriptor,
};
use crate::lattice::{rank, smith_normal_form, IntMatrix, IntVector};
use crate::report::ValidityReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error(transparent)]
    Corners(#[from] CornersError),
    #[error(transparent)]
    CharFun(#[from] CharFunError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("base is not a nice manifold with corners: {0}")]
    InvalidComplex(ValidityReport),
    #[error("not an r-characteristic function: {0}")]
    InvalidCharFunction(ValidityReport),
    #[error("not an rs-characteristic function: {0}")]
    InvalidRs(ValidityReport),
    #[error("invalid manifold with marked facets: {0}")]
    InvalidMarked(ValidityReport),
    #[error("vectors live in Z^{vectors} but the base has dimension {base}")]
    DimensionMismatch { base: usize, vectors: usize },
    #[error("{0} is not a marked facet")]
    UnknownMarkedFacet(String),
    #[error("unknown id {0}")]
    UnknownId(String),
    #[error("constraint set {index}: {reason}")]
    BadConstraintSet { index: usize, reason: String },
    #[error("base has {0} vertices")]
    HasFixedPoints(usize),
    #[error("marked facet {marked} meets facet {facet} in a way the face records do not describe")]
    BadRestriction { marked: String, facet: String },
    #[error("the vectors already assigned at face {0} span everything; no vector can be added")]
    SeedConflict(String),
}

/// Vectors on the remaining facets of a [`MarkedManifold`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RSCharFunction(CharFunction);

impl RSCharFunction {
    pub fn new(n: usize, assignment: BTreeMap<String, IntVector>) -> Result<Self, CharFunError> {
        CharFunction::new(n, assignment).map(RSCharFunction)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn assignment(&self) -> &BTreeMap<String, IntVector> {
        self.0.assignment()
    }

    pub fn get(&self, facet: &str) -> Option<&IntVector> {
        self.0.get(facet)
    }
}

/// Independence of the remaining-facet vectors at every face.
pub fn validate_rs_characteristic(m: &MarkedManifold, rs: &RSCharFunction) -> Result<ValidityReport, CobordismError> {
    if rs.n() + 1 != m.base.dim {
        return Err(CobordismError::DimensionMismatch { base: m.base.dim, vectors: rs.n() });
    }
    check_cover(rs.assignment(), &m.remaining)?;
    let mut report = ValidityReport::new();
    for r in &m.base.faces {
        let mat = face_matrix(rs.n(), &r.facet_set, rs.assignment());
        if rank(&mat) < mat.nrows() {
            report.push(
                "dependent-vectors",
                format!("remaining-facet vectors at face {} are linearly dependent", r.id),
                [r.id.clone()],
            );
        }
    }
    Ok(report)
}

/// The marked facet `p` as a standalone complex with `ξ(G) = η(F)` for each
/// facet `G = p ∩ F`.
pub fn restrict_to_marked(
    m: &MarkedManifold,
    rs: &RSCharFunction,
    p: &str,
) -> Result<(CornersComplex, CharFunction), CobordismError> {
    if !m.marked.iter().any(|x| x == p) {
        return Err(CobordismError::UnknownMarkedFacet(p.to_string()));
    }
    let other = |r: &FaceRecord| r.facet_set.iter().find(|f| *f != p).cloned().unwrap_or_default();
    let label = |r: &FaceRecord| -> String {
        m.face_labels.get(&r.id).cloned().unwrap_or_else(|| if r.codim == 2 { other(r) } else { r.id.clone() })
    };
    let mut facet_of: BTreeMap<String, String> = BTreeMap::new();
    for r in &m.base.faces {
        if r.codim == 2 && r.facet_set.contains(p) {
            let f = other(r);
            if facet_of.insert(f.clone(), label(r)).is_some() {
                return Err(CobordismError::BadRestriction { marked: p.to_string(), facet: f });
            }
        }
    }
    let facets: Vec<String> = m.remaining.iter().filter_map(|f| facet_of.get(f).cloned()).collect();
    if facets.len() != facet_of.len() {
        let stray = facet_of.keys().find(|f| !m.remaining.contains(f)).cloned().unwrap_or_default();
        return Err(CobordismError::BadRestriction { marked: p.to_string(), facet: stray });
    }
    let mut faces = Vec::new();
    for r in &m.base.faces {
        if r.id == p || !r.facet_set.contains(p) {
            continue;
        }
        let mut facet_set = BTreeSet::new();
        for f in r.facet_set.iter().filter(|f| *f != p) {
            let g = facet_of
                .get(f)
                .ok_or_else(|| CobordismError::BadRestriction { marked: p.to_string(), facet: f.clone() })?;
            facet_set.insert(g.clone());
        }
        faces.push(FaceRecord { id: label(r), codim: r.codim - 1, facet_set, component_tag: r.component_tag });
    }
    let mut xi = BTreeMap::new();
    for (f, g) in &facet_of {
        let v = rs.get(f).ok_or_else(|| CharFunError::MissingFacet(f.clone()))?;
        xi.insert(g.clone(), v.clone());
    }
    let piece = CornersComplex {
        dim: m.base.dim - 1,
        facets,
        faces,
        metadata: m.piece_metadata.get(p).cloned(),
    };
    Ok((piece, CharFunction::new(rs.n(), xi)?))
}

/// A rational subspace of ℚⁿ held through integer normals:
/// `v` lies in it iff every normal is orthogonal to `v`.
struct Subspace {
    normals: Vec<IntVector>,
}

impl Subspace {
    /// `None` when the span is all of ℚⁿ.
    fn span_of(gens: &IntMatrix) -> Option<Subspace> {
        let n = gens.ncols();
        let snf = smith_normal_form(gens);
        let r = snf.diag.iter().filter(|d| !d.is_zero()).count();
        if r == n {
            return None;
        }
        let normals = (r..n)
            .map(|j| IntVector::new((0..n).map(|i| snf.right.entry(i, j).clone()).collect()))
            .collect();
        Some(Subspace { normals })
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        self.normals
            .iter()
            .all(|w| w.entries().iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
    }
}

/// Vectors of sup-norm exactly `big_n` whose first nonzero entry is
/// positive, in lexicographic order.
fn shell(n: usize, big_n: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = vec![-big_n; n];
    let mut done = n == 0;
    std::iter::from_fn(move || {
        while !done {
            let candidate = cur.clone();
            // odometer step
            let mut i = n;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if cur[i] < big_n {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -big_n;
            }
            let sup = candidate.iter().map(|x| x.abs()).max().unwrap_or(0);
            let leading_positive = candidate.iter().find(|x| **x != 0).is_some_and(|x| *x > 0);
            if sup == big_n && leading_positive {
                return Some(candidate);
            }
        }
        None
    })
}

fn gcd_is_one(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
}

/// First primitive vector in canonical order outside every subspace.
/// Terminates because a finite union of proper subspaces misses some
/// primitive vector.
fn canonical_search(n: usize, avoid: &[Subspace]) -> IntVector {
    for big_n in 1i64.. {
        for candidate in shell(n, big_n) {
            if !gcd_is_one(&candidate) {
                continue;
            }
            let v: Vec<BigInt> = candidate.iter().map(|&x| BigInt::from(x)).collect();
            if avoid.iter().all(|s| !s.contains(&v)) {
                return IntVector::new(v);
            }
        }
    }
    unreachable!("the search over all sup-norms is unbounded")
}

fn subspace_of(n: usize, vectors: Vec<IntVector>) -> Option<Subspace> {
    Subspace::span_of(&IntMatrix::new(n, vectors).expect("dimensions were checked"))
}

/// A primitive `ξ₀` such that for every constraint set `I` and `ℓ ∈ I`,
/// `{ξ₀} ∪ (I ∖ ℓ)` is independent. Candidates are scanned by sup-norm,
/// then lexicographically, skipping vectors whose first nonzero entry is
/// negative.
pub fn find_lambda0(
    n: usize,
    constraint_sets: &[Vec<String>],
    vectors: &BTreeMap<String, IntVector>,
) -> Result<IntVector, CobordismError> {
    if n == 0 {
        return Err(CobordismError::DimensionMismatch { base: 0, vectors: 0 });
    }
    let mut avoid = Vec::new();
    for (index, set) in constraint_sets.iter().enumerate() {
        let mut vs = Vec::new();
        for id in set {
            let v = vectors.get(id).ok_or_else(|| CobordismError::UnknownId(id.clone()))?;
            if v.dim() != n {
                return Err(CobordismError::DimensionMismatch { base: n, vectors: v.dim() });
            }
            vs.push(v.clone());
        }
        if vs.len() != n || rank(&IntMatrix::new(n, vs.clone()).expect("checked")) != n {
            return Err(CobordismError::BadConstraintSet {
                index,
                reason: format!("needs {n} independent vectors"),
            });
        }
        for skip in 0..n {
            let rest: Vec<IntVector> = vs.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
            avoid.push(subspace_of(n, rest).expect("n-1 vectors span a proper subspace"));
        }
    }
    Ok(canonical_search(n, &avoid))
}

/// `λ₀` for the bottom facet of `Q × Δ¹`: the vertex constraint sets, plus
/// avoidance of `span λ(f)` for faces `f` lying in no vertex, which keeps
/// the faces `f × {0}` independent.
fn pipeline_lambda0(c: &CornersComplex, f: &CharFunction) -> Result<IntVector, CobordismError> {
    let n = c.dim;
    let vertex_sets: Vec<&BTreeSet<String>> = c.vertices().map(|v| &v.facet_set).collect();
    let sets: Vec<Vec<String>> = vertex_sets.iter().map(|s| s.iter().cloned().collect()).collect();
    let mut avoid = Vec::new();
    for set in &sets {
        let vs: Vec<IntVector> = set.iter().map(|id| f.get(id).expect("covered").clone()).collect();
        for skip in 0..n {
            let rest = vs.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect();
            avoid.push(subspace_of(n, rest).expect("n-1 vectors span a proper subspace"));
        }
    }
    for r in &c.faces {
        if r.codim < n && !vertex_sets.iter().any(|s| r.facet_set.is_subset(s)) {
            let vs = r.facet_set.iter().map(|id| f.get(id).expect("covered").clone()).collect();
            avoid.push(subspace_of(n, vs).ok_or_else(|| CobordismError::SeedConflict(r.id.clone()))?);
        }
    }
    Ok(canonical_search(n, &avoid))
}

/// One descriptor per marked facet, in marked order.
pub fn boundary(
    m: &MarkedManifold,
    rs: &RSCharFunction,
    bundle: BundleFlag,
) -> Result<Vec<OrbifoldDescriptor>, CobordismError> {
    let marked = validate_marked(m);
    if !marked.is_valid() {
        return Err(CobordismError::InvalidMarked(marked));
    }
    let report = validate_rs_characteristic(m, rs)?;
    if !report.is_valid() {
        return Err(CobordismError::InvalidRs(report));
    }
    m.marked
        .iter()
        .map(|p| {
            let (piece, xi) = restrict_to_marked(m, rs, p)?;
            Ok(make_orbifold(&piece, &xi, bundle)?)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationTerm {
    #[serde(with = "crate::dec")]
    pub coefficient: i8,
    /// Marked facet whose boundary piece the term refers to.
    pub piece: String,
    /// SHA-256 of the piece's canonical descriptor.
    pub digest: String,
}

/// A formal relation `Σ lhs = Σ rhs` in the torus cobordism group; an
/// empty side reads as zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationStatement {
    pub group: String,
    #[serde(with = "crate::dec")]
    pub n: usize,
    pub lhs: Vec<RelationTerm>,
    pub rhs: Vec<RelationTerm>,
    pub reading: String,
    pub orientation: String,
}

impl RelationStatement {
    pub fn term_count(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }
}

pub const ORIENTATION_NOTE: &str =
    "coefficients are unsigned; orientations of the boundary pieces are not tracked";

fn relation(n: usize, lhs: Vec<(&String, &OrbifoldDescriptor)>, rhs: Vec<(&String, &OrbifoldDescriptor)>) -> RelationStatement {
    let terms = |side: Vec<(&String, &OrbifoldDescriptor)>| -> Vec<RelationTerm> {
        side.into_iter()
            .map(|(p, d)| RelationTerm { coefficient: 1, piece: p.clone(), digest: digest(d) })
            .collect()
    };
    let read = |side: &[RelationTerm]| {
        if side.is_empty() {
            "0".to_string()
        } else {
            side.iter().map(|t| format!("[{}]", t.piece)).collect::<Vec<_>>().join(" + ")
        }
    };
    let (lhs, rhs) = (terms(lhs), terms(rhs));
    RelationStatement {
        group: format!("OC_{}", 2 * n),
        n,
        reading: format!("{} = {}", read(&lhs), read(&rhs)),
        lhs,
        rhs,
        orientation: ORIENTATION_NOTE.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensPiece {
    /// Boundary circle of the base.
    pub facet: String,
    pub u: IntVector,
    pub v: IntVector,
    pub lens: LensDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Provenance {
    /// `X` is cobordant to the orbifold projective spaces cut from `X × Δ¹`.
    ProjectiveSpaces { bottom: String, lambda0: IntVector },
    /// `X` has no fixed points and bounds.
    NullCobordism { bottom: String, lambda0: IntVector, lens: Vec<LensPiece> },
    /// The projective spaces at the vertices of a simple complex sum to zero.
    VertexCut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismData {
    pub marked: MarkedManifold,
    pub rs: RSCharFunction,
    pub bundle: BundleFlag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismCertificate {
    pub w: CobordismData,
    pub boundary: Vec<OrbifoldDescriptor>,
    pub relation: RelationStatement,
    pub provenance: Provenance,
}

/// The relation a certificate must carry, given its pieces.
fn expected_relation(provenance: &Provenance, n: usize, marked: &[String], pieces: &[OrbifoldDescriptor]) -> RelationStatement {
    let pairs: Vec<(&String, &OrbifoldDescriptor)> = marked.iter().zip(pieces).collect();
    match provenance {
        Provenance::VertexCut => relation(n, pairs, vec![]),
        Provenance::NullCobordism { .. } => relation(n, pairs, vec![]),
        Provenance::ProjectiveSpaces { .. } => {
            let mut rest = pairs;
            let top = if rest.is_empty() { vec![] } else { vec![rest.remove(rest.len() - 1)] };
            relation(n, top, rest)
        }
    }
}

/// Lens data for each boundary circle of a 2D characteristic input.
fn lens_pieces(c: &CornersComplex, f: &CharFunction, lambda0: &IntVector) -> Result<Vec<LensPiece>, CobordismError> {
    if c.dim != 2 || !validate_characteristic(c, f)?.is_valid() {
        return Ok(vec![]);
    }
    c.facets
        .iter()
        .map(|facet| {
            let u = f.get(facet).expect("covered").clone();
            let lens = lens_from_interval(&u, lambda0)?;
            Ok(LensPiece { facet: facet.clone(), u, v: lambda0.clone(), lens })
        })
        .collect()
}

fn validated_input(c: &CornersComplex, f: &CharFunction) -> Result<(), CobordismError> {
    let nice = validate_nice(c);
    if !nice.is_valid() {
        return Err(CobordismError::InvalidComplex(nice));
    }
    let report = validate_r_characteristic(c, f)?;
    if !report.is_valid() {
        return Err(CobordismError::InvalidCharFunction(report));
    }
    Ok(())
}

fn product_pipeline(
    c: &CornersComplex,
    f: &CharFunction,
    bundle: BundleFlag,
    null: bool,
) -> Result<CobordismCertificate, CobordismError> {
    validated_input(c, f)?;
    let y = product_with_interval(c);
    let cut: Vec<String> = y
        .vertices()
        .filter(|v| v.facet_set.contains(BOTTOM))
        .map(|v| v.id.clone())
        .collect();
    let m = vertex_cut_bottom(&y, &cut)?;
    let lambda0 = pipeline_lambda0(c, f)?;
    // remaining facets are the sides in facet order, then the bottom
    let mut eta: BTreeMap<String, IntVector> = c
        .facets
        .iter()
        .zip(&m.remaining)
        .map(|(facet, side)| (side.clone(), f.get(facet).expect("covered").clone()))
        .collect();
    eta.insert(BOTTOM.to_string(), lambda0.clone());
    let rs = RSCharFunction::new(c.dim, eta)?;
    let pieces = boundary(&m, &rs, bundle)?;
    let provenance = if null {
        let lens = lens_pieces(c, f, &lambda0)?;
        Provenance::NullCobordism { bottom: BOTTOM.into(), lambda0, lens }
    } else {
        Provenance::ProjectiveSpaces { bottom: BOTTOM.into(), lambda0 }
    };
    let relation = expected_relation(&provenance, c.dim, &m.marked, &pieces);
    Ok(CobordismCertificate { w: CobordismData { marked: m, rs, bundle }, boundary: pieces, relation, provenance })
}

/// `X(Q, λ)` together with one orbifold projective space per vertex of `Q`
/// bounds `W(Y, η)` for `Y` the bottom-cut `Q × Δ¹`.
pub fn cobordism_to_projective_spaces(
    c: &CornersComplex,
    f: &CharFunction,
    bundle: BundleFlag,
) -> Result<CobordismCertificate, CobordismError> {
    product_pipeline(c, f, bundle, false)
}

/// The fixed-point-free case: `X(Q, λ)` alone bounds.
pub fn null_cobordism(c: &CornersComplex, f: &CharFunction, bundle: BundleFlag) -> Result<CobordismCertificate, CobordismError> {
    let k = c.vertex_count();
    if k > 0 {
        return Err(CobordismError::HasFixedPoints(k));
    }
    product_pipeline(c, f, bundle, true)
}

/// Greedy rs-function on the vertex cut of a simple `p`: facets in id
/// order, each taking the first canonical vector outside the spans of the
/// vectors already placed on faces it shares. `seed` fixes some facets.
fn greedy_rs(m: &MarkedManifold, n: usize, seed: Option<&BTreeMap<String, IntVector>>) -> Result<RSCharFunction, CobordismError> {
    let mut eta: BTreeMap<String, IntVector> = BTreeMap::new();
    if let Some(seed) = seed {
        for (f, v) in seed {
            if !m.remaining.contains(f) {
                return Err(CobordismError::UnknownId(f.clone()));
            }
            eta.insert(f.clone(), v.clone());
        }
        RSCharFunction::new(n, eta.clone())?;
    }
    let mut order = m.remaining.clone();
    order.sort();
    for facet in order {
        if eta.contains_key(&facet) {
            continue;
        }
        let mut avoid = Vec::new();
        for r in m.base.faces.iter().filter(|r| r.facet_set.contains(&facet)) {
            let placed: Vec<IntVector> = r.facet_set.iter().filter_map(|g| eta.get(g).cloned()).collect();
            if !placed.is_empty() {
                avoid.push(subspace_of(n, placed).ok_or_else(|| CobordismError::SeedConflict(r.id.clone()))?);
            }
        }
        eta.insert(facet, canonical_search(n, &avoid));
    }
    Ok(RSCharFunction::new(n, eta)?)
}

pub fn vertex_cut_certificate(
    p: &CornersComplex,
    seed: Option<&BTreeMap<String, IntVector>>,
) -> Result<CobordismCertificate, CobordismError> {
    let nice = validate_nice(p);
    if !nice.is_valid() {
        return Err(CobordismError::InvalidComplex(nice));
    }
    if p.dim < 2 {
        return Err(CobordismError::DimensionMismatch { base: p.dim, vectors: p.dim.saturating_sub(1) });
    }
    let m = vertex_cut(p)?;
    let n = p.dim - 1;
    let rs = greedy_rs(&m, n, seed)?;
    let pieces = boundary(&m, &rs, BundleFlag::Trivial)?;
    let provenance = Provenance::VertexCut;
    let relation = expected_relation(&provenance, n, &m.marked, &pieces);
    Ok(CobordismCertificate {
        w: CobordismData { marked: m, rs, bundle: BundleFlag::Trivial },
        boundary: pieces,
        relation,
        provenance,
    })
}

/// `Σ [𝒪ℙ_V] = 0` over the vertices `V` of a simple complex.
pub fn vertex_cut_relation(
    p: &CornersComplex,
    seed: Option<&BTreeMap<String, IntVector>>,
) -> Result<RelationStatement, CobordismError> {
    vertex_cut_certificate(p, seed).map(|c| c.relation)
}

/// Re-derives everything a certificate claims and reports each mismatch.
pub fn verify_certificate(cert: &CobordismCertificate) -> ValidityReport {
    let w = &cert.w;
    let mut report = validate_marked(&w.marked);
    match validate_rs_characteristic(&w.marked, &w.rs) {
        Ok(r) => report.merge(r),
        Err(e) => report.push("rs-shape", e.to_string(), Vec::<String>::new()),
    }
    if cert.boundary.len() != w.marked.marked.len() {
        let mut ids = w.marked.marked.clone();
        ids.push("relation".into());
        report.push(
            "boundary-count",
            format!("{} marked facets but {} boundary pieces", w.marked.marked.len(), cert.boundary.len()),
            ids,
        );
    }
    for (i, p) in w.marked.marked.iter().enumerate() {
        let fresh = restrict_to_marked(&w.marked, &w.rs, p)
            .map_err(|e| e.to_string())
            .and_then(|(piece, xi)| make_orbifold(&piece, &xi, w.bundle).map_err(|e| e.to_string()));
        match fresh {
            Err(e) => report.push("boundary-mismatch", format!("piece {p} cannot be rebuilt: {e}"), [p.clone()]),
            Ok(d) if cert.boundary.get(i) != Some(&d) => {
                report.push("boundary-mismatch", format!("stored piece for {p} differs from the restriction"), [p.clone()])
            }
            Ok(_) => {}
        }
    }
    let expected = expected_relation(&cert.provenance, w.rs.n(), &w.marked.marked, &cert.boundary);
    if expected != cert.relation {
        report.push("relation-mismatch", "relation does not match the boundary pieces", ["relation"]);
    }
    match &cert.provenance {
        Provenance::ProjectiveSpaces { bottom, lambda0 } | Provenance::NullCobordism { bottom, lambda0, .. } => {
            if w.rs.get(bottom) != Some(lambda0) {
                report.push("provenance-mismatch", "recorded auxiliary vector differs from the bottom vector", [bottom.clone()]);
            }
            if !lambda0.content().is_one() {
                report.push("provenance-mismatch", "auxiliary vector is not primitive", [bottom.clone()]);
            }
        }
        Provenance::VertexCut => {}
    }
    if let Provenance::NullCobordism { lambda0, lens, .. } = &cert.provenance {
        if w.marked.marked.len() != 1 {
            report.push("provenance-mismatch", "a null cobordism has exactly one boundary piece", Vec::<String>::new());
        }
        let want = cert
            .boundary
            .last()
            .map(|top| lens_pieces(&top.base, &top.charfun, lambda0).map_err(|e| e.to_string()));
        match want {
            Some(Ok(want)) if &want == lens => {}
            Some(Err(e)) => report.push("lens-mismatch", e, Vec::<String>::new()),
            _ => {
                let ids: Vec<String> = lens.iter().map(|l| l.facet.clone()).collect();
                report.push("lens-mismatch", "lens data does not match the boundary circles", ids);
            }
        }
    }
    report
}
