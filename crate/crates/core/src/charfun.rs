//! Characteristic functions on a nice manifold with corners, their validity
//! and the local groups `K̃(F)/K(F)` of every face.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corners::CornersComplex;
use crate::lattice::{
    hermite_normal_form, is_basis_extendable, quotient_invariants, rank, saturation, AbelianGroup,
    IntMatrix, IntVector, LatticeError,
};
use crate::report::ValidityReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharFunError {
    #[error("facet {0} is assigned the zero vector")]
    ZeroVector(String),
    #[error("vector for {facet} has dimension {found}, expected {expected}")]
    WrongDimension { facet: String, expected: usize, found: usize },
    #[error("facet {0} has no vector")]
    MissingFacet(String),
    #[error("vector assigned to {0}, which is not a facet")]
    UnknownFacet(String),
    #[error("vectors live in Z^{vectors} but the complex has dimension {complex}")]
    DimensionMismatch { complex: usize, vectors: usize },
    #[error("no face with id {0}")]
    UnknownFace(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// An assignment of nonzero vectors in ℤⁿ to facet ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCharFunction", into = "RawCharFunction")]
pub struct CharFunction {
    n: usize,
    assignment: BTreeMap<String, IntVector>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCharFunction {
    #[serde(with = "crate::dec")]
    n: usize,
    assignment: BTreeMap<String, IntVector>,
}

impl TryFrom<RawCharFunction> for CharFunction {
    type Error = CharFunError;

    fn try_from(raw: RawCharFunction) -> Result<Self, CharFunError> {
        CharFunction::new(raw.n, raw.assignment)
    }
}

impl From<CharFunction> for RawCharFunction {
    fn from(f: CharFunction) -> Self {
        RawCharFunction { n: f.n, assignment: f.assignment }
    }
}

impl CharFunction {
    pub fn new(n: usize, assignment: BTreeMap<String, IntVector>) -> Result<Self, CharFunError> {
        for (facet, v) in &assignment {
            if v.dim() != n {
                return Err(CharFunError::WrongDimension { facet: facet.clone(), expected: n, found: v.dim() });
            }
            if v.is_zero() {
                return Err(CharFunError::ZeroVector(facet.clone()));
            }
        }
        Ok(CharFunction { n, assignment })
    }

    pub fn from_i64s(n: usize, pairs: &[(&str, &[i64])]) -> Result<Self, CharFunError> {
        let assignment = pairs.iter().map(|(f, v)| (f.to_string(), IntVector::from_i64s(v))).collect();
        CharFunction::new(n, assignment)
    }

    /// Pairs facets of `c` in order with the given vectors.
    pub fn on_facets(c: &CornersComplex, vectors: &[IntVector]) -> Result<Self, CharFunError> {
        if vectors.len() != c.facets.len() {
            let missing = c.facets.get(vectors.len()).cloned().unwrap_or_default();
            return Err(CharFunError::MissingFacet(missing));
        }
        let n = vectors.first().map_or(c.dim, IntVector::dim);
        CharFunction::new(n, c.facets.iter().cloned().zip(vectors.iter().cloned()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn assignment(&self) -> &BTreeMap<String, IntVector> {
        &self.assignment
    }

    pub fn get(&self, facet: &str) -> Option<&IntVector> {
        self.assignment.get(facet)
    }

    /// Applies `delta` to every vector.
    pub fn transform(&self, delta: &IntMatrix) -> Result<Self, CharFunError> {
        let mut assignment = BTreeMap::new();
        for (f, v) in &self.assignment {
            assignment.insert(f.clone(), delta.apply(v)?);
        }
        CharFunction::new(delta.nrows(), assignment)
    }

    /// Errors unless the assignment covers exactly the facets of `c`.
    pub fn check_covers(&self, c: &CornersComplex) -> Result<(), CharFunError> {
        check_cover(&self.assignment, &c.facets)
    }
}

pub(crate) fn check_cover(assignment: &BTreeMap<String, IntVector>, facets: &[String]) -> Result<(), CharFunError> {
    let wanted: BTreeSet<&String> = facets.iter().collect();
    if let Some(f) = facets.iter().find(|f| !assignment.contains_key(*f)) {
        return Err(CharFunError::MissingFacet(f.clone()));
    }
    if let Some(f) = assignment.keys().find(|f| !wanted.contains(f)) {
        return Err(CharFunError::UnknownFacet(f.clone()));
    }
    Ok(())
}

/// Rows are the vectors of the facets in `facet_set` that have one.
pub(crate) fn face_matrix<'a>(
    n: usize,
    facets: impl IntoIterator<Item = &'a String>,
    assignment: &BTreeMap<String, IntVector>,
) -> IntMatrix {
    let rows: Vec<IntVector> = facets.into_iter().filter_map(|f| assignment.get(f).cloned()).collect();
    IntMatrix::new(n, rows).expect("vectors were checked to have dimension n")
}

fn prepare(c: &CornersComplex, f: &CharFunction) -> Result<(), CharFunError> {
    if f.n != c.dim {
        return Err(CharFunError::DimensionMismatch { complex: c.dim, vectors: f.n });
    }
    f.check_covers(c)
}

/// Rational characteristic: the vectors at every face are independent.
pub fn validate_r_characteristic(c: &CornersComplex, f: &CharFunction) -> Result<ValidityReport, CharFunError> {
    prepare(c, f)?;
    let mut report = ValidityReport::new();
    for r in &c.faces {
        let m = face_matrix(f.n, &r.facet_set, &f.assignment);
        if rank(&m) < m.nrows() {
            report.push(
                "dependent-vectors",
                format!("vectors at face {} are linearly dependent", r.id),
                [r.id.clone()],
            );
        }
    }
    Ok(report)
}

/// Characteristic: the vectors at every face extend to a basis of ℤⁿ.
pub fn validate_characteristic(c: &CornersComplex, f: &CharFunction) -> Result<ValidityReport, CharFunError> {
    let mut report = validate_r_characteristic(c, f)?;
    for r in &c.faces {
        let m = face_matrix(f.n, &r.facet_set, &f.assignment);
        if rank(&m) == m.nrows() && !is_basis_extendable(&m) {
            report.push(
                "not-unimodular",
                format!("vectors at face {} do not extend to a basis", r.id),
                [r.id.clone()],
            );
        }
    }
    Ok(report)
}

/// Lattice data of one face: `K(F)`, its saturation and `G_F = K̃(F)/K(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceStratum {
    pub face: String,
    #[serde(with = "crate::dec")]
    pub codim: usize,
    pub k_lattice: IntMatrix,
    pub saturation: IntMatrix,
    pub local_group: AbelianGroup,
    #[serde(with = "crate::dec")]
    pub torus_rank: usize,
}

pub fn face_stratum(c: &CornersComplex, f: &CharFunction, face_id: &str) -> Result<FaceStratum, CharFunError> {
    prepare(c, f)?;
    let r = c.record(face_id).ok_or_else(|| CharFunError::UnknownFace(face_id.to_string()))?;
    Ok(stratum_of(&r.id, r.codim, &face_matrix(f.n, &r.facet_set, &f.assignment)))
}

pub(crate) fn stratum_of(face: &str, codim: usize, k: &IntMatrix) -> FaceStratum {
    let sat = saturation(k);
    let local_group = quotient_invariants(k, &sat).expect("a lattice sits in its saturation with equal rank");
    FaceStratum {
        face: face.to_string(),
        codim,
        k_lattice: hermite_normal_form(k),
        saturation: sat,
        local_group,
        torus_rank: rank(k),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Strata {
    pub strata: Vec<FaceStratum>,
    /// Every local group is trivial.
    pub smooth: bool,
}

/// Strata of every face ordered by codim, then by position in the complex.
pub fn singular_strata(c: &CornersComplex, f: &CharFunction) -> Result<Strata, CharFunError> {
    prepare(c, f)?;
    let mut records: Vec<_> = c.faces.iter().collect();
    records.sort_by_key(|r| r.codim);
    let strata: Vec<FaceStratum> = records
        .into_iter()
        .map(|r| stratum_of(&r.id, r.codim, &face_matrix(f.n, &r.facet_set, &f.assignment)))
        .collect();
    let smooth = strata.iter().all(|s| s.local_group.is_trivial());
    Ok(Strata { strata, smooth })
}
