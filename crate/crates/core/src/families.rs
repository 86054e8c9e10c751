//! Named families of torus orbifolds over small bases, the decomposition of
//! 2D data into connected-sum pieces, and connected sums.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charfun::{
    singular_strata, validate_r_characteristic, CharFunError, CharFunction, FaceStratum,
};
use crate::corners::{
    build_surface_with_corners, is_simplex, surface_profile, validate_nice, CornersComplex,
    CornersError, FaceRecord, Metadata,
};
use crate::lattice::{quotient_invariants, AbelianGroup, IntMatrix, IntVector};
use crate::report::ValidityReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("base is not a nice manifold with corners: {0}")]
    InvalidComplex(ValidityReport),
    #[error("not an r-characteristic function: {0}")]
    InvalidCharFunction(ValidityReport),
    #[error(transparent)]
    CharFun(#[from] CharFunError),
    #[error(transparent)]
    Corners(#[from] CornersError),
    #[error("base is not a simplex")]
    NotASimplex,
    #[error("vectors {0} and {1} are linearly dependent")]
    DependentVectors(IntVector, IntVector),
    #[error("vector {0} is not primitive")]
    NotPrimitive(IntVector),
    #[error("expected vectors in Z^{expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("consecutive fan vectors v{first} and v{second} are dependent")]
    FanCondition { first: usize, second: usize },
    #[error("operation needs a trivial bundle")]
    BundleFlag,
    #[error("base has empty boundary")]
    ClosedBase,
    #[error("dimensions differ: {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// The principal torus bundle over the base, tracked only as a flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleFlag {
    Trivial,
    Abstract,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyTag {
    /// Orbifold complex projective space: the base is a simplex.
    Ocp,
    /// `S⁴/G` over an eye-shape, `order = |G|`.
    EyeQuotient {
        #[serde(with = "crate::dec")]
        order: BigInt,
    },
    /// `S¹ × S³` over a disc.
    DiscModel,
    /// Quasitoric orbifold over a square.
    Hirzebruch,
    Generic,
}

/// Combinatorial stand-in for the torus orbifold `X(Q, λ, τ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbifoldDescriptor {
    pub base: CornersComplex,
    #[serde(rename = "char")]
    pub charfun: CharFunction,
    pub bundle: BundleFlag,
    #[serde(with = "crate::dec")]
    pub fixed_points: usize,
    pub strata: Vec<FaceStratum>,
    pub smooth: bool,
    pub family_tag: FamilyTag,
}

fn two_by_two(u: &IntVector, v: &IntVector) -> IntMatrix {
    IntMatrix::new(2, vec![u.clone(), v.clone()]).expect("both vectors have dimension 2")
}

/// `|ℤ² / ⟨u, v⟩|` from the Smith form of the pair.
fn index_in_z2(u: &IntVector, v: &IntVector) -> BigInt {
    quotient_invariants(&two_by_two(u, v), &IntMatrix::identity(2))
        .expect("independent pair spans a full-rank sublattice")
        .order()
}

fn derive_tag(c: &CornersComplex, f: &CharFunction) -> FamilyTag {
    if is_simplex(c) {
        return FamilyTag::Ocp;
    }
    if c.dim != 2 || c.genus() != 0 {
        return FamilyTag::Generic;
    }
    let Ok(profile) = surface_profile(c) else { return FamilyTag::Generic };
    match profile.cycle_lengths().as_slice() {
        [0] => FamilyTag::DiscModel,
        [2] => {
            let comp = &profile.components[0];
            let u = f.get(&comp.facets[0]).expect("covered");
            let v = f.get(&comp.facets[1]).expect("covered");
            FamilyTag::EyeQuotient { order: index_in_z2(u, v) }
        }
        [4] => FamilyTag::Hirzebruch,
        _ => FamilyTag::Generic,
    }
}

pub fn make_orbifold(c: &CornersComplex, f: &CharFunction, bundle: BundleFlag) -> Result<OrbifoldDescriptor, FamilyError> {
    let nice = validate_nice(c);
    if !nice.is_valid() {
        return Err(FamilyError::InvalidComplex(nice));
    }
    let report = validate_r_characteristic(c, f)?;
    if !report.is_valid() {
        return Err(FamilyError::InvalidCharFunction(report));
    }
    let strata = singular_strata(c, f)?;
    Ok(OrbifoldDescriptor {
        base: c.clone(),
        charfun: f.clone(),
        bundle,
        fixed_points: c.vertex_count(),
        strata: strata.strata,
        smooth: strata.smooth,
        family_tag: derive_tag(c, f),
    })
}

/// Recomputes every derived field of `d` and reports disagreements.
pub fn check_descriptor(d: &OrbifoldDescriptor) -> ValidityReport {
    let mut report = ValidityReport::new();
    match make_orbifold(&d.base, &d.charfun, d.bundle) {
        Err(FamilyError::InvalidComplex(r)) | Err(FamilyError::InvalidCharFunction(r)) => report.merge(r),
        Err(e) => report.push("descriptor-input", e.to_string(), Vec::<String>::new()),
        Ok(fresh) => {
            if fresh.fixed_points != d.fixed_points {
                report.push("descriptor-fixed-points", "fixed-point count disagrees with the base", Vec::<String>::new());
            }
            if fresh.strata != d.strata {
                let ids: Vec<String> = fresh
                    .strata
                    .iter()
                    .zip(&d.strata)
                    .filter(|(a, b)| a != b)
                    .map(|(a, _)| a.face.clone())
                    .collect();
                report.push("descriptor-strata", "strata disagree with the recomputed ones", ids);
            }
            if fresh.smooth != d.smooth {
                report.push("descriptor-smooth", "smooth flag disagrees with the strata", Vec::<String>::new());
            }
            if fresh.family_tag != d.family_tag {
                report.push("descriptor-family", "family tag disagrees with the base", Vec::<String>::new());
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexGroup {
    pub vertex: String,
    pub group: AbelianGroup,
}

/// Defining data of an orbifold complex projective space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcpRecord {
    /// One vector per facet, in facet order.
    pub vectors: Vec<IntVector>,
    pub vertex_groups: Vec<VertexGroup>,
}

pub fn classify_simplex_base(d: &OrbifoldDescriptor) -> Result<OcpRecord, FamilyError> {
    if !is_simplex(&d.base) {
        return Err(FamilyError::NotASimplex);
    }
    let vectors = d.base.facets.iter().map(|f| d.charfun.get(f).expect("covered").clone()).collect();
    let vertex_groups = d
        .strata
        .iter()
        .filter(|s| s.codim == d.base.dim)
        .map(|s| VertexGroup { vertex: s.face.clone(), group: s.local_group.clone() })
        .collect();
    Ok(OcpRecord { vectors, vertex_groups })
}

fn expect_dim2(v: &IntVector) -> Result<(), FamilyError> {
    if v.dim() == 2 { Ok(()) } else { Err(FamilyError::WrongDimension { expected: 2, found: v.dim() }) }
}

fn det2(u: &IntVector, v: &IntVector) -> BigInt {
    u.get(0) * v.get(1) - u.get(1) * v.get(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EyeQuotient {
    /// Order of the finite group `G` with `X ≅ S⁴/G`.
    #[serde(with = "crate::dec")]
    pub order: BigInt,
    pub is_s4: bool,
    pub descriptor: OrbifoldDescriptor,
}

/// Torus orbifold over the eye-shape with `E₀ ↦ (a,b)`, `E₁ ↦ (c,d)`.
pub fn eyeshape_quotient(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    c: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<EyeQuotient, FamilyError> {
    let u = IntVector::new(vec![a.into(), b.into()]);
    let v = IntVector::new(vec![c.into(), d.into()]);
    if u.is_zero() || v.is_zero() || det2(&u, &v).is_zero() {
        return Err(FamilyError::DependentVectors(u, v));
    }
    let eye = build_surface_with_corners(0, &[2])?;
    let f = CharFunction::on_facets(&eye, &[u, v])?;
    let descriptor = make_orbifold(&eye, &f, BundleFlag::Trivial)?;
    let FamilyTag::EyeQuotient { order } = descriptor.family_tag.clone() else {
        unreachable!("eye-shape bases are tagged as eye quotients")
    };
    Ok(EyeQuotient { is_s4: order.is_one(), order, descriptor })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscModel {
    pub vector: IntVector,
    /// `(c, d)` with `|ad − bc| = 1`; see [`disc_completion`].
    pub completion: IntVector,
    pub descriptor: OrbifoldDescriptor,
}

/// Basis completion of a primitive `(a, b)`: the `(c, d)` with
/// `|ad − bc| = 1` and smallest `c ≥ 0`, preferring `ad − bc = +1`, then the
/// smallest `|d|`.
pub fn disc_completion(u: &IntVector) -> Result<IntVector, FamilyError> {
    expect_dim2(u)?;
    if u.is_zero() || !u.content().is_one() {
        return Err(FamilyError::NotPrimitive(u.clone()));
    }
    let (a, b) = (u.get(0), u.get(1));
    if a.is_zero() {
        // b = ±1: any d works with c = 1; ad − bc = −b
        return Ok(IntVector::new(vec![BigInt::one(), BigInt::zero()]));
    }
    let modulus = a.abs();
    let mut candidates = Vec::new();
    for s in [BigInt::one(), -BigInt::one()] {
        // a·d − b·c = s  ⇔  b·c ≡ −s (mod |a|)
        let c = if modulus.is_one() {
            BigInt::zero()
        } else {
            let g = b.mod_floor(&modulus).extended_gcd(&modulus);
            (-&s * g.x).mod_floor(&modulus)
        };
        let d = (&s + b * &c) / a;
        candidates.push((c, s.is_negative(), d));
    }
    let (c, _, d) = candidates
        .into_iter()
        .min_by(|x, y| (&x.0, x.1, x.2.abs()).cmp(&(&y.0, y.1, y.2.abs())))
        .expect("two candidates");
    Ok(IntVector::new(vec![c, d]))
}

pub fn disc_model(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<DiscModel, FamilyError> {
    let vector = IntVector::new(vec![a.into(), b.into()]);
    let completion = disc_completion(&vector)?;
    let disc = build_surface_with_corners(0, &[0])?;
    let f = CharFunction::on_facets(&disc, std::slice::from_ref(&vector))?;
    let descriptor = make_orbifold(&disc, &f, BundleFlag::Trivial)?;
    Ok(DiscModel { vector, completion, descriptor })
}

/// Lens space `L(p, q)` with `0 ≤ q < p` (`q = 0` only for `p = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensDescriptor {
    #[serde(with = "crate::dec")]
    pub p: BigInt,
    #[serde(with = "crate::dec")]
    pub q: BigInt,
}

/// Normal form of the interval with primitive end vectors `u`, `v`: move `u` to
/// `(1, 0)` by some `δ` of determinant `sign det(u, v)`, read
/// `δv = (−q′, p)` and reduce `q = q′ mod p`.
pub fn lens_from_interval(u: &IntVector, v: &IntVector) -> Result<LensDescriptor, FamilyError> {
    expect_dim2(u)?;
    expect_dim2(v)?;
    if u.is_zero() || !u.content().is_one() {
        return Err(FamilyError::NotPrimitive(u.clone()));
    }
    let det = det2(u, v);
    if det.is_zero() {
        return Err(FamilyError::DependentVectors(u.clone(), v.clone()));
    }
    // a non-primitive v would leave gcd(p, q) > 1
    if !v.content().is_one() {
        return Err(FamilyError::NotPrimitive(v.clone()));
    }
    let g = u.get(0).extended_gcd(u.get(1));
    // first row (s, t) of δ with s·u₀ + t·u₁ = 1
    let (s, t) = if g.gcd.is_negative() { (-g.x, -g.y) } else { (g.x, g.y) };
    let p = det.abs();
    let x = s * v.get(0) + t * v.get(1);
    let q = (-x).mod_floor(&p);
    Ok(LensDescriptor { p, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounds,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HirzebruchCertificate {
    /// Which of `v1 = ±v3`, `v2 = ±v4` hold, e.g. `v2=-v4`.
    pub conditions: Vec<String>,
    /// Every consecutive pair is a basis of ℤ².
    pub smooth: bool,
    /// Bounds with a manifold (smooth case), not only an orbifold.
    pub bounds_manifold: bool,
    pub descriptor: OrbifoldDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HirzebruchResult {
    pub verdict: Verdict,
    pub certificate: HirzebruchCertificate,
}

/// Sufficient condition for the orbifold Hirzebruch surface of the fan
/// `v1..v4` to bound: `v1 = ±v3` or `v2 = ±v4`. Never reports "does not bound".
pub fn hirzebruch_bounds(vs: &[IntVector; 4]) -> Result<HirzebruchResult, FamilyError> {
    for v in vs {
        expect_dim2(v)?;
    }
    for i in 0..4 {
        let j = (i + 1) % 4;
        if det2(&vs[i], &vs[j]).is_zero() {
            return Err(FamilyError::FanCondition { first: i + 1, second: j + 1 });
        }
    }
    let mut conditions = Vec::new();
    for (i, j) in [(0, 2), (1, 3)] {
        match vs[i].sign_relative_to(&vs[j]) {
            Some(1) => conditions.push(format!("v{}=+v{}", i + 1, j + 1)),
            Some(_) => conditions.push(format!("v{}=-v{}", i + 1, j + 1)),
            None => {}
        }
    }
    let square = build_surface_with_corners(0, &[4])?;
    let f = CharFunction::on_facets(&square, vs)?;
    let descriptor = make_orbifold(&square, &f, BundleFlag::Trivial)?;
    let smooth = (0..4).all(|i| det2(&vs[i], &vs[(i + 1) % 4]).abs().is_one());
    let verdict = if conditions.is_empty() { Verdict::Unknown } else { Verdict::Bounds };
    Ok(HirzebruchResult {
        verdict,
        certificate: HirzebruchCertificate {
            bounds_manifold: smooth && verdict == Verdict::Bounds,
            conditions,
            smooth,
            descriptor,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Summand {
    /// Quasitoric manifold or orbifold over a polygon.
    QuasitoricPiece { descriptor: OrbifoldDescriptor },
    EyeQuotient {
        #[serde(with = "crate::dec")]
        order: BigInt,
        descriptor: OrbifoldDescriptor,
    },
    DiscModel { descriptor: OrbifoldDescriptor },
    /// `T² × S_Q` for the closed surface `S_Q` of the given genus.
    TrivialBundlePiece {
        #[serde(with = "crate::dec")]
        genus: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectedSumDecomposition {
    pub summands: Vec<Summand>,
}

impl ConnectedSumDecomposition {
    /// Boundary cycle lengths of the pieces, in summand order.
    pub fn boundary_cycles(&self) -> Vec<usize> {
        self.summands
            .iter()
            .filter_map(|s| match s {
                Summand::QuasitoricPiece { descriptor } => Some(descriptor.base.facets.len()),
                Summand::EyeQuotient { .. } => Some(2),
                Summand::DiscModel { .. } => Some(0),
                Summand::TrivialBundlePiece { .. } => None,
            })
            .collect()
    }

    pub fn genus(&self) -> usize {
        self.summands
            .iter()
            .map(|s| match s {
                Summand::TrivialBundlePiece { genus } => *genus,
                _ => 0,
            })
            .sum()
    }
}

/// One summand per boundary component, then `T² × S_Q`.
pub fn decompose_2d(d: &OrbifoldDescriptor) -> Result<ConnectedSumDecomposition, FamilyError> {
    if d.base.dim != 2 {
        return Err(FamilyError::DimensionMismatch { left: d.base.dim, right: 2 });
    }
    if d.bundle != BundleFlag::Trivial {
        return Err(FamilyError::BundleFlag);
    }
    let profile = surface_profile(&d.base)?;
    if profile.components.is_empty() {
        return Err(FamilyError::ClosedBase);
    }
    let mut summands = Vec::new();
    for comp in &profile.components {
        let mut faces: Vec<FaceRecord> = Vec::new();
        for r in &d.base.faces {
            if r.facet_set.iter().all(|f| comp.facets.contains(f)) {
                faces.push(r.clone());
            }
        }
        let piece = CornersComplex {
            dim: 2,
            facets: comp.facets.clone(),
            faces,
            metadata: Some(Metadata::Surface { genus: 0, boundary_cycles: vec![comp.length] }),
        };
        let assignment: BTreeMap<String, IntVector> =
            comp.facets.iter().map(|f| (f.clone(), d.charfun.get(f).expect("covered").clone())).collect();
        let f = CharFunction::new(d.charfun.n(), assignment)?;
        let descriptor = make_orbifold(&piece, &f, BundleFlag::Trivial)?;
        summands.push(match comp.length {
            0 => Summand::DiscModel { descriptor },
            2 => {
                let FamilyTag::EyeQuotient { order } = descriptor.family_tag.clone() else {
                    unreachable!("eye-shape pieces are tagged as eye quotients")
                };
                Summand::EyeQuotient { order, descriptor }
            }
            _ => Summand::QuasitoricPiece { descriptor },
        });
    }
    summands.push(Summand::TrivialBundlePiece { genus: profile.genus });
    Ok(ConnectedSumDecomposition { summands })
}

fn prefixed(c: &CornersComplex, prefix: &str) -> (Vec<String>, Vec<FaceRecord>) {
    let p = |s: &String| format!("{prefix}{s}");
    let facets = c.facets.iter().map(p).collect();
    let faces = c
        .faces
        .iter()
        .map(|r| FaceRecord {
            id: p(&r.id),
            codim: r.codim,
            facet_set: r.facet_set.iter().map(p).collect(),
            component_tag: r.component_tag,
        })
        .collect();
    (facets, faces)
}

/// Equivariant connected sum along principal orbits. Ids of the two sides
/// get the prefixes `L.` and `R.`.
pub fn connect_sum_2d(d1: &OrbifoldDescriptor, d2: &OrbifoldDescriptor) -> Result<OrbifoldDescriptor, FamilyError> {
    if d1.base.dim != 2 || d2.base.dim != 2 {
        return Err(FamilyError::DimensionMismatch { left: d1.base.dim, right: d2.base.dim });
    }
    if d1.charfun.n() != d2.charfun.n() {
        return Err(FamilyError::DimensionMismatch { left: d1.charfun.n(), right: d2.charfun.n() });
    }
    if d1.bundle != BundleFlag::Trivial || d2.bundle != BundleFlag::Trivial {
        return Err(FamilyError::BundleFlag);
    }
    let (p1, p2) = (surface_profile(&d1.base)?, surface_profile(&d2.base)?);
    let (mut facets, mut faces) = prefixed(&d1.base, "L.");
    let (f2, r2) = prefixed(&d2.base, "R.");
    facets.extend(f2);
    faces.extend(r2);
    let mut cycles = p1.cycle_lengths();
    cycles.extend(p2.cycle_lengths());
    let base = CornersComplex {
        dim: 2,
        facets,
        faces,
        metadata: Some(Metadata::Surface { genus: p1.genus + p2.genus, boundary_cycles: cycles }),
    };
    let mut assignment = BTreeMap::new();
    for (prefix, d) in [("L.", d1), ("R.", d2)] {
        for (k, v) in d.charfun.assignment() {
            assignment.insert(format!("{prefix}{k}"), v.clone());
        }
    }
    let f = CharFunction::new(d1.charfun.n(), assignment)?;
    make_orbifold(&base, &f, BundleFlag::Trivial)
}
