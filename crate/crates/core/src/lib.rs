//! Exact combinatorial models of locally standard torus orbifolds: nice
//! manifolds with corners, characteristic functions over ℤⁿ, local groups,
//! standard families, equivalence witnesses and equivariant-cobordism
//! certificates.

pub mod canonical;
pub mod charfun;
pub mod cobordism;
pub mod corners;
pub mod dec;
pub mod equivalence;
pub mod families;
pub mod lattice;
pub mod report;

pub use canonical::{digest, to_canonical_pretty, to_canonical_string};
pub use charfun::{
    face_stratum, singular_strata, validate_characteristic, validate_r_characteristic, CharFunError, CharFunction,
    FaceStratum, Strata,
};
pub use cobordism::{
    boundary, cobordism_to_projective_spaces, find_lambda0, null_cobordism, restrict_to_marked,
    validate_rs_characteristic, verify_certificate, vertex_cut_certificate, vertex_cut_relation, CobordismCertificate,
    CobordismError, Provenance, RSCharFunction, RelationStatement,
};
pub use corners::{
    build_surface_with_corners, product_with_interval, validate_marked, validate_nice, vertex_cut, vertex_cut_bottom,
    CornersComplex, CornersError, FaceRecord, MarkedManifold,
};
pub use equivalence::{
    data_equivalent, invariant_screen, invert_witness, verify_witness, Dataset, EquivalenceError, EquivalenceWitness,
    Refutation, Sign,
};
pub use families::{
    classify_simplex_base, connect_sum_2d, decompose_2d, disc_model, eyeshape_quotient, hirzebruch_bounds,
    lens_from_interval, make_orbifold, BundleFlag, FamilyError, FamilyTag, LensDescriptor, OrbifoldDescriptor, Verdict,
};
pub use lattice::{
    hermite_normal_form, quotient_invariants, saturation, smith_normal_form, AbelianGroup, IntMatrix, IntVector,
    LatticeError, SmithDecomposition,
};
pub use report::ValidityReport;
