use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use torocob::corners::{cube, eye_shape, is_simplex, polygon, simplex};
use torocob::*;

fn det2(a: &[i64; 2], b: &[i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn det3(r: &[[i64; 3]; 3]) -> i64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

fn to_i64(v: &IntVector) -> Vec<i64> {
    v.entries().iter().map(|e| i64::try_from(e).unwrap()).collect()
}

/// Full-rank test by explicit determinant, `n ≤ 3`.
fn full_rank(rows: &[Vec<i64>]) -> bool {
    match rows.len() {
        1 => rows[0][0] != 0,
        2 => det2(&[rows[0][0], rows[0][1]], &[rows[1][0], rows[1][1]]) != 0,
        3 => det3(&[
            [rows[0][0], rows[0][1], rows[0][2]],
            [rows[1][0], rows[1][1], rows[1][2]],
            [rows[2][0], rows[2][1], rows[2][2]],
        ]) != 0,
        _ => unreachable!(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Constraint systems with independent sets, built from random vectors.
fn system() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<Vec<usize>>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), n..=6),
            proptest::collection::vec(proptest::collection::vec(0usize..6, n), 1..=4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambda0_passes_exhaustive_recheck((n, vecs, raw_sets) in system()) {
        let sets: Vec<Vec<usize>> = raw_sets
            .into_iter()
            .map(|s| s.into_iter().map(|i| i % vecs.len()).collect::<Vec<_>>())
            .filter(|s| full_rank(&s.iter().map(|&i| vecs[i].clone()).collect::<Vec<_>>()))
            .collect();
        let named: BTreeMap<String, IntVector> =
            vecs.iter().enumerate().map(|(i, v)| (format!("v{i}"), IntVector::from_i64s(v))).collect();
        let ids: Vec<Vec<String>> = sets.iter().map(|s| s.iter().map(|i| format!("v{i}")).collect()).collect();
        let l0 = find_lambda0(n, &ids, &named).unwrap();
        prop_assert_eq!(find_lambda0(n, &ids, &named).unwrap(), l0.clone());
        let l = to_i64(&l0);
        prop_assert_eq!(l.iter().fold(0, |g, &x| gcd(g, x)), 1);
        for s in &sets {
            for skip in 0..n {
                let mut rows = vec![l.clone()];
                rows.extend(s.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &i)| vecs[i].clone()));
                prop_assert!(full_rank(&rows));
            }
        }
    }
}

/// Random r-characteristic vectors on a polygon: adjacent pairs independent.
fn polygon_data(max_len: usize) -> impl Strategy<Value = (usize, Vec<[i64; 2]>)> {
    (3usize..=max_len)
        .prop_flat_map(|m| (Just(m), proptest::collection::vec([-3i64..=3, -3i64..=3], m)))
        .prop_filter("adjacent vectors independent", |(m, vs)| {
            (0..*m).all(|i| det2(&vs[i], &vs[(i + 1) % m]) != 0)
        })
}

fn charfun_of(c: &CornersComplex, vs: &[[i64; 2]]) -> CharFunction {
    let vs: Vec<IntVector> = vs.iter().map(|v| IntVector::from(*v)).collect();
    CharFunction::on_facets(c, &vs).unwrap()
}

fn local_groups(d: &OrbifoldDescriptor) -> Vec<AbelianGroup> {
    let mut g: Vec<AbelianGroup> = d.strata.iter().map(|s| s.local_group.clone()).collect();
    g.sort();
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pipeline_soundness((m, vs) in polygon_data(8)) {
        let c = polygon(m).unwrap();
        let f = charfun_of(&c, &vs);
        let cert = cobordism_to_projective_spaces(&c, &f, BundleFlag::Trivial).unwrap();
        prop_assert!(verify_certificate(&cert).is_valid());
        prop_assert_eq!(cert.boundary.len(), m + 1);
        for piece in &cert.boundary[..m] {
            prop_assert!(is_simplex(&piece.base));
            prop_assert!(validate_r_characteristic(&piece.base, &piece.charfun).unwrap().is_valid());
        }
        let top = cert.boundary.last().unwrap();
        prop_assert_eq!(&top.base, &c);
        prop_assert_eq!(&top.charfun, &f);
    }

    #[test]
    fn pipeline_commutes_with_delta((m, vs) in polygon_data(6), k in -2i64..=2, swap in any::<bool>()) {
        let c = polygon(m).unwrap();
        let f = charfun_of(&c, &vs);
        let delta = if swap {
            IntMatrix::from_i64s(2, &[&[0, 1], &[1, k]]).unwrap()
        } else {
            IntMatrix::from_i64s(2, &[&[1, k], &[0, 1]]).unwrap()
        };
        let g = f.transform(&delta).unwrap();
        let cert = cobordism_to_projective_spaces(&c, &f, BundleFlag::Trivial).unwrap();
        let moved = cobordism_to_projective_spaces(&c, &g, BundleFlag::Trivial).unwrap();
        prop_assert!(verify_certificate(&moved).is_valid());
        prop_assert_eq!(local_groups(cert.boundary.last().unwrap()), local_groups(moved.boundary.last().unwrap()));

        // transporting every vector, the auxiliary one included, moves the
        // whole boundary by δ and keeps every local group
        let rs = &cert.w.rs;
        let transported: BTreeMap<String, IntVector> =
            rs.assignment().iter().map(|(k, v)| (k.clone(), delta.apply(v).unwrap())).collect();
        let rs2 = RSCharFunction::new(2, transported).unwrap();
        let pieces = boundary(&cert.w.marked, &rs2, BundleFlag::Trivial).unwrap();
        for (a, b) in cert.boundary.iter().zip(&pieces) {
            prop_assert_eq!(&a.charfun.transform(&delta).unwrap(), &b.charfun);
            prop_assert_eq!(local_groups(a), local_groups(b));
        }
    }
}

#[test]
fn eye_fixture_boundary_vectors() {
    let eye = eye_shape();
    let f = charfun_of(&eye, &[[1, 0], [0, 1]]);
    let cert = cobordism_to_projective_spaces(&eye, &f, BundleFlag::Trivial).unwrap();
    let want: BTreeSet<IntVector> = [[1, 0], [0, 1], [1, -1]].into_iter().map(IntVector::from).collect();
    for piece in &cert.boundary[..2] {
        let got: BTreeSet<IntVector> = piece.charfun.assignment().values().cloned().collect();
        assert_eq!(got, want);
    }
}

#[test]
fn marked_triangles_and_square_shapes() {
    // four marked triangles: the vertex cut of a 3-simplex
    let cert = vertex_cut_certificate(&simplex(3), None).unwrap();
    assert_eq!(cert.boundary.len(), 4);
    assert!(cert.boundary.iter().all(|d| d.family_tag == FamilyTag::Ocp));
    // four marked triangles and a rectangle: the bottom-cut square prism
    let sq = polygon(4).unwrap();
    let f = charfun_of(&sq, &[[1, 0], [0, 1], [1, 0], [0, 1]]);
    let cert = cobordism_to_projective_spaces(&sq, &f, BundleFlag::Trivial).unwrap();
    let tags: Vec<FamilyTag> = cert.boundary.iter().map(|d| d.family_tag.clone()).collect();
    assert_eq!(tags, vec![FamilyTag::Ocp, FamilyTag::Ocp, FamilyTag::Ocp, FamilyTag::Ocp, FamilyTag::Hirzebruch]);
}

#[test]
fn manifold_input_with_singular_pieces() {
    // a smooth input can still produce orbifold projective spaces with
    // nontrivial local groups
    let tri = polygon(3).unwrap();
    let f = charfun_of(&tri, &[[1, 0], [0, 1], [-1, -1]]);
    assert!(validate_characteristic(&tri, &f).unwrap().is_valid());
    let cert = cobordism_to_projective_spaces(&tri, &f, BundleFlag::Trivial).unwrap();
    let orders: Vec<BigInt> = cert.boundary[..3]
        .iter()
        .flat_map(|d| d.strata.iter().map(|s| s.local_group.order()))
        .collect();
    assert!(orders.iter().any(|o| o == &BigInt::from(2)));
    assert!(cert.boundary.last().unwrap().smooth);
}

#[test]
fn vertex_cut_relations_validate() {
    for p in [simplex(2), simplex(3), simplex(4), cube(2), cube(3), polygon(5).unwrap()] {
        let cert = vertex_cut_certificate(&p, None).unwrap();
        assert!(validate_rs_characteristic(&cert.w.marked, &cert.w.rs).unwrap().is_valid());
        assert!(verify_certificate(&cert).is_valid());
        assert_eq!(cert.relation.lhs.len(), p.vertex_count());
        assert!(cert.relation.rhs.is_empty());
    }
}

#[test]
fn null_cobordism_lens_pieces() {
    let disc = build_surface_with_corners(0, &[0]).unwrap();
    let f = charfun_of(&disc, &[[1, 2]]);
    let cert = null_cobordism(&disc, &f, BundleFlag::Trivial).unwrap();
    let Provenance::NullCobordism { lens, .. } = &cert.provenance else { panic!("wrong provenance") };
    for piece in lens {
        let (u, v) = (to_i64(&piece.u), to_i64(&piece.v));
        let det = det2(&[u[0], u[1]], &[v[0], v[1]]).abs();
        assert_eq!(piece.lens.p, BigInt::from(det));
    }
    assert!(cert.relation.rhs.is_empty() && cert.relation.lhs.len() == 1);
}

#[test]
fn lambda0_n1_is_one() {
    let vs: BTreeMap<String, IntVector> = [("a".to_string(), IntVector::from([-3]))].into_iter().collect();
    let l = find_lambda0(1, &[vec!["a".into()]], &vs).unwrap();
    assert!(l.get(0).is_one());
    assert!(!l.get(0).is_zero());
}
