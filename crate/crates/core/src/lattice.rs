//! Exact integer linear algebra over ℤⁿ.
//!
//! Everything here works on arbitrary-precision integers. Matrices are
//! row-oriented: a matrix is a generating set of a sublattice of ℤⁿ, one
//! generator per row. An empty matrix (no rows) is the zero lattice.
//!
//! Smith normal form picks, at every step, the entry of smallest absolute
//! value in the remaining block (ties go to the lowest row, then column), so
//! the decomposition is a pure function of the input. Canonical generating
//! sets are row-style Hermite normal form with positive pivots and
//! above-pivot entries reduced into `[0, pivot)`, which turns lattice
//! equality into a syntactic comparison.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the zero vector has no primitivity")]
    ZeroVector,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("row {row} of the sublattice is not contained in the reference lattice")]
    Containment { row: usize },
    #[error("rank mismatch: sublattice has rank {sub}, reference lattice has rank {sup}")]
    Rank { sub: usize, sup: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// An element of ℤⁿ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(#[serde(with = "crate::dec::seq")] Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Nonnegative gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, e| g.gcd(e))
    }

    pub fn neg(&self) -> Self {
        IntVector(self.0.iter().map(|e| -e).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntVector(self.0.iter().map(|e| e * k).collect())
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &BigInt, other: &IntVector) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    /// The representative of `±self` whose first nonzero entry is positive.
    pub fn sign_normalized(&self) -> Self {
        match self.0.iter().find(|e| !e.is_zero()) {
            Some(e) if e.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Returns `+1`/`-1` when `other == ±self`, `None` otherwise.
    pub fn sign_relative_to(&self, other: &IntVector) -> Option<i8> {
        if self == other {
            Some(1)
        } else if self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| *a == -b) {
            Some(-1)
        } else {
            None
        }
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(entries: [i64; N]) -> Self {
        IntVector::from_i64s(&entries)
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(entries: Vec<i64>) -> Self {
        IntVector::from_i64s(&entries)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// A finite list of generators in ℤⁿ (`cols = n`), possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<IntVector>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    #[serde(with = "crate::dec")]
    cols: usize,
    rows: Vec<IntVector>,
}

impl TryFrom<RawMatrix> for IntMatrix {
    type Error = LatticeError;

    fn try_from(raw: RawMatrix) -> Result<Self, LatticeError> {
        IntMatrix::new(raw.cols, raw.rows)
    }
}

impl From<IntMatrix> for RawMatrix {
    fn from(m: IntMatrix) -> Self {
        RawMatrix { cols: m.cols, rows: m.rows }
    }
}

impl IntMatrix {
    pub fn new(cols: usize, rows: Vec<IntVector>) -> Result<Self, LatticeError> {
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != cols {
                return Err(LatticeError::Ragged { row: i, expected: cols, found: r.dim() });
            }
        }
        Ok(IntMatrix { cols, rows })
    }

    pub fn empty(cols: usize) -> Self {
        IntMatrix { cols, rows: Vec::new() }
    }

    pub fn from_i64s(cols: usize, rows: &[&[i64]]) -> Result<Self, LatticeError> {
        IntMatrix::new(cols, rows.iter().map(|r| IntVector::from_i64s(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                IntVector(v)
            })
            .collect();
        IntMatrix { cols: n, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<IntVector> {
        self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i].0[j]
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.cols)
            .map(|j| IntVector(self.rows.iter().map(|r| r.0[j].clone()).collect()))
            .collect();
        IntMatrix { cols: self.rows.len(), rows }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.nrows() {
            return Err(LatticeError::DimensionMismatch { left: self.cols, right: other.nrows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                IntVector(
                    (0..other.cols)
                        .map(|j| r.0.iter().zip(&other.rows).map(|(a, b)| a * &b.0[j]).sum())
                        .collect(),
                )
            })
            .collect();
        Ok(IntMatrix { cols: other.cols, rows })
    }

    /// Matrix acting on a column vector: `self · v`.
    pub fn apply(&self, v: &IntVector) -> Result<IntVector, LatticeError> {
        if self.cols != v.dim() {
            return Err(LatticeError::DimensionMismatch { left: self.cols, right: v.dim() });
        }
        Ok(IntVector(
            self.rows.iter().map(|r| r.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()).collect(),
        ))
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare { rows: self.nrows(), cols: self.cols });
        }
        Ok(bareiss_det(to_grid(self)))
    }

    /// Classical adjugate, so that `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Result<IntMatrix, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare { rows: self.nrows(), cols: self.cols });
        }
        let n = self.cols;
        if n == 0 {
            return Ok(IntMatrix::empty(0));
        }
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let grid = to_grid(self);
        let mut adj = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = grid
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != i)
                    .map(|(_, row)| {
                        row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect()
                    })
                    .collect();
                let cof = bareiss_det(minor);
                adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        Ok(from_grid(n, adj))
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        let det = self.determinant().ok()?;
        if det.abs() != BigInt::one() {
            return None;
        }
        let adj = self.adjugate().ok()?;
        Some(IntMatrix {
            cols: adj.cols,
            rows: adj.rows.iter().map(|r| r.scale(&det)).collect(),
        })
    }
}

/// Invariant factors together with unimodular transforms: `left · m · right`
/// is the `rows × cols` matrix with `diag` on its main diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    /// Length `min(rows, cols)`; nonzero entries first, each dividing the next.
    pub diag: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

/// A finite abelian group `ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `2 ≤ d₁ | d₂ | … | d_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianGroup {
    #[serde(with = "crate::dec::seq")]
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup::default()
    }

    /// Cyclic group of order `n` (trivial for `n = 1`).
    pub fn cyclic(n: u64) -> Self {
        AbelianGroup::from_diagonal(&[BigInt::from(n)])
    }

    /// Keeps the factors that are at least 2 from a Smith diagonal.
    pub fn from_diagonal(diag: &[BigInt]) -> Self {
        AbelianGroup {
            invariant_factors: diag.iter().filter(|d| **d > BigInt::one()).cloned().collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return f.write_str("1");
        }
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

type Grid = Vec<Vec<BigInt>>;

fn to_grid(m: &IntMatrix) -> Grid {
    m.rows.iter().map(|r| r.0.clone()).collect()
}

fn from_grid(cols: usize, g: Grid) -> IntMatrix {
    IntMatrix { cols, rows: g.into_iter().map(IntVector).collect() }
}

fn identity_grid(n: usize) -> Grid {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn bareiss_det(mut a: Grid) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

// row[dst] -= q * row[src]
fn row_sub(g: &mut Grid, dst: usize, src: usize, q: &BigInt) {
    let (d, s) = if dst < src {
        let (lo, hi) = g.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = g.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

// col[dst] -= q * col[src]
fn col_sub(g: &mut Grid, dst: usize, src: usize, q: &BigInt) {
    for row in g.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(g: &mut Grid, a: usize, b: usize) {
    if a != b {
        for row in g.iter_mut() {
            row.swap(a, b);
        }
    }
}

struct SmithWork {
    diag: Vec<BigInt>,
    left: Grid,
    right: Grid,
    right_inv: Grid,
}

fn smith_work(m: &IntMatrix) -> SmithWork {
    let r = m.nrows();
    let c = m.ncols();
    let mut a = to_grid(m);
    let mut left = identity_grid(r);
    let mut right = identity_grid(c);
    let mut right_inv = identity_grid(c);

    let steps = r.min(c);
    'outer: for t in 0..steps {
        loop {
            // Smallest |entry| in the trailing block; strict comparison keeps
            // the lowest (row, col) on ties.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let e = &a[i][j];
                    if e.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if e.magnitude() >= a[bi][bj].magnitude() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };

            a.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut right, t, pj);
            right_inv.swap(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &q);
                row_sub(&mut left, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q);
                col_sub(&mut right, j, t, &q);
                // inverse of the column operation acts on rows of right_inv
                let neg = -&q;
                row_sub(&mut right_inv, t, j, &neg);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            let p = a[t][t].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_sub(&mut a, t, i, &minus_one);
                    row_sub(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in left[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    let diag = (0..steps).map(|t| a[t][t].clone()).collect();
    SmithWork { diag, left, right, right_inv }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let w = smith_work(m);
    SmithDecomposition {
        diag: w.diag,
        left: from_grid(m.nrows(), w.left),
        right: from_grid(m.ncols(), w.right),
    }
}

/// Number of nonzero invariant factors.
pub fn rank(m: &IntMatrix) -> usize {
    smith_work(m).diag.iter().filter(|d| !d.is_zero()).count()
}

/// Row-style Hermite normal form of the row span, zero rows dropped.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    from_grid(m.ncols(), hnf_grid(to_grid(m), m.ncols()))
}

fn hnf_grid(mut a: Grid, cols: usize) -> Grid {
    let mut prow = 0;
    for col in 0..cols {
        if prow == a.len() {
            break;
        }
        let mut found = false;
        loop {
            let mut best: Option<usize> = None;
            for i in prow..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a[i][col].magnitude() >= a[b][col].magnitude() => {}
                    _ => best = Some(i),
                }
            }
            let Some(k) = best else { break };
            found = true;
            a.swap(prow, k);
            let mut clean = true;
            for i in prow + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[prow][col]);
                row_sub(&mut a, i, prow, &q);
                clean &= a[i][col].is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if a[prow][col].is_negative() {
            for x in a[prow].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..prow {
            if a[i][col].is_zero() {
                continue;
            }
            let q = a[i][col].div_floor(&a[prow][col]);
            row_sub(&mut a, i, prow, &q);
        }
        prow += 1;
    }
    a.truncate(prow);
    a
}

/// Canonical generators of `K̃ = (K ⊗ ℝ) ∩ ℤⁿ` for the row span `K` of `gens`.
pub fn saturation(gens: &IntMatrix) -> IntMatrix {
    let w = smith_work(gens);
    let r = w.diag.iter().filter(|d| !d.is_zero()).count();
    let basis: Grid = w.right_inv.into_iter().take(r).collect();
    from_grid(gens.ncols(), hnf_grid(basis, gens.ncols()))
}

/// Expresses `v` in the basis given by the rows of an HNF matrix, or `None`
/// when `v` is outside its row span.
fn coordinates_in_hnf(hnf: &Grid, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest: Vec<BigInt> = v.to_vec();
    let mut coords = Vec::with_capacity(hnf.len());
    for row in hnf {
        let pivot = row.iter().position(|e| !e.is_zero())?;
        let (q, rem) = rest[pivot].div_rem(&row[pivot]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

/// Invariant factors of `span(ktilde) / span(k)`.
pub fn quotient_invariants(k: &IntMatrix, ktilde: &IntMatrix) -> Result<AbelianGroup, LatticeError> {
    if k.ncols() != ktilde.ncols() {
        return Err(LatticeError::DimensionMismatch { left: k.ncols(), right: ktilde.ncols() });
    }
    let basis = hnf_grid(to_grid(ktilde), ktilde.ncols());
    let mut coords = Vec::with_capacity(k.nrows());
    for (i, row) in k.rows().iter().enumerate() {
        let c = coordinates_in_hnf(&basis, row.entries()).ok_or(LatticeError::Containment { row: i })?;
        coords.push(IntVector(c));
    }
    let sub_rank = rank(k);
    if sub_rank != basis.len() {
        return Err(LatticeError::Rank { sub: sub_rank, sup: basis.len() });
    }
    let c = IntMatrix { cols: basis.len(), rows: coords };
    Ok(AbelianGroup::from_diagonal(&smith_work(&c).diag))
}

/// Whether the gcd of the entries is 1.
pub fn is_primitive(v: &IntVector) -> Result<bool, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.content().is_one())
}

/// Whether the rows extend to a basis of ℤⁿ.
pub fn is_basis_extendable(vecs: &IntMatrix) -> bool {
    if vecs.nrows() > vecs.ncols() {
        return false;
    }
    smith_work(vecs).diag.iter().all(One::is_one)
}

/// A unimodular `n × n` matrix whose leading rows are the rows of `rows`,
/// or `None` when they do not extend to a basis of ℤⁿ.
pub fn extend_to_basis(rows: &IntMatrix) -> Option<IntMatrix> {
    let n = rows.ncols();
    let r = rows.nrows();
    if r == 0 {
        return Some(IntMatrix::identity(n));
    }
    if !is_basis_extendable(rows) {
        return None;
    }
    // left · rows · right = [I 0], so rows = left⁻¹ · (leading rows of right⁻¹)
    let w = smith_work(rows);
    let left_inv = from_grid(r, w.left).unimodular_inverse()?;
    let head = from_grid(n, w.right_inv[..r].to_vec());
    let mut out = left_inv.mul(&head).ok()?.into_rows();
    out.extend(w.right_inv[r..].iter().map(|row| IntVector(row.clone())));
    Some(IntMatrix { cols: n, rows: out })
}
