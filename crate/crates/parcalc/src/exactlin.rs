//! Exact rational linear algebra over coordinate spaces.
//!
//! A [`Subspace`] of Q^n is stored in a canonical form — the unique basis
//! whose matrix is in reduced row echelon form (RREF) with no zero rows — so
//! two subspaces are equal as sets exactly when their representations are
//! equal componentwise. All arithmetic is exact; there are no floats and no
//! tolerances anywhere.
//!
//! Quotients use a deterministic coordinate model: the kernel basis is
//! completed to a basis of the ambient space by greedily appending standard
//! unit vectors in index order (see [`quotient_unit_indices`]), and the
//! quotient coordinates are the coefficients along the appended unit
//! vectors. Callers can therefore interpret quotient coordinates without
//! any hidden choices.

use crate::rational::Rational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Structural failures of the linear algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactLinError {
    #[error("matrix is ragged: row {row} has {got} entries, expected {expected}")]
    RaggedMatrix { row: usize, got: usize, expected: usize },
    #[error("a matrix with no rows has no ambient dimension; use Subspace::from_rows with an explicit dimension")]
    EmptyMatrix,
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector has {got} entries, expected ambient dimension {expected}")]
    VectorLength { got: usize, expected: usize },
}

/// A linear subspace of Q^n in canonical (RREF) form.
///
/// The zero subspace is represented by an empty basis. Equality of values
/// coincides with equality of subspaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    /// The zero subspace of Q^n.
    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    /// The whole space Q^n (basis = identity rows).
    pub fn full(ambient_dim: usize) -> Subspace {
        let basis = (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect();
        Subspace { ambient_dim, basis }
    }

    /// Builds the span of `rows` inside Q^`ambient_dim`, canonicalizing via
    /// row reduction. Rows of the wrong length are rejected.
    pub fn from_rows(ambient_dim: usize, rows: &[Vec<Rational>]) -> Result<Subspace, ExactLinError> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ambient_dim {
                return Err(ExactLinError::RaggedMatrix {
                    row: i,
                    got: r.len(),
                    expected: ambient_dim,
                });
            }
        }
        let mut m: Vec<Vec<Rational>> = rows.to_vec();
        rref_in_place(&mut m);
        Ok(Subspace { ambient_dim, basis: m })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the subspace (number of canonical basis rows).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The canonical RREF basis rows.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Membership test for a single vector.
    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool, ExactLinError> {
        if v.len() != self.ambient_dim {
            return Err(ExactLinError::VectorLength { got: v.len(), expected: self.ambient_dim });
        }
        Ok(reduce_against(&self.basis, v).iter().all(|x| x.is_zero()))
    }

    /// True when `other` is contained in `self` as a set.
    pub fn contains(&self, other: &Subspace) -> Result<bool, ExactLinError> {
        if other.ambient_dim != self.ambient_dim {
            return Err(ExactLinError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        for row in &other.basis {
            if !self.contains_vector(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Reduces `v` against rows assumed to be in RREF (leading 1s, distinct
/// pivot columns), returning the residue. Zero residue means membership.
fn reduce_against(rref_rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let mut v = v.to_vec();
    for row in rref_rows {
        let p = match row.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => continue,
        };
        if !v[p].is_zero() {
            let c = v[p].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi -= &c * ri;
            }
        }
    }
    v
}

/// In-place Gauss–Jordan reduction to RREF. Zero rows are removed, so the
/// surviving rows are the canonical basis of the row space. Returns the
/// pivot columns in increasing order.
fn rref_in_place(m: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut pr = 0usize; // next pivot row
    for pc in 0..cols {
        // Find a row at or below `pr` with a nonzero entry in column `pc`.
        let hit = (pr..rows).find(|&r| !m[r][pc].is_zero());
        let hit = match hit {
            Some(r) => r,
            None => continue,
        };
        m.swap(pr, hit);
        // Scale the pivot row to make the pivot 1.
        let inv = m[pr][pc].recip();
        for x in m[pr].iter_mut() {
            *x *= &inv;
        }
        // Eliminate column `pc` from every other row.
        for r in 0..rows {
            if r != pr && !m[r][pc].is_zero() {
                let c = m[r][pc].clone();
                for j in 0..cols {
                    let s = &c * &m[pr][j];
                    m[r][j] -= s;
                }
            }
        }
        pivot_cols.push(pc);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    m.truncate(pr);
    pivot_cols
}

/// Row-reduces `matrix` and returns its rank together with the canonical
/// basis of its row space.
///
/// The ambient dimension is read off the rows, so a matrix with no rows is
/// rejected; construct the zero subspace with [`Subspace::from_rows`] or
/// [`Subspace::zero`] instead.
pub fn rref(matrix: &[Vec<Rational>]) -> Result<(usize, Subspace), ExactLinError> {
    let first = matrix.first().ok_or(ExactLinError::EmptyMatrix)?;
    let s = Subspace::from_rows(first.len(), matrix)?;
    Ok((s.dim(), s))
}

/// Sum of two subspaces of the same ambient space.
pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, ExactLinError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(ExactLinError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    let mut rows = a.basis.clone();
    rows.extend(b.basis.iter().cloned());
    Subspace::from_rows(a.ambient_dim, &rows)
}

/// Intersection of two subspaces of the same ambient space.
///
/// Uses the Zassenhaus block trick: row-reduce `[A|A; B|0]` and read the
/// intersection off the rows whose left block vanished.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, ExactLinError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(ExactLinError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    let n = a.ambient_dim;
    let mut block: Vec<Vec<Rational>> = Vec::with_capacity(a.dim() + b.dim());
    for u in &a.basis {
        let mut row = u.clone();
        row.extend(u.iter().cloned());
        block.push(row);
    }
    for w in &b.basis {
        let mut row = w.clone();
        row.extend(std::iter::repeat(Rational::zero()).take(n));
        block.push(row);
    }
    rref_in_place(&mut block);
    let mut inter_rows = Vec::new();
    for row in &block {
        if row[..n].iter().all(|x| x.is_zero()) {
            inter_rows.push(row[n..].to_vec());
        }
    }
    Subspace::from_rows(n, &inter_rows)
}

/// The indices of the standard unit vectors that complete `kernel` to a
/// basis of the ambient space, chosen greedily in increasing index order.
///
/// These indices define the coordinates of the quotient model used by
/// [`project_to_quotient`]: quotient coordinate `j` is the coefficient
/// along the `j`-th appended unit vector.
pub fn quotient_unit_indices(kernel: &Subspace) -> Vec<usize> {
    let n = kernel.ambient_dim;
    // Echelon rows (pivot column, row), extended as unit vectors join.
    let mut ech: Vec<(usize, Vec<Rational>)> =
        kernel.basis.iter().map(|r| (r.iter().position(|x| !x.is_zero()).unwrap(), r.clone())).collect();
    let mut picked = Vec::with_capacity(n - kernel.dim());
    for i in 0..n {
        if ech.len() == n {
            break;
        }
        let mut v = unit_vector(n, i);
        for (p, row) in &ech {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi -= &c * ri;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            // Keep the echelon rows ordered by pivot column for the
            // reduction above to stay valid.
            let at = ech.partition_point(|(q, _)| *q < p);
            ech.insert(at, (p, v));
            picked.push(i);
        }
    }
    picked
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(matrix: &[Vec<Rational>]) -> Result<Option<Vec<Vec<Rational>>>, ExactLinError> {
    let n = matrix.len();
    for (i, r) in matrix.iter().enumerate() {
        if r.len() != n {
            return Err(ExactLinError::RaggedMatrix { row: i, got: r.len(), expected: n });
        }
    }
    // Augment with the identity and reduce.
    let mut aug: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (i, r) in matrix.iter().enumerate() {
        let mut row = r.clone();
        row.extend((0..n).map(|j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        aug.push(row);
    }
    let pivots = rref_in_place(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return Ok(None);
    }
    Ok(Some(aug.into_iter().map(|row| row[n..].to_vec()).collect()))
}

/// Image of `s` in the quotient of the ambient space by `kernel`, in the
/// deterministic quotient coordinates of [`quotient_unit_indices`].
///
/// The result lives in a coordinate space of dimension
/// `ambient − dim kernel`, and its dimension always equals
/// `dim(s + kernel) − dim(kernel)`.
pub fn project_to_quotient(s: &Subspace, kernel: &Subspace) -> Result<Subspace, ExactLinError> {
    if s.ambient_dim != kernel.ambient_dim {
        return Err(ExactLinError::AmbientMismatch {
            left: s.ambient_dim,
            right: kernel.ambient_dim,
        });
    }
    let n = s.ambient_dim;
    let k = kernel.dim();
    if k == 0 {
        // Identity coordinate model: the quotient is the ambient space.
        return Ok(s.clone());
    }
    let units = quotient_unit_indices(kernel);
    debug_assert_eq!(units.len(), n - k);
    // Basis of the ambient space: kernel rows first, then the unit vectors.
    let mut c: Vec<Vec<Rational>> = kernel.basis.clone();
    for &i in &units {
        c.push(unit_vector(n, i));
    }
    let cinv = invert(&c)?.expect("completed basis is invertible by construction");
    // v = x · C, so x = v · C^{-1}; the quotient image keeps x[k..].
    let mut images = Vec::with_capacity(s.dim());
    for v in &s.basis {
        let mut x = vec![Rational::zero(); n];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (xj, cij) in x.iter_mut().zip(&cinv[i]) {
                *xj += vi * cij;
            }
        }
        images.push(x[k..].to_vec());
    }
    Subspace::from_rows(n - k, &images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn space(ambient: usize, data: &[&[i64]]) -> Subspace {
        Subspace::from_rows(ambient, &rows(data)).unwrap()
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        let (rank, s) = rref(&rows(&[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(s.basis(), &rows(&[&[1, 2]])[..]);
    }

    #[test]
    fn rref_identity_is_full_rank() {
        let (rank, s) = rref(&rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(rank, 3);
        assert!(s.is_full());
    }

    #[test]
    fn rref_zero_matrix_is_rank_zero() {
        let (rank, s) = rref(&rows(&[&[0, 0, 0, 0], &[0, 0, 0, 0]])).unwrap();
        assert_eq!(rank, 0);
        assert!(s.is_zero());
        assert_eq!(s.ambient_dim(), 4);
    }

    #[test]
    fn rref_rejects_ragged_and_empty() {
        let ragged = vec![vec![int(1), int(2)], vec![int(3)]];
        assert!(matches!(rref(&ragged), Err(ExactLinError::RaggedMatrix { .. })));
        assert!(matches!(rref(&[]), Err(ExactLinError::EmptyMatrix)));
    }

    #[test]
    fn rref_produces_canonical_leading_ones() {
        // (2,4,0),(0,0,3) → rows scaled and eliminated to leading ones.
        let (rank, s) = rref(&rows(&[&[2, 4, 0], &[0, 0, 3]])).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(s.basis(), &rows(&[&[1, 2, 0], &[0, 0, 1]])[..]);
    }

    #[test]
    fn intersect_coordinate_planes() {
        let a = space(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = space(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect(&a, &b).unwrap(), space(3, &[&[0, 1, 0]]));
    }

    #[test]
    fn intersect_with_zero_and_full() {
        let s = space(3, &[&[1, 1, 0]]);
        assert_eq!(intersect(&s, &Subspace::zero(3)).unwrap(), Subspace::zero(3));
        assert_eq!(intersect(&Subspace::full(3), &s).unwrap(), s);
    }

    #[test]
    fn intersect_requires_matching_ambient() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(intersect(&a, &b), Err(ExactLinError::AmbientMismatch { .. })));
    }

    #[test]
    fn quotient_by_first_axis() {
        let kernel = space(3, &[&[1, 0, 0]]);
        let s = space(3, &[&[1, 1, 0]]);
        let q = project_to_quotient(&s, &kernel).unwrap();
        // Quotient coordinates run along e2, e3.
        assert_eq!(quotient_unit_indices(&kernel), vec![1, 2]);
        assert_eq!(q, space(2, &[&[1, 0]]));
    }

    #[test]
    fn quotient_with_zero_kernel_is_identity() {
        let s = space(3, &[&[1, 2, 3]]);
        assert_eq!(project_to_quotient(&s, &Subspace::zero(3)).unwrap(), s);
    }

    #[test]
    fn quotient_of_subspace_inside_kernel_is_zero() {
        let kernel = space(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let s = space(3, &[&[1, 1, 0]]);
        let q = project_to_quotient(&s, &kernel).unwrap();
        assert_eq!(q, Subspace::zero(1));
    }

    #[test]
    fn greedy_completion_can_reuse_pivot_directions() {
        // kernel spanned by (1,1): e1 is independent of it and is picked
        // first even though column 0 is the kernel's pivot column.
        let kernel = space(2, &[&[1, 1]]);
        assert_eq!(quotient_unit_indices(&kernel), vec![0]);
    }

    #[test]
    fn invert_known_matrix() {
        let m = rows(&[&[2, 1], &[1, 1]]);
        let inv = invert(&m).unwrap().unwrap();
        assert_eq!(inv, rows(&[&[1, -1], &[-1, 2]]));
        let singular = rows(&[&[1, 2], &[2, 4]]);
        assert!(invert(&singular).unwrap().is_none());
    }

    #[test]
    fn containment_checks() {
        let s = space(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert!(s.contains_vector(&[int(2), int(-3), int(0)]).unwrap());
        assert!(!s.contains_vector(&[int(0), int(0), int(1)]).unwrap());
        assert!(s.contains(&space(3, &[&[1, 1, 0]])).unwrap());
        assert!(!s.contains(&Subspace::full(3)).unwrap());
        assert!(Subspace::full(3).contains(&s).unwrap());
    }

    // Small random rational matrices for the property tests.
    fn arb_matrix() -> impl Strategy<Value = (usize, Vec<Vec<Rational>>)> {
        (1usize..=4, 0usize..=4).prop_flat_map(|(n, r)| {
            let entry = (-3i64..=3, 1i64..=3).prop_map(|(p, q)| rat(p, q));
            proptest::collection::vec(proptest::collection::vec(entry, n), r)
                .prop_map(move |m| (n, m))
        })
    }

    proptest! {
        #[test]
        fn dimension_formula_holds((n, m1) in arb_matrix(), (_n2, m2) in arb_matrix()) {
            // Reinterpret the second matrix in the same ambient dimension by
            // truncating/padding rows.
            let m2: Vec<Vec<Rational>> = m2
                .into_iter()
                .map(|mut r| {
                    r.resize(n, Rational::zero());
                    r
                })
                .collect();
            let a = Subspace::from_rows(n, &m1).unwrap();
            let b = Subspace::from_rows(n, &m2).unwrap();
            let inter = intersect(&a, &b).unwrap();
            let total = sum(&a, &b).unwrap();
            prop_assert_eq!(inter.dim() + total.dim(), a.dim() + b.dim());
            // The intersection sits inside both inputs.
            prop_assert!(a.contains(&inter).unwrap());
            prop_assert!(b.contains(&inter).unwrap());
        }

        #[test]
        fn rref_is_idempotent((n, m) in arb_matrix()) {
            let s = Subspace::from_rows(n, &m).unwrap();
            let again = Subspace::from_rows(n, s.basis()).unwrap();
            prop_assert_eq!(&again, &s);
        }

        #[test]
        fn quotient_dimension_matches((n, m1) in arb_matrix(), (_n2, m2) in arb_matrix()) {
            let m2: Vec<Vec<Rational>> = m2
                .into_iter()
                .map(|mut r| {
                    r.resize(n, Rational::zero());
                    r
                })
                .collect();
            let s = Subspace::from_rows(n, &m1).unwrap();
            let kernel = Subspace::from_rows(n, &m2).unwrap();
            let q = project_to_quotient(&s, &kernel).unwrap();
            let total = sum(&s, &kernel).unwrap();
            prop_assert_eq!(q.ambient_dim(), n - kernel.dim());
            prop_assert_eq!(q.dim(), total.dim() - kernel.dim());
        }
    }
}
