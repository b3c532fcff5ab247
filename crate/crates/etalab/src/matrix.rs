//! Exact dense linear algebra over a [`Field`].
//!
//! Everything downstream (quotient pieces, syzygies, Tor ranks) reduces to
//! [`DenseMatrix::rref`] and friends. Elimination is written to exploit the
//! sparsity these matrices have in practice: the inner loops skip zero
//! multipliers and zero pivot-row entries before touching field arithmetic,
//! and pivots are chosen to prefer unit entries so rational coefficients do
//! not blow up.

use crate::field::Field;

/// A dense `rows x cols` matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

/// Result of reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: DenseMatrix<F>,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        DenseMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix {
            field,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from integer rows; handy in tests and fixtures.
    pub fn from_i64_rows(field: F, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&n| field.from_i64(n)).collect())
            .collect();
        Self::from_rows(field, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &F::Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut F::Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let prod = f.mul(a, b);
                    let e = out.at_mut(r, c);
                    *e = f.add(e, &prod);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows];
        for r in 0..self.rows {
            let row = self.row(r);
            for (a, b) in row.iter().zip(v) {
                if f.is_zero(a) || f.is_zero(b) {
                    continue;
                }
                let prod = f.mul(a, b);
                out[r] = f.add(&out[r], &prod);
            }
        }
        out
    }

    /// Reduced row echelon form with pivot columns and rank.
    ///
    /// Column order is fixed left to right, so the result is the canonical
    /// RREF. Within a column the pivot row is chosen by the field's
    /// `pivot_weight` (unit entries first), which does not affect the RREF
    /// but keeps intermediate coefficients small.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivot_cols = m.rref_in_place();
        let rank = pivot_cols.len();
        Rref {
            matrix: m,
            pivot_cols,
            rank,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivot_cols = Vec::new();
        let mut next_row = 0usize;
        for col in 0..cols {
            if next_row >= rows {
                break;
            }
            // best pivot candidate at or below next_row
            let mut best: Option<(u64, usize)> = None;
            for r in next_row..rows {
                let e = self.at(r, col);
                if f.is_zero(e) {
                    continue;
                }
                let w = f.pivot_weight(e);
                if best.map_or(true, |(bw, _)| w < bw) {
                    best = Some((w, r));
                    if w == 0 {
                        break;
                    }
                }
            }
            let Some((_, prow)) = best else { continue };
            if prow != next_row {
                for c in col..cols {
                    self.entries
                        .swap(prow * cols + c, next_row * cols + c);
                }
            }
            // normalize pivot row
            let pe = self.at(next_row, col).clone();
            if !f.is_one(&pe) {
                let inv = f.inv(&pe);
                for c in col..cols {
                    let e = self.at_mut(next_row, c);
                    if !f.is_zero(e) {
                        *e = f.mul(e, &inv);
                    }
                }
            }
            // eliminate the pivot column from every other row
            let pivot_row: Vec<F::Elem> = self.row(next_row)[col..].to_vec();
            let stride = cols;
            let eliminate = |r: usize, row: &mut [F::Elem]| {
                if r == next_row {
                    return;
                }
                let factor = row[col].clone();
                if f.is_zero(&factor) {
                    return;
                }
                for (k, pe) in pivot_row.iter().enumerate() {
                    if f.is_zero(pe) {
                        continue;
                    }
                    f.sub_mul_assign(&mut row[col + k], &factor, pe);
                }
                row[col] = f.zero();
            };
            crate::par::for_each_row(&mut self.entries, stride, eliminate);
            pivot_cols.push(col);
            next_row += 1;
        }
        pivot_cols
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of `{ v : A v = 0 }`, returned as the columns of a matrix
    /// with `cols - rank` columns. The basis vector for free column `c` has
    /// a 1 in position `c` and zeros in every other free position.
    pub fn kernel_basis(&self) -> Self {
        let rref = self.rref();
        self.kernel_basis_from(&rref).0
    }

    /// Kernel basis computed from an existing RREF of `self`; same contract
    /// as [`kernel_basis`], plus the list of free columns (the basis vector
    /// for `free[k]` is column `k`).
    ///
    /// [`kernel_basis`]: DenseMatrix::kernel_basis
    pub fn kernel_basis_from(&self, rref: &Rref<F>) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &rref.pivot_cols {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Self::zeros(f.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            *out.at_mut(fc, k) = f.one();
            for (prow, &pc) in rref.pivot_cols.iter().enumerate() {
                let e = rref.matrix.at(prow, fc);
                if !f.is_zero(e) {
                    *out.at_mut(pc, k) = f.neg(e);
                }
            }
        }
        (out, free)
    }

    /// Exact membership of `v` in the column space of `self`.
    pub fn in_column_span(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let base = self.rank();
        let mut aug = Self::zeros(self.field.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = v[r].clone();
        }
        aug.rank() == base
    }
}

/// Incrementally maintained row echelon basis of a subspace of `k^len`,
/// used for span-membership and greedy basis extension. Rows are kept with
/// normalized leading 1 and sorted by pivot position; they are not reduced
/// against each other (forward reduction is enough for membership).
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    len: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, len: usize) -> Self {
        Echelon {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Pivot positions of the stored rows, ascending.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Reduce `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (p, row) in &self.rows {
            let factor = v[*p].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for (k, e) in row.iter().enumerate().skip(*p) {
                if f.is_zero(e) {
                    continue;
                }
                f.sub_mul_assign(&mut v[k], &factor, e);
            }
            v[*p] = f.zero();
        }
    }

    /// Absorb `v` into the span. Returns `true` when `v` enlarged the span
    /// (i.e. `v` was not already a member).
    pub fn absorb(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.len, "dimension mismatch");
        let f = self.field.clone();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|e| !f.is_zero(e)) else {
            return false;
        };
        let inv = f.inv(&v[p]);
        if !f.is_one(&v[p]) {
            for e in v.iter_mut().skip(p) {
                if !f.is_zero(e) {
                    *e = f.mul(e, &inv);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    /// Membership without modifying the span.
    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|e| self.field.is_zero(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent rank oracle: fraction-free Bareiss elimination. Uses the
    /// two-by-two determinant update with exact division by the previous
    /// pivot, a different arithmetic route than straight Gauss-Jordan.
    fn bareiss_rank<F: Field>(m: &DenseMatrix<F>) -> usize {
        let f = m.field().clone();
        let (rows, cols) = (m.rows(), m.cols());
        let mut a: Vec<Vec<F::Elem>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
        let mut prev = f.one();
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..cols {
            if row >= rows {
                break;
            }
            let Some(p) = (row..rows).find(|&r| !f.is_zero(&a[r][col])) else {
                continue;
            };
            a.swap(row, p);
            for r in 0..rows {
                if r == row {
                    continue;
                }
                for c in 0..cols {
                    if c == col {
                        continue;
                    }
                    let t = f.sub(
                        &f.mul(&a[row][col], &a[r][c]),
                        &f.mul(&a[r][col], &a[row][c]),
                    );
                    a[r][c] = f.div(&t, &prev);
                }
                a[r][col] = f.zero();
            }
            prev = a[row][col].clone();
            rank += 1;
            row += 1;
        }
        rank
    }

    fn rand_matrix<F: Field>(
        field: F,
        rng: &mut impl Rng,
        rows: usize,
        cols: usize,
    ) -> DenseMatrix<F> {
        let mut m = DenseMatrix::zeros(field.clone(), rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                *m.at_mut(r, c) = field.from_i64(rng.gen_range(-6..=6));
            }
        }
        m
    }

    #[test]
    fn rref_identity() {
        let id = DenseMatrix::identity(Rationals, 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivot_cols, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = DenseMatrix::from_i64_rows(Rationals, &[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(
            r.matrix,
            DenseMatrix::from_i64_rows(Rationals, &[&[1, 2], &[0, 0]])
        );
    }

    #[test]
    fn rref_rank_matches_bareiss_oracle_over_prime_field() {
        let field = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = rand_matrix(field.clone(), &mut rng, 5, 7);
            assert_eq!(m.rref().rank, bareiss_rank(&m));
        }
    }

    #[test]
    fn rref_rank_matches_bareiss_oracle_over_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let m = rand_matrix(Rationals, &mut rng, 4, 6);
            assert_eq!(m.rref().rank, bareiss_rank(&m));
        }
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        let id = DenseMatrix::identity(Rationals, 3);
        assert_eq!(id.kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let z: DenseMatrix<Rationals> = DenseMatrix::zeros(Rationals, 3, 4);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 4);
        assert_eq!(k, DenseMatrix::identity(Rationals, 4));
    }

    #[test]
    fn kernel_hand_example() {
        // rows (1,1,0), (0,1,1): kernel spanned by (1,-1,1)
        let m = DenseMatrix::from_i64_rows(Rationals, &[&[1, 1, 0], &[0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        let f = Rationals;
        let ratio = f.div(&v[0], &v[2]);
        assert!(f.is_one(&ratio));
        assert_eq!(v[1], f.neg(&v[0]));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn column_span_basics() {
        let f = Rationals;
        let id = DenseMatrix::identity(Rationals, 2);
        assert!(id.in_column_span(&[f.from_i64(3), f.from_i64(-5)]));
        let m = DenseMatrix::from_i64_rows(Rationals, &[&[1], &[0]]);
        assert!(m.in_column_span(&[f.zero(), f.zero()]));
        assert!(!m.in_column_span(&[f.zero(), f.one()]));
    }

    #[test]
    fn echelon_membership_and_extension() {
        let f = Rationals;
        let mut e = Echelon::new(Rationals, 3);
        assert!(e.absorb(vec![f.from_i64(2), f.from_i64(4), f.zero()]));
        assert!(!e.absorb(vec![f.from_i64(1), f.from_i64(2), f.zero()]));
        assert!(e.contains(&[f.from_i64(-3), f.from_i64(-6), f.zero()]));
        assert!(e.absorb(vec![f.zero(), f.one(), f.one()]));
        assert_eq!(e.dim(), 2);
        assert!(!e.contains(&[f.zero(), f.zero(), f.from_i64(5)]));
    }

    proptest::proptest! {
        #[test]
        fn rank_equals_transpose_rank(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = rand_matrix(Rationals, &mut rng, rows, cols);
            proptest::prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity_and_exact_kernel(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000));
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..7);
            let m = rand_matrix(Rationals, &mut rng, rows, cols);
            let k = m.kernel_basis();
            proptest::prop_assert_eq!(m.rank() + k.cols(), m.cols());
            proptest::prop_assert!(m.mul(&k).is_zero());
        }

        #[test]
        fn rref_is_idempotent(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2000));
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = rand_matrix(Rationals, &mut rng, rows, cols);
            let r1 = m.rref().matrix;
            let r2 = r1.rref().matrix;
            proptest::prop_assert_eq!(r1, r2);
        }
    }
}
