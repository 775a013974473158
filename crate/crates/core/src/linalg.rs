//! Exact linear algebra over any [`Field`].
//!
//! Pivoting is deterministic: rows are scanned top to bottom and the pivot of
//! each column is the first row holding a nonzero entry, columns taken left to
//! right. Downstream results (closure sets, systematic encoders, shortening
//! sets) depend on this order being stable.

use crate::error::{Error, Result};
use crate::galois::{ExtElement, Field, FieldTower};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Output of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<E> {
    pub matrix: Matrix<E>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Rref<F::Elem> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !field.is_zero(a.get(r, col))) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = field.inv(a.get(row, col)).expect("nonzero pivot");
        for c in col..a.cols {
            let v = field.mul(a.get(row, c), &inv);
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row || field.is_zero(a.get(r, col)) {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..a.cols {
                let v = field.sub(a.get(r, c), &field.mul(&factor, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        matrix: a,
        rank: pivots.len(),
        pivots,
    }
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref(field, m).rank
}

/// `A x`.
pub fn mul_vec<F: Field>(field: &F, a: &Matrix<F::Elem>, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against {} columns",
            x.len(),
            a.cols()
        )));
    }
    Ok((0..a.rows())
        .map(|r| dot(field, a.row(r), x))
        .collect())
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

/// `A B`.
pub fn mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut out = Matrix::zeros(field, a.rows(), b.cols());
    for r in 0..a.rows() {
        for k in 0..a.cols() {
            let x = a.get(r, k);
            if field.is_zero(x) {
                continue;
            }
            for c in 0..b.cols() {
                let v = field.add(out.get(r, c), &field.mul(x, b.get(k, c)));
                out.set(r, c, v);
            }
        }
    }
    Ok(out)
}

/// Solves `A x = b`, free variables set to zero. `Ok(None)` if inconsistent.
pub fn solve<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows against right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let cols = a.cols();
    let mut aug = Matrix::zeros(field, a.rows(), cols + 1);
    for r in 0..a.rows() {
        for c in 0..cols {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, cols, b[r].clone());
    }
    let red = rref(field, &aug);
    if red.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); cols];
    for (i, &p) in red.pivots.iter().enumerate() {
        x[p] = red.matrix.get(i, cols).clone();
    }
    Ok(Some(x))
}

/// Basis of `{v : M v = 0}`, one vector per non-pivot column, with a 1 in that
/// column and zeros in the other free columns.
pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let red = rref(field, m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols()];
        v[free] = field.one();
        for (i, &p) in red.pivots.iter().enumerate() {
            v[p] = field.neg(red.matrix.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// Incrementally maintained echelon basis for span tests.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    // Each stored row is normalized with a 1 at its pivot.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F) -> Self {
        EchelonBasis {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the residual is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let factor = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` if independent. Returns whether the rank grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push((p, r));
        true
    }
}

/// Coordinate matrix (one row per element, `m` columns) over the base field.
pub fn coordinate_matrix(tower: &FieldTower, v: &[ExtElement]) -> Matrix<u16> {
    let rows = v.iter().map(|e| e.coords().to_vec()).collect();
    Matrix::from_rows(tower.m(), rows).expect("elements of the tower have m coordinates")
}

/// Rank of extension-field elements viewed as vectors over the base field.
pub fn rank_over_base(tower: &FieldTower, v: &[ExtElement]) -> usize {
    rank(tower.base(), &coordinate_matrix(tower, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{build_base_field, BaseField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf2() -> BaseField {
        build_base_field(1).unwrap()
    }

    fn random_matrix<R: Rng>(f: &BaseField, rows: usize, cols: usize, rng: &mut R) -> Matrix<u16> {
        let rows_v = (0..rows)
            .map(|_| (0..cols).map(|_| f.random_element(rng)).collect())
            .collect();
        Matrix::from_rows(cols, rows_v).unwrap()
    }

    // Parity rows of the K4 vertex-edge incidence matrix (edges 01,02,03,12,13,23).
    fn k4_incidence() -> Matrix<u16> {
        Matrix::from_rows(
            6,
            vec![
                vec![1, 1, 1, 0, 0, 0],
                vec![1, 0, 0, 1, 1, 0],
                vec![0, 1, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 1, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = gf2();
        let id = Matrix::identity(&f, 3);
        let r = rref(&f, &id);
        assert_eq!((r.rank, r.pivots.clone()), (3, vec![0, 1, 2]));
        let z = Matrix::zeros(&f, 3, 4);
        let r = rref(&f, &z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn k4_incidence_has_rank_three() {
        let f = gf2();
        assert_eq!(rank(&f, &k4_incidence()), 3);
        let ns = nullspace(&f, &k4_incidence());
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert!(mul_vec(&f, &k4_incidence(), v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_cases() {
        let f = build_base_field(4).unwrap();
        let id = Matrix::identity(&f, 4);
        let b = vec![3u16, 0, 7, 15];
        assert_eq!(solve(&f, &id, &b).unwrap(), Some(b.clone()));
        let z = Matrix::zeros(&f, 2, 2);
        assert_eq!(solve(&f, &z, &[1, 0]).unwrap(), None);
        assert!(solve(&f, &z, &[1]).is_err());
    }

    #[test]
    fn solve_round_trip_gf16() {
        let f = build_base_field(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 100 {
            let a = random_matrix(&f, 5, 5, &mut rng);
            if rank(&f, &a) < 5 {
                continue;
            }
            let b: Vec<u16> = (0..5).map(|_| f.random_element(&mut rng)).collect();
            let x = solve(&f, &a, &b).unwrap().unwrap();
            assert_eq!(mul_vec(&f, &a, &x).unwrap(), b);
            done += 1;
        }
    }

    #[test]
    fn nullspace_small_cases() {
        let f = gf2();
        assert!(nullspace(&f, &Matrix::identity(&f, 3)).is_empty());
        let p = Matrix::from_rows(2, vec![vec![1, 1]]).unwrap();
        assert_eq!(nullspace(&f, &p), vec![vec![1, 1]]);
    }

    #[test]
    fn rank_over_base_cases() {
        let t = FieldTower::with_seed(1, 8, 3).unwrap();
        let basis = vec![t.basis(0), t.basis(1), t.basis(2)];
        assert_eq!(rank_over_base(&t, &basis), 3);

        let t4 = FieldTower::with_seed(4, 3, 3).unwrap();
        let a = ExtElement(vec![5, 1, 9]);
        assert_eq!(rank_over_base(&t4, &[a.clone(), t4.scale(7, &a)]), 1);
    }

    // Independent oracle: Gaussian elimination on u8 bit rows.
    fn bit_rank(mut rows: Vec<u8>) -> usize {
        let mut rank = 0;
        for bit in (0..8).rev() {
            let Some(i) = (rank..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, i);
            let p = rows[rank];
            for (j, r) in rows.iter_mut().enumerate() {
                if j != rank && (*r >> bit) & 1 == 1 {
                    *r ^= p;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_over_base_matches_bit_oracle() {
        let t = FieldTower::with_seed(1, 8, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let bytes: Vec<u8> = (0..4).map(|_| rng.gen::<u8>() & rng.gen::<u8>()).collect();
            let v: Vec<ExtElement> = bytes
                .iter()
                .map(|&b| ExtElement((0..8).map(|i| ((b >> i) & 1) as u16).collect()))
                .collect();
            assert_eq!(rank_over_base(&t, &v), bit_rank(bytes));
        }
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let f = gf2();
        let mut b = EchelonBasis::new(f);
        assert!(b.insert(&[1, 1, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(!b.insert(&[1, 0, 1]));
        assert!(b.contains(&[1, 0, 1]));
        assert!(!b.contains(&[1, 0, 0]));
        assert_eq!(b.rank(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rank_is_transpose_invariant(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7) {
                let f = build_base_field(3).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_matrix(&f, rows, cols, &mut rng);
                prop_assert_eq!(rank(&f, &a), rank(&f, &a.transpose()));
            }

            #[test]
            fn rref_is_idempotent(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7) {
                let f = build_base_field(2).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_matrix(&f, rows, cols, &mut rng);
                let once = rref(&f, &a);
                let twice = rref(&f, &once.matrix);
                prop_assert_eq!(once, twice);
            }

            #[test]
            fn rank_nullity(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..9) {
                let f = build_base_field(4).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_matrix(&f, rows, cols, &mut rng);
                let ns = nullspace(&f, &a);
                prop_assert_eq!(ns.len() + rank(&f, &a), cols);
                for v in &ns {
                    prop_assert!(mul_vec(&f, &a, v).unwrap().iter().all(|&x| x == 0));
                }
                if !ns.is_empty() {
                    let m = Matrix::from_rows(cols, ns.clone()).unwrap();
                    prop_assert_eq!(rank(&f, &m), ns.len());
                }
            }
        }
    }
}
