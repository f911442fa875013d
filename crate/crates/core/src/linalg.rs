//! Exact linear algebra over `F_p`: rank, right kernel, random kernel samples.
//!
//! Everything goes through plain Gaussian elimination with first-nonzero
//! pivoting. Arithmetic is exact, so the pivot choice only affects speed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from residues; values are reduced mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| v % field.modulus()))
            .collect();
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let reduced: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, &reduced)
    }

    /// Builds a matrix from tagged elements, rejecting mixed moduli.
    pub fn from_elements(rows: usize, cols: usize, entries: &[FieldElement]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let Some(first) = entries.first() else {
            return Err(Error::Malformed(
                "empty matrix has no modulus; use Matrix::zeros".into(),
            ));
        };
        if entries.iter().any(|e| e.modulus() != first.modulus()) {
            return Err(Error::Malformed("entries use more than one modulus".into()));
        }
        Ok(Self {
            field: first.field(),
            rows,
            cols,
            data: entries.iter().map(|e| e.value()).collect(),
        })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::Malformed("matrices over different fields".into()));
        }
        if self.cols != other.rows {
            return Err(Error::Malformed(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, c));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Malformed(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b % f.modulus()))
            })
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field || self.cols != other.cols {
            return Err(Error::Malformed("vstack shape or field mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Row-reduces a copy. With `full` the result is in reduced echelon form;
    /// otherwise only entries below pivots are cleared.
    fn eliminate(&self, full: bool) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(found) = (prow..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(prow, found);
            let inv = f.inv(m.get(prow, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let idx = prow * m.cols + c;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            let start = if full { 0 } else { prow + 1 };
            for r in start..m.rows {
                if r == prow {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for c in col..m.cols {
                    let pv = m.data[prow * m.cols + c];
                    if pv != 0 {
                        let idx = r * m.cols + c;
                        m.data[idx] = f.mul_add(m.data[idx], neg, pv);
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rref(&self) -> Echelon {
        self.eliminate(true)
    }

    pub fn rank(&self) -> usize {
        self.eliminate(false).pivots.len()
    }

    /// A basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let ech = self.rref();
        let f = self.field;
        let free = free_columns(self.cols, &ech.pivots);
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(ech.reduced.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// A uniformly random kernel vector, deterministic in `seed`.
    pub fn random_kernel_point(&self, seed: u64) -> Result<Vec<u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_kernel_point_with(&mut rng)
    }

    /// Draws independent uniform coefficients for every vector of
    /// [`Matrix::kernel_basis`] and returns the combination.
    pub fn random_kernel_point_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<u64>> {
        let ech = self.rref();
        let f = self.field;
        let free = free_columns(self.cols, &ech.pivots);
        if free.is_empty() {
            return Err(Error::NoSolution);
        }
        let mut v = vec![0u64; self.cols];
        for &fc in &free {
            v[fc] = rng.gen_range(0..f.modulus());
        }
        for (r, &pc) in ech.pivots.iter().enumerate() {
            let s = free
                .iter()
                .fold(0, |acc, &fc| f.mul_add(acc, ech.reduced.get(r, fc), v[fc]));
            v[pc] = f.neg(s);
        }
        Ok(v)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let ech = aug.rref();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, ech.reduced.get(r, n + c));
            }
        }
        Some(inv)
    }
}

fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(fp(7), 3).rank(), 3);
        assert_eq!(Matrix::zeros(fp(5), 4, 6).rank(), 0);
        let m = Matrix::from_rows(fp(5), &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn mixed_moduli_rejected() {
        let a = fp(5).elem(1);
        let b = fp(7).elem(1);
        let err = Matrix::from_elements(1, 2, &[a, b]).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        assert!(Matrix::from_elements(1, 3, &[a, a]).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(fp(7), 2).kernel_basis().is_empty());

        let m = Matrix::from_rows(fp(5), &[vec![1, 0, 0]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|v| v[0] == 0));

        // x + y = 0 over F_7 -> span of (1, 6)
        let m = Matrix::from_rows(fp(7), &[vec![1, 1], vec![2, 2]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let scale = fp(7).inv(v[0]).unwrap();
        assert_eq!(
            [fp(7).mul(v[0], scale), fp(7).mul(v[1], scale)],
            [1, 6]
        );
    }

    #[test]
    fn random_kernel_examples() {
        let z = Matrix::zeros(fp(7), 1, 2);
        let v = z.random_kernel_point(3).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(z.mul_vec(&v).unwrap(), vec![0]);

        assert!(matches!(
            Matrix::identity(fp(7), 2).random_kernel_point(0),
            Err(Error::NoSolution)
        ));

        let m = Matrix::from_rows(fp(5), &[vec![1, 0, 0]]).unwrap();
        for seed in 0..10 {
            let v = m.random_kernel_point(seed).unwrap();
            assert_eq!(v[0], 0);
            assert_eq!(m.mul_vec(&v).unwrap(), vec![0]);
            assert_eq!(v, m.random_kernel_point(seed).unwrap());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(fp(11), &[vec![2, 3], vec![1, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(fp(11), 2));
        let s = Matrix::from_rows(fp(11), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(s.inverse().is_none());
    }

    fn arb_matrix(p: u64, max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |data| Matrix {
                field: PrimeField::new(p).unwrap(),
                rows: r,
                cols: c,
                data,
            })
        })
    }

    // Low-rank inputs are more interesting than uniform ones over a small field.
    fn arb_low_rank(p: u64) -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6, 1usize..4).prop_flat_map(move |(r, c, k)| {
            (
                prop::collection::vec(0..p, r * k),
                prop::collection::vec(0..p, k * c),
            )
                .prop_map(move |(a, b)| {
                    let f = PrimeField::new(p).unwrap();
                    let a = Matrix { field: f, rows: r, cols: k, data: a };
                    let b = Matrix { field: f, rows: k, cols: c, data: b };
                    a.mul(&b).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in arb_matrix(7, 7)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_of_product((a, b) in (1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(r, k, c)| {
            (prop::collection::vec(0..5u64, r * k), prop::collection::vec(0..5u64, k * c))
                .prop_map(move |(x, y)| {
                    let f = PrimeField::new(5).unwrap();
                    (Matrix { field: f, rows: r, cols: k, data: x },
                     Matrix { field: f, rows: k, cols: c, data: y })
                })
        })) {
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn kernel_vectors_annihilate(m in arb_low_rank(11), seed in any::<u64>()) {
            let basis = m.kernel_basis();
            prop_assert_eq!(m.rank() + basis.len(), m.cols());
            for v in &basis {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
            if !basis.is_empty() {
                let v = m.random_kernel_point(seed).unwrap();
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
            }
        }
    }
}
