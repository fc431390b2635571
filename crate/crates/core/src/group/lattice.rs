//! Exact integer matrices and subgroups of `Z^r` represented as lattices.
//!
//! A lattice is stored as the column span of a matrix in column-style Hermite
//! normal form: lower echelon, strictly increasing pivot rows, positive pivots,
//! and every entry left of a pivot reduced into `[0, pivot)`. Zero columns are
//! dropped, so the zero lattice has an empty basis. The form is unique, which
//! makes structural equality the same as lattice equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is wrong.
    pub fn from_row_major<T: Into<BigInt>>(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        IntMatrix {
            rows,
            cols,
            data: entries.into_iter().map(Into::into).collect(),
        }
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let cols = columns.len();
        let mut m = IntMatrix::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length does not match row count");
            for (i, v) in c.iter().enumerate() {
                m.data[i * cols + j] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length does not match column count");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for t in 0..self.cols {
                    acc += self.get(i, t) * other.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn pow(&self, n: u64) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        IntMatrix::from_columns(self.rows, &cols)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    fn col_axpy(&mut self, dst: usize, coef: &BigInt, src: usize) {
        if coef.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = coef * self.get(i, src);
            self.data[i * self.cols + dst] += delta;
        }
    }

    fn col_negate(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Replaces columns `(p, q)` by `(a*p + b*q, c*p + d*q)`.
    fn col_combine(&mut self, p: usize, q: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        for i in 0..self.rows {
            let x = self.get(i, p).clone();
            let y = self.get(i, q).clone();
            self.set(i, p, a * &x + b * &y);
            self.set(i, q, c * &x + d * &y);
        }
    }

    fn truncate_cols(&self, keep: usize) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..keep).map(|j| self.column(j)).collect();
        IntMatrix::from_columns(self.rows, &cols)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Result of a column Hermite reduction `M * U = [H | 0]`.
#[derive(Clone, Debug)]
pub struct HermiteDecomposition {
    /// Nonzero part of the normal form, `rows x rank`.
    pub hnf: IntMatrix,
    /// Unimodular column transform, `cols x cols`.
    pub transform: IntMatrix,
    /// Row index of the pivot in each column of `hnf`.
    pub pivots: Vec<usize>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns of the transform that span the integer kernel of the input.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.transform.cols())
            .map(|j| self.transform.column(j))
            .collect()
    }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column-style Hermite normal form together with the unimodular transform.
pub fn hermite_decomposition(m: &IntMatrix) -> HermiteDecomposition {
    let mut work = m.clone();
    let mut transform = IntMatrix::identity(m.cols());
    let mut pivots = Vec::new();
    let mut pc = 0usize;

    for row in 0..m.rows() {
        if pc == m.cols() {
            break;
        }
        for j in (pc + 1)..m.cols() {
            if work.get(row, j).is_zero() {
                continue;
            }
            let a = work.get(row, pc).clone();
            let b = work.get(row, j).clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let c = -(&b / &g);
            let d = &a / &g;
            work.col_combine(pc, j, &s, &t, &c, &d);
            transform.col_combine(pc, j, &s, &t, &c, &d);
        }
        if work.get(row, pc).is_zero() {
            continue;
        }
        if work.get(row, pc).is_negative() {
            work.col_negate(pc);
            transform.col_negate(pc);
        }
        let pivot = work.get(row, pc).clone();
        for j in 0..pc {
            let q = work.get(row, j).div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                work.col_axpy(j, &nq, pc);
                transform.col_axpy(j, &nq, pc);
            }
        }
        pivots.push(row);
        pc += 1;
    }

    HermiteDecomposition {
        hnf: work.truncate_cols(pc),
        transform,
        pivots,
    }
}

/// Column-style Hermite normal form with zero columns removed.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    hermite_decomposition(m).hnf
}

/// Solves `hnf * w = target` by forward substitution over the pivots.
fn solve_echelon(h: &IntMatrix, pivots: &[usize], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut residual = target.to_vec();
    let mut coeffs = Vec::with_capacity(pivots.len());
    for (j, &p) in pivots.iter().enumerate() {
        let pv = h.get(p, j);
        let (q, r) = residual[p].div_rem(pv);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (i, slot) in residual.iter_mut().enumerate() {
                *slot -= &q * h.get(i, j);
            }
        }
        coeffs.push(q);
    }
    residual.iter().all(Zero::is_zero).then_some(coeffs)
}

/// One integer solution `y` of `m * y = target`, if any exists.
pub fn solve_integer(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(target.len(), m.rows());
    let dec = hermite_decomposition(m);
    let w = solve_echelon(&dec.hnf, &dec.pivots, target)?;
    let mut y = vec![BigInt::zero(); m.cols()];
    for (j, wj) in w.iter().enumerate() {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += dec.transform.get(i, j) * wj;
        }
    }
    Some(y)
}

/// A subgroup of `Z^dim`, kept in canonical Hermite form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let m = IntMatrix::from_columns(dim, gens);
        Lattice::from_matrix(&m)
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let dec = hermite_decomposition(m);
        Lattice {
            dim: m.rows(),
            basis: dec.hnf,
            pivots: dec.pivots,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice::from_generators(dim, &[])
    }

    pub fn full(dim: usize) -> Self {
        Lattice::from_matrix(&IntMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical basis, one column per generator.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && (0..self.dim).all(|j| self.basis.get(j, j).is_one())
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        solve_echelon(&self.basis, &self.pivots, v)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis_columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_matrix(&self.basis.hconcat(&other.basis))
    }

    /// Image of the lattice under `a`.
    pub fn image(&self, a: &IntMatrix) -> Lattice {
        Lattice::from_matrix(&a.mul(&self.basis))
    }

    /// `{x : a * x in self}`.
    pub fn preimage(&self, a: &IntMatrix) -> Lattice {
        assert_eq!(a.rows(), self.dim);
        let stacked = a.hconcat(&self.basis.neg());
        let kernel = hermite_decomposition(&stacked).kernel_basis();
        let gens: Vec<Vec<BigInt>> = kernel.into_iter().map(|k| k[..a.cols()].to_vec()).collect();
        Lattice::from_generators(a.cols(), &gens)
    }

    /// Canonical representative of the coset `v + self`: every pivot coordinate
    /// is reduced into `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let q = out[p].div_floor(self.basis.get(p, j));
            if !q.is_zero() {
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot -= &q * self.basis.get(i, j);
                }
            }
        }
        out
    }

    /// Canonical representatives of `self / sub`, sorted. Returns `None` when the
    /// quotient is infinite (`sub` has smaller rank) or larger than `limit`.
    pub fn coset_representatives(&self, sub: &Lattice, limit: usize) -> Option<Vec<Vec<BigInt>>> {
        assert!(self.contains_lattice(sub), "sublattice is not contained in the lattice");
        if sub.rank() != self.rank() {
            return None;
        }
        let s = self.rank();
        let coords: Vec<Vec<BigInt>> = sub
            .basis_columns()
            .iter()
            .map(|c| self.coordinates(c).expect("sublattice generator"))
            .collect();
        let rel = Lattice::from_generators(s, &coords);
        let diag: Vec<BigInt> = (0..s).map(|j| rel.basis.get(j, j).clone()).collect();
        let mut total = BigInt::one();
        for d in &diag {
            total *= d;
        }
        if total > BigInt::from(limit) {
            return None;
        }
        let mut reps = Vec::new();
        let mut c = vec![BigInt::zero(); s];
        loop {
            let v = self.basis.mul_vec(&c);
            reps.push(sub.reduce(&v));
            let mut i = 0;
            loop {
                if i == s {
                    reps.sort();
                    reps.dedup();
                    return Some(reps);
                }
                c[i] += 1;
                if c[i] < diag[i] {
                    break;
                }
                c[i] = BigInt::zero();
                i += 1;
            }
        }
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(dim={}, basis={:?})", self.dim, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn m(rows: usize, cols: usize, xs: &[i64]) -> IntMatrix {
        IntMatrix::from_row_major(rows, cols, xs.to_vec())
    }

    #[test]
    fn hnf_of_row_is_gcd() {
        assert_eq!(hnf(&m(1, 2, &[4, 6])), m(1, 1, &[2]));
    }

    #[test]
    fn hnf_identity_fixed() {
        assert_eq!(hnf(&IntMatrix::identity(3)), IntMatrix::identity(3));
    }

    #[test]
    fn hnf_column_order_irrelevant() {
        let a = hnf(&m(2, 2, &[2, 0, 0, 3]));
        let b = hnf(&m(2, 2, &[0, 2, 3, 0]));
        assert_eq!(a, b);
        assert_eq!(a, m(2, 2, &[2, 0, 0, 3]));
    }

    #[test]
    fn hnf_zero_matrix_is_empty() {
        let h = hnf(&IntMatrix::zeros(2, 3));
        assert_eq!(h.cols(), 0);
        assert_eq!(h.rows(), 2);
    }

    #[test]
    fn hnf_reduces_left_of_pivot() {
        let h = hnf(&m(2, 2, &[1, 0, 7, 3]));
        assert_eq!(h, m(2, 2, &[1, 0, 1, 3]));
    }

    #[test]
    fn solve_and_membership() {
        let l = Lattice::from_generators(1, &[v(&[3])]);
        assert!(!l.contains(&v(&[7])));
        assert!(l.contains(&v(&[-9])));
        let a = m(2, 3, &[2, 4, 0, 0, 1, 5]);
        let y = solve_integer(&a, &v(&[6, 7])).unwrap();
        assert_eq!(a.mul_vec(&y), v(&[6, 7]));
        assert!(solve_integer(&m(1, 1, &[2]), &v(&[3])).is_none());
    }

    #[test]
    fn preimage_of_six_z_under_doubling() {
        let six = Lattice::from_generators(1, &[v(&[6])]);
        let pre = six.preimage(&m(1, 1, &[2]));
        assert_eq!(pre, Lattice::from_generators(1, &[v(&[3])]));
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let z = Lattice::zero(2);
        let pre = z.preimage(&m(2, 2, &[1, 1, 1, 1]));
        assert_eq!(pre, Lattice::from_generators(2, &[v(&[1, -1])]));
    }

    #[test]
    fn coset_reps_of_index_six() {
        let full = Lattice::full(2);
        let sub = Lattice::from_generators(2, &[v(&[2, 0]), v(&[0, 3])]);
        let reps = full.coset_representatives(&sub, 100).unwrap();
        assert_eq!(reps.len(), 6);
        let lower_rank = Lattice::from_generators(2, &[v(&[2, 0])]);
        assert!(full.coset_representatives(&lower_rank, 100).is_none());
    }

    #[test]
    fn matrix_power() {
        assert_eq!(m(1, 1, &[2]).pow(10), m(1, 1, &[1024]));
        assert_eq!(m(2, 2, &[1, 1, 0, 1]).pow(3), m(2, 2, &[1, 3, 0, 1]));
    }
}
