//! Small square matrices over `F_q` (n ≤ 4) with a base-q packed key.

use std::fmt;

use crate::field::{FieldElement, FieldTable};

pub const MAX_DIM: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: u8,
    e: [u16; MAX_DIM * MAX_DIM],
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        write!(f, "[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.e[i * n + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Largest key digit count that fits `u64` for a given `q`.
pub fn packable(n: usize, q: u32) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..n * n {
        acc *= q as u128;
    }
    acc <= u64::MAX as u128 + 1
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0 && n <= MAX_DIM);
        Matrix { n: n as u8, e: [0; MAX_DIM * MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    /// Build from row-major field indices.
    pub fn from_rows(rows: &[&[u32]]) -> Self {
        let n = rows.len();
        let mut m = Matrix::zero(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "square matrix expected");
            for (j, &x) in r.iter().enumerate() {
                m.e[i * n + j] = x as u16;
            }
        }
        m
    }

    pub fn diagonal(d: &[FieldElement]) -> Self {
        let mut m = Matrix::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, *x);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        FieldElement::from_index(self.e[i * self.dim() + j] as u32)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        let n = self.dim();
        self.e[i * n + j] = x.index() as u16;
    }

    pub fn diag(&self) -> Vec<FieldElement> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn mul(&self, other: &Matrix, f: &FieldTable) -> Matrix {
        let n = self.dim();
        debug_assert_eq!(n, other.dim());
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::ZERO;
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = f.add(acc, f.mul(a, other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn scale(&self, c: FieldElement, f: &FieldTable) -> Matrix {
        let mut out = *self;
        for x in out.e.iter_mut().take(self.dim() * self.dim()) {
            *x = f.mul(c, FieldElement::from_index(*x as u32)).index() as u16;
        }
        out
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, f: &FieldTable) -> FieldElement {
        let n = self.dim();
        let mut a = *self;
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return FieldElement::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    let t = a.get(piv, j);
                    a.set(piv, j, a.get(col, j));
                    a.set(col, j, t);
                }
                det = f.neg(det);
            }
            let pv = a.get(col, col);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(a.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(a.get(r, j), f.mul(factor, a.get(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self, f: &FieldTable) -> Option<Matrix> {
        let n = self.dim();
        let mut a = *self;
        let mut b = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    let t = a.get(piv, j);
                    a.set(piv, j, a.get(col, j));
                    a.set(col, j, t);
                    let t = b.get(piv, j);
                    b.set(piv, j, b.get(col, j));
                    b.set(col, j, t);
                }
            }
            let inv = f.inv(a.get(col, col)).ok()?;
            for j in 0..n {
                a.set(col, j, f.mul(a.get(col, j), inv));
                b.set(col, j, f.mul(b.get(col, j), inv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(col, j))));
                    b.set(r, j, f.sub(b.get(r, j), f.mul(factor, b.get(col, j))));
                }
            }
        }
        Some(b)
    }

    /// Base-q positional key of the row-major entries, entry (0,0) most significant.
    pub fn pack(&self, q: u32) -> u64 {
        let n = self.dim();
        self.e[..n * n].iter().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
    }

    pub fn unpack(key: u64, n: usize, q: u32) -> Matrix {
        let mut m = Matrix::zero(n);
        let mut k = key;
        for i in (0..n * n).rev() {
            m.e[i] = (k % q as u64) as u16;
            k /= q as u64;
        }
        m
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_unitriangular(&self) -> bool {
        self.is_upper_triangular() && (0..self.dim()).all(|i| self.get(i, i) == FieldElement::ONE)
    }

    /// Entries with `i` in a strictly later block than `j` vanish.
    pub fn is_block_upper(&self, blocks: &[usize]) -> bool {
        let b = block_index(blocks);
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| b[i] <= b[j] || self.get(i, j).is_zero()))
    }

    pub fn is_block_diagonal(&self, blocks: &[usize]) -> bool {
        let b = block_index(blocks);
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| b[i] == b[j] || self.get(i, j).is_zero()))
    }

    /// Block upper triangular with identity diagonal blocks.
    pub fn is_block_unitriangular(&self, blocks: &[usize]) -> bool {
        let b = block_index(blocks);
        let n = self.dim();
        self.is_block_upper(blocks)
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    if b[i] != b[j] {
                        true
                    } else if i == j {
                        self.get(i, j) == FieldElement::ONE
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Keep only the diagonal blocks.
    pub fn block_diagonal_part(&self, blocks: &[usize]) -> Matrix {
        let b = block_index(blocks);
        let n = self.dim();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                if b[i] == b[j] {
                    out.set(i, j, self.get(i, j));
                }
            }
        }
        out
    }

    /// The square sub-block with rows and columns `start..start+len`.
    pub fn sub_block(&self, start: usize, len: usize) -> Matrix {
        let mut out = Matrix::zero(len);
        for i in 0..len {
            for j in 0..len {
                out.set(i, j, self.get(start + i, start + j));
            }
        }
        out
    }

    /// Monomial matrices: exactly one nonzero entry per row and column.
    pub fn monomial_pattern(&self) -> Option<Vec<usize>> {
        let n = self.dim();
        let mut perm = Vec::with_capacity(n);
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&j| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            perm.push(nz[0]);
        }
        let mut seen = vec![false; n];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        Some(perm)
    }
}

/// Block number of each row/column for a composition of `n`.
pub fn block_index(blocks: &[usize]) -> Vec<usize> {
    blocks.iter().enumerate().flat_map(|(b, &len)| std::iter::repeat(b).take(len)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn pack_roundtrip(entries in proptest::collection::vec(0u32..9, 16)) {
            let rows: Vec<&[u32]> = entries.chunks(4).collect();
            let m = Matrix::from_rows(&rows);
            prop_assert_eq!(Matrix::unpack(m.pack(9), 4, 9), m);
        }

        #[test]
        fn pack_is_order_preserving_lexicographically(a in proptest::collection::vec(0u32..3, 4),
                                                      b in proptest::collection::vec(0u32..3, 4)) {
            let ma = Matrix::from_rows(&[&a[0..2], &a[2..4]]);
            let mb = Matrix::from_rows(&[&b[0..2], &b[2..4]]);
            prop_assert_eq!(ma.pack(3).cmp(&mb.pack(3)), a.cmp(&b));
        }
    }

    #[test]
    fn packing_bounds() {
        assert!(packable(4, 9));
        assert!(packable(4, 16));
        assert!(!packable(4, 17));
        assert!(packable(2, 65536));
    }

    #[test]
    fn inverse_and_det() {
        let f = FieldTable::from_order(5).unwrap();
        let m = Matrix::from_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(&f).index(), 3); // 4 - 6 = -2 ≡ 3
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(2));
        let singular = Matrix::from_rows(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse(&f).is_none());
        assert!(singular.det(&f).is_zero());
    }

    #[test]
    fn block_predicates() {
        let m = Matrix::from_rows(&[&[1, 2, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(m.is_block_unitriangular(&[1, 1, 2]));
        assert!(!m.is_block_unitriangular(&[2, 2]));
        assert!(m.is_block_diagonal(&[2, 2]));
        assert_eq!(m.block_diagonal_part(&[1, 1, 1, 1]), Matrix::identity(4));
        let w = Matrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(w.monomial_pattern(), Some(vec![1, 0]));
    }
}
