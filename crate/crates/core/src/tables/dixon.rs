//! Burnside–Dixon–Schneider character tables over a splitting prime field.
//!
//! Class-sum operators `M_j` with `(M_j)[i][k] = a_{ijk}` act on the vector of
//! central character values `ω_χ(C_k) = |C_k|·χ(g_k)/χ(1)`; the joint
//! eigenvectors over `F_l` give each `ω_χ` mod `l`, and the character values are
//! lifted back to `Q(ζ_e)` by discrete Fourier inversion on each cyclic
//! subgroup `<g_k>`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IrreducibleTable, TableError};
use crate::classfun::ClassFunction;
use crate::groups::EnumeratedGroup;
use crate::scalar::{root_of_unity, Real};

/// Seed for the random linear combinations used to split eigenspaces.
pub const DIXON_SEED: u64 = 0x6765_6e72_6573_74;

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }
    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    fn inv(self, a: u64) -> u64 {
        assert!(a % self.0 != 0, "inverse of zero mod {}", self.0);
        self.pow(a, self.0 - 2)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `l ≡ 1 (mod exponent)` with `l > 2√order`.
pub fn splitting_prime(exponent: u64, order: u64) -> Result<u64, TableError> {
    let mut l = exponent + 1;
    while l < 1 << 31 {
        if l * l > 4 * order && is_prime_u64(l) {
            return Ok(l);
        }
        l += exponent;
    }
    Err(TableError::NoPrime { exponent })
}

fn primitive_root(fp: Fp) -> u64 {
    let l = fp.0;
    let mut factors = Vec::new();
    let mut m = l - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..l).find(|&g| factors.iter().all(|&p| fp.pow(g, (l - 1) / p) != 1)).expect("prime fields are cyclic")
}

/// Rows of a matrix in reduced row echelon form, with pivot columns.
fn rref(fp: Fp, mut rows: Vec<Vec<u64>>) -> (Vec<Vec<u64>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = fp.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for k in 0..ncols {
                    let t = fp.mul(factor, rows[r][k]);
                    rows[i][k] = fp.sub(rows[i][k], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of the null space of a square matrix.
fn null_space(fp: Fp, m: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let n = m.len();
    let (rows, pivots) = rref(fp, m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = fp.sub(0, row[f]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (coefficients from the constant term up) via
/// reduction to Hessenberg form.
fn char_poly(fp: Fp, mut h: Vec<Vec<u64>>) -> Vec<u64> {
    let n = h.len();
    for c in 0..n.saturating_sub(2) {
        let Some(i) = (c + 1..n).find(|&i| h[i][c] != 0) else { continue };
        if i != c + 1 {
            h.swap(i, c + 1);
            for row in h.iter_mut() {
                row.swap(i, c + 1);
            }
        }
        let inv = fp.inv(h[c + 1][c]);
        for r in c + 2..n {
            let u = fp.mul(h[r][c], inv);
            if u == 0 {
                continue;
            }
            for k in 0..n {
                let t = fp.mul(u, h[c + 1][k]);
                h[r][k] = fp.sub(h[r][k], t);
            }
            for row in h.iter_mut() {
                let t = fp.mul(u, row[r]);
                row[c + 1] = fp.add(row[c + 1], t);
            }
        }
    }
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &p[m - 1];
        let mut cur = vec![0u64; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            cur[d + 1] = fp.add(cur[d + 1], c);
            cur[d] = fp.sub(cur[d], fp.mul(h[m - 1][m - 1], c));
        }
        let mut t = 1;
        for k in (1..m).rev() {
            t = fp.mul(t, h[k][k - 1]);
            let coef = fp.mul(t, h[k - 1][m - 1]);
            for (d, &c) in p[k - 1].iter().enumerate() {
                cur[d] = fp.sub(cur[d], fp.mul(coef, c));
            }
        }
        p.push(cur);
    }
    p.pop().expect("nonempty")
}

fn roots(fp: Fp, poly: &[u64]) -> Vec<u64> {
    (0..fp.0)
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| fp.add(fp.mul(acc, x), c)) == 0)
        .collect()
}

/// Split an invariant subspace (RREF basis `basis`, pivots `pivots`) along the
/// eigenvalues of `op`. `None` if `op` acts as a scalar on it.
fn split(fp: Fp, op: &[Vec<u64>], basis: &[Vec<u64>], pivots: &[usize]) -> Option<Vec<Vec<Vec<u64>>>> {
    let d = basis.len();
    let r = op.len();
    // Image of each basis vector, expressed in the basis via the pivot coordinates.
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| (0..r).map(|i| (0..r).fold(0, |acc, k| fp.add(acc, fp.mul(op[i][k], b[k])))).collect())
        .collect();
    let x: Vec<Vec<u64>> = (0..d).map(|t| (0..d).map(|s| images[s][pivots[t]]).collect()).collect();
    let eigen = roots(fp, &char_poly(fp, x.clone()));
    if eigen.len() < 2 {
        return None;
    }
    let mut parts = Vec::new();
    for lam in eigen {
        let mut shifted = x.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = fp.sub(row[i], lam);
        }
        let coords = null_space(fp, shifted);
        let vecs: Vec<Vec<u64>> = coords
            .iter()
            .map(|c| (0..r).map(|k| (0..d).fold(0, |acc, s| fp.add(acc, fp.mul(c[s], basis[s][k])))).collect())
            .collect();
        parts.push(vecs);
    }
    Some(parts)
}

/// Full irreducible character table by the Dixon–Schneider method.
pub fn dixon_table<S: Real>(group: &Arc<EnumeratedGroup>) -> Result<IrreducibleTable<S>, TableError> {
    let g = group;
    let r = g.class_count();
    let order = g.order() as u64;
    let e = g.exponent();
    let l = splitting_prime(e, order)?;
    let fp = Fp(l);
    log::debug!("dixon on {}: {r} classes, exponent {e}, l = {l}", g.label());

    // a[j][i][k] = #{y ∈ C_j : z_k y⁻¹ ∈ C_i}
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (k, ck) in g.classes().iter().enumerate() {
        let z = ck.representative;
        for y in 0..g.order() as u32 {
            let i = g.class_of(g.mul(z, g.inverse(y)));
            a[g.class_of(y)][i][k] += 1;
        }
    }
    let ops: Vec<Vec<Vec<u64>>> =
        a.iter().map(|m| m.iter().map(|row| row.iter().map(|&x| x % l).collect()).collect()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(DIXON_SEED);
    let coeffs: Vec<u64> = (0..r).map(|_| rng.gen_range(0..l)).collect();
    let mut combo = vec![vec![0u64; r]; r];
    for (c, m) in coeffs.iter().zip(&ops) {
        for i in 0..r {
            for k in 0..r {
                combo[i][k] = fp.add(combo[i][k], fp.mul(*c, m[i][k]));
            }
        }
    }
    let mut candidates = vec![&combo];
    candidates.extend(ops.iter());

    let identity: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|k| u64::from(i == k)).collect()).collect();
    let mut pending = vec![identity];
    let mut lines: Vec<Vec<u64>> = Vec::new();
    while let Some(space) = pending.pop() {
        let (basis, pivots) = rref(fp, space);
        if basis.len() == 1 {
            lines.push(basis.into_iter().next().expect("one vector"));
            continue;
        }
        let parts = candidates
            .iter()
            .find_map(|op| split(fp, op, &basis, &pivots))
            .ok_or_else(|| TableError::Separation(format!("{}-dimensional joint eigenspace", basis.len())))?;
        let total: usize = parts.iter().map(Vec::len).sum();
        if total != basis.len() {
            return Err(TableError::Separation("operator not diagonalizable on a joint eigenspace".into()));
        }
        pending.extend(parts);
    }
    if lines.len() != r {
        return Err(TableError::Separation(format!("{} eigenvectors for {r} classes", lines.len())));
    }

    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size() as u64).collect();
    let inv_class = g.inverse_classes();
    let power_classes: Vec<Vec<usize>> =
        g.classes().iter().map(|c| g.powers(c.representative).iter().map(|&x| g.class_of(x)).collect()).collect();
    let z = fp.pow(primitive_root(fp), (l - 1) / e);

    let mut rows: Vec<Vec<Complex<S>>> = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for v in lines {
        if v[0] == 0 {
            return Err(TableError::Separation("eigenvector vanishes at the identity class".into()));
        }
        let norm = fp.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| fp.mul(x, norm)).collect();
        let s = (0..r).fold(0, |acc, k| fp.add(acc, fp.mul(fp.mul(omega[k], omega[inv_class[k]]), fp.inv(sizes[k]))));
        let d2 = fp.mul(order % l, fp.inv(s));
        let d = (1..=(l - 1) / 2)
            .find(|&d| fp.mul(d, d) == d2)
            .ok_or_else(|| TableError::Separation("degree is not a square root mod l".into()))?;
        let chi_l: Vec<u64> = (0..r).map(|k| fp.mul(fp.mul(d, omega[k]), fp.inv(sizes[k]))).collect();
        let mut values = Vec::with_capacity(r);
        for k in 0..r {
            let pc = &power_classes[k];
            let o = pc.len() as u64;
            let zo = fp.pow(z, e / o);
            let inv_o = fp.inv(o % l);
            let mut value = Complex::new(S::zero(), S::zero());
            let mut count = 0u64;
            for m in 0..o {
                // c_m = (1/o) Σ_t χ(g^t) ζ_o^{-mt}
                let mut c = 0;
                for (t, &cls) in pc.iter().enumerate() {
                    let w = fp.pow(zo, (o - (m * t as u64) % o) % o);
                    c = fp.add(c, fp.mul(chi_l[cls], w));
                }
                let c = fp.mul(c, inv_o);
                if c > d {
                    return Err(TableError::Separation(format!("eigenvalue multiplicity {c} exceeds degree {d}")));
                }
                count += c;
                value += root_of_unity::<S>(m, o) * S::from_u64(c).expect("fits");
            }
            if count != d {
                return Err(TableError::Separation("eigenvalue multiplicities do not sum to the degree".into()));
            }
            values.push(value);
        }
        degrees.push(d);
        rows.push(values);
    }

    let mut order_idx: Vec<usize> = (0..r).collect();
    let is_trivial = |row: &[Complex<S>]| row.iter().all(|v| (v.re - S::one()).abs() < S::zero_tol() && v.im.abs() < S::zero_tol());
    let grid = |x: S| (x.to_f64().unwrap_or(0.0) * 1e9).round() as i64;
    order_idx.sort_by(|&x, &y| {
        is_trivial(&rows[y])
            .cmp(&is_trivial(&rows[x]))
            .then(degrees[x].cmp(&degrees[y]))
            .then_with(|| {
                rows[x]
                    .iter()
                    .zip(&rows[y])
                    .map(|(a, b)| (grid(a.re), grid(a.im)).cmp(&(grid(b.re), grid(b.im))))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
    });
    let mut out_rows = Vec::with_capacity(r);
    let mut labels = Vec::with_capacity(r);
    for (n, &i) in order_idx.iter().enumerate() {
        out_rows.push(ClassFunction::new(g.clone(), rows[i].clone())?);
        labels.push(format!("dixon-row-{n}"));
    }
    IrreducibleTable::new(g.clone(), out_rows, labels)
}
