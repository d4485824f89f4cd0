//! Finite fields `F_q`, `q = p^k`, with additive and multiplicative characters.
//!
//! Elements are stored as their polynomial-basis index: the element
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` has index `Σ c_i p^i`. Index 0 is zero
//! and index 1 is one. Multiplication goes through exp/log tables for the
//! multiplicative generator; small fields also get full addition and
//! multiplication tables.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{root_of_unity, Real};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Fields up to this order get precomputed `q × q` operation tables.
const OP_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the bound {bound}")]
    TooLarge { p: u32, k: u32, bound: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("multiplicative character index {j} out of range for q = {q}")]
    CharacterIndex { j: u32, q: u32 },
    #[error("multiplicative character evaluated at zero")]
    CharacterAtZero,
    #[error("F_{small} does not embed in F_{large}")]
    NoEmbedding { small: u32, large: u32 },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
}

impl FieldSpec {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q *= p as u64;
            if q > MAX_FIELD_ORDER as u64 {
                return Err(FieldError::TooLarge { p, k, bound: MAX_FIELD_ORDER });
            }
        }
        Ok(FieldSpec { p, k, q: q as u32 })
    }

    /// Parse a field order `q` into `(p, k)`.
    pub fn from_order(q: u32) -> Result<Self, FieldError> {
        if q < 2 {
            return Err(FieldError::NotPrimePower(q));
        }
        let p = (2..=q).find(|d| q % d == 0).expect("q ≥ 2 has a prime factor");
        let mut rest = q;
        let mut k = 0;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrimePower(q));
        }
        FieldSpec::new(p, k)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
}

/// An element of `F_q` by polynomial-basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wrap a raw index. The caller is responsible for `index < q`.
    pub const fn from_index(index: u32) -> Self {
        FieldElement(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
pub struct FieldTable {
    spec: FieldSpec,
    /// Monic modulus, coefficient of `x^i` at position `i`.
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
}

fn digits(mut index: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push(index % p);
        index /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut x = 1u64;
            for i in 1..p - 1 {
                x = x * g as u64 % p as u64;
                if x == 1 && i < p - 1 {
                    return false;
                }
            }
            true
        })
        .expect("every prime has a primitive root")
}

/// Multiply the element with digit vector `d` by `x` modulo the monic polynomial
/// with lower coefficients `low`.
fn times_x(d: &[u32], low: &[u32], p: u32) -> Vec<u32> {
    let k = d.len();
    let top = d[k - 1];
    let mut out = vec![0u32; k];
    for i in (1..k).rev() {
        out[i] = d[i - 1];
    }
    for i in 0..k {
        // x^k ≡ -Σ low_i x^i
        out[i] = (out[i] + (p - low[i]) * top) % p;
    }
    out
}

/// Powers of `x` modulo the monic polynomial with lower coefficients `low`,
/// if `x` has multiplicative order exactly `p^k - 1`.
fn primitive_powers(low: &[u32], p: u32, q: u32) -> Option<Vec<u32>> {
    let k = low.len();
    let mut exp = Vec::with_capacity((q - 1) as usize);
    let mut cur = vec![0u32; k];
    cur[0] = 1;
    for i in 0..q - 1 {
        let idx = undigits(&cur, p);
        if i > 0 && idx == 1 {
            return None;
        }
        exp.push(idx);
        cur = times_x(&cur, low, p);
    }
    (undigits(&cur, p) == 1).then_some(exp)
}

impl FieldTable {
    /// Build `F_q`. The modulus is the lexicographically smallest primitive
    /// polynomial of degree `k` (coefficients compared from `x^{k-1}` down to the
    /// constant term); for `k = 1` it is `x - g` with `g` the smallest primitive root.
    pub fn new(spec: FieldSpec) -> Self {
        let FieldSpec { p, k, q } = spec;
        let (modulus, exp) = if k == 1 {
            let g = smallest_primitive_root(p);
            let mut exp = Vec::with_capacity((p - 1) as usize);
            let mut x = 1u64;
            for _ in 0..p - 1 {
                exp.push(x as u32);
                x = x * g as u64 % p as u64;
            }
            (vec![(p - g) % p, 1], exp)
        } else {
            let mut found = None;
            for c in 0..q {
                let low = digits(c, p, k);
                if low[0] == 0 {
                    continue;
                }
                if let Some(exp) = primitive_powers(&low, p, q) {
                    let mut m = low;
                    m.push(1);
                    found = Some((m, exp));
                    break;
                }
            }
            found.expect("a primitive polynomial exists in every degree")
        };
        let mut log = vec![u32::MAX; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let generator = FieldElement(exp.get(1).copied().unwrap_or(1));
        let neg = (0..q)
            .map(|a| undigits(&digits(a, p, k).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let mut table = FieldTable {
            spec,
            modulus,
            generator,
            exp,
            log,
            trace: Vec::new(),
            neg,
            add_table: None,
            mul_table: None,
        };
        if q <= OP_TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(table.add_slow(a, b) as u16);
                    mul.push(table.mul_slow(a, b) as u16);
                }
            }
            table.add_table = Some(add);
            table.mul_table = Some(mul);
        }
        table.trace = (0..q)
            .map(|x| {
                let mut acc = FieldElement::ZERO;
                let mut power = FieldElement(x);
                for _ in 0..k {
                    acc = table.add(acc, power);
                    power = table.pow(power, p as u64);
                }
                assert!(acc.0 < p, "trace lands in the prime field");
                acc.0
            })
            .collect();
        table
    }

    pub fn from_order(q: u32) -> Result<Self, FieldError> {
        Ok(FieldTable::new(FieldSpec::from_order(q)?))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
    pub fn p(&self) -> u32 {
        self.spec.p
    }
    pub fn k(&self) -> u32 {
        self.spec.k
    }
    pub fn q(&self) -> u32 {
        self.spec.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn element(&self, index: u32) -> Option<FieldElement> {
        (index < self.spec.q).then_some(FieldElement(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.spec.q).map(FieldElement)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.spec.q).map(FieldElement)
    }

    /// Image of the integer `n` under `Z → F_p ⊆ F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.spec.p as i64) as u32)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.spec.q - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[e as usize]
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.spec.q + b.0) as usize] as u32),
            None => FieldElement(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.mul_table {
            Some(t) => FieldElement(t[(a.0 * self.spec.q + b.0) as usize] as u32),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.spec.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = (self.spec.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % n)) % n) as usize])
    }

    /// `g^i` for the fixed generator `g`.
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % (self.spec.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm to base `g`; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// Absolute trace `F_q → F_p`, returned as an integer in `[0, p)`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.trace[a.0 as usize]
    }

    pub fn additive_character(&self, a: FieldElement) -> AdditiveCharacter<'_> {
        AdditiveCharacter { table: self, a }
    }

    pub fn multiplicative_character(&self, j: u32) -> Result<MultiplicativeCharacter<'_>, FieldError> {
        if j >= self.spec.q - 1 {
            return Err(FieldError::CharacterIndex { j, q: self.spec.q });
        }
        Ok(MultiplicativeCharacter { table: self, j })
    }

    /// Field embedding `self → large`, as the image of every element of `self`.
    ///
    /// The generator `x` of `self` goes to the smallest-index root of this
    /// field's modulus in `large`.
    pub fn embedding_into(&self, large: &FieldTable) -> Result<Vec<FieldElement>, FieldError> {
        let err = FieldError::NoEmbedding { small: self.q(), large: large.q() };
        if self.p() != large.p() || large.k() % self.k() != 0 {
            return Err(err);
        }
        if self.k() == 1 {
            return Ok(self.elements().collect());
        }
        let eval = |h: FieldElement| {
            self.modulus
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| large.add(large.mul(acc, h), FieldElement(c)))
        };
        let root = large.elements().find(|&h| eval(h).is_zero()).ok_or(err)?;
        let map = self
            .elements()
            .map(|a| {
                digits(a.0, self.p(), self.k())
                    .iter()
                    .rev()
                    .fold(FieldElement::ZERO, |acc, &c| large.add(large.mul(acc, root), FieldElement(c)))
            })
            .collect();
        Ok(map)
    }
}

/// `x ↦ ζ_p^{Tr(a·x)}` with `ζ_p = exp(2πi/p)`.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveCharacter<'a> {
    table: &'a FieldTable,
    a: FieldElement,
}

impl AdditiveCharacter<'_> {
    pub fn parameter(&self) -> FieldElement {
        self.a
    }

    /// Exponent of `ζ_p` at `x`.
    pub fn exponent(&self, x: FieldElement) -> u32 {
        self.table.trace(self.table.mul(self.a, x))
    }

    pub fn eval<S: Real>(&self, x: FieldElement) -> Complex<S> {
        root_of_unity(self.exponent(x) as u64, self.table.p() as u64)
    }
}

/// `x ↦ ζ_{q-1}^{j·log x}` on `F_q^×`.
#[derive(Debug, Clone, Copy)]
pub struct MultiplicativeCharacter<'a> {
    table: &'a FieldTable,
    j: u32,
}

impl MultiplicativeCharacter<'_> {
    pub fn index(&self) -> u32 {
        self.j
    }

    pub fn exponent(&self, x: FieldElement) -> Result<u64, FieldError> {
        let l = self.table.log(x).ok_or(FieldError::CharacterAtZero)? as u64;
        Ok(l * self.j as u64 % (self.table.q() as u64 - 1))
    }

    pub fn eval<S: Real>(&self, x: FieldElement) -> Result<Complex<S>, FieldError> {
        Ok(root_of_unity(self.exponent(x)?, self.table.q() as u64 - 1))
    }
}
