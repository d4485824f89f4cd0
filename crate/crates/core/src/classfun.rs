//! Complex class functions on enumerated groups: inner products, induction,
//! restriction and Harish-Chandra induction/restriction.

use std::sync::Arc;

use num_complex::Complex;
use thiserror::Error;

use crate::groups::{levi_decompose, EnumeratedGroup, GroupError, Matrix, Reductive};
use crate::scalar::{round_integer, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassFnError {
    #[error("class functions live on different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },
    #[error("expected {expected} class values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("{0} is not a subgroup of {1}")]
    NotSubgroup(String, String),
    #[error("class function on {got} is not on the Levi {levi} of parabolic {tag}")]
    NotOnLevi { got: String, levi: String, tag: String },
    #[error("{context}: value {re} + {im}i is not an integer within tolerance")]
    NotIntegral { context: String, re: f64, im: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A complex function on conjugacy classes, ordered as in the group's class list.
#[derive(Debug, Clone)]
pub struct ClassFunction<S> {
    group: Arc<EnumeratedGroup>,
    values: Vec<Complex<S>>,
}

fn check_same<S: Real>(a: &ClassFunction<S>, b: &ClassFunction<S>) -> Result<(), ClassFnError> {
    if a.group.same_group(&b.group) {
        Ok(())
    } else {
        Err(ClassFnError::GroupMismatch { left: a.group.label().into(), right: b.group.label().into() })
    }
}

/// Round an inner product or character sum to an integer, with a hard failure
/// when the deviation exceeds the zero tolerance.
pub fn to_integer<S: Real>(z: Complex<S>, context: &str) -> Result<i64, ClassFnError> {
    round_integer(z, S::zero_tol()).map_err(|e| ClassFnError::NotIntegral { context: context.into(), re: e.re, im: e.im })
}

impl<S: Real> ClassFunction<S> {
    pub fn new(group: Arc<EnumeratedGroup>, values: Vec<Complex<S>>) -> Result<Self, ClassFnError> {
        if values.len() != group.class_count() {
            return Err(ClassFnError::Length { expected: group.class_count(), got: values.len() });
        }
        Ok(ClassFunction { group, values })
    }

    pub fn constant(group: Arc<EnumeratedGroup>, c: Complex<S>) -> Self {
        let values = vec![c; group.class_count()];
        ClassFunction { group, values }
    }

    pub fn trivial(group: Arc<EnumeratedGroup>) -> Self {
        Self::constant(group, Complex::new(S::one(), S::zero()))
    }

    pub fn zero(group: Arc<EnumeratedGroup>) -> Self {
        Self::constant(group, Complex::new(S::zero(), S::zero()))
    }

    /// Evaluate `f` at each class representative.
    pub fn from_representatives(group: Arc<EnumeratedGroup>, mut f: impl FnMut(&Matrix) -> Complex<S>) -> Self {
        let values = group.classes().iter().map(|c| f(group.element(c.representative))).collect();
        ClassFunction { group, values }
    }

    pub fn group(&self) -> &Arc<EnumeratedGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex<S>] {
        &self.values
    }

    pub fn value(&self, class: usize) -> Complex<S> {
        self.values[class]
    }

    /// Value at an element index.
    pub fn at(&self, element: u32) -> Complex<S> {
        self.values[self.group.class_of(element)]
    }

    /// Value at the identity class.
    pub fn degree(&self) -> Complex<S> {
        self.values[0]
    }

    pub fn map(&self, f: impl Fn(Complex<S>) -> Complex<S>) -> Self {
        ClassFunction { group: self.group.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex<S>, Complex<S>) -> Complex<S>) -> Result<Self, ClassFnError> {
        check_same(self, other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(ClassFunction { group: self.group.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self, ClassFnError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ClassFnError> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product (tensor product of characters).
    pub fn mul(&self, other: &Self) -> Result<Self, ClassFnError> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `(1/|G|) Σ_C |C|·f(C)·conj(g(C))`.
    pub fn inner(&self, other: &Self) -> Result<Complex<S>, ClassFnError> {
        check_same(self, other)?;
        let g = &self.group;
        let mut acc = Complex::new(S::zero(), S::zero());
        for (i, c) in g.classes().iter().enumerate() {
            acc += self.values[i] * other.values[i].conj() * S::from_usize_lossy(c.size());
        }
        Ok(acc / S::from_usize_lossy(g.order()))
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self).expect("same group").re
    }

    /// Inner product rounded to an integer.
    pub fn multiplicity(&self, other: &Self) -> Result<i64, ClassFnError> {
        to_integer(self.inner(other)?, "inner product")
    }

    pub fn is_zero(&self, tol: S) -> bool {
        self.values.iter().all(|v| v.norm() < tol)
    }

    pub fn max_distance(&self, other: &Self) -> Result<S, ClassFnError> {
        check_same(self, other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(S::zero(), S::max))
    }

    /// Self-inner-product is one.
    pub fn is_irreducible_character(&self) -> bool {
        (self.norm_sq() - S::one()).abs() < S::zero_tol() && self.degree().re > S::zero()
    }
}

/// `|G| / (|H|·|C|) · Σ_{h ∈ H ∩ C} f(h)` from per-element values on `H`,
/// given as `(index in G, f(h))` for every `h ∈ H`. `f` must be a class
/// function on `H`.
pub fn induce_from_elements<S: Real>(
    group: &Arc<EnumeratedGroup>,
    sub_order: usize,
    elements: impl Iterator<Item = (u32, Complex<S>)>,
) -> ClassFunction<S> {
    let mut sums = vec![Complex::new(S::zero(), S::zero()); group.class_count()];
    for (g, v) in elements {
        sums[group.class_of(g)] += v;
    }
    let order = S::from_usize_lossy(group.order());
    let values = sums
        .into_iter()
        .zip(group.classes())
        .map(|(s, c)| s * order / (S::from_usize_lossy(sub_order) * S::from_usize_lossy(c.size())))
        .collect();
    ClassFunction { group: group.clone(), values }
}

fn parent_indices(group: &EnumeratedGroup, sub: &EnumeratedGroup) -> Result<Vec<u32>, ClassFnError> {
    if group.dim() != sub.dim() || group.field().q() != sub.field().q() {
        return Err(ClassFnError::NotSubgroup(sub.label().into(), group.label().into()));
    }
    sub.keys()
        .iter()
        .map(|&k| group.index_of_key(k).ok_or_else(|| ClassFnError::NotSubgroup(sub.label().into(), group.label().into())))
        .collect()
}

/// Induced class function from the subgroup carrying `f` up to `group`.
pub fn induce<S: Real>(group: &Arc<EnumeratedGroup>, f: &ClassFunction<S>) -> Result<ClassFunction<S>, ClassFnError> {
    let sub = f.group();
    let parents = parent_indices(group, sub)?;
    let elements = parents.iter().enumerate().map(|(h, &g)| (g, f.at(h as u32)));
    Ok(induce_from_elements(group, sub.order(), elements))
}

/// Restriction of `f` to a subgroup `sub`.
pub fn restrict<S: Real>(f: &ClassFunction<S>, sub: &Arc<EnumeratedGroup>) -> Result<ClassFunction<S>, ClassFnError> {
    let group = f.group();
    if group.dim() != sub.dim() || group.field().q() != sub.field().q() {
        return Err(ClassFnError::NotSubgroup(sub.label().into(), group.label().into()));
    }
    let mut values = Vec::with_capacity(sub.class_count());
    for c in sub.classes() {
        let g = group
            .index_of(sub.element(c.representative))
            .ok_or_else(|| ClassFnError::NotSubgroup(sub.label().into(), group.label().into()))?;
        values.push(f.at(g));
    }
    Ok(ClassFunction { group: sub.clone(), values })
}

fn check_on_levi<S: Real>(red: &Reductive, par_idx: usize, sigma: &ClassFunction<S>) -> Result<(), ClassFnError> {
    let par = &red.data.parabolics[par_idx];
    if sigma.group().same_group(&par.levi) {
        Ok(())
    } else {
        Err(ClassFnError::NotOnLevi { got: sigma.group().label().into(), levi: par.levi.label().into(), tag: par.tag.clone() })
    }
}

/// Harish-Chandra induction: inflate `sigma` from the Levi to `P` through `P → M`,
/// then induce to the whole group. No modulus twist.
pub fn hc_induce<S: Real>(
    red: &Reductive,
    par_idx: usize,
    sigma: &ClassFunction<S>,
) -> Result<ClassFunction<S>, ClassFnError> {
    check_on_levi(red, par_idx, sigma)?;
    let par = &red.data.parabolics[par_idx];
    let g = &red.group;
    let mut inflated = Vec::with_capacity(par.members.len());
    for &p in &par.members {
        let d = levi_decompose(g, par, p)?;
        inflated.push((p, sigma.at(d.levi)));
    }
    Ok(induce_from_elements(g, par.members.len(), inflated.into_iter()))
}

/// Harish-Chandra restriction: `m ↦ (1/|N|) Σ_{n ∈ N} π(mn)` on the Levi.
pub fn hc_restrict<S: Real>(
    red: &Reductive,
    par_idx: usize,
    pi: &ClassFunction<S>,
) -> Result<ClassFunction<S>, ClassFnError> {
    if !pi.group().same_group(&red.group) {
        return Err(ClassFnError::GroupMismatch { left: pi.group().label().into(), right: red.group.label().into() });
    }
    let par = &red.data.parabolics[par_idx];
    let g = &red.group;
    let n = S::from_usize_lossy(par.radical.len());
    let values = par
        .levi
        .classes()
        .iter()
        .map(|c| {
            let m = par.levi_embedding[c.representative as usize];
            let s: Complex<S> = par.radical.iter().map(|&x| pi.at(g.mul(m, x))).sum();
            s / n
        })
        .collect();
    Ok(ClassFunction { group: par.levi.clone(), values })
}

/// Killed by Harish-Chandra restriction to every proper parabolic.
pub fn is_cuspidal<S: Real>(levi: &Reductive, sigma: &ClassFunction<S>) -> Result<bool, ClassFnError> {
    for (i, _) in levi.proper_parabolics() {
        if !hc_restrict(levi, i, sigma)?.is_zero(S::zero_tol()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(a, b) ↦ left(a)·right(b)` on a block-diagonal product of two copies of `factor`.
pub fn outer_tensor<S: Real>(
    product: &Arc<EnumeratedGroup>,
    left: &ClassFunction<S>,
    right: &ClassFunction<S>,
) -> Result<ClassFunction<S>, ClassFnError> {
    check_same(left, right)?;
    let factor = left.group();
    let k = factor.dim();
    if product.dim() != 2 * k {
        return Err(ClassFnError::NotSubgroup(factor.label().into(), product.label().into()));
    }
    let mut values = Vec::with_capacity(product.class_count());
    for c in product.classes() {
        let m = product.element(c.representative);
        if !m.is_block_diagonal(&[k, k]) {
            return Err(ClassFnError::NotSubgroup(product.label().into(), "a block-diagonal product".into()));
        }
        let a = factor.index_of(&m.sub_block(0, k));
        let b = factor.index_of(&m.sub_block(k, k));
        match (a, b) {
            (Some(a), Some(b)) => values.push(left.at(a) * right.at(b)),
            _ => return Err(ClassFnError::NotSubgroup(factor.label().into(), product.label().into())),
        }
    }
    Ok(ClassFunction { group: product.clone(), values })
}
