//! Linear characters of `U`, genericity, Whittaker dimensions and
//! Gelfand–Graev characters.
//!
//! A character of `U` is `u ↦ ψ₀(Σ aᵢ·xᵢ(u))` with `xᵢ` the simple-root
//! coordinates and `ψ₀` the principal additive character of `F_q`. The torus
//! acts by `ψ^t(u) = ψ(t⁻¹ut)`, i.e. `aᵢ ↦ aᵢ·αᵢ(t)⁻¹`.
//!
//! The torus stabilizer is taken in the split torus over `F_{q'}`, `q' = q^m`
//! with `m` minimal such that `q' ≥ 4`, acting on the base change of `ψ`. Over
//! `F_2` the torus is trivial and over `F_3` it is too small to tell simple
//! roots apart, so the stabilizer over the base field alone cannot separate
//! generic from degenerate characters there. The base-field stabilizer is
//! still reported.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::classfun::{induce_from_elements, to_integer, ClassFnError, ClassFunction};
use crate::field::{FieldElement, FieldError, FieldSpec, FieldTable};
use crate::groups::{GroupFamily, GroupKind, Matrix, Reductive};
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenericityError {
    #[error("genericity criteria disagree for {psi} on {group}: stabilizer {stabilizer}, adjoint torus {adjoint}, coordinates {coordinates}")]
    CriteriaDisagree { group: String, psi: String, stabilizer: bool, adjoint: bool, coordinates: bool },
    #[error("{0} is not generic")]
    NotGeneric(String),
    #[error("genericity needs a family group, got {0}")]
    NotAFamily(String),
    #[error("Whittaker dimension {value} of {context} is negative")]
    Negative { context: String, value: i64 },
    #[error("character of U lives on {psi}, class function on {pi}")]
    GroupMismatch { psi: String, pi: String },
    #[error(transparent)]
    Class(#[from] ClassFnError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Outcome of the three genericity criteria for one character of `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub psi: String,
    /// Order of the field carrying the torus used for the stabilizer.
    pub torus_field: u32,
    pub torus_size: usize,
    pub stabilizer_size: usize,
    pub center_size: usize,
    /// Stabilizer equals the center, elementwise.
    pub generic: bool,
    /// Number of cosets of the center fixing the coefficients.
    pub adjoint_stabilizer_size: usize,
    /// Every simple coordinate nonzero.
    pub coordinates_nonzero: bool,
    /// Stabilizer and center computed in `T(F_q)` itself.
    pub base_stabilizer_size: usize,
    pub base_center_size: usize,
}

/// Torus data over the extension field used to decide genericity.
#[derive(Debug)]
pub struct TorusContext {
    ext: FieldTable,
    iota: Vec<FieldElement>,
    torus: Vec<Matrix>,
    torus_inverse: Vec<Matrix>,
    central: Vec<bool>,
    positive_roots: Vec<Matrix>,
    base_torus: Vec<u32>,
    base_center: Vec<u32>,
}

impl TorusContext {
    pub fn new(red: &Reductive) -> Result<Self, GenericityError> {
        let family = match red.group.kind() {
            GroupKind::Family(f) => *f,
            _ => return Err(GenericityError::NotAFamily(red.group.label().into())),
        };
        let f = red.group.field();
        let mut m = 1;
        while (f.q() as u64).pow(m) < 4 {
            m += 1;
        }
        let ext = FieldTable::new(FieldSpec::new(f.p(), f.k() * m)?);
        let iota = f.embedding_into(&ext)?;
        let torus = family.torus_members(&ext);
        let torus_inverse = torus.iter().map(|t| t.inverse(&ext).expect("torus is invertible")).collect();
        let gens = family.root_elements(FieldElement::ONE, &ext);
        let central =
            torus.iter().map(|t| gens.iter().all(|x| t.mul(x, &ext) == x.mul(t, &ext))).collect();
        let positive_roots = ext.nonzero().flat_map(|s| family.positive_root_elements(s, &ext)).collect();
        let g = &red.group;
        let base_center = red.data.torus.iter().copied().filter(|t| g.center().contains(t)).collect();
        Ok(TorusContext {
            ext,
            iota,
            torus,
            torus_inverse,
            central,
            positive_roots,
            base_torus: red.data.torus.clone(),
            base_center,
        })
    }

    pub fn field_order(&self) -> u32 {
        self.ext.q()
    }
}

/// A linear character of `U` given by its simple-root coefficients.
#[derive(Debug, Clone)]
pub struct UnipotentCharacter {
    red: Reductive,
    coefficients: Vec<FieldElement>,
    report: GenericityReport,
}

impl fmt::Display for UnipotentCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&psi_label(&self.coefficients))
    }
}

fn psi_label(a: &[FieldElement]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.index().to_string()).collect();
    format!("psi({})", parts.join(","))
}

impl UnipotentCharacter {
    pub fn new(red: &Reductive, ctx: &TorusContext, coefficients: Vec<FieldElement>) -> Result<Self, GenericityError> {
        assert_eq!(coefficients.len(), red.rank(), "one coefficient per simple root");
        let report = genericity_report(red, ctx, &coefficients)?;
        Ok(UnipotentCharacter { red: red.clone(), coefficients, report })
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coefficients
    }

    pub fn reductive(&self) -> &Reductive {
        &self.red
    }

    pub fn is_generic(&self) -> bool {
        self.report.generic
    }

    pub fn report(&self) -> &GenericityReport {
        &self.report
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|a| a.is_zero())
    }

    /// `Tr(Σ aᵢ·xᵢ(u))`, the exponent of `ζ_p` in `ψ(u)` for `u ∈ U`.
    pub fn exponent(&self, u: &Matrix) -> u32 {
        let f = self.red.group.field();
        let x = self.red.simple_coordinates(u);
        let s = self.coefficients.iter().zip(&x).fold(FieldElement::ZERO, |acc, (a, xi)| f.add(acc, f.mul(*a, *xi)));
        f.trace(s)
    }

    pub fn eval<S: Real>(&self, u: &Matrix) -> Complex<S> {
        crate::scalar::root_of_unity(self.exponent(u) as u64, self.red.group.field().p() as u64)
    }

    /// `ψ^t`, with `t` an element index of the torus.
    pub fn conjugate(&self, ctx: &TorusContext, t: u32) -> Result<Self, GenericityError> {
        let coefficients = act(&self.red, &self.coefficients, self.red.group.element(t));
        UnipotentCharacter::new(&self.red, ctx, coefficients)
    }
}

/// `aᵢ ↦ aᵢ·αᵢ(t)⁻¹` over the group's field.
fn act(red: &Reductive, a: &[FieldElement], t: &Matrix) -> Vec<FieldElement> {
    let f = red.group.field();
    red.group
        .simple_root_positions()
        .iter()
        .zip(a)
        .map(|(&(i, j), &ai)| f.mul(ai, f.div(t.get(j, j), t.get(i, i)).expect("torus is invertible")))
        .collect()
}

fn genericity_report(red: &Reductive, ctx: &TorusContext, a: &[FieldElement]) -> Result<GenericityReport, GenericityError> {
    let ext = &ctx.ext;
    let positions = red.group.simple_root_positions();
    let lifted: Vec<FieldElement> = a.iter().map(|x| ctx.iota[x.index() as usize]).collect();
    let psi_ext = |u: &Matrix| -> u32 {
        let s = positions
            .iter()
            .zip(&lifted)
            .fold(FieldElement::ZERO, |acc, (&(i, j), &ai)| ext.add(acc, ext.mul(ai, u.get(i, j))));
        ext.trace(s)
    };

    // Brute force: t stabilizes iff ψ(t⁻¹xt) = ψ(x) on every root element x, which generate U(F_{q'}).
    let base_values: Vec<u32> = ctx.positive_roots.iter().map(psi_ext).collect();
    let stabilizer: Vec<bool> = ctx
        .torus
        .iter()
        .zip(&ctx.torus_inverse)
        .map(|(t, ti)| {
            ctx.positive_roots
                .iter()
                .zip(&base_values)
                .all(|(x, &v)| psi_ext(&ti.mul(x, ext).mul(t, ext)) == v)
        })
        .collect();
    let generic = stabilizer == ctx.central;
    let stabilizer_size = stabilizer.iter().filter(|&&s| s).count();
    let center_size = ctx.central.iter().filter(|&&c| c).count();

    // Symbolic action on the coefficients, modulo the center.
    let fixing = ctx
        .torus
        .iter()
        .filter(|t| {
            positions.iter().zip(&lifted).all(|(&(i, j), &ai)| {
                ext.mul(ai, ext.div(t.get(j, j), t.get(i, i)).expect("torus is invertible")) == ai
            })
        })
        .count();
    let adjoint_stabilizer_size = fixing / center_size;
    let adjoint = adjoint_stabilizer_size == 1;
    let coordinates = a.iter().all(|x| !x.is_zero());

    let psi = psi_label(a);
    if generic != adjoint || generic != coordinates {
        return Err(GenericityError::CriteriaDisagree {
            group: red.group.label().into(),
            psi,
            stabilizer: generic,
            adjoint,
            coordinates,
        });
    }

    // The same test inside T(F_q), for the record.
    let g = &red.group;
    let f = g.field();
    let on_u = |t: u32| {
        red.data.unipotent.iter().all(|&u| {
            let c = red.simple_coordinates(g.element(g.mul(g.mul(g.inverse(t), u), t)));
            let d = red.simple_coordinates(g.element(u));
            let e = |x: &[FieldElement]| f.trace(a.iter().zip(x).fold(FieldElement::ZERO, |acc, (p, q)| f.add(acc, f.mul(*p, *q))));
            e(&c) == e(&d)
        })
    };
    let base_stabilizer_size = ctx.base_torus.iter().filter(|&&t| on_u(t)).count();

    Ok(GenericityReport {
        psi,
        torus_field: ext.q(),
        torus_size: ctx.torus.len(),
        stabilizer_size,
        center_size,
        generic,
        adjoint_stabilizer_size,
        coordinates_nonzero: coordinates,
        base_stabilizer_size,
        base_center_size: ctx.base_center.len(),
    })
}

/// All `q^r` characters of `U`, trivial first, in lexicographic order of the
/// coefficient indices.
pub fn enumerate_u_characters(red: &Reductive) -> Result<Vec<UnipotentCharacter>, GenericityError> {
    let ctx = TorusContext::new(red)?;
    let q = red.group.field().q() as usize;
    let r = red.rank();
    let mut out = Vec::with_capacity(q.pow(r as u32));
    for n in 0..q.pow(r as u32) {
        let mut a = vec![FieldElement::ZERO; r];
        let mut m = n;
        for i in (0..r).rev() {
            a[i] = FieldElement::from_index((m % q) as u32);
            m /= q;
        }
        out.push(UnipotentCharacter::new(red, &ctx, a)?);
    }
    Ok(out)
}

/// Generic characters of `U` only.
pub fn generic_characters(red: &Reductive) -> Result<Vec<UnipotentCharacter>, GenericityError> {
    Ok(enumerate_u_characters(red)?.into_iter().filter(UnipotentCharacter::is_generic).collect())
}

/// `dim Hom_U(π, ψ) = (1/|U|) Σ_u π(u)·conj(ψ(u))`, rounded.
pub fn whittaker_dim<S: Real>(pi: &ClassFunction<S>, psi: &UnipotentCharacter) -> Result<i64, GenericityError> {
    let red = &psi.red;
    if !pi.group().same_group(&red.group) {
        return Err(GenericityError::GroupMismatch { psi: red.group.label().into(), pi: pi.group().label().into() });
    }
    let g = &red.group;
    let u = &red.data.unipotent;
    let s: Complex<S> = u.iter().map(|&x| pi.at(x) * psi.eval::<S>(g.element(x)).conj()).sum();
    let context = format!("{psi} on {}", g.label());
    let d = to_integer(s / S::from_usize_lossy(u.len()), &context)?;
    if d < 0 {
        return Err(GenericityError::Negative { context, value: d });
    }
    Ok(d)
}

/// `Ind_U^G ψ` for generic `ψ`.
pub fn gelfand_graev<S: Real>(psi: &UnipotentCharacter) -> Result<ClassFunction<S>, GenericityError> {
    if !psi.is_generic() {
        return Err(GenericityError::NotGeneric(psi.to_string()));
    }
    let red = &psi.red;
    let g = &red.group;
    let u = &red.data.unipotent;
    let values = u.iter().map(|&x| (x, psi.eval::<S>(g.element(x))));
    Ok(induce_from_elements(g, u.len(), values))
}

/// Orbits of `T(F_q)` on a list of characters of `U`, as index lists.
pub fn torus_orbits(chars: &[UnipotentCharacter]) -> Vec<Vec<usize>> {
    let Some(first) = chars.first() else { return Vec::new() };
    let red = &first.red;
    let position: BTreeMap<Vec<u32>, usize> =
        chars.iter().enumerate().map(|(i, c)| (c.coefficients.iter().map(|x| x.index()).collect(), i)).collect();
    let mut orbit_of = vec![usize::MAX; chars.len()];
    let mut orbits = Vec::new();
    for i in 0..chars.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let mut orbit = Vec::new();
        for &t in &red.data.torus {
            let image: Vec<u32> = act(red, &chars[i].coefficients, red.group.element(t)).iter().map(|x| x.index()).collect();
            if let Some(&j) = position.get(&image) {
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = orbits.len();
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Whether the family's simple-root data makes `T` transitive on generic
/// characters (checked by orbit computation, not assumed).
pub fn torus_transitive_on_generic(red: &Reductive) -> Result<bool, GenericityError> {
    let generic = generic_characters(red)?;
    Ok(torus_orbits(&generic).len() <= 1)
}

/// Families covered by the transitivity property.
pub fn transitivity_expected(family: GroupFamily) -> bool {
    matches!(family, GroupFamily::Gl2 | GroupFamily::Gsp4)
}

/// Reports for every character of `U`.
pub fn genericity_reports(red: &Reductive) -> Result<Vec<GenericityReport>, GenericityError> {
    Ok(enumerate_u_characters(red)?.into_iter().map(|c| c.report).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use crate::groups::{build_group, ALL_FAMILIES};
    use crate::tables::{gl2_table, steinberg};

    fn reductive(f: GroupFamily, q: u32) -> Reductive {
        let field = Arc::new(FieldTable::from_order(q).unwrap());
        Reductive::new(Arc::new(build_group(f, field).unwrap())).unwrap()
    }

    #[test]
    fn counts() {
        let chars = enumerate_u_characters(&reductive(GroupFamily::Gl2, 3)).unwrap();
        assert_eq!(chars.len(), 3);
        assert!(chars[0].is_trivial() && !chars[0].is_generic());
        let g = reductive(GroupFamily::Gsp4, 3);
        let chars = enumerate_u_characters(&g).unwrap();
        assert_eq!(chars.len(), 9);
        assert_eq!(chars.iter().filter(|c| c.is_generic()).count(), 4);
        let one_zero = chars.iter().find(|c| c.to_string() == "psi(1,0)").unwrap();
        assert!(!one_zero.is_generic());
        assert!(one_zero.report().stabilizer_size > one_zero.report().center_size);
        let p = enumerate_u_characters(&reductive(GroupFamily::ParamodularLevi, 2)).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.iter().filter(|c| c.is_generic()).count(), 1);
    }

    #[test]
    fn trivial_character_has_full_stabilizer() {
        for fam in ALL_FAMILIES {
            let r = reductive(fam, 2);
            let chars = enumerate_u_characters(&r).unwrap();
            let rep = chars[0].report();
            assert_eq!(rep.stabilizer_size, rep.torus_size, "{fam}");
            assert!(!rep.generic);
        }
    }

    #[test]
    fn psi_is_a_homomorphism() {
        for fam in [GroupFamily::Gl2, GroupFamily::Gsp4, GroupFamily::ParamodularLevi] {
            for q in [2, 3] {
                let r = reductive(fam, q);
                let g = &r.group;
                let p = g.field().p();
                for psi in enumerate_u_characters(&r).unwrap() {
                    for &a in &r.data.unipotent {
                        for &b in &r.data.unipotent {
                            let lhs = psi.exponent(g.element(g.mul(a, b)));
                            let rhs = (psi.exponent(g.element(a)) + psi.exponent(g.element(b))) % p;
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn whittaker_examples() {
        let r = reductive(GroupFamily::Gl2, 3);
        let chars = enumerate_u_characters(&r).unwrap();
        let st = steinberg::<f64>(&r).unwrap();
        let one = ClassFunction::<f64>::trivial(r.group.clone());
        for psi in chars.iter().filter(|c| !c.is_trivial()) {
            assert_eq!(whittaker_dim(&st, psi).unwrap(), 1);
            assert_eq!(whittaker_dim(&one, psi).unwrap(), 0);
        }
        let gg = gelfand_graev::<f64>(&chars[1]).unwrap();
        assert!((gg.degree().re - 16.0).abs() < 1e-9);
        assert_eq!(gg.multiplicity(&gg).unwrap(), 6);
        assert_eq!(gg.multiplicity(&one).unwrap(), 0);
        assert!(matches!(gelfand_graev::<f64>(&chars[0]), Err(GenericityError::NotGeneric(_))));
        // Row by row: all but the two det-twists are generic.
        let t = gl2_table::<f64>(&r.group).unwrap();
        for (label, row) in t.iter() {
            let d = whittaker_dim(row, &chars[1]).unwrap();
            assert_eq!(d, i64::from(!label.starts_with("det-twist")), "{label}");
            assert_eq!(gg.multiplicity(row).unwrap(), d);
        }
    }

    #[test]
    fn torus_action_preserves_whittaker_dims() {
        let r = reductive(GroupFamily::Gsp4, 3);
        let ctx = TorusContext::new(&r).unwrap();
        let chars = enumerate_u_characters(&r).unwrap();
        let b = r.borel_index();
        let ind = crate::classfun::hc_induce(&r, b, &ClassFunction::<f64>::trivial(r.data.parabolics[b].levi.clone())).unwrap();
        for psi in &chars {
            let d = whittaker_dim(&ind, psi).unwrap();
            for &t in &r.data.torus {
                let c = psi.conjugate(&ctx, t).unwrap();
                assert_eq!(c.is_generic(), psi.is_generic());
                assert_eq!(whittaker_dim(&ind, &c).unwrap(), d);
            }
        }
    }

    #[test]
    fn transitivity() {
        for fam in ALL_FAMILIES {
            for q in [2, 3] {
                if fam.expected_order(q as u64) > 110_000 {
                    continue;
                }
                let r = reductive(fam, q);
                let t = torus_transitive_on_generic(&r).unwrap();
                if transitivity_expected(fam) {
                    assert!(t, "{fam} q={q}");
                }
            }
        }
    }

    #[test]
    fn levi_groups_are_rejected() {
        let r = reductive(GroupFamily::Gsp4, 2);
        let levi = r.levi(r.parabolic("siegel").unwrap().0).unwrap();
        assert!(matches!(TorusContext::new(&levi), Err(GenericityError::NotAFamily(_))));
    }
}
