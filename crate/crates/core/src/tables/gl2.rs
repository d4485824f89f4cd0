//! Closed-form character table of GL(2, q).

use std::sync::Arc;

use num_complex::Complex;

use super::{IrreducibleTable, TableError};
use crate::classfun::ClassFunction;
use crate::field::{FieldElement, FieldSpec, FieldTable};
use crate::groups::{EnumeratedGroup, GroupFamily, GroupKind, Matrix};
use crate::scalar::{root_of_unity, Real};

/// Conjugacy type of an element of GL(2, q). Elliptic eigenvalues live in `F_{q²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gl2ClassType {
    Central(FieldElement),
    NonSemisimple(FieldElement),
    Split(FieldElement, FieldElement),
    Elliptic(FieldElement),
}

/// Classify a 2×2 invertible matrix. `ext` is `F_{q²}` and `iota` the
/// embedding of `F_q` into it.
pub fn gl2_class_type(m: &Matrix, f: &FieldTable, ext: &FieldTable, iota: &[FieldElement]) -> Gl2ClassType {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    if b.is_zero() && c.is_zero() && a == d {
        return Gl2ClassType::Central(a);
    }
    let tr = f.add(a, d);
    let det = m.det(f);
    let charpoly = |x: FieldElement| f.add(f.sub(f.mul(x, x), f.mul(tr, x)), det);
    let roots: Vec<FieldElement> = f.elements().filter(|&x| charpoly(x).is_zero()).collect();
    match roots.as_slice() {
        [r] => Gl2ClassType::NonSemisimple(*r),
        [r, s] => Gl2ClassType::Split(*r, *s),
        _ => {
            let (t, n) = (iota[tr.index() as usize], iota[det.index() as usize]);
            let z = ext
                .elements()
                .find(|&x| ext.add(ext.sub(ext.mul(x, x), ext.mul(t, x)), n).is_zero())
                .expect("an irreducible quadratic splits over the quadratic extension");
            Gl2ClassType::Elliptic(z)
        }
    }
}

/// The `q² − 1` irreducible characters of GL(2, q), in the order
/// det-twists, Steinberg twists, principal series, cuspidal.
pub fn gl2_table<S: Real>(group: &Arc<EnumeratedGroup>) -> Result<IrreducibleTable<S>, TableError> {
    if *group.kind() != GroupKind::Family(GroupFamily::Gl2) {
        return Err(TableError::WrongFamily { what: "gl2_table", expected: GroupFamily::Gl2, got: group.label().into() });
    }
    let f = group.field();
    let q = f.q() as u64;
    let ext = FieldTable::new(FieldSpec::new(f.p(), 2 * f.k())?);
    let iota = f.embedding_into(&ext)?;
    let types: Vec<Gl2ClassType> = group
        .classes()
        .iter()
        .map(|c| gl2_class_type(group.element(c.representative), f, &ext, &iota))
        .collect();
    let dets: Vec<FieldElement> = group.classes().iter().map(|c| group.element(c.representative).det(f)).collect();

    let qs = S::from_u64(q).expect("q fits");
    let zero = Complex::new(S::zero(), S::zero());
    let alpha = |i: u64, x: FieldElement| -> Complex<S> {
        root_of_unity(i * f.log(x).expect("nonzero") as u64, q - 1)
    };
    let theta = |j: u64, z: FieldElement| -> Complex<S> {
        root_of_unity(j * ext.log(z).expect("nonzero") as u64, q * q - 1)
    };

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut push = |label: String, values: Vec<Complex<S>>| -> Result<(), TableError> {
        rows.push(ClassFunction::new(group.clone(), values)?);
        labels.push(label);
        Ok(())
    };

    for i in 0..q - 1 {
        push(format!("det-twist({i})"), dets.iter().map(|&d| alpha(i, d)).collect())?;
    }
    for i in 0..q - 1 {
        let values = types
            .iter()
            .zip(&dets)
            .map(|(t, &d)| {
                let a = alpha(i, d);
                match t {
                    Gl2ClassType::Central(_) => a * qs,
                    Gl2ClassType::NonSemisimple(_) => zero,
                    Gl2ClassType::Split(..) => a,
                    Gl2ClassType::Elliptic(_) => -a,
                }
            })
            .collect();
        push(format!("steinberg-twist({i})"), values)?;
    }
    for i in 0..q - 1 {
        for j in i + 1..q - 1 {
            let values = types
                .iter()
                .map(|t| match *t {
                    Gl2ClassType::Central(a) => alpha(i, a) * alpha(j, a) * (qs + S::one()),
                    Gl2ClassType::NonSemisimple(a) => alpha(i, a) * alpha(j, a),
                    Gl2ClassType::Split(a, b) => alpha(i, a) * alpha(j, b) + alpha(i, b) * alpha(j, a),
                    Gl2ClassType::Elliptic(_) => zero,
                })
                .collect();
            push(format!("principal-series({i},{j})"), values)?;
        }
    }
    let n = q * q - 1;
    for j in 1..n {
        if j % (q + 1) == 0 || j > (j * q) % n {
            continue;
        }
        let values = types
            .iter()
            .map(|t| match *t {
                Gl2ClassType::Central(a) => theta(j, iota[a.index() as usize]) * (qs - S::one()),
                Gl2ClassType::NonSemisimple(a) => -theta(j, iota[a.index() as usize]),
                Gl2ClassType::Split(..) => zero,
                Gl2ClassType::Elliptic(z) => -(theta(j, z) + theta(j * q, z)),
            })
            .collect();
        push(format!("cuspidal({j})"), values)?;
    }
    IrreducibleTable::new(group.clone(), rows, labels)
}
