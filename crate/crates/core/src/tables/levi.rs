//! Labeled character tables of standard Levi subgroups, built as products of
//! GL(1) and GL(2) characters through explicit coordinates on the Levi.

use std::sync::Arc;

use num_complex::Complex;

use super::{dixon_table, gl2_table, IrreducibleTable, TableError};
use crate::classfun::ClassFunction;
use crate::field::{FieldElement, FieldTable};
use crate::groups::{build_group, GroupFamily, Matrix, Reductive};
use crate::scalar::{root_of_unity, Real};

enum Coord {
    /// A multiplicative coordinate `M → F_q^×`.
    Scalar(&'static str, fn(&Matrix, &FieldTable) -> FieldElement),
    /// A 2×2 diagonal block starting at this position.
    Gl2(&'static str, usize),
}

fn entry<const I: usize>(m: &Matrix, _: &FieldTable) -> FieldElement {
    m.get(I, I)
}

fn similitude(m: &Matrix, f: &FieldTable) -> FieldElement {
    GroupFamily::similitude(m, f).expect("Levi of GSp4 preserves the form up to scalars")
}

fn coordinates(family: GroupFamily, composition: &[usize]) -> Option<Vec<Coord>> {
    use Coord::*;
    Some(match (family, composition) {
        (GroupFamily::Gl2, [1, 1]) => vec![Scalar("t0", entry::<0>), Scalar("t1", entry::<1>)],
        (GroupFamily::Gsp4, [1, 1, 1, 1]) => {
            vec![Scalar("t0", entry::<0>), Scalar("t1", entry::<1>), Scalar("sim", similitude)]
        }
        (GroupFamily::Gsp4, [2, 2]) => vec![Gl2("A", 0), Scalar("sim", similitude)],
        (GroupFamily::Gsp4, [1, 2, 1]) => vec![Scalar("a", entry::<0>), Gl2("B", 1)],
        (GroupFamily::Gl2Squared, [1, 1, 1, 1]) => vec![
            Scalar("t0", entry::<0>),
            Scalar("t1", entry::<1>),
            Scalar("t2", entry::<2>),
            Scalar("t3", entry::<3>),
        ],
        (GroupFamily::Gl2Squared, [1, 1, 2]) => vec![Scalar("t0", entry::<0>), Scalar("t1", entry::<1>), Gl2("B", 2)],
        (GroupFamily::Gl2Squared, [2, 1, 1]) => vec![Gl2("A", 0), Scalar("t2", entry::<2>), Scalar("t3", entry::<3>)],
        (GroupFamily::Gl2Squared, [2, 2]) => vec![Gl2("A", 0), Gl2("B", 2)],
        _ => return None,
    })
}

/// Irreducible characters of the Levi of parabolic `par_idx`. Levis that are
/// products of GL(1) and GL(2) coordinates get labels recording the factors,
/// e.g. `A:cuspidal(1) * sim^0`; any other Levi falls back to Dixon rows.
pub fn levi_table<S: Real>(red: &Reductive, par_idx: usize) -> Result<IrreducibleTable<S>, TableError> {
    let par = &red.data.parabolics[par_idx];
    let levi = &par.levi;
    let family = red.group.kind().family();
    if family == GroupFamily::Gl2 && !par.proper {
        return gl2_table(levi);
    }
    let Some(coords) = coordinates(family, &par.composition) else {
        return dixon_table(levi);
    };
    let f = levi.field().clone();
    let q = f.q() as u64;
    let gl2_factor = if coords.iter().any(|c| matches!(c, Coord::Gl2(..))) {
        let g = Arc::new(build_group(GroupFamily::Gl2, f.clone())?);
        Some(gl2_table::<S>(&g)?)
    } else {
        None
    };

    // Per coordinate: the list of (label, value at each Levi class).
    let reps: Vec<&Matrix> = levi.classes().iter().map(|c| levi.element(c.representative)).collect();
    let mut factors: Vec<Vec<(String, Vec<Complex<S>>)>> = Vec::new();
    for c in &coords {
        let options = match c {
            Coord::Scalar(name, get) => {
                let logs: Vec<u64> = reps.iter().map(|m| f.log(get(m, &f)).expect("invertible coordinate") as u64).collect();
                (0..q - 1)
                    .map(|i| (format!("{name}^{i}"), logs.iter().map(|&x| root_of_unity(i * x, q - 1)).collect()))
                    .collect()
            }
            Coord::Gl2(name, start) => {
                let table = gl2_factor.as_ref().expect("built above");
                let g2 = table.group();
                let idx: Vec<u32> = reps
                    .iter()
                    .map(|m| g2.index_of(&m.sub_block(*start, 2)).expect("diagonal block is invertible"))
                    .collect();
                table
                    .iter()
                    .map(|(label, row)| (format!("{name}:{label}"), idx.iter().map(|&i| row.at(i)).collect()))
                    .collect()
            }
        };
        factors.push(options);
    }

    let one = Complex::new(S::one(), S::zero());
    let mut combos: Vec<(String, Vec<Complex<S>>)> = vec![(String::new(), vec![one; reps.len()])];
    for options in &factors {
        let mut next = Vec::with_capacity(combos.len() * options.len());
        for (label, values) in &combos {
            for (l2, v2) in options {
                let label = if label.is_empty() { l2.clone() } else { format!("{label} * {l2}") };
                next.push((label, values.iter().zip(v2).map(|(a, b)| a * b).collect()));
            }
        }
        combos = next;
    }
    let mut rows = Vec::with_capacity(combos.len());
    let mut labels = Vec::with_capacity(combos.len());
    for (label, values) in combos {
        rows.push(ClassFunction::new(levi.clone(), values)?);
        labels.push(label);
    }
    IrreducibleTable::new(levi.clone(), rows, labels)
}
