//! Irreducible character tables.

mod dixon;
mod gl2;
mod levi;

use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::classfun::{hc_induce, to_integer, ClassFnError, ClassFunction};
use crate::field::FieldError;
use crate::groups::{EnumeratedGroup, GroupError, GroupFamily, Reductive};
use crate::scalar::{round_sig12, Real};

pub use dixon::{dixon_table, splitting_prime, DIXON_SEED};
pub use gl2::{gl2_class_type, gl2_table, Gl2ClassType};
pub use levi::levi_table;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("{what} needs family {expected}, got {got}")]
    WrongFamily { what: &'static str, expected: GroupFamily, got: String },
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("no prime l = 1 mod {exponent} below 2^31")]
    NoPrime { exponent: u64 },
    #[error("eigenspaces of the class-sum operators did not separate ({0})")]
    Separation(String),
    #[error("table has {rows} rows for {classes} classes")]
    Incomplete { rows: usize, classes: usize },
    #[error("orthogonality fails: {0}")]
    Orthogonality(String),
    #[error("decomposition leaves a residual of size {0}")]
    Residual(f64),
    #[error("tables do not match up to permutation: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Class(#[from] ClassFnError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Irreducible characters of a group, one labeled row per irreducible.
#[derive(Debug, Clone)]
pub struct IrreducibleTable<S> {
    group: Arc<EnumeratedGroup>,
    rows: Vec<ClassFunction<S>>,
    labels: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TableJson {
    pub group: String,
    pub order: usize,
    pub classes: Vec<ClassJson>,
    pub rows: Vec<RowJson>,
}

#[derive(Debug, Serialize)]
pub struct ClassJson {
    pub key: u64,
    pub size: usize,
}

#[derive(Debug, Serialize)]
pub struct RowJson {
    pub label: String,
    pub degree: i64,
    pub values: Vec<ValueJson>,
}

#[derive(Debug, Serialize)]
pub struct ValueJson {
    pub class: u64,
    pub re: f64,
    pub im: f64,
}

impl<S: Real> IrreducibleTable<S> {
    /// Assemble and validate: completeness, degrees and orthogonality.
    pub fn new(group: Arc<EnumeratedGroup>, rows: Vec<ClassFunction<S>>, labels: Vec<String>) -> Result<Self, TableError> {
        assert_eq!(rows.len(), labels.len(), "one label per row");
        for r in &rows {
            if !r.group().same_group(&group) {
                return Err(ClassFnError::GroupMismatch { left: r.group().label().into(), right: group.label().into() }.into());
            }
        }
        let t = IrreducibleTable { group, rows, labels };
        t.validate()?;
        Ok(t)
    }

    pub fn group(&self) -> &Arc<EnumeratedGroup> {
        &self.group
    }

    pub fn rows(&self) -> &[ClassFunction<S>] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, label: &str) -> Option<&ClassFunction<S>> {
        self.labels.iter().position(|l| l == label).map(|i| &self.rows[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ClassFunction<S>)> {
        self.labels.iter().map(String::as_str).zip(&self.rows)
    }

    pub fn degrees(&self) -> Result<Vec<i64>, TableError> {
        self.rows.iter().map(|r| Ok(to_integer(r.degree(), "degree")?)).collect()
    }

    fn validate(&self) -> Result<(), TableError> {
        let g = &self.group;
        if self.rows.len() != g.class_count() {
            return Err(TableError::Incomplete { rows: self.rows.len(), classes: g.class_count() });
        }
        let degrees = self.degrees()?;
        if let Some(d) = degrees.iter().find(|&&d| d <= 0 || g.order() as i64 % d != 0) {
            return Err(TableError::Orthogonality(format!("degree {d} does not divide |G| = {}", g.order())));
        }
        let total: i64 = degrees.iter().map(|d| d * d).sum();
        if total != g.order() as i64 {
            return Err(TableError::Orthogonality(format!("sum of squared degrees {total} != {}", g.order())));
        }
        self.check_orthogonality(S::ortho_tol())
    }

    /// Row orthonormality and column orthogonality within `tol`.
    pub fn check_orthogonality(&self, tol: S) -> Result<(), TableError> {
        let n = self.rows.len();
        for i in 0..n {
            for j in i..n {
                let ip = self.rows[i].inner(&self.rows[j])?;
                let want = if i == j { S::one() } else { S::zero() };
                if (ip - Complex::new(want, S::zero())).norm() > tol {
                    return Err(TableError::Orthogonality(format!(
                        "rows {} and {}: inner product {}",
                        self.labels[i], self.labels[j], ip
                    )));
                }
            }
        }
        let g = &self.group;
        for a in 0..g.class_count() {
            let centralizer = S::from_usize_lossy(g.centralizer_order(a));
            for b in a..g.class_count() {
                let s: Complex<S> = self.rows.iter().map(|r| r.value(a) * r.value(b).conj()).sum();
                let want = if a == b { S::one() } else { S::zero() };
                if (s / centralizer - Complex::new(want, S::zero())).norm() > tol {
                    return Err(TableError::Orthogonality(format!("columns {a} and {b}: {s}")));
                }
            }
        }
        Ok(())
    }

    /// Multiplicities of each row in `f`; fails unless `f` is an integral
    /// combination of the rows.
    pub fn decompose(&self, f: &ClassFunction<S>) -> Result<Vec<i64>, TableError> {
        let mults: Vec<i64> = self
            .rows
            .iter()
            .map(|r| to_integer(f.inner(r)?, "multiplicity"))
            .collect::<Result<_, _>>()?;
        let mut residual = f.clone();
        for (m, r) in mults.iter().zip(&self.rows) {
            residual = residual.sub(&r.scale(Complex::new(S::from_i64(*m).expect("fits"), S::zero())))?;
        }
        let worst = residual.values().iter().map(|v| v.norm()).fold(S::zero(), S::max);
        if worst > S::zero_tol() {
            return Err(TableError::Residual(worst.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(mults)
    }

    /// For each row of `self`, the index of the nearest row of `other`; fails
    /// unless this is a bijection with every distance below the zero tolerance.
    /// Returns the assignment and the largest distance.
    pub fn match_up_to_permutation(&self, other: &Self) -> Result<(Vec<usize>, S), TableError> {
        if !self.group.same_group(&other.group) || self.len() != other.len() {
            return Err(TableError::Mismatch("different groups or sizes".into()));
        }
        let mut used = vec![false; other.len()];
        let mut perm = Vec::with_capacity(self.len());
        let mut worst = S::zero();
        for (i, r) in self.rows.iter().enumerate() {
            let mut best: Option<(usize, S)> = None;
            for (j, s) in other.rows.iter().enumerate() {
                let d = r.max_distance(s)?;
                if best.map_or(true, |(_, b)| d < b) {
                    best = Some((j, d));
                }
            }
            let (j, d) = best.expect("nonempty table");
            if d > S::zero_tol() || used[j] {
                return Err(TableError::Mismatch(format!("row {} has no partner (distance {d})", self.labels[i])));
            }
            used[j] = true;
            worst = worst.max(d);
            perm.push(j);
        }
        Ok((perm, worst))
    }

    pub fn to_json(&self) -> Result<TableJson, TableError> {
        let g = &self.group;
        let keys: Vec<u64> = g.classes().iter().map(|c| g.keys()[c.representative as usize]).collect();
        let degrees = self.degrees()?;
        let rows = self
            .iter()
            .zip(degrees)
            .map(|((label, r), degree)| RowJson {
                label: label.to_string(),
                degree,
                values: r
                    .values()
                    .iter()
                    .zip(&keys)
                    .map(|(v, &class)| ValueJson {
                        class,
                        re: round_sig12(v.re.to_f64().unwrap_or(f64::NAN)),
                        im: round_sig12(v.im.to_f64().unwrap_or(f64::NAN)),
                    })
                    .collect(),
            })
            .collect();
        Ok(TableJson {
            group: g.label().to_string(),
            order: g.order(),
            classes: g.classes().iter().zip(&keys).map(|(c, &key)| ClassJson { key, size: c.size() }).collect(),
            rows,
        })
    }
}

/// `Ind_B^G 1 − 1`, checked irreducible.
pub fn steinberg<S: Real>(red: &Reductive) -> Result<ClassFunction<S>, TableError> {
    let b = red.borel_index();
    let torus = red.data.parabolics[b].levi.clone();
    let ind = hc_induce(red, b, &ClassFunction::trivial(torus))?;
    let st = ind.sub(&ClassFunction::trivial(red.group.clone()))?;
    if !st.is_irreducible_character() {
        return Err(TableError::NotIrreducible(format!("Ind_B^G 1 - 1 on {}", red.group.label())));
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTable;
    use crate::groups::build_group;

    fn reductive(f: GroupFamily, q: u32) -> Reductive {
        let field = Arc::new(FieldTable::from_order(q).unwrap());
        Reductive::new(Arc::new(build_group(f, field).unwrap())).unwrap()
    }

    #[test]
    fn steinberg_examples() {
        let r2 = reductive(GroupFamily::Gl2, 2);
        assert!((steinberg::<f64>(&r2).unwrap().degree().re - 2.0).abs() < 1e-12);
        let r3 = reductive(GroupFamily::Gl2, 3);
        let st = steinberg::<f64>(&r3).unwrap();
        assert!((st.degree().re - 3.0).abs() < 1e-12);
        assert!((st.norm_sq() - 1.0).abs() < 1e-12);
        let table = gl2_table::<f64>(&r3.group).unwrap();
        assert!(st.max_distance(table.row("steinberg-twist(0)").unwrap()).unwrap() < 1e-12);
        // Rank two: Ind_B^G 1 - 1 is reducible.
        assert!(matches!(steinberg::<f64>(&reductive(GroupFamily::Gsp4, 2)), Err(TableError::NotIrreducible(_))));
    }

    #[test]
    fn json_export_is_rounded_and_keyed() {
        let r = reductive(GroupFamily::Gl2, 3);
        let t = gl2_table::<f64>(&r.group).unwrap();
        let j = t.to_json().unwrap();
        assert_eq!(j.rows.len(), 8);
        assert_eq!(j.classes.iter().map(|c| c.size).sum::<usize>(), 48);
        let first = &j.rows[0];
        assert_eq!(first.label, "det-twist(0)");
        assert!(first.values.iter().all(|v| v.re == 1.0 && v.im == 0.0));
        assert_eq!(first.values[0].class, r.group.keys()[r.group.identity() as usize]);
    }

    #[test]
    fn decompose_principal_series() {
        let r = reductive(GroupFamily::Gl2, 3);
        let t = gl2_table::<f64>(&r.group).unwrap();
        let b = r.borel_index();
        let ind = hc_induce(&r, b, &ClassFunction::trivial(r.data.parabolics[b].levi.clone())).unwrap();
        let m = t.decompose(&ind).unwrap();
        for (label, k) in t.labels().iter().zip(&m) {
            let want = if label == "det-twist(0)" || label == "steinberg-twist(0)" { 1 } else { 0 };
            assert_eq!(*k, want, "{label}");
        }
        let half = ind.scale(Complex::new(0.5, 0.0));
        assert!(t.decompose(&half).is_err());
    }
}
