//! The matrix group families and their generators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::field::{FieldElement, FieldTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupFamily {
    /// `GL(2, q)`.
    Gl2,
    /// `Sp(4, q)` for the form `antidiag(w, -w)`, `w = antidiag(1, 1)`.
    Sp4,
    /// `GSp(4, q)`, similitudes of the same form.
    Gsp4,
    /// `{(a, b) ∈ GL(2, q)² : det a = det b}` as block-diagonal 4×4 matrices.
    ParamodularLevi,
    /// `GL(2, q)²` as block-diagonal 4×4 matrices.
    Gl2Squared,
}

pub const ALL_FAMILIES: [GroupFamily; 5] =
    [GroupFamily::Gl2, GroupFamily::Sp4, GroupFamily::Gsp4, GroupFamily::ParamodularLevi, GroupFamily::Gl2Squared];

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GroupFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "gl2" => Ok(GroupFamily::Gl2),
            "sp4" => Ok(GroupFamily::Sp4),
            "gsp4" => Ok(GroupFamily::Gsp4),
            "paramodular-levi" | "paramodular" => Ok(GroupFamily::ParamodularLevi),
            "gl2xgl2" | "gl2-squared" => Ok(GroupFamily::Gl2Squared),
            other => Err(format!("unknown group family '{other}'")),
        }
    }
}

fn e(i: u32) -> FieldElement {
    FieldElement::from_index(i)
}

/// `I + t·Σ sign·E_{ij}` for the listed entries.
fn root_element(n: usize, entries: &[(usize, usize, bool)], t: FieldElement, f: &FieldTable) -> Matrix {
    let mut m = Matrix::identity(n);
    for &(i, j, negate) in entries {
        m.set(i, j, if negate { f.neg(t) } else { t });
    }
    m
}

impl GroupFamily {
    pub fn tag(self) -> &'static str {
        match self {
            GroupFamily::Gl2 => "gl2",
            GroupFamily::Sp4 => "sp4",
            GroupFamily::Gsp4 => "gsp4",
            GroupFamily::ParamodularLevi => "paramodular-levi",
            GroupFamily::Gl2Squared => "gl2xgl2",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            GroupFamily::Gl2 => 2,
            _ => 4,
        }
    }

    /// Block structure of the group itself.
    pub fn composition(self) -> Vec<usize> {
        match self {
            GroupFamily::Gl2 => vec![2],
            GroupFamily::Sp4 | GroupFamily::Gsp4 => vec![4],
            GroupFamily::ParamodularLevi | GroupFamily::Gl2Squared => vec![2, 2],
        }
    }

    /// Matrix entries holding the simple-root coordinates of a unitriangular element.
    pub fn simple_root_positions(self) -> Vec<(usize, usize)> {
        match self {
            GroupFamily::Gl2 => vec![(0, 1)],
            GroupFamily::Sp4 | GroupFamily::Gsp4 => vec![(0, 1), (1, 2)],
            GroupFamily::ParamodularLevi | GroupFamily::Gl2Squared => vec![(0, 1), (2, 3)],
        }
    }

    /// Closed-form group order.
    pub fn expected_order(self, q: u64) -> u64 {
        let gl2 = (q * q - 1) * (q * q - q);
        let sp4 = q.pow(4) * (q * q - 1) * (q.pow(4) - 1);
        match self {
            GroupFamily::Gl2 => gl2,
            GroupFamily::Sp4 => sp4,
            GroupFamily::Gsp4 => sp4 * (q - 1),
            GroupFamily::ParamodularLevi => gl2 * gl2 / (q - 1),
            GroupFamily::Gl2Squared => gl2 * gl2,
        }
    }

    /// The symplectic form `antidiag(w, -w)`.
    pub fn symplectic_form(f: &FieldTable) -> Matrix {
        let m1 = f.neg(FieldElement::ONE).index();
        Matrix::from_rows(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, m1, 0, 0], &[m1, 0, 0, 0]])
    }

    /// Similitude factor `λ` with `gᵀ J g = λ J`, if `g` is a symplectic similitude.
    pub fn similitude(g: &Matrix, f: &FieldTable) -> Option<FieldElement> {
        let j = Self::symplectic_form(f);
        let lhs = g.transpose().mul(&j, f).mul(g, f);
        let lambda = lhs.get(0, 3);
        (!lambda.is_zero() && lhs == j.scale(lambda, f)).then_some(lambda)
    }

    /// Defining equations of the family.
    pub fn contains(self, g: &Matrix, f: &FieldTable) -> bool {
        if g.dim() != self.dim() {
            return false;
        }
        match self {
            GroupFamily::Gl2 => !g.det(f).is_zero(),
            GroupFamily::Sp4 => Self::similitude(g, f) == Some(FieldElement::ONE),
            GroupFamily::Gsp4 => Self::similitude(g, f).is_some(),
            GroupFamily::ParamodularLevi | GroupFamily::Gl2Squared => {
                if !g.is_block_diagonal(&[2, 2]) {
                    return false;
                }
                let (d1, d2) = (g.sub_block(0, 2).det(f), g.sub_block(2, 2).det(f));
                !d1.is_zero() && !d2.is_zero() && (self == GroupFamily::Gl2Squared || d1 == d2)
            }
        }
    }

    /// Positive root subgroups as `(entries, sign)` patterns for `x(t) = I + t·X`.
    fn positive_roots(self) -> Vec<Vec<(usize, usize, bool)>> {
        match self {
            GroupFamily::Gl2 => vec![vec![(0, 1, false)]],
            GroupFamily::Sp4 | GroupFamily::Gsp4 => vec![
                vec![(0, 1, false), (2, 3, true)],
                vec![(1, 2, false)],
                vec![(0, 2, false), (1, 3, false)],
                vec![(0, 3, false)],
            ],
            GroupFamily::ParamodularLevi | GroupFamily::Gl2Squared => {
                vec![vec![(0, 1, false)], vec![(2, 3, false)]]
            }
        }
    }

    /// Root elements `x_β(t)` for every positive root `β`.
    pub fn positive_root_elements(self, t: FieldElement, f: &FieldTable) -> Vec<Matrix> {
        self.positive_roots().iter().map(|r| root_element(self.dim(), r, t, f)).collect()
    }

    /// Root elements `x_β(t)` for every root `β`, positive then negative.
    pub fn root_elements(self, t: FieldElement, f: &FieldTable) -> Vec<Matrix> {
        let pos = self.positive_root_elements(t, f);
        let neg: Vec<Matrix> = pos.iter().map(Matrix::transpose).collect();
        pos.into_iter().chain(neg).collect()
    }

    /// Diagonal generators of the split torus, built from the field generator.
    pub fn torus_generators(self, f: &FieldTable) -> Vec<Matrix> {
        let g = f.generator();
        let gi = f.inv(g).expect("generator is a unit");
        let one = FieldElement::ONE;
        let d = |v: [FieldElement; 4]| Matrix::diagonal(&v);
        match self {
            GroupFamily::Gl2 => vec![Matrix::diagonal(&[g, one]), Matrix::diagonal(&[one, g])],
            GroupFamily::Sp4 => vec![d([g, one, one, gi]), d([one, g, gi, one])],
            GroupFamily::Gsp4 => vec![d([g, one, one, gi]), d([one, g, gi, one]), d([one, one, g, g])],
            GroupFamily::ParamodularLevi => vec![d([g, one, g, one]), d([g, one, one, g]), d([one, g, g, one])],
            GroupFamily::Gl2Squared => {
                vec![d([g, one, one, one]), d([one, g, one, one]), d([one, one, g, one]), d([one, one, one, g])]
            }
        }
    }

    /// Generators for closure: all root elements at an `F_p`-basis of `F_q`, and the torus.
    pub fn generators(self, f: &FieldTable) -> Vec<Matrix> {
        let id = Matrix::identity(self.dim());
        let mut out = Vec::new();
        let mut basis = 1u32;
        for _ in 0..f.k() {
            out.extend(self.root_elements(e(basis), f));
            basis *= f.p();
        }
        out.extend(self.torus_generators(f));
        let mut seen = std::collections::HashSet::new();
        out.retain(|m| *m != id && seen.insert(*m));
        out
    }

    /// Representative of the longest Weyl element.
    pub fn long_element(self, f: &FieldTable) -> Matrix {
        let m1 = f.neg(FieldElement::ONE).index();
        match self {
            GroupFamily::Gl2 => Matrix::from_rows(&[&[0, 1], &[1, 0]]),
            GroupFamily::Sp4 | GroupFamily::Gsp4 => {
                Matrix::from_rows(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, m1, 0, 0], &[m1, 0, 0, 0]])
            }
            GroupFamily::ParamodularLevi | GroupFamily::Gl2Squared => {
                Matrix::from_rows(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]])
            }
        }
    }

    /// Every diagonal member of the family over `f`, by brute force over diagonals.
    pub fn torus_members(self, f: &FieldTable) -> Vec<Matrix> {
        let n = self.dim();
        let units: Vec<FieldElement> = f.nonzero().collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let d: Vec<FieldElement> = idx.iter().map(|&i| units[i]).collect();
            let m = Matrix::diagonal(&d);
            if self.contains(&m, f) {
                out.push(m);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < units.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Closed-form prediction of the center: scalars for GL2 and GSp4, `±1` for
    /// Sp4, and scalar pairs `(z₁I, z₂I)` with matching determinants otherwise.
    pub fn center_prediction(self, f: &FieldTable) -> Vec<Matrix> {
        let n = self.dim();
        let mut out = Vec::new();
        for z1 in f.nonzero() {
            match self {
                GroupFamily::Gl2 | GroupFamily::Gsp4 => out.push(Matrix::diagonal(&vec![z1; n])),
                GroupFamily::Sp4 => {
                    if f.mul(z1, z1) == FieldElement::ONE {
                        out.push(Matrix::diagonal(&vec![z1; n]));
                    }
                }
                GroupFamily::ParamodularLevi | GroupFamily::Gl2Squared => {
                    for z2 in f.nonzero() {
                        if self == GroupFamily::Gl2Squared || f.mul(z1, z1) == f.mul(z2, z2) {
                            out.push(Matrix::diagonal(&[z1, z1, z2, z2]));
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_satisfy_defining_equations() {
        for q in [2u32, 3, 4, 5, 9] {
            let f = FieldTable::from_order(q).unwrap();
            for fam in ALL_FAMILIES {
                for g in fam.generators(&f) {
                    assert!(fam.contains(&g, &f), "{fam} q={q} {g:?}");
                }
                assert!(fam.contains(&fam.long_element(&f), &f), "{fam} q={q} long element");
                for z in fam.center_prediction(&f) {
                    assert!(fam.contains(&z, &f));
                }
            }
        }
    }

    #[test]
    fn root_elements_are_unipotent_and_symplectic() {
        let f = FieldTable::from_order(7).unwrap();
        for t in f.elements() {
            for x in GroupFamily::Gsp4.root_elements(t, &f) {
                assert_eq!(GroupFamily::similitude(&x, &f), Some(FieldElement::ONE));
            }
        }
    }

    #[test]
    fn torus_member_counts() {
        let f = FieldTable::from_order(3).unwrap();
        assert_eq!(GroupFamily::Gl2.torus_members(&f).len(), 4);
        assert_eq!(GroupFamily::Sp4.torus_members(&f).len(), 4);
        assert_eq!(GroupFamily::Gsp4.torus_members(&f).len(), 8);
        assert_eq!(GroupFamily::ParamodularLevi.torus_members(&f).len(), 8);
        assert_eq!(GroupFamily::Gl2Squared.torus_members(&f).len(), 16);
    }

    #[test]
    fn parse_tags() {
        for fam in ALL_FAMILIES {
            assert_eq!(fam.tag().parse::<GroupFamily>().unwrap(), fam);
        }
        assert!("gl3".parse::<GroupFamily>().is_err());
    }

    #[test]
    fn order_formulas() {
        assert_eq!(GroupFamily::Gl2.expected_order(3), 48);
        assert_eq!(GroupFamily::Gl2.expected_order(4), 180);
        assert_eq!(GroupFamily::Gsp4.expected_order(2), 720);
        assert_eq!(GroupFamily::Gsp4.expected_order(3), 103_680);
        assert_eq!(GroupFamily::ParamodularLevi.expected_order(2), 36);
    }
}
