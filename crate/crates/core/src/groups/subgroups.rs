//! Borel data, standard parabolics and Levi subgroups of an enumerated group.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::enumerate::{EnumeratedGroup, GroupKind};
use super::family::GroupFamily;
use super::matrix::{block_index, Matrix};
use super::GroupError;
use crate::field::FieldElement;

/// A standard parabolic `P = M ⋉ N`, given by a block composition.
#[derive(Debug)]
pub struct Parabolic {
    pub tag: String,
    pub composition: Vec<usize>,
    /// `P`, as sorted parent indices.
    pub members: Vec<u32>,
    /// Unipotent radical `N`, as sorted parent indices.
    pub radical: Vec<u32>,
    pub levi: Arc<EnumeratedGroup>,
    /// Parent index of each Levi element.
    pub levi_embedding: Vec<u32>,
    /// `Q = M ∩ w₀ U w₀⁻¹`, as sorted Levi indices.
    pub opposite_unipotent: Vec<u32>,
    pub proper: bool,
    member_mask: Vec<bool>,
    radical_mask: Vec<bool>,
}

impl Parabolic {
    pub fn contains(&self, parent_index: u32) -> bool {
        self.member_mask[parent_index as usize]
    }

    pub fn radical_contains(&self, parent_index: u32) -> bool {
        self.radical_mask[parent_index as usize]
    }
}

#[derive(Debug)]
pub struct SubgroupData {
    pub borel: Vec<u32>,
    pub torus: Vec<u32>,
    pub unipotent: Vec<u32>,
    pub center: Vec<u32>,
    pub long_element: u32,
    /// Standard parabolics, finest first; the last one is the group itself.
    pub parabolics: Vec<Parabolic>,
}

/// A group together with its subgroup data.
#[derive(Debug, Clone)]
pub struct Reductive {
    pub group: Arc<EnumeratedGroup>,
    pub data: Arc<SubgroupData>,
}

impl Reductive {
    pub fn new(group: Arc<EnumeratedGroup>) -> Result<Self, GroupError> {
        let data = subgroup_data(&group)?;
        Ok(Reductive { group, data: Arc::new(data) })
    }

    pub fn parabolic(&self, tag: &str) -> Option<(usize, &Parabolic)> {
        self.data.parabolics.iter().enumerate().find(|(_, p)| p.tag == tag)
    }

    pub fn borel_index(&self) -> usize {
        self.data
            .parabolics
            .iter()
            .position(|p| p.composition.iter().all(|&b| b == 1))
            .expect("the Borel is always a standard parabolic")
    }

    pub fn proper_parabolics(&self) -> impl Iterator<Item = (usize, &Parabolic)> {
        self.data.parabolics.iter().enumerate().filter(|(_, p)| p.proper)
    }

    /// The Levi of parabolic `i` with its own subgroup data.
    pub fn levi(&self, i: usize) -> Result<Reductive, GroupError> {
        let par = &self.data.parabolics[i];
        if !par.proper {
            return Ok(self.clone());
        }
        Reductive::new(par.levi.clone())
    }

    /// Simple-root coordinates of an element of `U`.
    pub fn simple_coordinates(&self, u: &Matrix) -> Vec<FieldElement> {
        self.group.simple_root_positions().iter().map(|&(i, j)| u.get(i, j)).collect()
    }

    pub fn rank(&self) -> usize {
        self.group.simple_root_positions().len()
    }
}

/// All compositions of `n`.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Compositions refining `outer` block by block.
fn refinements(outer: &[usize]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![vec![]];
    for &b in outer {
        let mut next = Vec::new();
        for prefix in &acc {
            for c in compositions(b) {
                let mut v = prefix.clone();
                v.extend(c);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

fn composition_tag(c: &[usize]) -> String {
    c.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

fn parabolic_tag(group: &EnumeratedGroup, c: &[usize]) -> String {
    if c.iter().all(|&b| b == 1) {
        return "borel".into();
    }
    if c == group.composition() {
        return "full".into();
    }
    if let GroupKind::Family(GroupFamily::Gsp4 | GroupFamily::Sp4) = group.kind() {
        match c {
            [2, 2] => return "siegel".into(),
            [1, 2, 1] => return "klingen".into(),
            _ => {}
        }
    }
    format!("block-{}", composition_tag(c))
}

fn indices_where(g: &EnumeratedGroup, pred: impl Fn(&Matrix) -> bool) -> Vec<u32> {
    g.elements().iter().enumerate().filter(|(_, m)| pred(m)).map(|(i, _)| i as u32).collect()
}

fn long_element(g: &EnumeratedGroup) -> Result<u32, GroupError> {
    match g.kind() {
        GroupKind::Family(f) => g
            .index_of(&f.long_element(g.field()))
            .ok_or_else(|| GroupError::Structure(format!("long element of {} is not a member", g.label()))),
        GroupKind::Levi { .. } => {
            // Reverse each block of the group's own composition.
            let blocks = block_index(g.composition());
            let mut start = vec![0usize; g.composition().len()];
            for b in 1..start.len() {
                start[b] = start[b - 1] + g.composition()[b - 1];
            }
            let target: Vec<usize> = (0..g.dim())
                .map(|i| {
                    let b = blocks[i];
                    let (s, len) = (start[b], g.composition()[b]);
                    s + (len - 1 - (i - s))
                })
                .collect();
            g.elements()
                .iter()
                .position(|m| m.monomial_pattern().as_deref() == Some(&target[..]))
                .map(|i| i as u32)
                .ok_or_else(|| GroupError::Structure(format!("{} has no long Weyl element", g.label())))
        }
    }
}

fn sorted_eq(mut a: Vec<u32>, b: &[u32]) -> bool {
    a.sort_unstable();
    a == b
}

pub fn subgroup_data(group: &Arc<EnumeratedGroup>) -> Result<SubgroupData, GroupError> {
    let g = group.as_ref();
    let borel = indices_where(g, Matrix::is_upper_triangular);
    let torus = indices_where(g, Matrix::is_diagonal);
    let unipotent = indices_where(g, Matrix::is_unitriangular);
    let mut center = g.center().to_vec();
    center.sort_unstable();

    if borel.len() != torus.len() * unipotent.len() {
        return Err(GroupError::Structure(format!(
            "{}: |B| = {} but |T|·|U| = {}",
            g.label(),
            borel.len(),
            torus.len() * unipotent.len()
        )));
    }
    let id = g.identity();
    if torus.iter().any(|t| *t != id && unipotent.binary_search(t).is_ok()) {
        return Err(GroupError::Structure(format!("{}: T ∩ U is nontrivial", g.label())));
    }

    let w = long_element(g)?;
    let conj_b: Vec<u32> = borel
        .iter()
        .map(|&b| g.conjugate(w, b))
        .filter(|x| borel.binary_search(x).is_ok())
        .collect();
    if !sorted_eq(conj_b, &torus) {
        return Err(GroupError::Structure(format!("{}: B ∩ w₀Bw₀⁻¹ ≠ T", g.label())));
    }

    // Distinct standard parabolics; for equal member sets keep the finest composition.
    let mut by_members: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for c in refinements(g.composition()) {
        let members = indices_where(g, |m| m.is_block_upper(&c));
        let better = match by_members.get(&members) {
            None => true,
            Some(old) => c.len() > old.len() || (c.len() == old.len() && c < *old),
        };
        if better {
            by_members.insert(members, c);
        }
    }
    let mut found: Vec<(Vec<usize>, Vec<u32>)> = by_members.into_iter().map(|(m, c)| (c, m)).collect();
    found.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));

    let family = g.kind().family();
    let mut parabolics = Vec::new();
    for (comp, members) in found {
        let proper = comp != g.composition();
        let radical = indices_where(g, |m| m.is_block_unitriangular(&comp));
        let radical: Vec<u32> = radical.into_iter().filter(|i| members.binary_search(i).is_ok()).collect();
        let levi = if proper {
            let blocks = block_index(&comp);
            let positions: Vec<(usize, usize)> = g
                .simple_root_positions()
                .iter()
                .copied()
                .filter(|&(i, j)| blocks[i] == blocks[j])
                .collect();
            let elements: Vec<Matrix> =
                members.iter().map(|&i| *g.element(i)).filter(|m| m.is_block_diagonal(&comp)).collect();
            Arc::new(EnumeratedGroup::from_elements(
                format!("{}/levi[{}]", g.label(), composition_tag(&comp)),
                GroupKind::Levi { family, composition: comp.clone() },
                comp.clone(),
                positions,
                g.field().clone(),
                elements,
                None,
            )?)
        } else {
            group.clone()
        };
        if members.len() != levi.order() * radical.len() {
            return Err(GroupError::Structure(format!(
                "{}: parabolic {} has |P| = {} but |M|·|N| = {}",
                g.label(),
                composition_tag(&comp),
                members.len(),
                levi.order() * radical.len()
            )));
        }
        let levi_embedding: Vec<u32> = levi
            .elements()
            .iter()
            .map(|m| g.index_of(m).ok_or_else(|| GroupError::Structure("Levi element outside parent".into())))
            .collect::<Result<_, _>>()?;
        let mut opposite: Vec<u32> = unipotent
            .iter()
            .filter_map(|&u| levi.index_of(g.element(g.conjugate(w, u))))
            .collect();
        opposite.sort_unstable();
        let levi_unipotent = levi.elements().iter().filter(|m| m.is_unitriangular()).count();
        if opposite.len() != levi_unipotent {
            return Err(GroupError::Structure(format!(
                "{}: |M ∩ w₀Uw₀⁻¹| = {} but |U_M| = {}",
                g.label(),
                opposite.len(),
                levi_unipotent
            )));
        }
        let mut member_mask = vec![false; g.order()];
        for &i in &members {
            member_mask[i as usize] = true;
        }
        let mut radical_mask = vec![false; g.order()];
        for &i in &radical {
            radical_mask[i as usize] = true;
        }
        parabolics.push(Parabolic {
            tag: parabolic_tag(g, &comp),
            composition: comp,
            members,
            radical,
            levi,
            levi_embedding,
            opposite_unipotent: opposite,
            proper,
            member_mask,
            radical_mask,
        });
    }

    Ok(SubgroupData { borel, torus, unipotent, center, long_element: w, parabolics })
}

/// `p = m·n` with `m` in the Levi and `n` in the unipotent radical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeviDecomposition {
    /// Index of `m` in the Levi group.
    pub levi: u32,
    /// Index of `n` in the parent group.
    pub radical: u32,
}

pub fn levi_decompose(group: &EnumeratedGroup, par: &Parabolic, p: u32) -> Result<LeviDecomposition, GroupError> {
    if !par.contains(p) {
        return Err(GroupError::NotInParabolic(par.tag.clone()));
    }
    let m = group.element(p).block_diagonal_part(&par.composition);
    let levi = par
        .levi
        .index_of(&m)
        .ok_or_else(|| GroupError::Structure(format!("Levi part of element not in Levi of {}", par.tag)))?;
    let m_parent = par.levi_embedding[levi as usize];
    let n = group.mul(group.inverse(m_parent), p);
    if !par.radical_contains(n) {
        return Err(GroupError::Structure(format!("radical part not in N for {}", par.tag)));
    }
    Ok(LeviDecomposition { levi, radical: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTable;
    use crate::groups::{build_group, ALL_FAMILIES};

    fn reductive(f: GroupFamily, q: u32) -> Reductive {
        let field = Arc::new(FieldTable::from_order(q).unwrap());
        Reductive::new(Arc::new(build_group(f, field).unwrap())).unwrap()
    }

    #[test]
    fn refinement_enumeration() {
        assert_eq!(refinements(&[4]).len(), 8);
        assert_eq!(refinements(&[2, 2]).len(), 4);
        assert_eq!(refinements(&[2]), vec![vec![1, 1], vec![2]]);
    }

    #[test]
    fn parabolic_tags_per_family() {
        let tags = |r: &Reductive| r.data.parabolics.iter().map(|p| p.tag.clone()).collect::<Vec<_>>();
        assert_eq!(tags(&reductive(GroupFamily::Gl2, 3)), ["borel", "full"]);
        assert_eq!(tags(&reductive(GroupFamily::Gsp4, 2)), ["borel", "klingen", "siegel", "full"]);
        assert_eq!(
            tags(&reductive(GroupFamily::ParamodularLevi, 2)),
            ["borel", "block-1-1-2", "block-2-1-1", "full"]
        );
    }

    #[test]
    fn sizes() {
        let g = reductive(GroupFamily::Gl2, 2);
        assert_eq!(g.data.torus.len(), 1);
        let p = reductive(GroupFamily::ParamodularLevi, 3);
        assert_eq!(p.data.center.len(), 4);
        assert_eq!(p.data.unipotent.len(), 9);
    }

    #[test]
    fn borel_structure_all_families() {
        for fam in ALL_FAMILIES {
            for q in [2u32, 3] {
                if fam.expected_order(q as u64) > 110_000 {
                    continue;
                }
                let r = reductive(fam, q);
                let d = &r.data;
                assert_eq!(d.borel.len(), d.torus.len() * d.unipotent.len());
                // Every Levi has its own consistent subgroup data.
                for (i, par) in r.proper_parabolics() {
                    let levi = r.levi(i).unwrap();
                    assert_eq!(levi.data.unipotent.len(), par.opposite_unipotent.len());
                }
            }
        }
    }

    #[test]
    fn center_matches_prediction() {
        for fam in ALL_FAMILIES {
            for q in [2u32, 3] {
                if fam.expected_order(q as u64) > 110_000 {
                    continue;
                }
                let r = reductive(fam, q);
                let f = r.group.field();
                let mut predicted: Vec<u32> =
                    fam.center_prediction(f).iter().map(|m| r.group.index_of(m).unwrap()).collect();
                predicted.sort_unstable();
                assert_eq!(predicted, r.data.center, "{fam} q={q}");
            }
        }
    }

    #[test]
    fn levi_decomposition_siegel_exhaustive() {
        let r = reductive(GroupFamily::Gsp4, 3);
        let (_, siegel) = r.parabolic("siegel").unwrap();
        let g = &r.group;
        for &p in &siegel.members {
            let d = levi_decompose(g, siegel, p).unwrap();
            assert_eq!(g.mul(siegel.levi_embedding[d.levi as usize], d.radical), p);
        }
        // Trivial cases.
        let m = siegel.levi_embedding[5];
        assert_eq!(levi_decompose(g, siegel, m).unwrap().radical, g.identity());
        let n = siegel.radical[3];
        let d = levi_decompose(g, siegel, n).unwrap();
        assert_eq!(siegel.levi_embedding[d.levi as usize], g.identity());
        // An element outside P.
        let outside = (0..g.order() as u32).find(|&x| !siegel.contains(x)).unwrap();
        assert!(matches!(levi_decompose(g, siegel, outside), Err(GroupError::NotInParabolic(_))));
    }

    #[test]
    fn unipotent_coordinates_are_a_homomorphism_with_commutator_kernel() {
        for fam in ALL_FAMILIES {
            for q in [2u32, 3] {
                if fam.expected_order(q as u64) > 110_000 {
                    continue;
                }
                let r = reductive(fam, q);
                let g = &r.group;
                let f = g.field();
                let u = &r.data.unipotent;
                let add = |a: &[FieldElement], b: &[FieldElement]| -> Vec<FieldElement> {
                    a.iter().zip(b).map(|(x, y)| f.add(*x, *y)).collect()
                };
                let mut image = std::collections::HashSet::new();
                for &a in u {
                    let ca = r.simple_coordinates(g.element(a));
                    image.insert(ca.clone());
                    for &b in u {
                        let cb = r.simple_coordinates(g.element(b));
                        assert_eq!(r.simple_coordinates(g.element(g.mul(a, b))), add(&ca, &cb));
                    }
                }
                assert_eq!(image.len(), (q as usize).pow(r.rank() as u32), "onto F_q^r");
                // Kernel equals the subgroup generated by commutators.
                let zero = vec![FieldElement::ZERO; r.rank()];
                let kernel: Vec<u32> =
                    u.iter().copied().filter(|&x| r.simple_coordinates(g.element(x)) == zero).collect();
                let mut comm: std::collections::BTreeSet<u32> = std::collections::BTreeSet::new();
                comm.insert(g.identity());
                for &a in u {
                    for &b in u {
                        let c = g.mul(g.mul(a, b), g.mul(g.inverse(a), g.inverse(b)));
                        comm.insert(c);
                    }
                }
                let mut frontier: Vec<u32> = comm.iter().copied().collect();
                while let Some(x) = frontier.pop() {
                    let gens: Vec<u32> = comm.iter().copied().collect();
                    for y in gens {
                        let z = g.mul(x, y);
                        if comm.insert(z) {
                            frontier.push(z);
                        }
                    }
                }
                let comm: Vec<u32> = comm.into_iter().collect();
                let b2_char2 = matches!(fam, GroupFamily::Sp4 | GroupFamily::Gsp4) && f.p() == 2;
                if b2_char2 {
                    // The B2 commutator constants vanish mod 2: [U,U] is the
                    // highest root group only, half the kernel.
                    assert!(comm.iter().all(|x| kernel.binary_search(x).is_ok()), "{fam} q={q}");
                    assert_eq!(comm.len() * q as usize, kernel.len(), "{fam} q={q}");
                } else {
                    assert_eq!(comm, kernel, "{fam} q={q}");
                }
            }
        }
    }
}
