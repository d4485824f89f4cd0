//! Enumerated matrix groups: elements, conjugacy classes and center.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::family::GroupFamily;
use super::matrix::{packable, Matrix};
use super::GroupError;
use crate::field::FieldTable;

/// Default bound on the order of a group we are willing to enumerate.
pub const DEFAULT_MAX_ORDER: u64 = 200_000;

/// Where a group came from and which coordinates describe its root data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Family(GroupFamily),
    /// Block-diagonal Levi subgroup of a family group.
    Levi { family: GroupFamily, composition: Vec<usize> },
}

impl GroupKind {
    pub fn family(&self) -> GroupFamily {
        match self {
            GroupKind::Family(f) => *f,
            GroupKind::Levi { family, .. } => *family,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Member with the smallest packed key.
    pub representative: u32,
    pub members: Vec<u32>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A finite matrix group with elements sorted by packed key.
#[derive(Debug)]
pub struct EnumeratedGroup {
    label: String,
    kind: GroupKind,
    composition: Vec<usize>,
    simple_positions: Vec<(usize, usize)>,
    field: Arc<FieldTable>,
    dim: usize,
    elements: Vec<Matrix>,
    keys: Vec<u64>,
    index: HashMap<u64, u32>,
    inverse: Vec<u32>,
    identity: u32,
    generators: Vec<u32>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
    center: Vec<u32>,
}

/// Raw parts of a group, as stored in a cache file.
pub struct GroupParts {
    pub label: String,
    pub kind: GroupKind,
    pub composition: Vec<usize>,
    pub simple_positions: Vec<(usize, usize)>,
    pub keys: Vec<u64>,
    pub generators: Vec<u32>,
    pub classes: Vec<Vec<u32>>,
}

pub fn family_label(family: GroupFamily, q: u32) -> String {
    format!("{}(q={})", family.tag(), q)
}

/// Enumerate a family group by breadth-first closure over its generators.
pub fn build_group(family: GroupFamily, field: Arc<FieldTable>) -> Result<EnumeratedGroup, GroupError> {
    build_group_bounded(family, field, DEFAULT_MAX_ORDER)
}

pub fn build_group_bounded(
    family: GroupFamily,
    field: Arc<FieldTable>,
    max_order: u64,
) -> Result<EnumeratedGroup, GroupError> {
    let q = field.q();
    let estimate = family.expected_order(q as u64);
    if estimate > max_order {
        return Err(GroupError::BoundExceeded { estimate, bound: max_order });
    }
    if !packable(family.dim(), q) {
        return Err(GroupError::KeyOverflow { dim: family.dim(), q });
    }
    let gens = family.generators(&field);
    for g in &gens {
        if !family.contains(g, &field) {
            return Err(GroupError::GeneratorNotInFamily { family, generator: format!("{g:?}") });
        }
    }
    let elements = closure(&gens, family.dim(), &field, max_order)?;
    log::debug!("{} enumerated: {} elements", family_label(family, q), elements.len());
    EnumeratedGroup::from_elements(
        family_label(family, q),
        GroupKind::Family(family),
        family.composition(),
        family.simple_root_positions(),
        field,
        elements,
        Some(gens),
    )
}

fn closure(gens: &[Matrix], dim: usize, f: &FieldTable, max_order: u64) -> Result<Vec<Matrix>, GroupError> {
    let q = f.q();
    let id = Matrix::identity(dim);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut out = vec![id];
    seen.insert(id.pack(q));
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g, f);
            if seen.insert(y.pack(q)) {
                if out.len() as u64 >= max_order {
                    return Err(GroupError::BoundExceeded { estimate: out.len() as u64 + 1, bound: max_order });
                }
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

impl EnumeratedGroup {
    /// Index a set of matrices that is known to form a group. Generators are
    /// chosen greedily when not supplied.
    pub fn from_elements(
        label: String,
        kind: GroupKind,
        composition: Vec<usize>,
        simple_positions: Vec<(usize, usize)>,
        field: Arc<FieldTable>,
        mut elements: Vec<Matrix>,
        generators: Option<Vec<Matrix>>,
    ) -> Result<Self, GroupError> {
        let q = field.q();
        let dim = elements.first().map(Matrix::dim).ok_or(GroupError::Empty)?;
        elements.sort_by_key(|m| m.pack(q));
        elements.dedup();
        let keys: Vec<u64> = elements.iter().map(|m| m.pack(q)).collect();
        let index: HashMap<u64, u32> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let identity = *index.get(&Matrix::identity(dim).pack(q)).ok_or(GroupError::NotClosed)?;
        let mut inverse = Vec::with_capacity(elements.len());
        for m in &elements {
            let inv = m.inverse(&field).ok_or(GroupError::NotClosed)?;
            inverse.push(*index.get(&inv.pack(q)).ok_or(GroupError::NotClosed)?);
        }
        let mut group = EnumeratedGroup {
            label,
            kind,
            composition,
            simple_positions,
            field,
            dim,
            elements,
            keys,
            index,
            inverse,
            identity,
            generators: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            center: Vec::new(),
        };
        group.generators = match generators {
            Some(gens) => gens
                .iter()
                .map(|g| group.index_of(g).ok_or(GroupError::NotClosed))
                .collect::<Result<_, _>>()?,
            None => group.greedy_generators()?,
        };
        let classes = group.compute_classes();
        group.install_classes(classes)?;
        Ok(group)
    }

    /// Rebuild from cached parts; the class partition is validated, not trusted.
    pub fn from_parts(parts: GroupParts, field: Arc<FieldTable>, dim: usize) -> Result<Self, GroupError> {
        let q = field.q();
        if parts.keys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GroupError::Cache("element keys are not strictly increasing".into()));
        }
        let elements: Vec<Matrix> = parts.keys.iter().map(|&k| Matrix::unpack(k, dim, q)).collect();
        let mut group = EnumeratedGroup::from_elements_unclassified(parts, field, elements)?;
        let classes = std::mem::take(&mut group.classes);
        group.install_classes(classes)?;
        Ok(group)
    }

    fn from_elements_unclassified(
        parts: GroupParts,
        field: Arc<FieldTable>,
        elements: Vec<Matrix>,
    ) -> Result<Self, GroupError> {
        let q = field.q();
        let dim = elements.first().map(Matrix::dim).ok_or(GroupError::Empty)?;
        let index: HashMap<u64, u32> = parts.keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let identity = *index.get(&Matrix::identity(dim).pack(q)).ok_or(GroupError::NotClosed)?;
        let mut inverse = Vec::with_capacity(elements.len());
        for m in &elements {
            let inv = m.inverse(&field).ok_or(GroupError::NotClosed)?;
            inverse.push(*index.get(&inv.pack(q)).ok_or(GroupError::NotClosed)?);
        }
        let n = elements.len() as u32;
        if parts.generators.iter().any(|&g| g >= n) {
            return Err(GroupError::Cache("generator index out of range".into()));
        }
        let classes = parts
            .classes
            .into_iter()
            .map(|members| ConjugacyClass { representative: members.iter().copied().min().unwrap_or(0), members })
            .collect();
        Ok(EnumeratedGroup {
            label: parts.label,
            kind: parts.kind,
            composition: parts.composition,
            simple_positions: parts.simple_positions,
            field,
            dim,
            elements,
            keys: parts.keys,
            index,
            inverse,
            identity,
            generators: parts.generators,
            classes,
            class_of: Vec::new(),
            center: Vec::new(),
        })
    }

    fn greedy_generators(&self) -> Result<Vec<u32>, GroupError> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[self.identity as usize] = true;
        let mut members = vec![self.identity];
        let mut gens: Vec<u32> = Vec::new();
        for cand in 0..n as u32 {
            if inside[cand as usize] {
                continue;
            }
            gens.push(cand);
            // Extend the subgroup generated so far by the new generator.
            let mut queue: VecDeque<u32> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !inside[y as usize] {
                        inside[y as usize] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            if members.len() == n {
                break;
            }
        }
        Ok(gens)
    }

    /// Conjugation orbits under the generators.
    fn compute_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut seen = vec![false; n];
        let gens: Vec<(u32, u32)> = self.generators.iter().map(|&g| (g, self.inverse[g as usize])).collect();
        let mut classes = Vec::new();
        for seed in 0..n as u32 {
            if seen[seed as usize] {
                continue;
            }
            seen[seed as usize] = true;
            let mut members = vec![seed];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &(g, gi) in &gens {
                    let y = self.mul(self.mul(g, x), gi);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            // Seeds are visited in key order, so the seed is the minimal key.
            classes.push(ConjugacyClass { representative: seed, members });
        }
        classes
    }

    /// Order classes (identity first, then by representative key) and derive
    /// `class_of` and the center.
    fn install_classes(&mut self, mut classes: Vec<ConjugacyClass>) -> Result<(), GroupError> {
        let n = self.order();
        let id = self.identity;
        classes.sort_by_key(|c| (c.representative != id, c.representative));
        let mut class_of = vec![u32::MAX; n];
        for (ci, c) in classes.iter().enumerate() {
            for &m in &c.members {
                if m as usize >= n || class_of[m as usize] != u32::MAX {
                    return Err(GroupError::Cache("class partition overlaps or is out of range".into()));
                }
                class_of[m as usize] = ci as u32;
            }
        }
        if class_of.contains(&u32::MAX) {
            return Err(GroupError::Cache("class partition does not cover the group".into()));
        }
        // Every class must be closed under conjugation by the generators.
        for c in &classes {
            let x = c.representative;
            for &g in &self.generators {
                let y = self.mul(self.mul(g, x), self.inverse[g as usize]);
                if class_of[y as usize] != class_of[x as usize] {
                    return Err(GroupError::Cache("class partition is not conjugation-stable".into()));
                }
            }
        }
        self.classes = classes;
        self.class_of = class_of;
        self.center = (0..n as u32)
            .filter(|&z| self.generators.iter().all(|&g| self.mul(g, z) == self.mul(z, g)))
            .collect();
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }
    pub fn composition(&self) -> &[usize] {
        &self.composition
    }
    pub fn simple_root_positions(&self) -> &[(usize, usize)] {
        &self.simple_positions
    }
    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }
    pub fn element(&self, i: u32) -> &Matrix {
        &self.elements[i as usize]
    }
    pub fn keys(&self) -> &[u64] {
        &self.keys
    }
    pub fn identity(&self) -> u32 {
        self.identity
    }
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }
    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
    pub fn class_of(&self, i: u32) -> usize {
        self.class_of[i as usize] as usize
    }
    pub fn center(&self) -> &[u32] {
        &self.center
    }
    pub fn inverse(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<u32> {
        if m.dim() != self.dim {
            return None;
        }
        self.index.get(&m.pack(self.field.q())).copied()
    }

    pub fn index_of_key(&self, key: u64) -> Option<u32> {
        self.index.get(&key).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.elements[a as usize].mul(&self.elements[b as usize], &self.field);
        *self.index.get(&m.pack(self.field.q())).expect("group is closed under products")
    }

    /// `g x g⁻¹`.
    pub fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inverse(g))
    }

    /// Powers `x^0, x^1, …, x^{o-1}` where `o` is the order of `x`.
    pub fn powers(&self, x: u32) -> Vec<u32> {
        let mut out = vec![self.identity];
        let mut cur = x;
        while cur != self.identity {
            out.push(cur);
            cur = self.mul(cur, x);
        }
        out
    }

    pub fn element_order(&self, x: u32) -> usize {
        self.powers(x).len()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1u64, |acc, c| {
            let o = self.element_order(c.representative) as u64;
            acc / gcd(acc, o) * o
        })
    }

    /// Class of each inverse class.
    pub fn inverse_classes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| self.class_of(self.inverse(c.representative))).collect()
    }

    pub fn centralizer_order(&self, class: usize) -> usize {
        self.order() / self.classes[class].size()
    }

    /// Whether every element of `other` is an element of `self`.
    pub fn contains_group(&self, other: &EnumeratedGroup) -> bool {
        self.dim == other.dim
            && self.field.q() == other.field.q()
            && other.keys.iter().all(|k| self.index.contains_key(k))
    }

    pub fn same_group(&self, other: &EnumeratedGroup) -> bool {
        std::ptr::eq(self, other) || (self.label == other.label && self.keys == other.keys)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::ALL_FAMILIES;

    fn group(f: GroupFamily, q: u32) -> EnumeratedGroup {
        build_group(f, Arc::new(FieldTable::from_order(q).unwrap())).unwrap()
    }

    #[test]
    fn gl2_examples() {
        let g = group(GroupFamily::Gl2, 3);
        assert_eq!(g.order(), 48);
        assert_eq!(g.class_count(), 8);
        let g2 = group(GroupFamily::Gl2, 2);
        let mut sizes: Vec<usize> = g2.classes().iter().map(ConjugacyClass::size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(g2.classes()[0].members, vec![g2.identity()]);
    }

    #[test]
    fn small_family_orders() {
        assert_eq!(group(GroupFamily::Gsp4, 2).order(), 720);
        assert_eq!(group(GroupFamily::ParamodularLevi, 2).order(), 36);
        assert_eq!(group(GroupFamily::Gl2, 4).order(), 180);
        assert_eq!(group(GroupFamily::Gl2, 5).order(), 480);
    }

    #[test]
    fn bound_is_enforced() {
        let f = Arc::new(FieldTable::from_order(3).unwrap());
        let err = build_group_bounded(GroupFamily::Gsp4, f, 1000).unwrap_err();
        assert!(matches!(err, GroupError::BoundExceeded { .. }));
    }

    #[test]
    fn group_axioms_exhaustive_for_small_groups() {
        for fam in ALL_FAMILIES {
            let g = group(fam, 2);
            if g.order() > 1000 {
                continue;
            }
            let n = g.order() as u32;
            for a in 0..n {
                assert_eq!(g.mul(a, g.inverse(a)), g.identity());
                assert_eq!(g.mul(a, g.identity()), a);
                for b in 0..n {
                    let ab = g.mul(a, b);
                    for c in (0..n).step_by(7) {
                        assert_eq!(g.mul(ab, c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn classes_partition_and_sizes_divide_order() {
        for fam in ALL_FAMILIES {
            for q in [2u32, 3] {
                if fam.expected_order(q as u64) > 20_000 {
                    continue;
                }
                let g = group(fam, q);
                let total: usize = g.classes().iter().map(ConjugacyClass::size).sum();
                assert_eq!(total, g.order());
                for c in g.classes() {
                    assert_eq!(g.order() % c.size(), 0);
                    assert_eq!(c.representative, *c.members.iter().min().unwrap());
                }
                let reps: Vec<u32> = g.classes()[1..].iter().map(|c| c.representative).collect();
                assert!(reps.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn center_is_union_of_singleton_classes() {
        let g = group(GroupFamily::ParamodularLevi, 3);
        let singles: Vec<u32> =
            g.classes().iter().filter(|c| c.size() == 1).map(|c| c.representative).collect();
        let mut center = g.center().to_vec();
        center.sort_unstable();
        let mut singles = singles;
        singles.sort_unstable();
        assert_eq!(center, singles);
        assert_eq!(center.len(), 4);
    }

    #[test]
    fn greedy_generators_generate() {
        let g = group(GroupFamily::Gl2, 3);
        let sub = EnumeratedGroup::from_elements(
            "copy".into(),
            g.kind().clone(),
            g.composition().to_vec(),
            g.simple_root_positions().to_vec(),
            g.field().clone(),
            g.elements().to_vec(),
            None,
        )
        .unwrap();
        assert_eq!(sub.class_count(), g.class_count());
        assert!(sub.generators().len() <= 4);
    }
}
