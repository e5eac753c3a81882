use std::collections::{HashMap, VecDeque};

use super::{PermError, Permutation};

/// Default element cap for breadth-first closure.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A finitely generated subgroup of `S_n`, fully enumerated at construction.
///
/// `elements()[0]` is always the identity; the remaining elements appear in
/// breadth-first order over right multiplication by the generators.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PermGroup {
    /// Breadth-first closure of `generators` under composition.
    pub fn generate(generators: &[Permutation], cap: usize) -> Result<Self, PermError> {
        let first = generators.first().ok_or(PermError::NoGenerators)?;
        let degree = first.degree();
        for g in generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in generators {
                let y = x.compose_unchecked(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(PermError::Capacity { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators: generators.to_vec(),
            elements,
            index,
        })
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        Self::generate(&[Permutation::identity(degree)], 1).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn identity(&self) -> &Permutation {
        &self.elements[0]
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.degree
    }

    /// Transitive with trivial point stabilizers.
    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.order() == self.degree
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    /// Whether `sub` is closed under conjugation by every generator.
    pub fn normalizes(&self, sub: &PermGroup) -> bool {
        self.generators.iter().all(|g| {
            let gi = g.inverse();
            sub.generators
                .iter()
                .all(|h| sub.contains(&gi.compose_unchecked(h).compose_unchecked(g)))
        })
    }

    /// Greedy generating subset: keep each generator that enlarges the
    /// subgroup generated so far, in the given order.
    pub fn reduced_generators(&self) -> Vec<Permutation> {
        greedy_generating_subset(self.generators.iter(), self.order(), self.degree)
    }

    /// The subgroup generated by `gens`, checked to lie inside `self`.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<PermGroup, PermError> {
        let gens: Vec<Permutation> = if gens.is_empty() {
            vec![self.identity().clone()]
        } else {
            gens.to_vec()
        };
        for g in &gens {
            if g.degree() != self.degree {
                return Err(PermError::DegreeMismatch(self.degree, g.degree()));
            }
            if !self.contains(g) {
                return Err(PermError::NotInGroup);
            }
        }
        PermGroup::generate(&gens, self.order())
    }

    /// Partition into right cosets `Hx` of the subgroup generated by `sub_gens`.
    pub fn right_cosets(&self, sub_gens: &[Permutation]) -> Result<CosetIndex, PermError> {
        let sub = self.subgroup(sub_gens)?;
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut representatives = Vec::new();
        for (i, x) in self.elements.iter().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            representatives.push(x.clone());
            for h in sub.elements() {
                let hx = h.compose_unchecked(x);
                coset_of[self.index[&hx]] = id;
            }
        }
        Ok(CosetIndex {
            subgroup_order: sub.order(),
            representatives,
            coset_of,
        })
    }

    /// Permutation of coset ids induced by right multiplication:
    /// `Hx ↦ Hxg`, with `xg = compose(x, g)`.
    ///
    /// This is a right action: `action(compose(g, h)) = compose(action(h), action(g))`.
    pub fn action_on_cosets(
        &self,
        g: &Permutation,
        cosets: &CosetIndex,
    ) -> Result<Permutation, PermError> {
        if g.degree() != self.degree {
            return Err(PermError::DegreeMismatch(self.degree, g.degree()));
        }
        if !self.contains(g) {
            return Err(PermError::NotInGroup);
        }
        let images = cosets
            .representatives
            .iter()
            .map(|x| cosets.coset_of[self.index[&x.compose_unchecked(g)]])
            .collect();
        Permutation::from_images(images)
    }

    /// Kernel of the action on right cosets of `⟨sub_gens⟩`: the largest
    /// normal subgroup of `self` inside it.
    pub fn normal_core(&self, sub_gens: &[Permutation]) -> Result<PermGroup, PermError> {
        let cosets = self.right_cosets(sub_gens)?;
        let kernel: Vec<&Permutation> = self
            .elements
            .iter()
            .filter(|g| {
                cosets
                    .representatives
                    .iter()
                    .enumerate()
                    .all(|(id, x)| cosets.coset_of[self.index[&x.compose_unchecked(g)]] == id)
            })
            .collect();
        let gens = greedy_generating_subset(kernel.into_iter(), usize::MAX, self.degree);
        PermGroup::generate(&gens, self.order())
    }

    /// Cayley embedding into `S_|G|`: element `i` (1-based, identity = 1) is
    /// sent by generator `g` to the index of `element_i · g`.
    pub fn regular_representation(&self) -> RegularRep {
        let generators: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| self.right_regular(g).expect("generator lies in group"))
            .collect();
        let group =
            PermGroup::generate(&generators, self.order()).expect("regular image has group order");
        RegularRep {
            group,
            labels: self.elements.clone(),
        }
    }

    /// The right-regular permutation of `g ∈ self` on the element list.
    pub fn right_regular(&self, g: &Permutation) -> Result<Permutation, PermError> {
        if !self.contains(g) {
            return Err(PermError::NotInGroup);
        }
        let images = self
            .elements
            .iter()
            .map(|x| self.index[&x.compose_unchecked(g)])
            .collect();
        Permutation::from_images(images)
    }

    /// Multiset of element orders, sorted.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(Permutation::order).collect();
        v.sort_unstable();
        v
    }

    /// Size of the conjugacy class of each element, indexed like `elements()`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut class = vec![usize::MAX; self.order()];
        let mut sizes = Vec::new();
        let inverses: Vec<Permutation> = self.generators.iter().map(Permutation::inverse).collect();
        for start in 0..self.order() {
            if class[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            class[start] = id;
            let mut size = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for (g, gi) in self.generators.iter().zip(&inverses) {
                    let y = gi.compose_unchecked(&self.elements[i]).compose_unchecked(g);
                    let j = self.index[&y];
                    if class[j] == usize::MAX {
                        class[j] = id;
                        size += 1;
                        queue.push_back(j);
                    }
                }
            }
            sizes.push(size);
        }
        class.into_iter().map(|c| sizes[c]).collect()
    }
}

pub(crate) fn greedy_generating_subset<'a>(
    candidates: impl Iterator<Item = &'a Permutation>,
    target_order: usize,
    degree: usize,
) -> Vec<Permutation> {
    let mut chosen: Vec<Permutation> = Vec::new();
    let mut current = PermGroup::trivial(degree);
    for c in candidates {
        if current.order() >= target_order {
            break;
        }
        if current.contains(c) {
            continue;
        }
        chosen.push(c.clone());
        current = PermGroup::generate(&chosen, usize::MAX).expect("uncapped closure");
    }
    if chosen.is_empty() {
        chosen.push(Permutation::identity(degree));
    }
    chosen
}

/// Right cosets `Hx` of a subgroup: coset 0 is `H` itself.
#[derive(Clone, Debug)]
pub struct CosetIndex {
    subgroup_order: usize,
    representatives: Vec<Permutation>,
    coset_of: Vec<usize>,
}

impl CosetIndex {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    pub fn representatives(&self) -> &[Permutation] {
        &self.representatives
    }

    /// Coset id of the ambient element with index `element_index`.
    pub fn coset_of_index(&self, element_index: usize) -> usize {
        self.coset_of[element_index]
    }
}

/// Output of the Cayley embedding: the regular group and, for each point
/// (0-based), the source element it labels.
#[derive(Clone, Debug)]
pub struct RegularRep {
    pub group: PermGroup,
    pub labels: Vec<Permutation>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    fn s3() -> PermGroup {
        PermGroup::generate(&[p("(1 2)", 3), p("(1 2 3)", 3)], 100).unwrap()
    }

    // Conjugate-intersection oracle for the normal core.
    fn core_by_conjugates(g: &PermGroup, h: &PermGroup) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = h.elements().to_vec();
        for x in g.elements() {
            let xi = x.inverse();
            out.retain(|y| h.contains(&x.compose_unchecked(y).compose_unchecked(&xi)));
        }
        out.sort();
        out
    }

    #[test]
    fn generate_examples() {
        let s4 = PermGroup::generate(&[p("(1 2)", 4), p("(1 2 3 4)", 4)], 1000).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(
            PermGroup::generate(&[Permutation::identity(3)], 10)
                .unwrap()
                .order(),
            1
        );
        let c5 = PermGroup::generate(&[p("(1 2 3 4 5)", 5)], 10).unwrap();
        assert_eq!(c5.order(), 5);
        assert!(c5.is_abelian());
        assert!(c5.identity().is_identity());
    }

    #[test]
    fn generate_errors() {
        assert_eq!(
            PermGroup::generate(&[p("(1 2)", 4), p("(1 2 3 4)", 4)], 23).unwrap_err(),
            PermError::Capacity { cap: 23 }
        );
        assert_eq!(
            PermGroup::generate(&[], 10).unwrap_err(),
            PermError::NoGenerators
        );
        assert!(matches!(
            PermGroup::generate(&[p("(1 2)", 2), p("(1 2)", 3)], 10),
            Err(PermError::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn symmetric_group_orders() {
        let mut fact = 1;
        for n in 2..=6 {
            fact *= n;
            let cycle: Vec<usize> = (0..n).collect();
            let gens = [
                Permutation::from_cycles(n, &[vec![0, 1]]).unwrap(),
                Permutation::from_cycles(n, &[cycle]).unwrap(),
            ];
            assert_eq!(PermGroup::generate(&gens, 10_000).unwrap().order(), fact);
        }
    }

    #[test]
    fn coset_counts() {
        let s3 = s3();
        assert_eq!(s3.right_cosets(&[p("(1 2 3)", 3)]).unwrap().len(), 2);
        assert_eq!(s3.right_cosets(&[p("(1 2)", 3)]).unwrap().len(), 3);
        let s5 = PermGroup::generate(&[p("(1 2)", 5), p("(1 2 3 4 5)", 5)], 1000).unwrap();
        let c = s5.right_cosets(&[p("(1 2 3 4 5)", 5)]).unwrap();
        assert_eq!(c.len(), 24);
        assert_eq!(c.len() * c.subgroup_order(), 120);
        assert!(s3.right_cosets(&[p("(1 2)", 4)]).is_err());
    }

    #[test]
    fn coset_partition_matches_brute_force() {
        let s3 = s3();
        let h = s3.subgroup(&[p("(1 2)", 3)]).unwrap();
        let c = s3.right_cosets(h.generators()).unwrap();
        // Brute force: x and y share a coset iff x y^-1 ∈ H.
        for (i, x) in s3.elements().iter().enumerate() {
            for (j, y) in s3.elements().iter().enumerate() {
                let same = h.contains(&x.compose_unchecked(&y.inverse()));
                assert_eq!(same, c.coset_of_index(i) == c.coset_of_index(j));
            }
        }
        // Coset 0 is H.
        for (i, x) in s3.elements().iter().enumerate() {
            assert_eq!(c.coset_of_index(i) == 0, h.contains(x));
        }
    }

    #[test]
    fn coset_action_examples() {
        let s3 = s3();
        let a3 = s3.right_cosets(&[p("(1 2 3)", 3)]).unwrap();
        assert_eq!(
            s3.action_on_cosets(&p("(1 2)", 3), &a3).unwrap(),
            p("(1 2)", 2)
        );
        assert_eq!(
            s3.action_on_cosets(&p("(1 2 3)", 3), &a3).unwrap().apply(0),
            0
        );
        let h = s3.right_cosets(&[p("(1 2)", 3)]).unwrap();
        let act = s3.action_on_cosets(&p("(1 2 3)", 3), &h).unwrap();
        assert_eq!(act.cycle_lengths(), vec![3]);
        assert_eq!(s3.action_on_cosets(&p("(1 2)", 3), &h).unwrap().apply(0), 0);
        assert_eq!(
            s3.action_on_cosets(&p("(1 2)", 4), &h),
            Err(PermError::DegreeMismatch(3, 4))
        );
    }

    #[test]
    fn coset_action_is_right_action() {
        let s4 = PermGroup::generate(&[p("(1 2)", 4), p("(1 2 3 4)", 4)], 100).unwrap();
        let c = s4.right_cosets(&[p("(1 2 3)", 4)]).unwrap();
        for g in s4.elements() {
            for h in s4.elements().iter().step_by(5) {
                let gh = s4.action_on_cosets(&g.compose_unchecked(h), &c).unwrap();
                let ag = s4.action_on_cosets(g, &c).unwrap();
                let ah = s4.action_on_cosets(h, &c).unwrap();
                assert_eq!(gh, ah.compose_unchecked(&ag));
            }
        }
    }

    #[test]
    fn normal_core_examples() {
        let s3 = s3();
        assert_eq!(s3.normal_core(&[p("(1 2 3)", 3)]).unwrap().order(), 3);
        assert_eq!(s3.normal_core(&[p("(1 2)", 3)]).unwrap().order(), 1);
        assert_eq!(s3.normal_core(s3.generators()).unwrap().order(), 6);
        let h = s3.subgroup(&[p("(1 2)", 3)]).unwrap();
        assert!(core_by_conjugates(&s3, &h).len() == 1);
    }

    #[test]
    fn normal_core_matches_conjugate_intersection_in_s4() {
        let s4 = PermGroup::generate(&[p("(1 2)", 4), p("(1 2 3 4)", 4)], 100).unwrap();
        // Every subgroup generated by at most two elements.
        for a in s4.elements() {
            for b in s4.elements() {
                let h = s4.subgroup(&[a.clone(), b.clone()]).unwrap();
                let core = s4.normal_core(h.generators()).unwrap();
                let mut got = core.elements().to_vec();
                got.sort();
                assert_eq!(got, core_by_conjugates(&s4, &h));
                assert!(s4.normalizes(&core));
            }
        }
    }

    #[test]
    fn regular_representation_examples() {
        let c2 = PermGroup::generate(&[p("(1 2)", 2)], 10).unwrap();
        assert_eq!(
            c2.regular_representation().group.generators(),
            &[p("(1 2)", 2)]
        );

        let c3 = PermGroup::generate(&[p("(1 2 3)", 3)], 10).unwrap();
        let reg = c3.regular_representation();
        // Elements in BFS order: e, a, a².
        assert_eq!(reg.labels[1], p("(1 2 3)", 3));
        assert_eq!(reg.group.generators()[0], p("(1 2 3)", 3));

        let v4 = PermGroup::generate(&[p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)], 10).unwrap();
        let reg = v4.regular_representation();
        assert_eq!(reg.group.order(), 4);
        for g in reg.group.elements().iter().filter(|g| !g.is_identity()) {
            assert_eq!(g.cycle_lengths(), vec![2, 2]);
        }
    }

    #[test]
    fn regular_representation_acts_freely() {
        let s4 = PermGroup::generate(&[p("(1 2)", 4), p("(1 2 3 4)", 4)], 100).unwrap();
        let reg = s4.regular_representation();
        assert_eq!(reg.group.order(), 24);
        assert!(reg.group.is_regular());
        for g in reg.group.elements() {
            let fixes = g.images().enumerate().any(|(i, x)| i == x);
            assert_eq!(fixes, g.is_identity());
        }
    }

    #[test]
    fn class_sizes_of_s4() {
        let s4 = PermGroup::generate(&[p("(1 2)", 4), p("(1 2 3 4)", 4)], 100).unwrap();
        let mut sizes = s4.class_sizes();
        sizes.sort();
        sizes.dedup();
        assert_eq!(sizes, vec![1, 3, 6, 8]);
    }
}
