use std::collections::HashMap;

use super::{PermError, PermGroup, Permutation};

/// Default order cap for isomorphism testing.
pub const DEFAULT_ISO_CAP: usize = 5040;

/// Images of the source group's generators, in generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub generator_images: Vec<Permutation>,
}

impl IsoWitness {
    /// Extends the generator map to every element of `source`, or `None` if
    /// the extension is not a well-defined map.
    fn extend(&self, source: &PermGroup, target: &PermGroup) -> Option<Vec<usize>> {
        extend_map(source, source.generators(), &self.generator_images, target)
    }

    /// Checks the induced map is a bijective homomorphism by comparing the
    /// full multiplication tables.
    pub fn validate(&self, source: &PermGroup, target: &PermGroup) -> bool {
        if self.generator_images.len() != source.generators().len()
            || source.order() != target.order()
            || self.generator_images.iter().any(|t| !target.contains(t))
        {
            return false;
        }
        let Some(map) = self.extend(source, target) else {
            return false;
        };
        let mut hit = vec![false; target.order()];
        for &j in &map {
            if hit[j] {
                return false;
            }
            hit[j] = true;
        }
        let src = source.elements();
        let tgt = target.elements();
        for (i, a) in src.iter().enumerate() {
            for (j, b) in src.iter().enumerate() {
                let ab = source.index_of(&a.compose_unchecked(b)).expect("closed");
                let image = tgt[map[i]].compose_unchecked(&tgt[map[j]]);
                if target.index_of(&image) != Some(map[ab]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Breadth-first extension of `gens[i] ↦ images[i]` over the subgroup of
/// `source` generated by `gens`. Entries of the result are target element
/// indices; `usize::MAX` marks elements outside that subgroup.
fn extend_map(
    source: &PermGroup,
    gens: &[Permutation],
    images: &[Permutation],
    target: &PermGroup,
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; source.order()];
    map[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let sx = &source.elements()[x];
        let tx = &target.elements()[map[x]];
        for (g, t) in gens.iter().zip(images) {
            let y = source.index_of(&sx.compose_unchecked(g))?;
            let ty = target.index_of(&tx.compose_unchecked(t))?;
            if map[y] == usize::MAX {
                map[y] = ty;
                queue.push(y);
            } else if map[y] != ty {
                return None;
            }
        }
    }
    Some(map)
}

/// Searches for an isomorphism `g1 → g2` by backtracking over images of a
/// reduced generating set of `g1`, pruned by element order and conjugacy
/// class size. The witness covers all of `g1.generators()`.
pub fn is_isomorphic(
    g1: &PermGroup,
    g2: &PermGroup,
    cap: usize,
) -> Result<Option<IsoWitness>, PermError> {
    if g1.order() > cap || g2.order() > cap {
        return Err(PermError::Capacity { cap });
    }
    if g1.order() != g2.order() {
        return Ok(None);
    }
    let classes1 = g1.class_sizes();
    let classes2 = g2.class_sizes();
    let profile = |g: &PermGroup, classes: &[usize]| {
        let mut v: Vec<(usize, usize)> = g
            .elements()
            .iter()
            .zip(classes)
            .map(|(x, &c)| (x.order(), c))
            .collect();
        v.sort_unstable();
        v
    };
    if profile(g1, &classes1) != profile(g2, &classes2) {
        return Ok(None);
    }

    let reduced: Vec<Permutation> = g1
        .reduced_generators()
        .into_iter()
        .filter(|g| !g.is_identity())
        .collect();
    let mut buckets: HashMap<(usize, usize), Vec<Permutation>> = HashMap::new();
    for (x, &c) in g2.elements().iter().zip(&classes2) {
        buckets.entry((x.order(), c)).or_default().push(x.clone());
    }
    let candidates: Vec<Vec<Permutation>> = reduced
        .iter()
        .map(|g| {
            let key = (
                g.order(),
                classes1[g1.index_of(g).expect("generator in group")],
            );
            buckets.get(&key).cloned().unwrap_or_default()
        })
        .collect();

    let mut chosen: Vec<Permutation> = Vec::with_capacity(reduced.len());
    let Some(map) = search(g1, g2, &reduced, &candidates, &mut chosen) else {
        return Ok(None);
    };
    let witness = IsoWitness {
        generator_images: g1
            .generators()
            .iter()
            .map(|g| g2.elements()[map[g1.index_of(g).expect("generator in group")]].clone())
            .collect(),
    };
    debug_assert!(witness.validate(g1, g2) || g1.order() > 720);
    Ok(Some(witness))
}

fn search(
    g1: &PermGroup,
    g2: &PermGroup,
    gens: &[Permutation],
    candidates: &[Vec<Permutation>],
    chosen: &mut Vec<Permutation>,
) -> Option<Vec<usize>> {
    let depth = chosen.len();
    let map = extend_map(g1, &gens[..depth], chosen, g2)?;
    // Injective on the subgroup generated so far.
    let mut hit = vec![false; g2.order()];
    for &j in map.iter().filter(|&&j| j != usize::MAX) {
        if hit[j] {
            return None;
        }
        hit[j] = true;
    }
    if depth == gens.len() {
        return map.iter().all(|&j| j != usize::MAX).then_some(map);
    }
    for t in &candidates[depth] {
        chosen.push(t.clone());
        if let Some(found) = search(g1, g2, gens, candidates, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}
