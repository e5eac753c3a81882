//! Permutations of `{1, …, n}` and finite permutation groups.
//!
//! Composition follows function composition: in `compose(p, q)` the right
//! factor acts first, so `compose(p, q)(x) = p(q(x))`. Points are 1-based in
//! every textual format and 0-based internally.

mod group;
mod iso;

pub(crate) use group::greedy_generating_subset;
pub use group::{CosetIndex, PermGroup, RegularRep, DEFAULT_GROUP_CAP};
pub use iso::{is_isomorphic, IsoWitness, DEFAULT_ISO_CAP};

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("permutation degree must be at least 1")]
    ZeroDegree,
    #[error("images do not form a bijection on 1..={0}")]
    NotBijective(usize),
    #[error("cycle parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("group closure exceeded cap of {cap} elements")]
    Capacity { cap: usize },
    #[error("generator list is empty")]
    NoGenerators,
    #[error("element is not in the ambient group")]
    NotInGroup,
}

/// A bijection of `{0, …, degree-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree >= 1, "permutation degree must be at least 1");
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Build from 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijective(n));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Build from 0-based cycles; unspecified points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree || seen[x] {
                    return Err(PermError::NotBijective(degree));
                }
                seen[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// The 0-based image list.
    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `compose(p, q)(x) = p(q(x))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != q.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), q.degree()));
        }
        Ok(self.compose_unchecked(q))
    }

    pub(crate) fn compose_unchecked(&self, q: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), q.degree());
        Permutation {
            images: q.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Least `t >= 1` with `p^t = id`: the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        self.cycle_lengths()
            .into_iter()
            .fold(1, |acc, l| acc.lcm(&l))
    }

    /// Disjoint cycles with fixed points, 0-based; each cycle starts at its
    /// minimum and cycles are sorted by first point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Canonical 1-based cycle decomposition, fixed points included.
    pub fn cycle_decomposition(&self) -> Vec<Vec<usize>> {
        self.cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    pub fn power(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Parse cycle notation such as `"(1 2)(3 4 5)"` on `degree` points.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PermError> {
        parse_cycles(text, degree)
    }
}

/// Parse whitespace-tolerant cycle notation; `""` and `"()"` are the identity
/// and singleton cycles are ignored.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
    if degree == 0 {
        return Err(PermError::ZeroDegree);
    }
    let err = |pos: usize, msg: &str| PermError::Parse {
        pos,
        msg: msg.to_string(),
    };
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; degree];
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(err(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(err(pos, "unterminated cycle"));
            }
            match bytes[pos] {
                b')' => {
                    pos += 1;
                    break;
                }
                b'0'..=b'9' => {
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let value: usize = text[start..pos]
                        .parse()
                        .map_err(|_| err(start, "integer too large"))?;
                    if value == 0 || value > degree {
                        return Err(err(
                            start,
                            &format!("point {value} out of range 1..={degree}"),
                        ));
                    }
                    if used[value - 1] {
                        return Err(err(start, &format!("point {value} repeated")));
                    }
                    used[value - 1] = true;
                    cycle.push(value - 1);
                    if pos < bytes.len()
                        && !(bytes[pos].is_ascii_whitespace() || bytes[pos] == b')')
                    {
                        return Err(err(pos, "expected whitespace or ')' after integer"));
                    }
                }
                _ => return Err(err(pos, "unexpected character in cycle")),
            }
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    Permutation::from_cycles(degree, &cycles)
}

/// Whether the permutations (of equal degree) move every point to every
/// other point; an orbit search, no group closure.
pub fn is_transitive_action(perms: &[Permutation]) -> bool {
    let Some(first) = perms.first() else {
        return false;
    };
    let n = first.degree();
    if perms.iter().any(|p| p.degree() != n) {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

impl fmt::Display for Permutation {
    /// Nontrivial cycles only, 1-based; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self, self.degree())
    }
}
