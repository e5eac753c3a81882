//! Reduced words in a free group, their evaluation in concrete groups, and
//! Schreier bases for kernels of maps onto finite permutation groups.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{PermGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator x{index} has no image (alphabet size {alphabet})")]
    AlphabetMismatch { index: usize, alphabet: usize },
    #[error("cannot evaluate over an empty image list")]
    EmptyImages,
    #[error("action graph is not connected: reached {reached} of {total} vertices")]
    NotConnected { reached: usize, total: usize },
}

/// One letter `x_i` or `x_i^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> FreeWord {
    let mut letters: Vec<Letter> = Vec::new();
    for l in raw {
        match letters.last() {
            Some(&top) if top.cancels(l) => {
                letters.pop();
            }
            _ => letters.push(l),
        }
    }
    FreeWord { letters }
}

pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| !w[0].cancels(w[1]))
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(index: usize) -> Self {
        FreeWord {
            letters: vec![Letter::new(index, false)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used plus one.
    pub fn alphabet_bound(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.generator + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        reduce(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Formats with caller-supplied generator names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedWord { word: self, names }
    }
}

struct NamedWord<'a> {
    word: &'a FreeWord,
    names: &'a [String],
}

impl fmt::Display for NamedWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.word.letters, |f, i| match self.names.get(i) {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "x{i}"),
        })
    }
}

fn write_word(
    f: &mut fmt::Formatter<'_>,
    letters: &[Letter],
    name: impl Fn(&mut fmt::Formatter<'_>, usize) -> fmt::Result,
) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let run = letters[i..].iter().take_while(|&&m| m == l).count();
        if i > 0 {
            write!(f, "*")?;
        }
        name(f, l.generator)?;
        match (run, l.inverse) {
            (1, false) => {}
            (1, true) => write!(f, "^-1")?,
            (k, false) => write!(f, "^{k}")?,
            (k, true) => write!(f, "^-{k}")?,
        }
        i += run;
    }
    Ok(())
}

impl fmt::Display for FreeWord {
    /// `x0^2*x1^-1*x0`; the empty word is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.letters, |f, i| write!(f, "x{i}"))
    }
}

impl FromStr for FreeWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_raw(s).map(reduce)
    }
}

/// Parses `x`-named words without reducing, e.g. `x0*x0^-1` stays two letters.
pub fn parse_raw(text: &str) -> Result<Vec<Letter>, WordError> {
    parse_letters(text, |name| {
        name.strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse().ok())
    })
}

/// Parses `factor ('*' factor)*` where a factor is `1`, `name`, or
/// `name^k` for a (possibly negative) integer `k`. `resolve` maps names to
/// generator indices.
pub fn parse_letters(
    text: &str,
    resolve: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<Letter>, WordError> {
    let bytes = text.as_bytes();
    let err = |pos: usize, msg: String| WordError::Parse { pos, msg };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut pos = 0;
    let mut out = Vec::new();
    loop {
        skip_ws(&mut pos);
        let start = pos;
        if pos < bytes.len() && bytes[pos] == b'1' {
            pos += 1;
        } else {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            if start == pos || bytes[start].is_ascii_digit() {
                return Err(err(start, "expected generator name or '1'".into()));
            }
            let name = &text[start..pos];
            let generator =
                resolve(name).ok_or_else(|| err(start, format!("unknown generator '{name}'")))?;
            skip_ws(&mut pos);
            let mut exponent: i64 = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                let num_start = pos;
                if pos < bytes.len() && bytes[pos] == b'-' {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exponent = text[num_start..pos]
                    .parse()
                    .map_err(|_| err(num_start, "expected integer exponent".into()))?;
            }
            let letter = Letter::new(generator, exponent < 0);
            out.extend(std::iter::repeat_n(
                letter,
                exponent.unsigned_abs() as usize,
            ));
        }
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'*' {
            return Err(err(pos, "expected '*'".into()));
        }
        pos += 1;
    }
    Ok(out)
}

/// Group elements a word can be evaluated in.
pub trait WordImage: Clone {
    fn identity_like(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl WordImage for Permutation {
    fn identity_like(&self) -> Self {
        Permutation::identity(self.degree())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.compose(rhs).expect("word images share a degree")
    }

    fn inv(&self) -> Self {
        self.inverse()
    }
}

/// Image of `w` under `x_i ↦ images[i]`; the product is taken left to
/// right, so for permutations the rightmost letter acts first.
pub fn evaluate<T: WordImage>(w: &FreeWord, images: &[T]) -> Result<T, WordError> {
    evaluate_letters(w.letters(), images)
}

pub fn evaluate_letters<T: WordImage>(letters: &[Letter], images: &[T]) -> Result<T, WordError> {
    let first = images.first().ok_or(WordError::EmptyImages)?;
    let mut inverses: Vec<Option<T>> = vec![None; images.len()];
    let mut acc = first.identity_like();
    for l in letters {
        let image = images.get(l.generator).ok_or(WordError::AlphabetMismatch {
            index: l.generator,
            alphabet: images.len(),
        })?;
        acc = if l.inverse {
            let inv = inverses[l.generator].get_or_insert_with(|| image.inv());
            acc.mul(inv)
        } else {
            acc.mul(image)
        };
    }
    Ok(acc)
}

/// Schreier data for a transitive right action given as a graph:
/// `cayley_graph[v][i]` is the vertex reached from `v` along generator `i`.
#[derive(Clone, Debug)]
pub struct SchreierData {
    pub cayley_graph: Vec<Vec<usize>>,
    /// `(parent, generator)` for every non-root vertex.
    pub spanning_tree: Vec<Option<(usize, usize)>>,
    /// Positive word from the root to each vertex along the tree.
    pub tree_words: Vec<FreeWord>,
    pub kernel_basis: Vec<FreeWord>,
}

/// Rank of an index-`index` subgroup of a free group of rank `r`.
pub fn schreier_rank(index: u64, r: u64) -> u64 {
    1 + index * (r - 1)
}

/// Breadth-first spanning tree rooted at vertex 0 (generators tried in index
/// order) and one Schreier generator `t_u · x_i · t_{u·i}⁻¹` per non-tree edge,
/// listed by vertex then generator.
pub fn schreier_generators(cayley_graph: Vec<Vec<usize>>) -> Result<SchreierData, WordError> {
    let total = cayley_graph.len();
    let mut spanning_tree: Vec<Option<(usize, usize)>> = vec![None; total];
    let mut tree_words: Vec<Option<FreeWord>> = vec![None; total];
    tree_words[0] = Some(FreeWord::identity());
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for (i, &v) in cayley_graph[u].iter().enumerate() {
            if tree_words[v].is_none() {
                let mut word = tree_words[u].clone().expect("visited");
                word.letters.push(Letter::new(i, false));
                tree_words[v] = Some(word);
                spanning_tree[v] = Some((u, i));
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    if reached != total {
        return Err(WordError::NotConnected { reached, total });
    }
    let tree_words: Vec<FreeWord> = tree_words.into_iter().map(Option::unwrap).collect();
    let mut kernel_basis = Vec::new();
    for (u, row) in cayley_graph.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            if spanning_tree[v] == Some((u, i)) {
                continue;
            }
            let word = reduce(
                tree_words[u]
                    .letters
                    .iter()
                    .copied()
                    .chain(std::iter::once(Letter::new(i, false)))
                    .chain(tree_words[v].invert().letters),
            );
            kernel_basis.push(word);
        }
    }
    Ok(SchreierData {
        cayley_graph,
        spanning_tree,
        tree_words,
        kernel_basis,
    })
}

/// Free basis of the kernel of `F_r → G`, `x_i ↦ G.generators()[i]`, from
/// the right Cayley graph of `G`. Vertex `v` is `G.elements()[v]`.
pub fn schreier_kernel_basis(group: &PermGroup) -> Result<SchreierData, WordError> {
    let graph = group
        .elements()
        .iter()
        .map(|x| {
            group
                .generators()
                .iter()
                .map(|g| {
                    group
                        .index_of(&x.compose(g).expect("same degree"))
                        .expect("closed")
                })
                .collect()
        })
        .collect();
    schreier_generators(graph)
}
