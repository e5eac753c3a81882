//! Finitely presented groups, triangle presentations, and Todd–Coxeter
//! coset enumeration.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Permutation;
use crate::words::{self, FreeWord, Letter, WordError};

/// Default cap on live cosets during enumeration.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("triangle parameters must be positive, got ({0}, {1}, {2})")]
    BadTriangle(u64, u64, u64),
    #[error("presentation parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("coset enumeration exceeded {cap} live cosets")]
    Capacity { cap: usize },
    #[error("word uses generator {index} but presentation has {count}")]
    UnknownGenerator { index: usize, count: usize },
    #[error("coset table is not closed")]
    NotClosed,
}

/// `⟨ generator_names | relators ⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<FreeWord>) -> Result<Self, FpError> {
        let count = generator_names.len();
        for r in &relators {
            if r.alphabet_bound() > count {
                return Err(FpError::UnknownGenerator {
                    index: r.alphabet_bound() - 1,
                    count,
                });
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    /// Parses a word in this presentation's generator names.
    pub fn parse_word(&self, text: &str) -> Result<FreeWord, WordError> {
        words::parse_letters(text, |name| {
            self.generator_names.iter().position(|g| g == name)
        })
        .map(words::reduce)
    }
}

/// `Δ(m, n, k) = ⟨ g0, g1, gi | g0^m, g1^n, gi^k, g0·g1·gi ⟩`.
pub fn triangle(m: u64, n: u64, k: u64) -> Result<Presentation, FpError> {
    if m == 0 || n == 0 || k == 0 {
        return Err(FpError::BadTriangle(m, n, k));
    }
    let names = ["g0", "g1", "gi"].map(String::from).to_vec();
    let relators = vec![
        FreeWord::generator(0).pow(m as i64),
        FreeWord::generator(1).pow(n as i64),
        FreeWord::generator(2).pow(k as i64),
        words::reduce([
            Letter::new(0, false),
            Letter::new(1, false),
            Letter::new(2, false),
        ]),
    ];
    Presentation::new(names, relators)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | ", self.generator_names.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r.display_with(&self.generator_names))?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = FpError;

    /// `gens '|' relators`, e.g. `g0,g1,gi | g0^2, g1^5, gi^4, g0*g1*gi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bar = s.find('|').ok_or(FpError::Parse {
            pos: s.len(),
            msg: "expected '|'".into(),
        })?;
        let mut names = Vec::new();
        let mut offset = 0;
        for part in s[..bar].split(',') {
            let name = part.trim();
            let valid = !name.is_empty()
                && !name.as_bytes()[0].is_ascii_digit()
                && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
            if !valid {
                return Err(FpError::Parse {
                    pos: offset,
                    msg: format!("invalid generator name '{name}'"),
                });
            }
            if names.iter().any(|n| n == name) {
                return Err(FpError::Parse {
                    pos: offset,
                    msg: format!("duplicate generator '{name}'"),
                });
            }
            names.push(name.to_string());
            offset += part.len() + 1;
        }
        let shell = Presentation {
            generator_names: names,
            relators: Vec::new(),
        };
        let mut relators = Vec::new();
        let rest = &s[bar + 1..];
        if !rest.trim().is_empty() {
            let mut offset = bar + 1;
            for part in rest.split(',') {
                let w = shell.parse_word(part).map_err(|e| match e {
                    WordError::Parse { pos, msg } => FpError::Parse {
                        pos: offset + pos,
                        msg,
                    },
                    other => FpError::Parse {
                        pos: offset,
                        msg: other.to_string(),
                    },
                })?;
                if !w.is_empty() {
                    relators.push(w);
                }
                offset += part.len() + 1;
            }
        }
        Presentation::new(shell.generator_names, relators)
    }
}

/// Spherical, euclidean or hyperbolic according to `1/m + 1/n + 1/k`
/// compared with 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// Exact classification by clearing denominators.
pub fn hyperbolicity_class(m: u64, n: u64, k: u64) -> Geometry {
    let (m, n, k) = (m as u128, n as u128, k as u128);
    let lhs = n * k + m * k + m * n;
    let rhs = m * n * k;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => Geometry::Spherical,
        std::cmp::Ordering::Equal => Geometry::Euclidean,
        std::cmp::Ordering::Less => Geometry::Hyperbolic,
    }
}

/// Column of a letter: `2·generator` for `x`, `2·generator + 1` for `x^-1`.
fn column(l: Letter) -> usize {
    2 * l.generator + l.inverse as usize
}

/// Closed coset table in standard (breadth-first) numbering; coset 0 is
/// the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    num_generators: usize,
    rows: Vec<Vec<Option<usize>>>,
    subgroup: Vec<FreeWord>,
}

impl CosetTable {
    /// Builds a table from raw rows (columns `x0, x0^-1, x1, x1^-1, …`);
    /// entries may be undefined.
    pub fn from_rows(
        num_generators: usize,
        rows: Vec<Vec<Option<usize>>>,
        subgroup: Vec<FreeWord>,
    ) -> Self {
        CosetTable {
            num_generators,
            rows,
            subgroup,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn subgroup(&self) -> &[FreeWord] {
        &self.subgroup
    }

    pub fn rows(&self) -> &[Vec<Option<usize>>] {
        &self.rows
    }

    pub fn entry(&self, coset: usize, letter: Letter) -> Option<usize> {
        self.rows.get(coset)?.get(column(letter)).copied().flatten()
    }

    pub fn is_closed(&self) -> bool {
        self.rows.iter().all(|r| {
            r.len() == 2 * self.num_generators
                && r.iter()
                    .all(|e| matches!(e, Some(c) if *c < self.rows.len()))
        })
    }

    /// Follows `w` from `coset`, letters left to right.
    pub fn scan(&self, coset: usize, w: &FreeWord) -> Option<usize> {
        w.letters().iter().try_fold(coset, |c, &l| self.entry(c, l))
    }

    /// Every relator scans back to its start from every coset, and every
    /// subgroup word fixes coset 0.
    pub fn is_compatible(&self, relators: &[FreeWord]) -> bool {
        (0..self.len()).all(|c| relators.iter().all(|r| self.scan(c, r) == Some(c)))
            && self.subgroup.iter().all(|w| self.scan(0, w) == Some(0))
    }

    /// One permutation of coset ids per generator, `c ↦ c·g`. These form a
    /// right action: a word acts by applying its letters left to right.
    pub fn coset_action(&self) -> Result<Vec<Permutation>, FpError> {
        if !self.is_closed() || self.rows.is_empty() {
            return Err(FpError::NotClosed);
        }
        (0..self.num_generators)
            .map(|g| {
                let images = self
                    .rows
                    .iter()
                    .map(|r| r[2 * g].expect("closed"))
                    .collect();
                Permutation::from_images(images).map_err(|_| FpError::NotClosed)
            })
            .collect()
    }
}

const NONE: u32 = u32::MAX;

struct Enumerator {
    width: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    cap: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn get(&self, c: usize, x: usize) -> Option<usize> {
        let v = self.table[c * self.width + x];
        (v != NONE).then_some(v as usize)
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.width + x] = v as u32;
    }

    fn unset(&mut self, c: usize, x: usize) {
        self.table[c * self.width + x] = NONE;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn new_coset(&mut self) -> Result<usize, FpError> {
        if self.live >= self.cap || self.parent.len() >= NONE as usize {
            return Err(FpError::Capacity { cap: self.cap });
        }
        let c = self.parent.len();
        self.parent.push(c as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.width));
        self.live += 1;
        Ok(c)
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), FpError> {
        let d = self.new_coset()?;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo as u32;
            self.queue.push(hi);
            self.live -= 1;
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.width {
                let Some(d) = self.get(dead, x) else { continue };
                self.unset(d, x ^ 1);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                if let Some(t) = self.get(mu, x) {
                    self.merge(nu, t);
                } else if let Some(t) = self.get(nu, x ^ 1) {
                    self.merge(mu, t);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) -> Result<(), FpError> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j {
                match self.get(f, w[i as usize]) {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                match self.get(b, w[j as usize] ^ 1) {
                    Some(next) => {
                        b = next;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

/// HLT coset enumeration of the subgroup generated by `subgroup_words`,
/// followed by breadth-first renumbering. Fails with a capacity error if
/// more than `max_cosets` cosets are live at once.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup_words: &[FreeWord],
    max_cosets: usize,
) -> Result<CosetTable, FpError> {
    let ngens = p.num_generators();
    for w in subgroup_words {
        if w.alphabet_bound() > ngens {
            return Err(FpError::UnknownGenerator {
                index: w.alphabet_bound() - 1,
                count: ngens,
            });
        }
    }
    let to_columns =
        |w: &FreeWord| -> Vec<usize> { w.letters().iter().map(|&l| column(l)).collect() };
    let relators: Vec<Vec<usize>> = p.relators.iter().map(to_columns).collect();
    let width = 2 * ngens;
    let mut e = Enumerator {
        width,
        table: Vec::new(),
        parent: Vec::new(),
        live: 0,
        cap: max_cosets.max(1),
        queue: Vec::new(),
    };
    e.new_coset()?;
    for w in subgroup_words {
        e.scan_and_fill(0, &to_columns(w))?;
    }
    let mut alpha = 0;
    while alpha < e.parent.len() {
        for r in &relators {
            if !e.is_live(alpha) {
                break;
            }
            e.scan_and_fill(alpha, r)?;
        }
        if e.is_live(alpha) {
            for x in 0..width {
                if e.get(alpha, x).is_none() {
                    e.define(alpha, x)?;
                }
            }
        }
        alpha += 1;
    }

    // Standardize: renumber live cosets in breadth-first order from 0.
    let mut number = vec![usize::MAX; e.parent.len()];
    let mut order = vec![0usize];
    number[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for x in 0..width {
            let d = e.get(c, x).expect("closed after HLT");
            if number[d] == usize::MAX {
                number[d] = order.len();
                order.push(d);
            }
        }
    }
    let rows = order
        .iter()
        .map(|&c| {
            (0..width)
                .map(|x| Some(number[e.get(c, x).expect("closed")]))
                .collect()
        })
        .collect();
    Ok(CosetTable::from_rows(ngens, rows, subgroup_words.to_vec()))
}
