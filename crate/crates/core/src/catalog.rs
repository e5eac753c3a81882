//! Group specifications and the named-group catalog.
//!
//! | spec      | realization                                   |
//! |-----------|-----------------------------------------------|
//! | `S<n>`    | `(1 2)`, `(1 2 ⋯ n)`                           |
//! | `A<n>`    | `(1 2 k)` for `3 ≤ k ≤ n`                      |
//! | `C<n>`    | `(1 2 ⋯ n)`                                    |
//! | `D<n>`    | `(1 2 ⋯ n)` and `i ↦ n + 1 − i`, `n ≥ 3`       |
//! | `Q8`      | regular representation on 8 points            |
//! | `V4`      | `(1 2)(3 4)`, `(1 3)(2 4)`                     |
//!
//! `perm:<n>:<cycles>[,<cycles>...]` lists generators on `n` points and
//! `pres:<gens> | <relators>` is enumerated over the trivial subgroup.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fpgrp::{todd_coxeter, FpError, Presentation};
use crate::perm::{parse_cycles, PermError, PermGroup, Permutation};

/// Coset cap for `pres:` specs.
pub const DEFAULT_PRESENTATION_COSETS: usize = 10_000;

/// The groups exercised by `--all-catalog`.
pub const CATALOG: [&str; 11] = [
    "C2", "C3", "C4", "C5", "C6", "V4", "S3", "D4", "Q8", "A4", "S4",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("bad group spec '{spec}': {msg}")]
    Spec { spec: String, msg: String },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

impl CatalogError {
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            CatalogError::Perm(PermError::Capacity { .. })
                | CatalogError::Fp(FpError::Capacity { .. })
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Named { family: char, n: usize },
    Perms { degree: usize, cycles: Vec<String> },
    Presentation(String),
}

impl FromStr for GroupSpec {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |msg: &str| CatalogError::Spec {
            spec: s.to_string(),
            msg: msg.to_string(),
        };
        if let Some(rest) = s.strip_prefix("perm:") {
            let (degree, cycles) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected perm:<n>:<cycles>"))?;
            let degree: usize = degree
                .trim()
                .parse()
                .map_err(|_| bad("degree must be a positive integer"))?;
            if degree == 0 {
                return Err(bad("degree must be a positive integer"));
            }
            let cycles: Vec<String> = if cycles.trim().is_empty() {
                Vec::new()
            } else {
                cycles.split(',').map(|c| c.trim().to_string()).collect()
            };
            return Ok(GroupSpec::Perms { degree, cycles });
        }
        if let Some(rest) = s.strip_prefix("pres:") {
            return Ok(GroupSpec::Presentation(rest.to_string()));
        }
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(|| bad("empty spec"))?;
        let n: usize = chars
            .as_str()
            .parse()
            .map_err(|_| bad("expected S<n>, A<n>, C<n>, D<n>, Q8, V4, perm: or pres:"))?;
        match (family, n) {
            ('Q', 8) | ('V', 4) => Ok(GroupSpec::Named { family, n }),
            ('S' | 'A' | 'C', 1..) => Ok(GroupSpec::Named { family, n }),
            ('D', 3..) => Ok(GroupSpec::Named { family, n }),
            ('D', _) => Err(bad("D<n> needs n >= 3")),
            _ => Err(bad(
                "expected S<n>, A<n>, C<n>, D<n>, Q8, V4, perm: or pres:",
            )),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Named { family, n } => write!(f, "{family}{n}"),
            GroupSpec::Perms { degree, cycles } => write!(f, "perm:{degree}:{}", cycles.join(",")),
            GroupSpec::Presentation(text) => write!(f, "pres:{text}"),
        }
    }
}

fn cycle(n: usize, points: &[usize]) -> Permutation {
    Permutation::from_cycles(n, &[points.to_vec()]).expect("catalog cycles are valid")
}

fn named_generators(family: char, n: usize) -> Vec<Permutation> {
    let long = || cycle(n, &(0..n).collect::<Vec<_>>());
    match family {
        'S' if n == 1 => vec![Permutation::identity(1)],
        'S' => vec![cycle(n, &[0, 1]), long()],
        'A' if n < 3 => vec![Permutation::identity(n)],
        'A' => (2..n).map(|k| cycle(n, &[0, 1, k])).collect(),
        'C' => vec![long()],
        'D' => {
            let flip = Permutation::from_images((0..n).rev().collect()).expect("reflection");
            vec![long(), flip]
        }
        'Q' => vec![
            Permutation::from_cycles(8, &[vec![0, 2, 1, 3], vec![4, 7, 5, 6]]).expect("Q8"),
            Permutation::from_cycles(8, &[vec![0, 4, 1, 5], vec![2, 6, 3, 7]]).expect("Q8"),
        ],
        'V' => vec![
            Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).expect("V4"),
            Permutation::from_cycles(4, &[vec![0, 2], vec![1, 3]]).expect("V4"),
        ],
        _ => unreachable!("validated by the parser"),
    }
}

impl GroupSpec {
    /// Generators in their standard order.
    pub fn generators(&self, max_cosets: usize) -> Result<Vec<Permutation>, CatalogError> {
        match self {
            GroupSpec::Named { family, n } => Ok(named_generators(*family, *n)),
            GroupSpec::Perms { degree, cycles } if cycles.is_empty() => {
                Ok(vec![Permutation::identity(*degree)])
            }
            GroupSpec::Perms { degree, cycles } => cycles
                .iter()
                .map(|c| parse_cycles(c, *degree).map_err(CatalogError::from))
                .collect(),
            GroupSpec::Presentation(text) => {
                let p: Presentation = text.parse()?;
                let table = todd_coxeter(&p, &[], max_cosets)?;
                Ok(table.coset_action()?)
            }
        }
    }

    pub fn resolve(&self, max_cosets: usize, cap: usize) -> Result<PermGroup, CatalogError> {
        Ok(PermGroup::generate(&self.generators(max_cosets)?, cap)?)
    }
}
