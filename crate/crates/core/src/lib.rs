//! Explicit monodromy certificates for finite groups.
//!
//! A finite group `G` is realized as `Γ/Γ′` for a surjection `φ: Γ → G`,
//! either from a free subgroup `F_r` of `Γ(2) ≤ PSL₂(ℤ)` or from the triangle
//! group `Δ(2, n, n−1)` mapping onto `S_n`. The resulting certificate carries
//! enough finite data (monodromy permutations, an isomorphism witness,
//! kernel words and matrices, signatures) to be re-checked from scratch.

pub mod catalog;
pub mod certificate;
pub mod cli;
pub mod fpgrp;
pub mod monodromy;
pub mod perm;
pub mod psl2;
pub mod words;
