//! The two constructions realizing a finite group `G` as `Γ/Γ′`:
//!
//! - **free**: `Γ = F_r = ⟨X_0, …, X_{r−1}⟩ ≤ Γ(2)`, `φ(x_i) = g_i`, and `Γ′ = ker φ`
//!   free of rank `1 + |G|(r − 1)` with an explicit Schreier basis;
//! - **triangle**: `φ: Δ(2, n, n−1) → S_n`, `Γ = φ⁻¹(G)`, `Γ′ = ker φ`.
//!
//! In both cases the fiber `Γ′\Γ` is labelled by the elements of `G`, so the
//! monodromy generators are right-regular permutations of degree `|G|`.

mod signature;

pub use signature::{
    orbifold_euler_characteristic, riemann_hurwitz_genus, subgroup_signature, torsion_free_check,
    Signature,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fpgrp::{self, hyperbolicity_class, FpError, Geometry, Presentation};
use crate::perm::{
    greedy_generating_subset, is_isomorphic, CosetIndex, IsoWitness, PermError, PermGroup,
    Permutation, DEFAULT_GROUP_CAP, DEFAULT_ISO_CAP,
};
use crate::psl2::{self, ProjectiveMatrix, Psl2Error};
use crate::words::{self, evaluate, FreeWord, Letter, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Psl2(#[from] Psl2Error),
    #[error("triangle construction needs degree n >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("free construction needs at least one generator")]
    NoGenerators,
    #[error("({0}, {1}, {2}) is not hyperbolic")]
    NotHyperbolic(u64, u64, u64),
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl MonodromyError {
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            MonodromyError::Perm(PermError::Capacity { .. })
                | MonodromyError::Fp(FpError::Capacity { .. })
        )
    }
}

/// Caps on closure size and isomorphism search.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub group_cap: usize,
    pub iso_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_cap: DEFAULT_GROUP_CAP,
            iso_cap: DEFAULT_ISO_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Presentation(Presentation),
    Free { rank: usize },
}

impl Source {
    fn rank(&self) -> usize {
        match self {
            Source::Presentation(p) => p.num_generators(),
            Source::Free { rank } => *rank,
        }
    }
}

/// A map from a presented (or free) group into `S_n`, given by generator
/// images and evaluated with the rightmost factor acting first.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub source: Source,
    pub target_degree: usize,
    pub images: Vec<Permutation>,
    pub relators_preserved: bool,
    pub surjective: bool,
}

impl Homomorphism {
    /// Checks relators; `surjective` is set by [`Homomorphism::check_surjective`].
    pub fn new(source: Source, images: Vec<Permutation>) -> Result<Self, MonodromyError> {
        let target_degree = images
            .first()
            .map(Permutation::degree)
            .ok_or(MonodromyError::NoGenerators)?;
        if images.len() != source.rank() {
            return Err(MonodromyError::Construction(format!(
                "{} images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        let relators_preserved = match &source {
            Source::Presentation(p) => p
                .relators
                .iter()
                .map(|r| evaluate(r, &images).map(|x| x.is_identity()))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .all(|ok| ok),
            Source::Free { .. } => true,
        };
        Ok(Homomorphism {
            source,
            target_degree,
            images,
            relators_preserved,
            surjective: false,
        })
    }

    pub fn image_group(&self, cap: usize) -> Result<PermGroup, MonodromyError> {
        Ok(PermGroup::generate(&self.images, cap)?)
    }

    /// Sets `surjective` when the image has `target_order` elements.
    pub fn check_surjective(
        &mut self,
        target_order: usize,
        cap: usize,
    ) -> Result<PermGroup, MonodromyError> {
        let image = self.image_group(cap)?;
        self.surjective = image.order() == target_order;
        Ok(image)
    }
}

fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// The images `(1 2)`, `(1 2 ⋯ n)`, `(n ⋯ 3 2)` of `γ0, γ1, γ∞`.
pub fn triangle_images(n: usize) -> Vec<Permutation> {
    let transposition = Permutation::from_cycles(n, &[vec![0, 1]]).expect("n >= 2");
    let long_cycle = Permutation::from_cycles(n, &[(0..n).collect()]).expect("valid cycle");
    let tail: Vec<usize> = (1..n).rev().collect();
    let reversed_tail = Permutation::from_cycles(n, &[tail]).expect("valid cycle");
    vec![transposition, long_cycle, reversed_tail]
}

/// `φ: Δ(2, n, n−1) → S_n` with relators and surjectivity verified.
pub fn triangle_homomorphism(n: usize) -> Result<Homomorphism, MonodromyError> {
    triangle_homomorphism_capped(n, DEFAULT_GROUP_CAP)
}

fn triangle_homomorphism_capped(n: usize, cap: usize) -> Result<Homomorphism, MonodromyError> {
    if n < 2 {
        return Err(MonodromyError::DegreeTooSmall(n));
    }
    let presentation = fpgrp::triangle(2, n as u64, n as u64 - 1)?;
    let mut phi = Homomorphism::new(Source::Presentation(presentation), triangle_images(n))?;
    if !phi.relators_preserved {
        return Err(MonodromyError::Construction(
            "φ does not preserve the triangle relators".into(),
        ));
    }
    let order = factorial(n).ok_or(PermError::Capacity { cap })?;
    phi.check_surjective(order, cap)?;
    if !phi.surjective {
        return Err(MonodromyError::Construction(format!(
            "φ images do not generate S_{n}"
        )));
    }
    Ok(phi)
}

/// Image group of an action of `Γ` on `Γ′`-cosets. When `Γ′` is normal the
/// result acts regularly and is `Γ/Γ′`; otherwise it is `Γ` modulo the
/// normal core of `Γ′`.
pub fn monodromy_from_pair(
    ambient_action: &[Permutation],
    normal: bool,
) -> Result<PermGroup, MonodromyError> {
    let group = PermGroup::generate(ambient_action, DEFAULT_GROUP_CAP)?;
    if normal && !group.is_regular() {
        return Err(MonodromyError::Consistency(
            "normal quotient does not act regularly".into(),
        ));
    }
    Ok(group)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Triangle,
    Free,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Triangle => "triangle",
            Construction::Free => "free",
        }
    }
}

impl std::str::FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "triangle" => Ok(Construction::Triangle),
            "free" => Ok(Construction::Free),
            other => Err(format!("unknown construction '{other}'")),
        }
    }
}

/// Signatures of `Γ′ = ker φ` (the covering surface) and of `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSignatures {
    pub kernel: Signature,
    pub subgroup: Signature,
}

#[derive(Clone, Debug)]
pub struct MonodromyCertificate {
    pub construction: Construction,
    pub label: String,
    pub group: PermGroup,
    pub n: usize,
    /// `[Γ : Γ′] = |G|`.
    pub cover_degree: usize,
    /// `[Δ : Γ]` for the triangle construction, the free rank `r` otherwise.
    pub ambient_index: usize,
    /// Images of `γ0, γ1, γ∞` acting on `Γ\Δ`; empty for the free construction.
    pub ambient_action: Vec<Permutation>,
    pub monodromy_generators: Vec<Permutation>,
    pub kernel_words: Vec<FreeWord>,
    pub kernel_matrices: Vec<ProjectiveMatrix>,
    pub iso_witness: Option<IsoWitness>,
    pub signature: Option<CoverSignatures>,
    pub checks: BTreeMap<String, bool>,
}

impl MonodromyCertificate {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// The monodromy group, its regularity, and an isomorphism witness to `G`.
fn certify_monodromy(
    group: &PermGroup,
    monodromy_generators: &[Permutation],
    limits: Limits,
    checks: &mut BTreeMap<String, bool>,
) -> Result<Option<IsoWitness>, MonodromyError> {
    let mon = monodromy_from_pair(monodromy_generators, false)?;
    checks.insert("monodromy_order".into(), mon.order() == group.order());
    checks.insert(
        "monodromy_regular".into(),
        mon.is_regular() && mon.degree() == group.order(),
    );
    let witness = is_isomorphic(&mon, group, limits.iso_cap)?;
    checks.insert(
        "iso_witness_valid".into(),
        witness.as_ref().is_some_and(|w| w.validate(&mon, group)),
    );
    Ok(witness)
}

/// The finite data of `Γ = φ⁻¹(G)` inside `Δ(2, n, n−1)`: `φ`, its image
/// `S_n`, the right cosets of `G` in `S_n` (which index `Γ\Δ`), and the
/// action of `γ0, γ1, γ∞` on them.
#[derive(Clone, Debug)]
pub struct TriangleAmbient {
    pub phi: Homomorphism,
    pub symmetric: PermGroup,
    pub cosets: CosetIndex,
    pub action: Vec<Permutation>,
}

/// Signatures plus the torsion-freeness of `ker φ` and agreement of the
/// orbifold genus with the Riemann–Hurwitz cycle count.
#[derive(Clone, Debug)]
pub struct SignatureReport {
    pub signatures: CoverSignatures,
    pub kernel_torsion_free: bool,
    pub riemann_hurwitz_agrees: bool,
}

impl TriangleAmbient {
    pub fn new(group: &PermGroup, limits: Limits) -> Result<Self, MonodromyError> {
        let n = group.degree();
        let phi = triangle_homomorphism_capped(n, limits.group_cap)?;
        let symmetric = phi.image_group(limits.group_cap)?;
        if group.generators().iter().any(|g| !symmetric.contains(g)) {
            return Err(PermError::NotInGroup.into());
        }
        let cosets = symmetric.right_cosets(group.generators())?;
        let action = phi
            .images
            .iter()
            .map(|g| symmetric.action_on_cosets(g, &cosets))
            .collect::<Result<_, _>>()?;
        Ok(TriangleAmbient {
            phi,
            symmetric,
            cosets,
            action,
        })
    }

    pub fn degree(&self) -> usize {
        self.phi.target_degree
    }

    pub fn orders(&self) -> (u64, u64, u64) {
        let n = self.degree() as u64;
        (2, n, n - 1)
    }

    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    /// `None` unless `(2, n, n−1)` is hyperbolic.
    pub fn signatures(&self) -> Result<Option<SignatureReport>, MonodromyError> {
        let orders = self.orders();
        if hyperbolicity_class(orders.0, orders.1, orders.2) != Geometry::Hyperbolic {
            return Ok(None);
        }
        // Δ acts on Γ′\Δ as S_n acts on itself by right multiplication.
        let kernel_action: Vec<Permutation> = self
            .phi
            .images
            .iter()
            .map(|g| self.symmetric.right_regular(g))
            .collect::<Result<_, _>>()?;
        let kernel = subgroup_signature(orders, &kernel_action, self.symmetric.order())?;
        let subgroup = subgroup_signature(orders, &self.action, self.index())?;
        Ok(Some(SignatureReport {
            kernel_torsion_free: torsion_free_check(&kernel_action, orders),
            riemann_hurwitz_agrees: riemann_hurwitz_genus(&kernel_action) == Some(kernel.genus)
                && riemann_hurwitz_genus(&self.action) == Some(subgroup.genus),
            signatures: CoverSignatures { kernel, subgroup },
        }))
    }
}

/// Realizes `G ≤ S_n` through `φ: Δ(2, n, n−1) → S_n`.
pub fn triangle_construction(
    group: &PermGroup,
    label: &str,
) -> Result<MonodromyCertificate, MonodromyError> {
    triangle_construction_with(group, label, Limits::default())
}

pub fn triangle_construction_with(
    group: &PermGroup,
    label: &str,
    limits: Limits,
) -> Result<MonodromyCertificate, MonodromyError> {
    let ambient = TriangleAmbient::new(group, limits)?;
    let n = ambient.degree();
    let index = ambient.index();
    let mut checks = BTreeMap::new();
    checks.insert("relators_preserved".into(), ambient.phi.relators_preserved);
    checks.insert("phi_surjective".into(), ambient.phi.surjective);
    checks.insert(
        "ambient_index".into(),
        index * group.order() == ambient.symmetric.order(),
    );

    // Schreier generators of Γ from the coset graph; their φ-images generate G.
    let graph: Vec<Vec<usize>> = (0..index)
        .map(|v| ambient.action.iter().map(|p| p.apply(v)).collect())
        .collect();
    let schreier = words::schreier_generators(graph)?;
    let images: Vec<Permutation> = schreier
        .kernel_basis
        .iter()
        .map(|w| evaluate(w, &ambient.phi.images))
        .collect::<Result<_, _>>()?;
    checks.insert(
        "schreier_images_in_subgroup".into(),
        images.iter().all(|g| group.contains(g)),
    );
    let subset =
        greedy_generating_subset(images.iter().filter(|g| !g.is_identity()), group.order(), n);
    let restricted = PermGroup::generate(&subset, limits.group_cap)?;
    checks.insert(
        "restriction_surjective".into(),
        restricted.order() == group.order(),
    );

    let monodromy_generators: Vec<Permutation> = subset
        .iter()
        .map(|g| group.right_regular(g))
        .collect::<Result<_, _>>()?;
    let iso_witness = certify_monodromy(group, &monodromy_generators, limits, &mut checks)?;

    let signature = match ambient.signatures()? {
        Some(report) => {
            checks.insert("kernel_torsion_free".into(), report.kernel_torsion_free);
            checks.insert("signature_consistent".into(), report.riemann_hurwitz_agrees);
            Some(report.signatures)
        }
        None => None,
    };

    Ok(MonodromyCertificate {
        construction: Construction::Triangle,
        label: label.to_string(),
        group: group.clone(),
        n,
        cover_degree: group.order(),
        ambient_index: index,
        ambient_action: ambient.action,
        monodromy_generators,
        kernel_words: Vec::new(),
        kernel_matrices: Vec::new(),
        iso_witness,
        signature,
        checks,
    })
}

/// Rewrites a word in `X_j` as a reduced word in `A = x0`, `B = x1` via
/// `X_j = B^-j A B^j`.
pub fn substitute_conjugates(w: &FreeWord) -> FreeWord {
    let mut letters = Vec::new();
    for l in w.letters() {
        let j = l.generator;
        letters.extend(std::iter::repeat_n(Letter::new(1, true), j));
        letters.push(Letter::new(0, l.inverse));
        letters.extend(std::iter::repeat_n(Letter::new(1, false), j));
    }
    words::reduce(letters)
}

/// Realizes `G = ⟨generators⟩` as `F_r / ker φ` with `F_r ≤ Γ(2)`.
pub fn free_construction(
    generators: &[Permutation],
    label: &str,
) -> Result<MonodromyCertificate, MonodromyError> {
    free_construction_with(generators, label, Limits::default())
}

pub fn free_construction_with(
    generators: &[Permutation],
    label: &str,
    limits: Limits,
) -> Result<MonodromyCertificate, MonodromyError> {
    if generators.is_empty() {
        return Err(MonodromyError::NoGenerators);
    }
    let r = generators.len();
    let group = PermGroup::generate(generators, limits.group_cap)?;
    let mut phi = Homomorphism::new(Source::Free { rank: r }, generators.to_vec())?;
    phi.check_surjective(group.order(), limits.group_cap)?;

    let schreier = words::schreier_kernel_basis(&group)?;
    let kernel_words = schreier.kernel_basis;
    let xs = psl2::free_generators(r);
    let kernel_matrices: Vec<ProjectiveMatrix> = kernel_words
        .iter()
        .map(|w| evaluate(w, &xs))
        .collect::<Result<_, _>>()?;

    let mut checks = BTreeMap::new();
    checks.insert("phi_surjective".into(), phi.surjective);
    checks.insert(
        "schreier_rank".into(),
        kernel_words.len() as u64 == words::schreier_rank(group.order() as u64, r as u64),
    );
    checks.insert(
        "kernel_words_reduced".into(),
        kernel_words
            .iter()
            .all(|w| !w.is_empty() && words::is_reduced(w.letters())),
    );
    let mut trivial = true;
    for w in &kernel_words {
        trivial &= evaluate(w, generators)?.is_identity();
    }
    checks.insert("kernel_words_trivial_in_g".into(), trivial);
    checks.insert(
        "kernel_matrices_in_gamma2".into(),
        kernel_matrices.iter().all(ProjectiveMatrix::in_gamma2),
    );
    checks.insert(
        "kernel_matrices_nontrivial".into(),
        kernel_matrices.iter().all(|m| !m.is_identity()),
    );
    let mut decomposes = true;
    for (w, m) in kernel_words.iter().zip(&kernel_matrices) {
        decomposes &= psl2::matrix_to_word(m)? == substitute_conjugates(w);
    }
    checks.insert("kernel_matrices_decompose".into(), decomposes);

    let monodromy_generators: Vec<Permutation> = generators
        .iter()
        .map(|g| group.right_regular(g))
        .collect::<Result<_, _>>()?;
    let iso_witness = certify_monodromy(&group, &monodromy_generators, limits, &mut checks)?;

    Ok(MonodromyCertificate {
        construction: Construction::Free,
        label: label.to_string(),
        n: group.degree(),
        cover_degree: group.order(),
        ambient_index: r,
        group,
        ambient_action: Vec::new(),
        monodromy_generators,
        kernel_words,
        kernel_matrices,
        iso_witness,
        signature: None,
        checks,
    })
}
