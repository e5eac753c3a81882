//! The JSON form of a [`MonodromyCertificate`] and an independent verifier
//! that recomputes every field from the group alone.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::monodromy::{
    substitute_conjugates, Construction, Limits, MonodromyCertificate, TriangleAmbient,
};
use crate::perm::{parse_cycles, IsoWitness, PermGroup, Permutation};
use crate::psl2::{self, ProjectiveMatrix};
use crate::words::{self, evaluate, FreeWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub label: String,
    pub degree: usize,
    pub order: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub generator: String,
    pub image: String,
}

/// `genus`/`periods` describe `Γ′` (the covering surface), `base_*` describe `Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub genus: u64,
    pub periods: Vec<u64>,
    pub base_genus: u64,
    pub base_periods: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub construction: String,
    pub group: GroupDoc,
    pub n: usize,
    pub cover_degree: usize,
    pub ambient_index: usize,
    pub ambient_action: Vec<String>,
    pub monodromy_generators: Vec<String>,
    pub kernel_words: Vec<String>,
    pub kernel_matrices: Vec<String>,
    pub iso_witness: Vec<WitnessEntry>,
    pub signature: Option<SignatureDoc>,
    pub checks: BTreeMap<String, bool>,
}

fn cycle_strings(perms: &[Permutation]) -> Vec<String> {
    perms.iter().map(ToString::to_string).collect()
}

impl CertificateDoc {
    pub fn from_certificate(cert: &MonodromyCertificate) -> Self {
        let iso_witness = match &cert.iso_witness {
            Some(w) => cert
                .monodromy_generators
                .iter()
                .zip(&w.generator_images)
                .map(|(g, h)| WitnessEntry {
                    generator: g.to_string(),
                    image: h.to_string(),
                })
                .collect(),
            None => Vec::new(),
        };
        CertificateDoc {
            construction: cert.construction.as_str().to_string(),
            group: GroupDoc {
                label: cert.label.clone(),
                degree: cert.group.degree(),
                order: cert.group.order(),
                generators: cycle_strings(cert.group.generators()),
            },
            n: cert.n,
            cover_degree: cert.cover_degree,
            ambient_index: cert.ambient_index,
            ambient_action: cycle_strings(&cert.ambient_action),
            monodromy_generators: cycle_strings(&cert.monodromy_generators),
            kernel_words: cert.kernel_words.iter().map(ToString::to_string).collect(),
            kernel_matrices: cert
                .kernel_matrices
                .iter()
                .map(ToString::to_string)
                .collect(),
            iso_witness,
            signature: cert.signature.as_ref().map(|s| SignatureDoc {
                genus: s.kernel.genus,
                periods: s.kernel.periods.clone(),
                base_genus: s.subgroup.genus,
                base_periods: s.subgroup.periods.clone(),
            }),
            checks: cert.checks.clone(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldFailure {
    pub field: &'static str,
    pub reason: String,
}

impl fmt::Display for FieldFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

/// Failures in document field order; empty means the certificate verified.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<FieldFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_fields(&self) -> Vec<&'static str> {
        let mut fields: Vec<&'static str> = Vec::new();
        for f in &self.failures {
            if !fields.contains(&f.field) {
                fields.push(f.field);
            }
        }
        fields
    }

    fn fail(&mut self, field: &'static str, reason: impl Into<String>) {
        self.failures.push(FieldFailure {
            field,
            reason: reason.into(),
        });
    }
}

fn parse_all(texts: &[String], degree: usize) -> Result<Vec<Permutation>, String> {
    texts
        .iter()
        .map(|t| parse_cycles(t, degree).map_err(|e| format!("'{t}': {e}")))
        .collect()
}

/// Re-derives every claim in `doc` from its group generators.
pub fn verify(doc: &CertificateDoc, limits: Limits) -> VerifyReport {
    let mut report = VerifyReport::default();
    let construction: Construction = match doc.construction.parse() {
        Ok(c) => c,
        Err(e) => {
            report.fail("construction", e);
            return report;
        }
    };

    let group = match parse_all(&doc.group.generators, doc.group.degree)
        .and_then(|gens| PermGroup::generate(&gens, limits.group_cap).map_err(|e| e.to_string()))
    {
        Ok(g) => g,
        Err(e) => {
            report.fail("group", e);
            return report;
        }
    };
    if group.order() != doc.group.order {
        report.fail(
            "group",
            format!(
                "generators give order {}, recorded {}",
                group.order(),
                doc.group.order
            ),
        );
    }
    if doc.n != group.degree() {
        report.fail(
            "n",
            format!("recorded {}, group degree {}", doc.n, group.degree()),
        );
    }
    if doc.cover_degree != group.order() {
        report.fail(
            "cover_degree",
            format!("recorded {}, |G| = {}", doc.cover_degree, group.order()),
        );
    }

    let ambient = match construction {
        Construction::Triangle => match TriangleAmbient::new(&group, limits) {
            Ok(a) => Some(a),
            Err(e) => {
                report.fail("ambient_index", e.to_string());
                return report;
            }
        },
        Construction::Free => None,
    };
    match &ambient {
        Some(a) => {
            if doc.ambient_index != a.index() {
                report.fail(
                    "ambient_index",
                    format!("recorded {}, [S_n : G] = {}", doc.ambient_index, a.index()),
                );
            }
            match parse_all(&doc.ambient_action, a.index()) {
                Ok(action) if action == a.action => {}
                Ok(_) => report.fail("ambient_action", "differs from the recomputed coset action"),
                Err(e) => report.fail("ambient_action", e),
            }
        }
        None => {
            if doc.ambient_index != group.generators().len() {
                report.fail(
                    "ambient_index",
                    format!(
                        "recorded {}, rank {}",
                        doc.ambient_index,
                        group.generators().len()
                    ),
                );
            }
            if !doc.ambient_action.is_empty() {
                report.fail(
                    "ambient_action",
                    "free construction records no ambient action",
                );
            }
        }
    }

    let monodromy = verify_monodromy(doc, &group, limits, &mut report);

    match construction {
        Construction::Free => verify_kernel(doc, &group, &mut report),
        Construction::Triangle => {
            if !doc.kernel_words.is_empty() {
                report.fail(
                    "kernel_words",
                    "triangle construction records no kernel words",
                );
            }
            if !doc.kernel_matrices.is_empty() {
                report.fail(
                    "kernel_matrices",
                    "triangle construction records no kernel matrices",
                );
            }
        }
    }

    verify_witness(doc, &group, monodromy.as_ref(), &mut report);

    let expected_signature = match &ambient {
        Some(a) => match a.signatures() {
            Ok(s) => s.map(|r| SignatureDoc {
                genus: r.signatures.kernel.genus,
                periods: r.signatures.kernel.periods,
                base_genus: r.signatures.subgroup.genus,
                base_periods: r.signatures.subgroup.periods,
            }),
            Err(e) => {
                report.fail("signature", e.to_string());
                return report;
            }
        },
        None => None,
    };
    if doc.signature != expected_signature {
        report.fail("signature", "differs from the recomputed signature");
    }

    if doc.checks.is_empty() {
        report.fail("checks", "no checks recorded");
    }
    for (name, ok) in &doc.checks {
        if !ok {
            report.fail("checks", format!("{name} recorded as failed"));
        }
    }
    report
}

fn verify_monodromy(
    doc: &CertificateDoc,
    group: &PermGroup,
    limits: Limits,
    report: &mut VerifyReport,
) -> Option<PermGroup> {
    let field = "monodromy_generators";
    let gens = match parse_all(&doc.monodromy_generators, group.order()) {
        Ok(g) if !g.is_empty() => g,
        Ok(_) => {
            report.fail(field, "no generators");
            return None;
        }
        Err(e) => {
            report.fail(field, e);
            return None;
        }
    };
    let cap = limits.group_cap.min(group.order());
    let mon = match PermGroup::generate(&gens, cap) {
        Ok(m) => m,
        Err(e) => {
            report.fail(field, format!("generated group exceeds |G|: {e}"));
            return None;
        }
    };
    if mon.order() != group.order() {
        report.fail(
            field,
            format!(
                "generate a group of order {}, expected {}",
                mon.order(),
                group.order()
            ),
        );
    } else if !mon.is_regular() {
        report.fail(field, "action is not regular");
    }
    Some(mon)
}

fn verify_kernel(doc: &CertificateDoc, group: &PermGroup, report: &mut VerifyReport) {
    let r = group.generators().len();
    let words_field = "kernel_words";
    let mut parsed: Vec<FreeWord> = Vec::new();
    let mut words_ok = true;
    for text in &doc.kernel_words {
        match words::parse_raw(text) {
            Ok(letters) if letters.is_empty() => {
                report.fail(words_field, format!("'{text}' is empty"));
                words_ok = false;
            }
            Ok(letters) if !words::is_reduced(&letters) => {
                report.fail(words_field, format!("'{text}' is not reduced"));
                words_ok = false;
            }
            Ok(letters) if letters.iter().any(|l| l.generator >= r) => {
                report.fail(
                    words_field,
                    format!("'{text}' uses a letter beyond x{}", r - 1),
                );
                words_ok = false;
            }
            Ok(letters) => parsed.push(words::reduce(letters)),
            Err(e) => {
                report.fail(words_field, format!("'{text}': {e}"));
                words_ok = false;
            }
        }
    }
    if words_ok {
        for w in &parsed {
            match evaluate(w, group.generators()) {
                Ok(g) if g.is_identity() => {}
                _ => report.fail(words_field, format!("'{w}' is not trivial in G")),
            }
        }
        let rank = words::schreier_rank(group.order() as u64, r as u64);
        if parsed.len() as u64 != rank {
            report.fail(
                words_field,
                format!("{} words, rank formula gives {rank}", parsed.len()),
            );
        }
        match words::schreier_kernel_basis(group) {
            Ok(s) if s.kernel_basis == parsed => {}
            Ok(_) => report.fail(words_field, "differs from the recomputed Schreier basis"),
            Err(e) => report.fail(words_field, e.to_string()),
        }
    }

    let field = "kernel_matrices";
    if doc.kernel_matrices.len() != doc.kernel_words.len() {
        report.fail(
            field,
            format!(
                "{} matrices for {} words",
                doc.kernel_matrices.len(),
                doc.kernel_words.len()
            ),
        );
        return;
    }
    let xs = psl2::free_generators(r);
    for (i, text) in doc.kernel_matrices.iter().enumerate() {
        let m: ProjectiveMatrix = match text.parse() {
            Ok(m) => m,
            Err(e) => {
                report.fail(field, format!("'{text}': {e}"));
                continue;
            }
        };
        if !m.in_gamma2() {
            report.fail(field, format!("{m} is not in Γ(2)"));
        }
        if m.is_identity() {
            report.fail(field, format!("entry {i} is the identity"));
        }
        if words_ok {
            let w = &parsed[i];
            if evaluate(w, &xs).ok().as_ref() != Some(&m) {
                report.fail(field, format!("{m} is not the value of '{w}'"));
            } else if psl2::matrix_to_word(&m).ok() != Some(substitute_conjugates(w)) {
                report.fail(field, format!("{m} does not decompose back to '{w}'"));
            }
        }
    }
}

fn verify_witness(
    doc: &CertificateDoc,
    group: &PermGroup,
    mon: Option<&PermGroup>,
    report: &mut VerifyReport,
) {
    let field = "iso_witness";
    let keys: Vec<&String> = doc.iso_witness.iter().map(|e| &e.generator).collect();
    if keys.len() != doc.monodromy_generators.len()
        || keys
            .iter()
            .zip(&doc.monodromy_generators)
            .any(|(k, g)| *k != g)
    {
        report.fail(field, "keys do not match monodromy_generators");
        return;
    }
    let images: Vec<String> = doc.iso_witness.iter().map(|e| e.image.clone()).collect();
    let images = match parse_all(&images, group.degree()) {
        Ok(i) => i,
        Err(e) => {
            report.fail(field, e);
            return;
        }
    };
    let Some(mon) = mon else {
        report.fail(field, "monodromy group unavailable");
        return;
    };
    let witness = IsoWitness {
        generator_images: images,
    };
    if !witness.validate(mon, group) {
        report.fail(field, "map is not an isomorphism onto G");
    }
}
