//! The `moncert` command line. Exit codes: 0 success, 1 check failure,
//! 2 parse or usage error, 3 capacity exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{CatalogError, GroupSpec, CATALOG, DEFAULT_PRESENTATION_COSETS};
use crate::certificate::{self, CertificateDoc};
use crate::fpgrp::{todd_coxeter, FpError, Presentation, DEFAULT_MAX_COSETS};
use crate::monodromy::{self, Construction, Limits, MonodromyError, TriangleAmbient};
use crate::perm::{PermError, PermGroup, DEFAULT_GROUP_CAP};
use crate::psl2::{self, ProjectiveMatrix, Psl2Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "moncert",
    version,
    about = "Monodromy certificates for finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructionArg {
    Triangle,
    Free,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::Triangle => Construction::Triangle,
            ConstructionArg::Free => Construction::Free,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certificate for a group.
    Realize {
        /// S<n>, A<n>, C<n>, D<n>, Q8, V4, perm:<n>:<cycles>,... or pres:<text>
        #[arg(long, required_unless_present = "all_catalog")]
        group: Option<String>,
        /// Defaults to both constructions with --all-catalog.
        #[arg(long, value_enum, required_unless_present = "all_catalog")]
        construction: Option<ConstructionArg>,
        /// Output file, or a directory with --all-catalog; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Coset cap for pres: specs.
        #[arg(long, default_value_t = DEFAULT_PRESENTATION_COSETS)]
        max_cosets: usize,
        /// Element cap for group closures.
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
        /// Realize every catalog group, writing <label>-<construction>.json.
        #[arg(long, conflicts_with = "group")]
        all_catalog: bool,
    },
    /// Recompute every field of a certificate.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
    /// Order of a finitely presented group by coset enumeration.
    Order {
        presentation: String,
        #[arg(long, visible_alias = "cap", default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Signatures of ker φ and φ⁻¹(G) in Δ(2, n, n−1).
    Signature {
        n: usize,
        /// `full` for S_n, otherwise a group spec of degree n.
        #[arg(long, default_value = "full")]
        subgroup: String,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
    /// Write a Γ(2) matrix as a word in A = x0, B = x1.
    Decompose { matrix: String },
}

/// A one-line diagnostic and its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CHECK,
            message: message.into(),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let code = if e.is_capacity() {
            EXIT_CAPACITY
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FpError> for Failure {
    fn from(e: FpError) -> Self {
        CatalogError::from(e).into()
    }
}

impl From<MonodromyError> for Failure {
    fn from(e: MonodromyError) -> Self {
        let code = match &e {
            e if e.is_capacity() => EXIT_CAPACITY,
            MonodromyError::DegreeTooSmall(_)
            | MonodromyError::NoGenerators
            | MonodromyError::NotHyperbolic(..)
            | MonodromyError::Perm(PermError::NotInGroup | PermError::DegreeMismatch(..)) => {
                EXIT_USAGE
            }
            _ => EXIT_CHECK,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<String, Failure>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Realize {
            group,
            construction,
            out: path,
            max_cosets,
            cap,
            all_catalog,
        } => {
            let limits = Limits {
                group_cap: cap,
                ..Limits::default()
            };
            if all_catalog {
                return realize_catalog(
                    construction.map(Into::into),
                    path.as_deref(),
                    max_cosets,
                    limits,
                    out,
                    err,
                );
            }
            let (group, construction) = (
                group.expect("required by clap"),
                construction.expect("required by clap"),
            );
            realize(&group, construction.into(), max_cosets, limits).and_then(|(doc, failed)| {
                emit(&doc, path.as_deref(), out)?;
                match (failed, &path) {
                    (Some(f), _) => Err(f),
                    (None, Some(p)) => Ok(format!("wrote {}", p.display())),
                    (None, None) => Ok(String::new()),
                }
            })
        }
        Command::Verify { path, cap } => verify(&path, cap),
        Command::Order {
            presentation,
            max_cosets,
        } => order(&presentation, max_cosets),
        Command::Signature { n, subgroup, cap } => signature(n, &subgroup, cap),
        Command::Decompose { matrix } => decompose(&matrix),
    };
    finish(outcome, out, err)
}

fn finish(outcome: Outcome, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match outcome {
        Ok(text) => {
            if !text.is_empty() {
                let _ = writeln!(out, "{text}");
            }
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// The certificate document plus the failure to report if a check is false.
fn realize(
    spec: &str,
    construction: Construction,
    max_cosets: usize,
    limits: Limits,
) -> Result<(CertificateDoc, Option<Failure>), Failure> {
    let parsed: GroupSpec = spec.parse()?;
    let generators = parsed.generators(max_cosets)?;
    let cert = match construction {
        Construction::Triangle => {
            let group =
                PermGroup::generate(&generators, limits.group_cap).map_err(CatalogError::from)?;
            monodromy::triangle_construction_with(&group, spec, limits)?
        }
        Construction::Free => monodromy::free_construction_with(&generators, spec, limits)?,
    };
    let doc = CertificateDoc::from_certificate(&cert);
    let failed = cert.failed_checks();
    let failure = (!failed.is_empty())
        .then(|| Failure::check(format!("check failed: {}", failed.join(", "))));
    Ok((doc, failure))
}

fn emit(doc: &CertificateDoc, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let json = doc.to_json();
    match path {
        Some(p) => std::fs::write(p, json)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(json.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write certificate: {e}"))),
    }
}

fn realize_catalog(
    construction: Option<Construction>,
    dir: Option<&Path>,
    max_cosets: usize,
    limits: Limits,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let dir = dir.unwrap_or(Path::new("."));
    if let Err(e) = std::fs::create_dir_all(dir) {
        let _ = writeln!(err, "error: cannot create {}: {e}", dir.display());
        return EXIT_USAGE;
    }
    let constructions = match construction {
        Some(c) => vec![c],
        None => vec![Construction::Triangle, Construction::Free],
    };
    let jobs: Vec<(&str, Construction)> = CATALOG
        .iter()
        .flat_map(|&g| constructions.iter().map(move |&c| (g, c)))
        .collect();
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(group, c)| {
                s.spawn(move || {
                    let path = dir.join(format!("{group}-{}.json", c.as_str()));
                    let (doc, failed) = realize(group, c, max_cosets, limits)?;
                    emit(&doc, Some(&path), &mut std::io::sink())?;
                    match failed {
                        Some(f) => Err(Failure::check(format!(
                            "{group} {}: {}",
                            c.as_str(),
                            f.message
                        ))),
                        None => Ok(format!("ok {group} {} {}", c.as_str(), path.display())),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    results
        .into_iter()
        .map(|r| finish(r, out, err))
        .max()
        .unwrap_or(EXIT_OK)
}

fn verify(path: &Path, cap: usize) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = CertificateDoc::from_json(&text)
        .map_err(|e| Failure::usage(format!("malformed certificate: {e}")))?;
    let limits = Limits {
        group_cap: cap,
        ..Limits::default()
    };
    let report = certificate::verify(&doc, limits);
    match report.failures.first() {
        None => Ok("ok".into()),
        Some(first) => Err(Failure::check(format!(
            "verification failed in {} ({first})",
            report.failed_fields().join(", ")
        ))),
    }
}

fn order(text: &str, max_cosets: usize) -> Outcome {
    let p: Presentation = text.parse()?;
    let table = todd_coxeter(&p, &[], max_cosets)?;
    Ok(table.len().to_string())
}

fn signature(n: usize, subgroup: &str, cap: usize) -> Outcome {
    let limits = Limits {
        group_cap: cap,
        ..Limits::default()
    };
    let group = if subgroup == "full" {
        GroupSpec::Named { family: 'S', n }.resolve(DEFAULT_PRESENTATION_COSETS, cap)?
    } else {
        let g = subgroup
            .parse::<GroupSpec>()?
            .resolve(DEFAULT_PRESENTATION_COSETS, cap)?;
        if g.degree() != n {
            return Err(Failure::usage(format!(
                "subgroup has degree {}, expected {n}",
                g.degree()
            )));
        }
        g
    };
    let ambient = TriangleAmbient::new(&group, limits)?;
    let report = ambient.signatures()?.ok_or_else(|| {
        Failure::usage(format!(
            "(2, {n}, {}) is not hyperbolic",
            n.saturating_sub(1)
        ))
    })?;
    Ok(format!(
        "kernel {}; subgroup index={} {}",
        report.signatures.kernel,
        ambient.index(),
        report.signatures.subgroup
    ))
}

fn decompose(text: &str) -> Outcome {
    let m: ProjectiveMatrix = text
        .parse()
        .map_err(|e: Psl2Error| Failure::usage(e.to_string()))?;
    match psl2::matrix_to_word(&m) {
        Ok(w) => Ok(w.to_string()),
        Err(e @ Psl2Error::DescentStalled(_)) => Err(Failure::check(e.to_string())),
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}
