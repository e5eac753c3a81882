//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Each criterion recomputes its expected values with small oracles written
//! here against raw arrays, independent of the library's own bookkeeping.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moncert_core::catalog::{GroupSpec, CATALOG};
use moncert_core::certificate::CertificateDoc;
use moncert_core::fpgrp::{self, todd_coxeter, FpError};
use moncert_core::monodromy::{
    free_construction, triangle_construction, triangle_homomorphism, Limits, MonodromyCertificate,
    TriangleAmbient,
};
use moncert_core::perm::{is_isomorphic, PermGroup, Permutation};
use moncert_core::psl2::{self, ProjectiveMatrix};
use moncert_core::words::{evaluate, reduce, Letter};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
type Mutation = (&'static str, &'static str, Box<dyn Fn(&mut CertificateDoc)>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- oracles on raw image arrays ----

fn arr(p: &Permutation) -> Vec<usize> {
    p.images().collect()
}

/// `x ↦ p(q(x))`.
fn compose_arr(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn inverse_arr(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn is_id(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

fn eval_arr(word: &[Letter], images: &[Vec<usize>], degree: usize) -> Vec<usize> {
    let mut acc: Vec<usize> = (0..degree).collect();
    for l in word {
        let g = &images[l.generator];
        let g = if l.inverse { inverse_arr(g) } else { g.clone() };
        acc = compose_arr(&acc, &g);
    }
    acc
}

/// Element set of `⟨gens⟩` by naive closure.
fn closure(gens: &[Vec<usize>], degree: usize) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![(0..degree).collect::<Vec<_>>()];
    while let Some(x) = stack.pop() {
        if seen.insert(x.clone()) {
            for g in gens {
                stack.push(compose_arr(&x, g));
            }
        }
    }
    seen
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Transitive with `|G| = degree` means regular.
fn regular_of_degree(gens: &[Vec<usize>], degree: usize) -> bool {
    let elems = closure(gens, degree);
    let orbit: BTreeSet<usize> = elems.iter().map(|g| g[0]).collect();
    elems.len() == degree && orbit.len() == degree
}

type Mat = [BigInt; 4];

fn mat(a: i64, b: i64, c: i64, d: i64) -> Mat {
    [a.into(), b.into(), c.into(), d.into()]
}

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

fn mat_inv(x: &Mat) -> Mat {
    [x[3].clone(), -&x[1], -&x[2], x[0].clone()]
}

fn mat_eval(word: &[Letter], gens: &[Mat]) -> Mat {
    let mut acc = mat(1, 0, 0, 1);
    for l in word {
        let g = if l.inverse {
            mat_inv(&gens[l.generator])
        } else {
            gens[l.generator].clone()
        };
        acc = mat_mul(&acc, &g);
    }
    acc
}

fn even(x: &BigInt) -> bool {
    (x % 2i32).is_zero()
}

/// `±I` mod 2 is `I`; the diagonal is odd and the off-diagonal even.
fn in_gamma2(m: &Mat) -> bool {
    !even(&m[0]) && even(&m[1]) && even(&m[2]) && !even(&m[3])
}

fn projectively_identity(m: &Mat) -> bool {
    m[1].is_zero() && m[2].is_zero() && m[0] == m[3] && (m[0].is_one() || (-&m[0]).is_one())
}

fn same_projective(m: &Mat, p: &ProjectiveMatrix) -> bool {
    let e = p.entries();
    let pos = (0..4).all(|i| &m[i] == e[i]);
    let neg = (0..4).all(|i| -&m[i] == *e[i]);
    pos || neg
}

fn catalog_group(name: &str) -> PermGroup {
    name.parse::<GroupSpec>()
        .unwrap()
        .resolve(10_000, 1_000_000)
        .unwrap()
}

fn symmetric(n: usize) -> PermGroup {
    catalog_group(&format!("S{n}"))
}

// ---- criteria ----

fn finite_triangle_orders() -> Check {
    let start = Instant::now();
    for (k, n) in [(1u64, 2usize), (2, 3), (3, 4)] {
        let table = todd_coxeter(
            &fpgrp::triangle(2, n as u64, k).map_err(|e| e.to_string())?,
            &[],
            1_000,
        )
        .map_err(|e| e.to_string())?;
        ensure(table.len() == factorial(n), || {
            format!("Δ(2,{n},{k}): {} cosets", table.len())
        })?;
        let action = table.coset_action().map_err(|e| e.to_string())?;
        let image = PermGroup::generate(&action, 1_000).map_err(|e| e.to_string())?;
        let gens: Vec<Vec<usize>> = action.iter().map(arr).collect();
        ensure(closure(&gens, table.len()).len() == factorial(n), || {
            format!("Δ(2,{n},{k}) image order")
        })?;
        let witness = is_isomorphic(&image, &symmetric(n), 5040).map_err(|e| e.to_string())?;
        ensure(
            witness.is_some_and(|w| w.validate(&image, &symmetric(n))),
            || format!("Δ(2,{n},{k}) not isomorphic to S{n}"),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "2, 6, 24 cosets, images ≅ S2, S3, S4 in {elapsed:.2?}"
    ))
}

fn phi_well_defined() -> Check {
    let start = Instant::now();
    for n in 2..=7 {
        let phi = triangle_homomorphism(n).map_err(|e| e.to_string())?;
        ensure(phi.relators_preserved && phi.surjective, || {
            format!("n={n}: library flags")
        })?;
        // Oracle images built directly from the stated cycles.
        let t: Vec<usize> = (0..n)
            .map(|i| [1, 0].get(i).copied().unwrap_or(i))
            .collect();
        let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let r: Vec<usize> = (0..n)
            .map(|i| {
                if i == 0 {
                    0
                } else if i == 1 {
                    n - 1
                } else {
                    i - 1
                }
            })
            .collect();
        ensure(
            phi.images.iter().map(arr).collect::<Vec<_>>() == vec![t.clone(), c.clone(), r.clone()],
            || format!("n={n}: images differ from (1 2), (1 ⋯ n), (n ⋯ 2)"),
        )?;
        let power = |g: &[usize], k: usize| {
            (0..k).fold((0..n).collect::<Vec<_>>(), |acc, _| compose_arr(&acc, g))
        };
        ensure(is_id(&power(&t, 2)), || format!("n={n}: γ0² ≠ 1"))?;
        ensure(is_id(&power(&c, n)), || format!("n={n}: γ1^n ≠ 1"))?;
        ensure(is_id(&power(&r, n - 1)), || format!("n={n}: γ∞^(n−1) ≠ 1"))?;
        ensure(is_id(&compose_arr(&compose_arr(&t, &c), &r)), || {
            format!("n={n}: γ0γ1γ∞ ≠ 1")
        })?;
        let order = phi.image_group(10_000).map_err(|e| e.to_string())?.order();
        ensure(order == factorial(n), || {
            format!("n={n}: image order {order}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "n = 2..7 relators preserved, orders n! in {elapsed:.2?}"
    ))
}

fn check_monodromy(cert: &MonodromyCertificate, group: &PermGroup) -> Result<(), String> {
    let d = group.order();
    let gens: Vec<Vec<usize>> = cert.monodromy_generators.iter().map(arr).collect();
    ensure(regular_of_degree(&gens, d), || {
        "monodromy not regular of degree |G|".into()
    })?;
    let mon = PermGroup::generate(&cert.monodromy_generators, d).map_err(|e| e.to_string())?;
    let witness = cert.iso_witness.as_ref().ok_or("no witness")?;
    ensure(witness.validate(&mon, group), || {
        "witness does not validate".into()
    })
}

fn monodromy_realization() -> Check {
    let mut slowest = Duration::ZERO;
    for name in CATALOG {
        let start = Instant::now();
        let group = catalog_group(name);
        let tri = triangle_construction(&group, name).map_err(|e| format!("{name}: {e}"))?;
        check_monodromy(&tri, &group).map_err(|e| format!("{name} triangle: {e}"))?;
        let free =
            free_construction(group.generators(), name).map_err(|e| format!("{name}: {e}"))?;
        check_monodromy(&free, &group).map_err(|e| format!("{name} free: {e}"))?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(5), || {
            format!("{name} took {elapsed:?}")
        })?;
        slowest = slowest.max(elapsed);
    }
    Ok(format!(
        "{} groups × 2 constructions regular and isomorphic, slowest {slowest:.2?}",
        CATALOG.len()
    ))
}

fn schreier_index_formula() -> Check {
    let mut total = 0;
    for name in CATALOG {
        let group = catalog_group(name);
        let (order, r) = (group.order(), group.generators().len());
        let cert =
            free_construction(group.generators(), name).map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.kernel_words.len() == 1 + order * (r - 1), || {
            format!(
                "{name}: {} words, expected {}",
                cert.kernel_words.len(),
                1 + order * (r - 1)
            )
        })?;
        let images: Vec<Vec<usize>> = group.generators().iter().map(arr).collect();
        // X_j = B^-j A B^j with A = [[1,2],[0,1]], B = [[1,0],[2,1]].
        let xs: Vec<Mat> = (0..r as i64)
            .map(|j| {
                mat_mul(
                    &mat_mul(&mat(1, 0, -2 * j, 1), &mat(1, 2, 0, 1)),
                    &mat(1, 0, 2 * j, 1),
                )
            })
            .collect();
        for (w, m) in cert.kernel_words.iter().zip(&cert.kernel_matrices) {
            ensure(
                is_id(&eval_arr(w.letters(), &images, group.degree())),
                || format!("{name}: {w} ≠ 1 in G"),
            )?;
            let oracle = mat_eval(w.letters(), &xs);
            ensure(same_projective(&oracle, m), || {
                format!("{name}: matrix of {w} differs")
            })?;
            ensure(in_gamma2(&oracle), || format!("{name}: {w} not in Γ(2)"))?;
            ensure(!projectively_identity(&oracle), || {
                format!("{name}: {w} is ±I")
            })?;
        }
        total += cert.kernel_words.len();
    }
    Ok(format!(
        "rank 1 + |G|(r−1) for all catalog groups, {total} words checked"
    ))
}

fn gamma2_round_trip() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let gens = [mat(1, 2, 0, 1), mat(1, 0, 2, 1)];
    for trial in 0..500 {
        let len = rng.gen_range(0..=40);
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = Letter::new(rng.gen_range(0..2), rng.gen_bool(0.5));
            if letters.last().is_some_and(|&p| p == l.inv()) {
                continue;
            }
            letters.push(l);
        }
        let w = reduce(letters.clone());
        ensure(w.letters() == letters.as_slice(), || {
            format!("trial {trial}: word was not reduced")
        })?;
        let m = evaluate(&w, &[psl2::gen_a(), psl2::gen_b()]).map_err(|e| e.to_string())?;
        ensure(same_projective(&mat_eval(&letters, &gens), &m), || {
            format!("trial {trial}: evaluation differs")
        })?;
        let back = psl2::matrix_to_word(&m).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(back == w, || {
            format!("trial {trial}: {w} came back as {back}")
        })?;
    }
    for j in 0..=8usize {
        let x = psl2::conjugate_generator(j);
        let jj = j as i64;
        let oracle = mat_mul(
            &mat_mul(&mat(1, 0, -2 * jj, 1), &mat(1, 2, 0, 1)),
            &mat(1, 0, 2 * jj, 1),
        );
        ensure(same_projective(&oracle, &x), || {
            format!("X_{j} = {x} differs from oracle")
        })?;
        ensure(x.in_gamma2() && in_gamma2(&oracle), || {
            format!("X_{j} not in Γ(2)")
        })?;
    }
    ensure(psl2::conjugate_generator(0) == psl2::gen_a(), || {
        "X0 ≠ A".into()
    })?;
    ensure(
        psl2::conjugate_generator(1).to_string() == "[[5,2],[-8,-3]]",
        || "X1 wrong".into(),
    )?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "500 words round-trip, X_0..X_8 ∈ Γ(2), X1 = [[5,2],[-8,-3]] in {elapsed:.2?}"
    ))
}

fn all_subgroups(g: &PermGroup) -> Vec<BTreeSet<Vec<usize>>> {
    let elems: Vec<Vec<usize>> = g.elements().iter().map(arr).collect();
    let mut subs = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            subs.insert(closure(&[a.clone(), b.clone()], g.degree()));
        }
    }
    subs.into_iter().collect()
}

fn normal_core_consistency() -> Check {
    let mut count = 0;
    for n in [3, 4] {
        let g = symmetric(n);
        let elems: Vec<Vec<usize>> = g.elements().iter().map(arr).collect();
        for h in all_subgroups(&g) {
            // core(H) = ∩_g gHg⁻¹.
            let mut core = h.clone();
            for x in &elems {
                let conj: BTreeSet<Vec<usize>> = h
                    .iter()
                    .map(|y| compose_arr(&compose_arr(x, y), &inverse_arr(x)))
                    .collect();
                core = core.intersection(&conj).cloned().collect();
            }
            let normal = core.len() == h.len();
            let h_gens: Vec<Permutation> = h
                .iter()
                .map(|p| Permutation::from_images(p.clone()).unwrap())
                .collect();
            let cosets = g.right_cosets(&h_gens).map_err(|e| e.to_string())?;
            let action: Vec<Permutation> = g
                .generators()
                .iter()
                .map(|x| g.action_on_cosets(x, &cosets))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let image = PermGroup::generate(&action, 100)
                .map_err(|e| e.to_string())?
                .order();
            ensure(image == g.order() / core.len(), || {
                format!(
                    "S{n}, |H| = {}: image {image}, [G : core] = {}",
                    h.len(),
                    g.order() / core.len()
                )
            })?;
            if normal {
                ensure(image == g.order() / h.len(), || {
                    format!("S{n}: normal H of order {}", h.len())
                })?;
            }
            let lib_core = g.normal_core(&h_gens).map_err(|e| e.to_string())?;
            ensure(lib_core.order() == core.len(), || {
                format!("S{n}: normal_core disagrees")
            })?;
            count += 1;
        }
    }
    ensure(count == 6 + 30, || {
        format!("found {count} subgroups, expected 6 + 30")
    })?;
    Ok(format!(
        "{count} subgroups of S3 and S4: image order = [G : core(H)]"
    ))
}

fn riemann_hurwitz() -> Check {
    let s5 = symmetric(5);
    let ambient = TriangleAmbient::new(&s5, Limits::default()).map_err(|e| e.to_string())?;
    let report = ambient
        .signatures()
        .map_err(|e| e.to_string())?
        .ok_or("(2,5,4) not hyperbolic")?;
    // χ(Δ(2,5,4)) = −1 + 1/2 + 1/5 + 1/4 and 2 − 2g = 120 χ for a torsion-free kernel.
    let chi = Ratio::new(-1i64, 1) + Ratio::new(1, 2) + Ratio::new(1, 5) + Ratio::new(1, 4);
    ensure(chi == Ratio::new(-1, 20), || format!("χ = {chi}"))?;
    let oracle_genus = (Ratio::from_integer(2) - Ratio::from_integer(120) * chi) / 2;
    ensure(report.kernel_torsion_free, || {
        "kernel not torsion-free".into()
    })?;
    let k = &report.signatures.kernel;
    ensure(
        Ratio::from_integer(k.genus as i64) == oracle_genus && k.periods.is_empty(),
        || format!("kernel signature {k}, oracle genus {oracle_genus}"),
    )?;
    let s = &report.signatures.subgroup;
    ensure(
        ambient.index() == 1 && s.genus == 0 && s.periods == vec![2, 5, 4],
        || format!("index {} signature {s}", ambient.index()),
    )?;
    Ok(format!("ker φ at n = 5: {k}; index 1: {s}"))
}

fn infinite_case() -> Check {
    let p = fpgrp::triangle(2, 5, 4).map_err(|e| e.to_string())?;
    match todd_coxeter(&p, &[], 100_000) {
        Err(FpError::Capacity { cap }) => Ok(format!(
            "Δ(2,5,4) stops with capacity error at {cap} cosets"
        )),
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(t) => Err(format!("returned a table with {} cosets", t.len())),
    }
}

fn moncert(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_moncert"))
        .args(args)
        .output()
        .expect("run moncert");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn mutate(src: &Path, dst: &Path, f: impl FnOnce(&mut CertificateDoc)) -> Result<(), String> {
    let mut doc = CertificateDoc::from_json(&fs::read_to_string(src).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    f(&mut doc);
    fs::write(dst, doc.to_json()).map_err(|e| e.to_string())
}

fn certificate_integrity() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let (code, err) = moncert(&["realize", "--all-catalog", "--out", d.to_str().unwrap()]);
    ensure(code == 0, || {
        format!("realize --all-catalog exit {code}: {err}")
    })?;
    let mut verified = 0;
    for name in CATALOG {
        for c in ["triangle", "free"] {
            let path = d.join(format!("{name}-{c}.json"));
            let (code, err) = moncert(&["verify", path.to_str().unwrap()]);
            ensure(code == 0, || {
                format!("verify {name} {c}: exit {code}: {err}")
            })?;
            verified += 1;
        }
    }

    let mutations: [Mutation; 3] = [
        (
            "S4-triangle.json",
            "monodromy_generators",
            Box::new(|doc| doc.monodromy_generators[0] = "()".into()),
        ),
        (
            "S3-free.json",
            "kernel_words",
            Box::new(|doc| doc.kernel_words[0] = format!("{}*x0*x0^-1", doc.kernel_words[0])),
        ),
        (
            "Q8-triangle.json",
            "iso_witness",
            Box::new(|doc| doc.iso_witness[0].image = "()".into()),
        ),
    ];
    for (file, field, f) in mutations {
        let target = d.join(format!("mutated-{field}.json"));
        mutate(&d.join(file), &target, f)?;
        let (code, err) = moncert(&["verify", target.to_str().unwrap()]);
        ensure(code == 1 && err.contains(field), || {
            format!("{field} mutation: exit {code}: {err}")
        })?;
    }
    Ok(format!("{verified} certificates verify; mutations of monodromy_generators, kernel_words, iso_witness caught"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("finite triangle-group orders", finite_triangle_orders),
        ("φ well-defined and surjective", phi_well_defined),
        ("monodromy realization", monodromy_realization),
        ("Schreier index formula", schreier_index_formula),
        ("Γ(2) word/matrix round trip", gamma2_round_trip),
        ("normal-core consistency", normal_core_consistency),
        ("Riemann–Hurwitz consistency", riemann_hurwitz),
        ("infinite-case capacity error", infinite_case),
        ("certificate integrity", certificate_integrity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
