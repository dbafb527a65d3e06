//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria whose stated expectation contradicts an independent oracle are
//! listed in `EXPECTED_FAILURES`; they are still evaluated literally and
//! still print FAIL, but do not fail the run.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobsplit_core::arith::{parse_poly, FieldCtx, Monomial, MultiPoly, UniPoly, VarCtx};
use frobsplit_core::fdifferent::compute_fdifferent;
use frobsplit_core::fedder::{
    fpt_estimate, fpure_general, fpure_hypersurface, nu, stability_check, FrobeniusLevel,
};
use frobsplit_core::fibration::{
    assemble_moduli_divisor, char_scan, cone_h_poly, hasse_value, legendre_hasse_poly, point_count,
    CubicFamily, CONE,
};
use frobsplit_core::groebner::{
    bracket_power, buchberger, ci_colon_shortcut, colon, groebner_basis, ideals_equal,
    verify_groebner, GbOptions, Ideal, MonomialOrder,
};

/// Criterion 5 expects `x^2 + y^3` to be F-pure at p = 7. Every term
/// `x^(2i) y^(18-3i)` of `(x^2+y^3)^6` has an exponent >= 7, so the
/// brute-force oracle says it is not.
const EXPECTED_FAILURES: &[u32] = &[5];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn field(p: u64) -> FieldCtx {
    FieldCtx::new(p).unwrap()
}

fn level(p: u64, e: u32) -> FrobeniusLevel {
    FrobeniusLevel::new(field(p), e).unwrap()
}

fn opts() -> GbOptions {
    GbOptions::default()
}

fn vars(list: &str) -> VarCtx {
    VarCtx::parse_list(list).unwrap()
}

/// Schoolbook product over exponent vectors, independent of `MultiPoly::mul`.
fn naive_mul(
    field: FieldCtx,
    a: &[(u64, Vec<u32>)],
    b: &[(u64, Vec<u32>)],
) -> Vec<(u64, Vec<u32>)> {
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
    for (ca, ea) in a {
        for (cb, eb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = acc.entry(e).or_insert(0);
            *slot = field.add(*slot, field.mul(*ca, *cb));
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(e, c)| (c, e))
        .collect()
}

fn raw_terms(f: &MultiPoly) -> Vec<(u64, Vec<u32>)> {
    f.terms()
        .iter()
        .map(|t| (t.coeff, t.mono.exponents().to_vec()))
        .collect()
}

fn naive_pow(field: FieldCtx, f: &MultiPoly, n: u64) -> Vec<(u64, Vec<u32>)> {
    let base = raw_terms(f);
    let mut acc = vec![(1u64, vec![0u32; f.vars().len()])];
    for _ in 0..n {
        acc = naive_mul(field, &acc, &base);
    }
    acc
}

fn random_poly(
    rng: &mut ChaCha8Rng,
    field: FieldCtx,
    vars: &VarCtx,
    max_deg: u32,
    max_terms: usize,
) -> MultiPoly {
    let n = vars.len();
    let count = rng.gen_range(1..=max_terms);
    let raw = (0..count)
        .map(|_| {
            let mut exps = vec![0u32; n];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                exps[rng.gen_range(0..n)] += 1;
            }
            (rng.gen_range(1..field.p()), Monomial::from_exponents(exps))
        })
        .collect();
    MultiPoly::from_terms(field, vars, raw)
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let f3 = field(3);
    let v = CubicFamily::vars();
    let a = parse_poly(CONE, &v, f3).unwrap();
    let r = compute_fdifferent(
        &a.pow(2).unwrap(),
        &Ideal::of_vars(f3, &v, &[0, 1, 2]),
        level(3, 1),
        &opts(),
    )
    .unwrap();
    let elapsed = started.elapsed();
    // oracle: the (xyz)^2 coefficient of a schoolbook a^2
    let oracle: Vec<u64> = {
        let mut c = vec![0u64; 3];
        for (coeff, e) in naive_pow(f3, &a, 2) {
            if e[..3] == [2, 2, 2] {
                c[e[3] as usize] = coeff;
            }
        }
        c
    };
    let h = r.h_bar.to_univariate(3).unwrap();
    let oracle = UniPoly::new(f3, oracle);
    let legendre = legendre_hasse_poly(f3).unwrap();
    let scalar_of_legendre = h.degree() == legendre.degree() && h.monic() == legendre.monic();
    let divisor = r
        .divisor
        .as_ref()
        .map(|d| d.to_string())
        .unwrap_or_default();
    check(
        h == oracle
            && scalar_of_legendre
            && divisor == "(1/2)[t+1]"
            && elapsed < Duration::from_secs(1),
        format!(
            "h̄ = {}, oracle = {}, divisor = {divisor}, {elapsed:?}",
            r.h_bar,
            oracle.display("t")
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = Duration::ZERO;
    let mut bad = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        let started = Instant::now();
        let h = cone_h_poly(&CubicFamily::cone(field(p)), level(p, 1)).unwrap();
        let leg = legendre_hasse_poly(field(p)).unwrap();
        let same = !h.is_zero() && h.squarefree_part().monic() == leg.squarefree_part().monic();
        let t = started.elapsed();
        worst = worst.max(t);
        if !same || t >= Duration::from_secs(10) {
            bad.push(p);
        }
    }
    check(
        bad.is_empty(),
        format!("failing primes {bad:?}, slowest prime {worst:?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut disagreements = Vec::new();
    let mut checked = 0;
    for p in [3u64, 5, 7, 11, 13] {
        let fam = CubicFamily::cone(field(p));
        let h = cone_h_poly(&fam, level(p, 1)).unwrap();
        for lambda in 2..p {
            checked += 1;
            let by_h = h.eval(lambda) == 0;
            let by_hasse = hasse_value(&fam, lambda).unwrap() == 0;
            let by_count = if p >= 5 {
                point_count(&fam, lambda).unwrap() == p + 1
            } else {
                by_hasse
            };
            if by_h != by_hasse || by_hasse != by_count {
                disagreements.push((p, lambda));
            }
        }
    }
    check(
        disagreements.is_empty(),
        format!("{checked} fibers, disagreements {disagreements:?}"),
    )
}

fn criterion_4() -> Outcome {
    let v = CubicFamily::vars();
    let mut bad = Vec::new();
    for p in [3u64, 5, 7] {
        let f = field(p);
        let a = parse_poly(CONE, &v, f).unwrap();
        let center = compute_fdifferent(
            &a.pow(p - 1).unwrap(),
            &Ideal::of_vars(f, &v, &[0, 1, 2]),
            level(p, 1),
            &opts(),
        )
        .unwrap()
        .divisor;
        let moduli = assemble_moduli_divisor(&CubicFamily::cone(f), level(p, 1)).unwrap();
        if center.as_ref() != Some(&moduli) {
            bad.push(format!("p={p}"));
        }
    }
    let f3 = field(3);
    let a = parse_poly(CONE, &v, f3).unwrap();
    let j = Ideal::of_vars(f3, &v, &[0, 1, 2]);
    let e1 = compute_fdifferent(&a.pow(2).unwrap(), &j, level(3, 1), &opts())
        .unwrap()
        .divisor;
    let e2 = compute_fdifferent(&a.pow(8).unwrap(), &j, level(3, 2), &opts())
        .unwrap()
        .divisor;
    let m2 = assemble_moduli_divisor(&CubicFamily::cone(f3), level(3, 2)).unwrap();
    if e1 != e2 || e2.as_ref() != Some(&m2) {
        bad.push("p=3 e=1 vs e=2".into());
    }
    check(bad.is_empty(), format!("mismatches {bad:?}"))
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    let v = vars("x,y");
    for p in [2u64, 3, 5, 7] {
        let xy = parse_poly("x*y", &v, field(p)).unwrap();
        for e in 1..=3 {
            if !fpure_hypersurface(&xy, &[0, 1], level(p, e)).unwrap().fpure {
                notes.push(format!("xy not F-pure at p={p} e={e}"));
            }
        }
    }
    for (p, expected) in [(5u64, false), (7, true)] {
        let f = field(p);
        let cusp = parse_poly("x^2+y^3", &v, f).unwrap();
        let got = fpure_hypersurface(&cusp, &[0, 1], level(p, 1))
            .unwrap()
            .fpure;
        let brute = naive_pow(f, &cusp, p - 1)
            .iter()
            .any(|(_, e)| e.iter().all(|&k| (k as u64) < p));
        if got != brute {
            notes.push(format!(
                "cusp p={p}: implementation {got} vs brute force {brute}"
            ));
        }
        if got != expected {
            notes.push(format!(
                "cusp p={p}: expected {expected}, got {got} (brute force {brute})"
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut disagreements = 0;
    let mut pure = 0;
    for _ in 0..200 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let f = field(p);
        let a = loop {
            let a = random_poly(&mut rng, f, &v, 4, 4);
            if !a.is_constant() {
                break a;
            }
        };
        let hyp = fpure_hypersurface(&a, &[0, 1], level(p, 1)).unwrap().fpure;
        let ideal = Ideal::new(f, &v, vec![a]).unwrap();
        let gen = fpure_general(&ideal, &[0, 1], level(p, 1), &opts())
            .unwrap()
            .fpure;
        pure += hyp as u32;
        if hyp != gen {
            disagreements += 1;
        }
    }
    if disagreements > 0 {
        notes.push(format!("{disagreements} random disagreements"));
    }
    check(
        notes.is_empty(),
        format!("200 random principal ideals ({pure} F-pure), issues {notes:?}"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let v = vars("x,y,z");
    let (mut pure, mut counterexamples) = (0, Vec::new());
    for _ in 0..100 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let a = random_poly(&mut rng, field(p), &v, 3, 4);
        if a.is_zero() {
            continue;
        }
        if fpure_hypersurface(&a, &[0, 1, 2], level(p, 1))
            .unwrap()
            .fpure
        {
            pure += 1;
            if !stability_check(&a, &[0, 1, 2], level(p, 1), 2).unwrap() {
                counterexamples.push(a.to_string());
            }
        }
    }
    check(
        counterexamples.is_empty(),
        format!("{pure} F-pure at e=1, counterexamples {counterexamples:?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    let v = vars("x,y");
    let xy = parse_poly("x*y", &v, field(3)).unwrap();
    for e in 1..=3 {
        let got = nu(&xy, &[0, 1], level(3, e)).unwrap();
        if got != 3u64.pow(e) - 1 {
            notes.push(format!("nu(xy; {}) = {got}", 3u64.pow(e)));
        }
    }
    let f7 = field(7);
    let cusp = parse_poly("x^2+y^3", &v, f7).unwrap();
    let brute = (0..=12u64)
        .filter(|&a| {
            naive_pow(f7, &cusp, a)
                .iter()
                .any(|(_, e)| e.iter().all(|&k| k < 7))
        })
        .max()
        .unwrap();
    let got = nu(&cusp, &[0, 1], level(7, 1)).unwrap();
    if got != 5 || brute != 5 {
        notes.push(format!("nu(cusp; 7) = {got}, brute force {brute}"));
    }
    let samples = [
        ("x*y", 3u64, 3u32),
        ("x^2+y^3", 7, 3),
        ("x^2+y^3", 5, 3),
        ("x^3+y^3", 2, 4),
        ("x*y*(x+y)", 5, 2),
    ];
    for (text, p, e_max) in samples {
        let f = parse_poly(text, &v, field(p)).unwrap();
        if !fpt_estimate(&f, &[0, 1], e_max)
            .unwrap()
            .check_invariants(p)
        {
            notes.push(format!("nu sequence of {text} at p={p}"));
        }
    }
    check(notes.is_empty(), format!("issues {notes:?}"))
}

fn criterion_8() -> Outcome {
    let v = vars("x,y,z");
    let mut notes = Vec::new();
    let mut bases = 0;
    for (p, q) in [(3u64, 3u64), (2, 4), (5, 5), (3, 9)] {
        for gens in [&[0usize, 1][..], &[0, 1, 2][..]] {
            let j = Ideal::of_vars(field(p), &v, gens);
            let order = MonomialOrder::grevlex(3);
            let general = colon(&bracket_power(&j, q).unwrap(), &j, &order, &opts()).unwrap();
            let shortcut = ci_colon_shortcut(&j, q).unwrap().ideal;
            if !ideals_equal(&general, &shortcut, &opts()).unwrap() {
                notes.push(format!("J={gens:?} q={q}"));
            }
            for ideal in [&general, &shortcut] {
                let basis = groebner_basis(ideal, &order, &opts()).unwrap();
                bases += 1;
                if !verify_groebner(&basis, &order) {
                    notes.push(format!("S-polynomial check J={gens:?} q={q}"));
                }
            }
        }
    }
    // a non-monomial complete intersection as well
    let f5 = field(5);
    let j = Ideal::new(
        f5,
        &v,
        vec![
            parse_poly("x-y^2", &v, f5).unwrap(),
            parse_poly("z", &v, f5).unwrap(),
        ],
    )
    .unwrap();
    let order = MonomialOrder::grevlex(3);
    let general = colon(&bracket_power(&j, 5).unwrap(), &j, &order, &opts()).unwrap();
    if !ideals_equal(&general, &ci_colon_shortcut(&j, 5).unwrap().ideal, &opts()).unwrap() {
        notes.push("J=(x-y^2,z) q=5".into());
    }
    let gb = buchberger(&general, &order, &opts()).unwrap();
    let (ord, basis) = gb.cached_basis().unwrap();
    bases += 1;
    if !verify_groebner(basis, ord) {
        notes.push("S-polynomial check J=(x-y^2,z)".into());
    }
    check(
        notes.is_empty(),
        format!("{bases} bases verified, issues {notes:?}"),
    )
}

fn criterion_9() -> Outcome {
    let rows = char_scan(CONE, &[3, 5, 7, 11, 13], 2).unwrap();
    let inside: Vec<u64> = rows
        .iter()
        .filter(|r| r.lambda0_in_support)
        .map(|r| r.p)
        .collect();
    let outside: Vec<u64> = rows
        .iter()
        .filter(|r| !r.lambda0_in_support)
        .map(|r| r.p)
        .collect();
    let five = rows.iter().find(|r| r.p == 5).unwrap();
    let certified = !five.lambda0_in_support && five.lambda0_point_count == Some(8);
    check(
        !inside.is_empty() && !outside.is_empty() && certified,
        format!(
            "in support at {inside:?}, outside at {outside:?}, #E(F_5) = {:?}",
            five.lambda0_point_count
        ),
    )
}

const GOLDEN: &[&[&str]] = &[
    &[
        "fpure",
        "-p",
        "3",
        "-e",
        "1",
        "--vars",
        "x,y,z,t",
        "--hypersurface",
        "z*y^2-x*(x-z)*(x-t*z)",
        "--at",
        "0,0,0,0",
    ],
    &[
        "fdiff",
        "-p",
        "3",
        "-e",
        "1",
        "--vars",
        "x,y,z,t",
        "--hypersurface",
        "z*y^2-x*(x-z)*(x-t*z)",
        "--center",
        "x,y,z",
    ],
    &[
        "center",
        "-p",
        "5",
        "--vars",
        "x,y,z,t",
        "--hypersurface",
        "z*y^2-x*(x-z)*(x-t*z)",
        "--center",
        "x,y,z",
    ],
    &[
        "fpt",
        "-p",
        "7",
        "-e",
        "3",
        "--vars",
        "x,y",
        "--hypersurface",
        "x^2+y^3",
    ],
    &["hasse", "-p", "13", "--lambda0", "2"],
    &["fibration", "scan", "-p", "7"],
    &["fibration", "moduli", "-p", "3", "-e", "2"],
    &[
        "fibration",
        "charscan",
        "--primes",
        "3,5,7,11,13",
        "--lambda0",
        "2",
    ],
    &[
        "divisor",
        "add",
        "-p",
        "3",
        "--lhs",
        r#"[{"prime":"t+1","coeff":"1/2"}]"#,
        "--rhs",
        r#"[{"prime":"t+1","coeff":"1/2"}]"#,
    ],
    &[
        "divisor",
        "basechange",
        "-p",
        "5",
        "--divisor",
        r#"[{"prime":"t","coeff":"1"}]"#,
        "--map",
        "s^2",
    ],
    &[
        "fpure",
        "-p",
        "5",
        "--vars",
        "x,y",
        "--hypersurface",
        "x^2+y^3",
    ],
];

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    for args in GOLDEN {
        let runs: Vec<(Option<i32>, Vec<u8>)> = (0..3)
            .map(|_| {
                let out = Command::new(env!("CARGO_BIN_EXE_frobsplit"))
                    .args(*args)
                    .output()
                    .unwrap();
                (out.status.code(), out.stdout)
            })
            .collect();
        if runs.iter().any(|r| r != &runs[0]) || runs[0].1.is_empty() {
            notes.push(format!("nondeterministic: {}", args.join(" ")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let v = vars("x,y,z,t");
    let mut round_trip_failures = 0;
    for _ in 0..1000 {
        let p = [2u64, 3, 5, 7, 11, 13, 2147483647][rng.gen_range(0..7)];
        let f = random_poly(&mut rng, field(p), &v, 6, 8);
        if parse_poly(&f.to_string(), &v, field(p)).unwrap() != f {
            round_trip_failures += 1;
        }
    }
    if round_trip_failures > 0 {
        notes.push(format!("{round_trip_failures} parse/print failures"));
    }
    check(
        notes.is_empty(),
        format!(
            "{} golden commands x3, 1000 round trips, issues {notes:?}",
            GOLDEN.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "cone F-different at p=3", criterion_1),
        (2, "supersingular locus identity", criterion_2),
        (3, "three-way fiber oracle", criterion_3),
        (4, "route equality and e-invariance", criterion_4),
        (5, "Fedder suite", criterion_5),
        (6, "stability under e -> 2e", criterion_6),
        (7, "nu invariants", criterion_7),
        (8, "colon shortcut and basis self-check", criterion_8),
        (9, "multi-prime support scan", criterion_9),
        (10, "determinism and round trip", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (n, name, run) in criteria {
        let started = Instant::now();
        let out = run();
        let status = if out.ok { "PASS" } else { "FAIL" };
        let note = if !out.ok && EXPECTED_FAILURES.contains(&n) {
            " [expected failure: stated value contradicts the brute-force oracle]"
        } else {
            ""
        };
        println!(
            "criterion {n:>2} {status} {name}: {} ({:.2?}){note}",
            out.detail,
            started.elapsed()
        );
        if out.ok == EXPECTED_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcomes for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
