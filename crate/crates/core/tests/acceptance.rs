//! Acceptance suite: one PASS/FAIL line per criterion, each checked at its stated
//! tolerance and time budget. Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use echobd::complexbuilder::{build_ecc_variant, build_total_complex, Bounds, NModel, Piece, VModel, Variant};
use echobd::indices::core_index_table;
use echobd::rational::{frac, parse_rational, q, to_f64};
use echobd::reebprofiles::{
    build_action_floor_extension, build_alpha_delta, check_contact, example_one, example_two, reeb_slope,
    scan_morse_bott, Slope,
};
use echobd::scenarios::{
    default_r_list, fixture_one_orbit, fixture_trivial, random_admissible_nmodel, run_corollary_v_variants,
    run_hat_theorem, run_main_theorem, run_solid_torus, with_pool, ModelSize, ScenarioResult,
};
use echobd::spectral::intermediate_claims_report;
use rayon::prelude::*;

const BOUNDS: Bounds = Bounds { m_max: 6, j_max: 6, guard: 2 };
const SEEDS: u64 = 20;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration, bool) {
    let t = Instant::now();
    let o = f();
    let dt = t.elapsed();
    (o, dt, dt < budget)
}

/// Fixtures plus seeded models with at most six interior orbits.
fn criterion_models() -> Vec<(String, NModel)> {
    let mut out = vec![
        ("trivial".to_string(), fixture_trivial()),
        ("one-orbit".to_string(), fixture_one_orbit()),
    ];
    for s in 1..=SEEDS {
        let size = ModelSize { orbits: (s as usize) % 7, j_max: BOUNDS.j_max };
        out.push((format!("seed{s}"), random_admissible_nmodel(s, size).expect("generation")));
    }
    out
}

/// 2⌊n r⌋ + 1 from the decimal digits of r with integer arithmetic only.
fn index_oracle(r: &str, n: i64) -> i64 {
    let (int, frac_part) = r.split_once('.').unwrap_or((r, ""));
    let scale = 10i64.pow(frac_part.len() as u32);
    let digits: i64 = format!("{int}{frac_part}").parse().unwrap();
    2 * (n * digits).div_euclid(scale) + 1
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for r in ["1.4142", "2.7182", "10.01"] {
        let table = core_index_table(&parse_rational(r).unwrap(), 10).unwrap();
        for (n, cz) in table {
            if cz != index_oracle(r, i64::from(n)) {
                bad.push((r, n, cz));
            }
        }
    }
    outcome(bad.is_empty(), format!("30 indices, mismatches {bad:?}"))
}

fn criterion_2() -> Outcome {
    let r = run_solid_torus(&default_r_list(), 10).unwrap();
    let at = |t: &str, n: i64| r.tables[t].get(&n).copied().unwrap_or(0);
    let stages_ok = (0..default_r_list().len()).all(|i| (0..=10).all(|n| at(&format!("stage{i}"), n) == 1));
    let limit: Vec<usize> = (0..=10).map(|n| at("limit", n)).collect();
    let want: Vec<usize> = (0..=10).map(|n| usize::from(n == 0)).collect();
    outcome(r.passed && stages_ok && limit == want, format!("stages all 1, limit {limit:?}"))
}

fn criterion_3() -> Outcome {
    let r = run_corollary_v_variants(8).unwrap();
    let zero = |t: &str| r.tables[t].values().all(|&d| d == 0);
    let flat: Vec<usize> = (0..=6).map(|m| r.tables["flat"].get(&(2 * m)).copied().unwrap_or(0)).collect();
    let ok = r.passed && zero("sharp") && zero("full") && flat == vec![1; 7];
    outcome(ok, format!("flat per e'-power {flat:?}"))
}

fn note(r: &ScenarioResult, prefix: &str) -> bool {
    r.notes.iter().filter(|(n, _)| n.starts_with(prefix)).all(|(_, ok)| *ok)
        && r.notes.iter().any(|(n, _)| n.starts_with(prefix))
}

fn criterion_4(runs: &[(String, ScenarioResult)]) -> Outcome {
    let bad: Vec<&str> = runs
        .iter()
        .filter(|(_, r)| !(note(r, "oracle = direct limit") && note(r, "direct limit = quotient")))
        .map(|(t, _)| t.as_str())
        .collect();
    let trivial = &runs[0].1.tables["oracle"];
    let trivial_ok = trivial.get(&0) == Some(&1) && trivial.values().sum::<usize>() == 1;
    let grades: usize = runs.iter().map(|(_, r)| r.tables["oracle"].len()).sum();
    outcome(
        bad.is_empty() && trivial_ok,
        format!("{} models, {grades} compared grades, disagreements {bad:?}", runs.len()),
    )
}

fn criterion_5(models: &[(String, NModel)]) -> Outcome {
    let names = ["E1(F)", "(i)", "(ii)", "(iii)", "(iv)", "(v)"];
    let failures: Vec<String> = models
        .par_iter()
        .flat_map_iter(|(tag, n)| {
            let t = build_total_complex(&VModel::post_limit(), n, BOUNDS).unwrap();
            let rep = intermediate_claims_report(&t).unwrap();
            rep.claims
                .into_iter()
                .filter(|c| names.iter().any(|p| c.name.starts_with(p)) && !c.passed)
                .map(|c| format!("{tag}: {} {}", c.name, c.detail))
                .collect::<Vec<_>>()
        })
        .collect();
    outcome(failures.is_empty(), format!("{} models x 6 claims, failures {failures:?}", models.len()))
}

fn criterion_6(runs: &[(String, ScenarioResult)]) -> Outcome {
    let bad: Vec<&str> = runs
        .iter()
        .filter(|(_, r)| !(note(r, "cone homology = hat ECH") && note(r, "E2_n(Ehat) = 0")))
        .map(|(t, _)| t.as_str())
        .collect();
    let trivial_ok = runs[0].1.tables["cone"].values().sum::<usize>() == 2;
    outcome(bad.is_empty() && trivial_ok, format!("{} models, disagreements {bad:?}", runs.len()))
}

fn criterion_7() -> Outcome {
    let nu = parse_rational("1.414213").unwrap();
    let one = example_one(&nu, &q(2)).unwrap();
    let two = example_two(&q(3)).unwrap();
    let mut slope_errors = 0;
    for k in 0..=1000 {
        let rho = frac(k, 1000);
        if k > 0 && reeb_slope(&one, &rho).ok() != Some(Slope::Finite(q(1) / &nu)) {
            slope_errors += 1;
        }
        if k > 0 && reeb_slope(&two, &rho).ok() != Some(Slope::Finite(q(2) * &rho * &rho)) {
            slope_errors += 1;
        }
    }
    let irrational_empty = scan_morse_bott(&one, 1e4, 200).is_empty();

    let r = parse_rational("-1.41421356237").unwrap();
    let mut floor_ok = true;
    for l in [10.0, 100.0] {
        let ext = build_action_floor_extension(l, &q(1), &r).unwrap();
        floor_ok &= check_contact(&ext.profile).ok;
        floor_ok &= scan_morse_bott(&ext.profile, l, 200).iter().all(|rec| rec.action >= l);
    }

    let delta = parse_rational("0.1414213").unwrap();
    let ad = build_alpha_delta(&delta, (q(24), q(2)), None).unwrap();
    let (l, q_max) = (1000.0, 20u32);
    let recs = scan_morse_bott(&ad.profile, l, q_max);
    let (df, sf) = (to_f64(&delta), to_f64(&ad.s));
    let mut expected = Vec::new();
    for a in -i64::from(q_max)..=0 {
        for b in 1..200 {
            if common::gcd(a, b) != 1 || (-a) as f64 / b as f64 >= df {
                continue;
            }
            for y in common::invert_phi((-a) as f64 / b as f64, df, sf) {
                let [f, g, _, _] = ad.profile.jet_f64(y);
                let action = a as f64 * g + b as f64 * f;
                if action <= l {
                    expected.push((y, (a, b)));
                }
            }
        }
    }
    expected.sort_by(|x, y| x.0.total_cmp(&y.0));
    let oracle_ok = recs.len() == expected.len()
        && recs.iter().zip(&expected).all(|(r, e)| r.direction == e.1 && (r.parameter - e.0).abs() < 1e-9);
    let mut per_slope: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for rec in &recs {
        *per_slope.entry(rec.direction).or_default() += 1;
    }
    let pairs_ok = !per_slope.is_empty() && per_slope.values().all(|&c| c == 2);
    outcome(
        slope_errors == 0 && irrational_empty && floor_ok && oracle_ok && pairs_ok,
        format!(
            "slope mismatches {slope_errors}, irrational example torus-free {irrational_empty}, floor audits {floor_ok}, \
             {} slopes x 2 tori {pairs_ok}, inversion oracle agrees {oracle_ok}",
            per_slope.len()
        ),
    )
}

fn criterion_8(models: &[(String, NModel)]) -> Outcome {
    let mut squares = 0usize;
    let mut square_ok = true;
    for (_, n) in models {
        for v in [Variant::Full, Variant::Flat, Variant::Sharp] {
            let c = build_ecc_variant(Piece::N(n), v, BOUNDS).unwrap();
            square_ok &= c.differential().mul(c.differential()).unwrap().is_zero();
            squares += 1;
        }
        let t = build_total_complex(&VModel::post_limit(), n, BOUNDS).unwrap();
        square_ok &= t.complex.differential().mul(t.complex.differential()).unwrap().is_zero();
        squares += 1;
    }
    let mut enum_ok = true;
    for seed in 0..128u64 {
        let (c, _) = common::random_filtered_complex(seed, 12, 1);
        enum_ok &= c.homology_by_degree() == common::enumerate_homology(&c);
    }
    let run = |threads| {
        with_pool(Some(threads), || {
            models
                .par_iter()
                .map(|(_, n)| (run_main_theorem(n, BOUNDS).unwrap(), run_hat_theorem(n, BOUNDS).unwrap()))
                .collect::<Vec<_>>()
        })
    };
    let deterministic = run(1) == run(4);
    outcome(
        square_ok && enum_ok && deterministic,
        format!("∂²=0 on {squares} complexes {square_ok}, 128 enumeration checks {enum_ok}, 1 vs 4 threads equal {deterministic}"),
    )
}

fn main() {
    let models = criterion_models();
    let mut lines = Vec::new();
    let mut record = |id: u32, what: &str, (o, dt, in_time): (Outcome, Duration, bool), budget: Duration| {
        let pass = o.passed && in_time;
        lines.push(pass);
        println!(
            "criterion {id} [{what}]: {} ({:.2}s of {}s) {}",
            if pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
    };
    let s = Duration::from_secs;
    record(1, "index formula", timed(s(1), criterion_1), s(1));
    record(2, "solid torus", timed(s(1), criterion_2), s(1));
    record(3, "V variants", timed(s(1), criterion_3), s(1));
    let mut main_runs = Vec::new();
    let c4 = timed(s(30), || {
        main_runs = models
            .par_iter()
            .map(|(t, n)| (t.clone(), run_main_theorem(n, BOUNDS).unwrap()))
            .collect();
        criterion_4(&main_runs)
    });
    record(4, "main theorem oracle equivalence", c4, s(30));
    record(5, "intermediate spectral claims", timed(s(60), || criterion_5(&models)), s(60));
    let c6 = timed(s(30), || {
        let runs: Vec<_> = models
            .par_iter()
            .map(|(t, n)| (t.clone(), run_hat_theorem(n, BOUNDS).unwrap()))
            .collect();
        criterion_6(&runs)
    });
    record(6, "hat theorem", c6, s(30));
    record(7, "Reeb dynamics", timed(s(5), criterion_7), s(5));
    record(8, "infrastructure", timed(s(60), || criterion_8(&models)), s(60));
    let failed = lines.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
