//! Scan results checked against closed-form inversions of the constructed profiles.

mod common;

use common::{gcd, invert_phi};
use echobd::rational::{frac, parse_rational, q, to_f64};
use echobd::reebprofiles::{
    build_action_floor_extension, build_alpha_delta, build_v_profile, check_contact, example_one,
    example_two, reeb_slope, scan_morse_bott, Slope,
};

#[test]
fn alpha_delta_scan_matches_explicit_inversion() {
    let delta = parse_rational("0.1414213").unwrap();
    let ad = build_alpha_delta(&delta, (q(24), q(2)), None).unwrap();
    let (l, q_max) = (1000.0, 20);
    let records = scan_morse_bott(&ad.profile, l, q_max);
    let (df, sf) = (to_f64(&delta), to_f64(&ad.s));
    let mut expected = Vec::new();
    for a in -(q_max as i64)..=0 {
        for b in 1..200 {
            if gcd(a, b) != 1 || (-a) as f64 / b as f64 >= df {
                continue;
            }
            for y in invert_phi((-a) as f64 / b as f64, df, sf) {
                let [f, g, _, _] = ad.profile.jet_f64(y);
                let action = a as f64 * g + b as f64 * f;
                if action <= l {
                    expected.push((y, a, b, action));
                }
            }
        }
    }
    expected.sort_by(|x, y| x.0.total_cmp(&y.0));
    assert_eq!(records.len(), expected.len());
    for (r, e) in records.iter().zip(&expected) {
        assert_eq!(r.direction, (e.1, e.2));
        assert!((r.parameter - e.0).abs() < 1e-9, "{} vs {}", r.parameter, e.0);
        assert!((r.action - e.3).abs() < 1e-6);
    }
    let mut per_slope = std::collections::BTreeMap::new();
    for r in &records {
        *per_slope.entry(r.direction).or_insert(0) += 1;
    }
    assert!(per_slope.values().all(|&c| c == 2));
    assert!(per_slope.contains_key(&(0, 1)));
}

#[test]
fn example_one_irrational_has_no_tori() {
    let nu = parse_rational("1.414213").unwrap();
    let p = example_one(&nu, &q(2)).unwrap();
    assert!(scan_morse_bott(&p, 1e4, 200).is_empty());
    let rational = example_one(&frac(7, 10), &q(2)).unwrap();
    let recs = scan_morse_bott(&rational, 1e4, 200);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].direction, (7, 10));
}

#[test]
fn example_two_slope_window() {
    let p = example_two(&q(3)).unwrap();
    for k in 1..=1000 {
        let rho = frac(k, 1000);
        let want = q(2) * &rho * &rho;
        assert_eq!(reeb_slope(&p, &rho).unwrap(), Slope::Finite(want));
    }
    // Slopes b/a in (0, 2] with a ≤ 5: tori at ρ = sqrt(b / 2a).
    let recs = scan_morse_bott(&p, 1e3, 5);
    for r in &recs {
        let (a, b) = r.direction;
        let rho = (b as f64 / (2.0 * a as f64)).sqrt();
        assert!((r.parameter - rho).abs() < 1e-9);
        let [f, g, _, _] = p.jet_f64(r.parameter);
        assert!((r.action - (a as f64 * g + b as f64 * f)).abs() < 1e-9);
    }
    assert!(recs.iter().any(|r| r.direction == (1, 2)));
}

#[test]
fn floor_extension_has_no_short_orbits() {
    let r = parse_rational("-1.41421356237").unwrap();
    for l in [10.0, 100.0] {
        let ext = build_action_floor_extension(l, &q(1), &r).unwrap();
        assert!(check_contact(&ext.profile).ok);
        let recs = scan_morse_bott(&ext.profile, l, 200);
        assert!(recs.iter().all(|rec| rec.action >= l), "{recs:?}");
        let straight = scan_morse_bott(&ext.profile, 1e3, 200);
        let y0 = to_f64(&ext.y0);
        assert!(straight.iter().all(|rec| rec.parameter > y0));
    }
}

#[test]
fn v_profile_slopes_increase() {
    let p = build_v_profile((q(24), q(3)), &q(60)).unwrap();
    let mut last = None;
    for k in 1..1000 {
        let rho = frac(k, 1000);
        let Slope::Finite(s) = reeb_slope(&p, &rho).unwrap() else {
            panic!("finite slope expected inside the disk");
        };
        assert!(s >= q(1));
        if let Some(prev) = last.replace(s.clone()) {
            assert!(s >= prev);
        }
    }
}
