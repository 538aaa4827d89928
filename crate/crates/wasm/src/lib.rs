//! Browser bindings for three operations: the core index table, the Morse–Bott scan
//! of an α_δ profile, and the tensor-complex comparison on a seeded N model.
//!
//! Every export returns plain strings so the same functions run natively in tests.

use echobd::complexbuilder::Bounds;
use echobd::indices::core_index_table;
use echobd::rational::{parse_rational, q};
use echobd::reebprofiles::{build_alpha_delta, profile_svg, scan_morse_bott};
use echobd::scenarios::{random_admissible_nmodel, run_hat_theorem, run_main_theorem, ModelSize};
use wasm_bindgen::prelude::wasm_bindgen;

/// CSV rows `n,cz` with cz = 2⌊n r⌋ + 1.
#[wasm_bindgen]
pub fn core_indices(r: &str, n: u32) -> Result<String, String> {
    let r = parse_rational(r).map_err(|e| e.to_string())?;
    let rows = core_index_table(&r, n.min(1000)).map_err(|e| e.to_string())?;
    let mut out = String::from("n,cz\n");
    for (n, cz) in rows {
        out += &format!("{n},{cz}\n");
    }
    Ok(out)
}

/// JSON `{ "svg": ..., "tori": [{parameter, a, b, action}] }` for the α_δ profile with
/// anchor (24, 2).
#[wasm_bindgen]
pub fn scan_alpha_delta(delta: &str, l: f64, q_max: u32) -> Result<String, String> {
    let delta = parse_rational(delta).map_err(|e| e.to_string())?;
    let ad = build_alpha_delta(&delta, (q(24), q(2)), None).map_err(|e| e.to_string())?;
    let tori: Vec<serde_json::Value> = scan_morse_bott(&ad.profile, l.min(1e4), q_max.min(200))
        .iter()
        .map(|r| {
            serde_json::json!({
                "parameter": r.parameter,
                "a": r.direction.0,
                "b": r.direction.1,
                "action": r.action,
            })
        })
        .collect();
    Ok(serde_json::json!({ "svg": profile_svg(&ad.profile), "tori": tori }).to_string())
}

/// Text report of both theorem checks on a seeded model with `orbits` interior orbits.
#[wasm_bindgen]
pub fn verify_seeded_model(seed: u32, orbits: u32) -> Result<String, String> {
    let bounds = Bounds::default();
    let size = ModelSize { orbits: orbits.min(4) as usize, j_max: bounds.j_max };
    let n = random_admissible_nmodel(u64::from(seed), size).map_err(|e| e.to_string())?;
    let main = run_main_theorem(&n, bounds).map_err(|e| e.to_string())?;
    let hat = run_hat_theorem(&n, bounds).map_err(|e| e.to_string())?;
    Ok(main.report() + &hat.report())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_csv() {
        assert_eq!(core_indices("2.7182", 3).unwrap(), "n,cz\n1,5\n2,11\n3,17\n");
        assert!(core_indices("x", 3).is_err());
    }

    #[test]
    fn scan_json() {
        let v: serde_json::Value = serde_json::from_str(&scan_alpha_delta("0.1414213", 50.0, 20).unwrap()).unwrap();
        assert!(v["svg"].as_str().unwrap().starts_with("<?xml"));
        assert_eq!(v["tori"].as_array().unwrap().len() % 2, 0);
    }

    #[test]
    fn seeded_report() {
        let r = verify_seeded_model(2, 2).unwrap();
        assert!(r.starts_with("main: PASS"));
        assert!(r.contains("hat: PASS"));
    }
}
