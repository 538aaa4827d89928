//! Shared oracles for the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use echobd::complexbuilder::{Generator, Grading, ModelComplex};
use echobd::f2core::{kernel_basis, F2Matrix, F2Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graded complex on ≤ `max_gens` generators with levels; each column of ∂ is a
/// random combination of kernel vectors of the next differential, restricted to rows
/// whose level does not exceed the column's.
pub fn random_filtered_complex(seed: u64, max_gens: usize, levels: u32) -> (ModelComplex, Vec<i64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_gens);
    let mut degree: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    degree.sort();
    let level: Vec<i64> = (0..n).map(|_| i64::from(rng.gen_range(0..levels.max(1)))).collect();
    let mut cols = vec![F2Vector::zero(); n];
    for c in 0..n {
        let d = degree[c];
        let targets: Vec<usize> = (0..n).filter(|&r| degree[r] == d - 1 && level[r] <= level[c]).collect();
        if targets.is_empty() {
            continue;
        }
        // Kernel of ∂ restricted to the allowed targets.
        let below: Vec<usize> = (0..n).filter(|&r| degree[r] == d - 2).collect();
        let sub: Vec<F2Vector> = targets.iter().map(|&t| cols[t].reindex(|r| below.iter().position(|&b| b == r))).collect();
        let m = F2Matrix::from_columns(below.len(), sub).unwrap();
        let mut v = F2Vector::zero();
        for k in kernel_basis(&m) {
            if rng.gen_bool(0.5) {
                v = &v + &k;
            }
        }
        cols[c] = v.reindex(|i| Some(targets[i]));
    }
    let gens = (0..n)
        .map(|i| Generator {
            label: format!("x{i}"),
            degree: degree[i],
            action: i as f64 + 1.0,
            grading: Grading::default(),
            copy: 0,
        })
        .collect();
    let c = ModelComplex::new("random", gens, F2Matrix::from_columns(n, cols).unwrap()).unwrap();
    (c, level)
}

/// Homology per degree by enumerating every chain: log₂(|Z_d| / |B_d|).
pub fn enumerate_homology(c: &ModelComplex) -> BTreeMap<i64, usize> {
    let blocks = c.degree_blocks();
    let mut out = BTreeMap::new();
    for (&d, mid) in &blocks {
        let combos = |idx: &[usize]| -> Vec<F2Vector> {
            (0u32..(1 << idx.len()))
                .map(|mask| F2Vector::from_indices((0..idx.len()).filter(|b| mask >> b & 1 == 1).map(|b| idx[b])))
                .collect()
        };
        let cycles = combos(mid).into_iter().filter(|x| c.differential().apply(x).is_zero()).count();
        let up = blocks.get(&(d + 1)).cloned().unwrap_or_default();
        let boundaries: HashSet<Vec<usize>> =
            combos(&up).iter().map(|y| c.differential().apply(y).support().to_vec()).collect();
        let ratio = cycles / boundaries.len();
        out.insert(d, ratio.trailing_zeros() as usize);
    }
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Parameters where f′/g′ = φ on the rising and falling halves of the piecewise-linear shape.
pub fn invert_phi(phi: f64, delta: f64, s: f64) -> [f64; 2] {
    let half = 0.5 - s;
    if phi <= 2.0 * s {
        [1.0 + phi / 2.0, 2.0 - phi / 2.0]
    } else {
        let u = (phi - 2.0 * s) / (delta - 2.0 * s) * half;
        [1.0 + s + u, 2.0 - s - u]
    }
}
