//! Property tests: linear algebra against brute-force enumeration, orbit-set laws,
//! index additivity, ∂² = 0 on generated models, and page identities.

mod common;

use std::collections::BTreeMap;

use common::random_filtered_complex;

use echobd::complexbuilder::{build_ecc_variant, build_total_complex, Bounds, Piece, VModel, Variant};
use echobd::f2core::{kernel_basis, rank, F2Matrix};
use echobd::indices::{ech_index_trivial_class, symmetric_cz, CzRule, Framing, IndexContext};
use echobd::orbitsets::{OrbitKind, OrbitSet, SimpleOrbit};
use echobd::scenarios::{random_admissible_nmodel, run_main_theorem, seeded_models, with_pool, ModelSize};
use echobd::spectral::{make_filtration, page, page_infinity, Direction, FilteredComplex, Which};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, bits: &[bool]) -> F2Matrix {
    let entries = (0..rows * cols).filter(|&k| bits[k]).map(|k| (k / cols, k % cols));
    F2Matrix::from_entries(rows, cols, entries).unwrap()
}

fn arb_matrix() -> impl Strategy<Value = F2Matrix> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |b| matrix(r, c, &b))
    })
}

fn orbit(name: &str, hyperbolic: bool, action: f64, page: u32, degree: i64) -> SimpleOrbit {
    let kind = if hyperbolic { OrbitKind::Hyperbolic } else { OrbitKind::Elliptic };
    SimpleOrbit::new(name, kind, action, page).unwrap().with_degree(degree)
}

fn orbit_pool() -> Vec<SimpleOrbit> {
    vec![
        orbit("a", false, 1.1, 1, 1),
        orbit("b", true, 1.3, 2, 2),
        orbit("c", false, 1.7, 1, 3),
        orbit("d", true, 2.3, 1, 1),
    ]
}

fn orbit_set(pool: &[SimpleOrbit], mult: &[u32]) -> Option<OrbitSet> {
    let mut out = OrbitSet::empty();
    for (o, &m) in pool.iter().zip(mult) {
        out = out.multiply(&OrbitSet::power(o, m)?)?;
    }
    Some(out)
}

fn arb_orbit_set() -> impl Strategy<Value = OrbitSet> {
    (0u32..3, 0u32..2, 0u32..3, 0u32..2).prop_map(|(a, b, c, d)| orbit_set(&orbit_pool(), &[a, b, c, d]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_equals_transpose_rank(m in arb_matrix()) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_nullity(m in arb_matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn homology_matches_enumeration(seed in any::<u64>()) {
        let (c, _) = random_filtered_complex(seed, 12, 1);
        prop_assert_eq!(c.homology_by_degree(), common::enumerate_homology(&c));
    }

    #[test]
    fn associated_graded_identity(seed in any::<u64>()) {
        let (c, level) = random_filtered_complex(seed, 12, 4);
        let h = c.homology_by_degree();
        let fc = FilteredComplex::new("random", c, level, Direction::NonIncreasing).unwrap();
        let inf = page_infinity(&fc);
        let mut sums: BTreeMap<i64, usize> = h.keys().map(|&d| (d, 0)).collect();
        for ((_, d), v) in &inf.dims {
            *sums.entry(*d).or_default() += v;
        }
        prop_assert_eq!(sums, h);
        prop_assert!(inf.collapsed);
    }

    #[test]
    fn two_level_filtrations_stop_at_page_two(seed in any::<u64>()) {
        let (c, level) = random_filtered_complex(seed, 10, 2);
        let fc = FilteredComplex::new("two", c, level, Direction::NonIncreasing).unwrap();
        prop_assert_eq!(page(&fc, 2).dims, page_infinity(&fc).dims);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in arb_orbit_set(), b in arb_orbit_set(), c in arb_orbit_set()) {
        prop_assert_eq!(a.multiply(&b), b.multiply(&a));
        let left = a.multiply(&b).and_then(|x| x.multiply(&c));
        let right = b.multiply(&c).and_then(|x| a.multiply(&x));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn division_inverts_multiplication(a in arb_orbit_set(), b in arb_orbit_set()) {
        if let Some(p) = a.multiply(&b) {
            prop_assert_eq!(p.divide(&b), Some(a.clone()));
            prop_assert!((p.action() - a.action() - b.action()).abs() < 1e-9);
            prop_assert_eq!(p.degree(), a.degree() + b.degree());
            prop_assert_eq!(p.grade().j, a.grade().j + b.grade().j);
        } else {
            prop_assert!(a.factors().any(|(o, _)| o.is_hyperbolic() && b.multiplicity(&o.name) > 0));
        }
    }

    #[test]
    fn parse_display_roundtrip(a in arb_orbit_set()) {
        let pool = orbit_pool();
        let back = OrbitSet::parse(&a.to_string(), |s| pool.iter().find(|o| o.name == s).cloned()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn symmetric_index_is_additive(a in arb_orbit_set(), b in arb_orbit_set(), c in arb_orbit_set()) {
        let ctx = IndexContext::new(Framing::Disk)
            .with_rule("a", CzRule::Rotation(echobd::rational::frac(7, 5)))
            .with_rule("b", CzRule::Constant(0))
            .with_rule("c", CzRule::Rotation(echobd::rational::frac(13, 4)))
            .with_rule("d", CzRule::Constant(1));
        let disjoint = |x: &OrbitSet, y: &OrbitSet| x.factors().all(|(o, _)| y.multiplicity(&o.name) == 0);
        if disjoint(&a, &b) {
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(
                symmetric_cz(&ab, &ctx).unwrap(),
                symmetric_cz(&a, &ctx).unwrap() + symmetric_cz(&b, &ctx).unwrap()
            );
        }
        let i = |x: &OrbitSet, y: &OrbitSet| ech_index_trivial_class(x, y, &ctx).unwrap();
        prop_assert_eq!(i(&a, &b) + i(&b, &c), i(&a, &c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_models_square_to_zero(seed in 0u64..10_000, orbits in 0usize..5) {
        let n = random_admissible_nmodel(seed, ModelSize { orbits, j_max: 5 }).unwrap();
        let b = Bounds { m_max: 5, j_max: 5, guard: 2 };
        for v in [Variant::Full, Variant::Flat, Variant::Sharp] {
            let c = build_ecc_variant(Piece::N(&n), v, b).unwrap();
            prop_assert!(c.differential().mul(c.differential()).unwrap().is_zero());
        }
        let t = build_total_complex(&VModel::post_limit(), &n, b).unwrap();
        prop_assert!(t.complex.differential().mul(t.complex.differential()).unwrap().is_zero());
        for w in [Which::F, Which::G, Which::Gprime, Which::E] {
            prop_assert!(make_filtration(&t.complex, w).is_ok());
        }
    }
}

#[test]
fn scenario_results_do_not_depend_on_thread_count() {
    let models = seeded_models(8, 4, 6).unwrap();
    let bounds = Bounds { m_max: 6, j_max: 6, guard: 2 };
    let run = |threads| {
        with_pool(Some(threads), || echobd::scenarios::par_map(&models, |n| run_main_theorem(n, bounds).unwrap()))
    };
    assert_eq!(run(1), run(4));
}
