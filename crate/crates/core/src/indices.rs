//! Conley–Zehnder, symmetric Conley–Zehnder, branched-cover Fredholm and trivial-class
//! ECH indices. Conventions are data held in an [`IndexContext`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::orbitsets::OrbitSet;
use crate::rational::{floor_i64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Framing {
    Torus,
    Disk,
}

/// How μ(γʲ) depends on the cover multiplicity j.
#[derive(Clone, Debug, PartialEq)]
pub enum CzRule {
    /// Same value for every cover (Morse–Bott conventions).
    Constant(i64),
    /// Explicit values for finitely many covers.
    Covers(BTreeMap<u32, i64>),
    /// `2⌊j r⌋ + 1`, the irrational rotation by `r` in the disk framing.
    Rotation(Q),
}

/// Sign of a Morse–Bott family; fixes μ(eʲ) = ±1 and μ(h) = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorseBottSign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexContext {
    pub convention: BTreeMap<String, CzRule>,
    pub framing: Framing,
}

impl IndexContext {
    pub fn new(framing: Framing) -> Self {
        Self {
            convention: BTreeMap::new(),
            framing,
        }
    }

    pub fn with_rule(mut self, orbit: &str, rule: CzRule) -> Self {
        self.convention.insert(orbit.to_string(), rule);
        self
    }

    /// Core orbit of a solid torus rotating by `r`, disk framing.
    pub fn core(orbit: &str, r: Q) -> Self {
        Self::new(Framing::Disk).with_rule(orbit, CzRule::Rotation(r))
    }

    /// Morse–Bott convention for the pair (`e`, `h`), torus framing.
    pub fn morse_bott(sign: MorseBottSign, e: &str, h: &str) -> Self {
        let mu_e = match sign {
            MorseBottSign::Positive => 1,
            MorseBottSign::Negative => -1,
        };
        Self::new(Framing::Torus)
            .with_rule(e, CzRule::Constant(mu_e))
            .with_rule(h, CzRule::Constant(0))
    }

    /// μ(orbitʲ) under this convention.
    pub fn mu(&self, orbit: &str, j: u32) -> Result<i64> {
        let missing = || Error::MissingConvention {
            orbit: orbit.to_string(),
            cover: j,
        };
        match self.convention.get(orbit).ok_or_else(missing)? {
            CzRule::Constant(v) => Ok(*v),
            CzRule::Covers(map) => map.get(&j).copied().ok_or_else(missing),
            CzRule::Rotation(r) => cz_core_cover(j, r),
        }
    }
}

/// Which boundary orbit of the perturbed Morse–Bott tori.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryOrbit {
    E,
    H,
    HPrime,
    EPrime,
}

/// `2⌊n r⌋ + 1` for the n-fold cover of the core.
pub fn cz_core_cover(n: u32, r: &Q) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidInput("cover multiplicity must be at least 1".into()));
    }
    if *r <= Q::from_integer(0.into()) {
        return Err(Error::InvalidInput("rotation must be positive".into()));
    }
    let nr = r * Q::from_integer(n.into());
    if nr.is_integer() {
        return Err(Error::DegenerateOrbit(nr.to_string()));
    }
    Ok(2 * floor_i64(&nr) + 1)
}

/// Indices of the perturbed boundary orbits in the torus framing.
pub fn cz_boundary_perturbed(orbit: BoundaryOrbit) -> i64 {
    match orbit {
        BoundaryOrbit::E => -1,
        BoundaryOrbit::H | BoundaryOrbit::HPrime => 0,
        BoundaryOrbit::EPrime => 1,
    }
}

/// Σᵢ Σ_{j ≤ mᵢ} μ(γᵢʲ).
pub fn symmetric_cz(g: &OrbitSet, ctx: &IndexContext) -> Result<i64> {
    let mut total = 0;
    for (orbit, m) in g.factors() {
        for j in 1..=m {
            total += ctx.mu(&orbit.name, j)?;
        }
    }
    Ok(total)
}

/// `−χ + k·μ(e) − μ(eᵏ)`.
pub fn fredholm_branched_cover(chi: i64, k: i64, mu_e: i64, mu_ek: i64) -> i64 {
    -chi + k * mu_e - mu_ek
}

/// ECH index for a relative class made of trivial cylinders, where the Chern and
/// self-intersection terms vanish.
pub fn ech_index_trivial_class(g: &OrbitSet, g2: &OrbitSet, ctx: &IndexContext) -> Result<i64> {
    Ok(symmetric_cz(g, ctx)? - symmetric_cz(g2, ctx)?)
}

/// Rows `(n, 2⌊n r⌋ + 1)` for n = 1..=n_max.
pub fn core_index_table(r: &Q, n_max: u32) -> Result<Vec<(u32, i64)>> {
    (1..=n_max).map(|n| Ok((n, cz_core_cover(n, r)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitsets::{OrbitKind, SimpleOrbit};
    use crate::rational::{frac, parse_rational};

    #[test]
    fn core_cover_formula() {
        let r = parse_rational("1.4142").unwrap();
        assert_eq!(cz_core_cover(1, &r).unwrap(), 3);
        let r = parse_rational("10.01").unwrap();
        assert_eq!(cz_core_cover(3, &r).unwrap(), 61);
        assert!(matches!(
            cz_core_cover(2, &frac(1, 2)),
            Err(Error::DegenerateOrbit(_))
        ));
    }

    #[test]
    fn boundary_indices() {
        assert_eq!(cz_boundary_perturbed(BoundaryOrbit::E), -1);
        assert_eq!(cz_boundary_perturbed(BoundaryOrbit::EPrime), 1);
        assert_eq!(cz_boundary_perturbed(BoundaryOrbit::H), 0);
        assert_eq!(cz_boundary_perturbed(BoundaryOrbit::HPrime), 0);
    }

    #[test]
    fn symmetric_index_examples() {
        let core = SimpleOrbit::new("e", OrbitKind::Elliptic, 1.0, 1).unwrap();
        let ctx = IndexContext::core("e", parse_rational("1.4142").unwrap());
        assert_eq!(symmetric_cz(&OrbitSet::empty(), &ctx).unwrap(), 0);
        assert_eq!(symmetric_cz(&OrbitSet::power(&core, 2).unwrap(), &ctx).unwrap(), 8);

        let e = SimpleOrbit::e(1.5).unwrap();
        let h = SimpleOrbit::h(1.4).unwrap();
        let neg = IndexContext::morse_bott(MorseBottSign::Negative, "e", "h");
        let eh = OrbitSet::single(&e).multiply(&OrbitSet::single(&h)).unwrap();
        assert_eq!(symmetric_cz(&eh, &neg).unwrap(), -1);
        let i = ech_index_trivial_class(&OrbitSet::single(&h), &OrbitSet::single(&e), &neg);
        assert_eq!(i.unwrap(), 1);
        assert!(matches!(
            symmetric_cz(&eh, &IndexContext::new(Framing::Torus)),
            Err(Error::MissingConvention { .. })
        ));
    }

    #[test]
    fn fredholm_examples() {
        assert_eq!(fredholm_branched_cover(-1, 2, 1, 1), 2);
        assert_eq!(fredholm_branched_cover(0, 1, 3, 3), 0);
        for k in 1..6 {
            assert_eq!(fredholm_branched_cover(1 - k, k, 1, 1), 2 * (k - 1));
        }
    }
}
