//! Orbit sets: monomials in simple Reeb orbits, polynomial in elliptic orbits and
//! exterior (square-zero) in hyperbolic ones.
//!
//! Products and quotients that vanish are reported as `None`, the zero element.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitKind {
    Elliptic,
    Hyperbolic,
}

/// Data attached to a simple orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitData {
    pub name: String,
    pub kind: OrbitKind,
    pub action: f64,
    /// Intersection number with a page.
    pub page_degree: u32,
    /// Value of η on the homology class; zero for boundary orbits.
    pub eta_class: i64,
    /// Contribution to the relative index grading; the differential lowers it by one.
    pub degree: i64,
    /// Conley–Zehnder index of each cover, when known.
    pub cz_profile: BTreeMap<u32, i64>,
}

/// A simple orbit. Identity, ordering and hashing use the name only.
#[derive(Clone, Debug)]
pub struct SimpleOrbit(Arc<OrbitData>);

impl SimpleOrbit {
    pub fn new(name: &str, kind: OrbitKind, action: f64, page_degree: u32) -> Result<Self> {
        if !(action > 0.0 && action.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "orbit {name} has non-positive action {action}"
            )));
        }
        if name.is_empty() || name == "1" || name.contains(['*', '^', ' ', '|']) {
            return Err(Error::InvalidModel(format!("bad orbit name {name:?}")));
        }
        Ok(Self(Arc::new(OrbitData {
            name: name.to_string(),
            kind,
            action,
            page_degree,
            eta_class: 0,
            degree: 0,
            cz_profile: BTreeMap::new(),
        })))
    }

    fn edit(mut self, f: impl FnOnce(&mut OrbitData)) -> Self {
        f(Arc::make_mut(&mut self.0));
        self
    }

    pub fn with_eta(self, eta: i64) -> Self {
        self.edit(|d| d.eta_class = eta)
    }

    pub fn with_degree(self, degree: i64) -> Self {
        self.edit(|d| d.degree = degree)
    }

    pub fn with_cz(self, profile: BTreeMap<u32, i64>) -> Self {
        self.edit(|d| d.cz_profile = profile)
    }

    /// Elliptic boundary orbit `e` of N: degree 0.
    pub fn e(action: f64) -> Result<Self> {
        Ok(Self::new("e", OrbitKind::Elliptic, action, 1)?.with_degree(0))
    }

    /// Hyperbolic boundary orbit `h` of N: degree 1.
    pub fn h(action: f64) -> Result<Self> {
        Ok(Self::new("h", OrbitKind::Hyperbolic, action, 1)?.with_degree(1))
    }

    /// Elliptic boundary orbit `e'` of V: degree 2.
    pub fn e_prime(action: f64) -> Result<Self> {
        Ok(Self::new("e'", OrbitKind::Elliptic, action, 1)?.with_degree(2))
    }

    /// Hyperbolic boundary orbit `h'` of V: degree 1.
    pub fn h_prime(action: f64) -> Result<Self> {
        Ok(Self::new("h'", OrbitKind::Hyperbolic, action, 1)?.with_degree(1))
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.kind == OrbitKind::Hyperbolic
    }
}

impl Deref for SimpleOrbit {
    type Target = OrbitData;
    fn deref(&self) -> &OrbitData {
        &self.0
    }
}

impl PartialEq for SimpleOrbit {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for SimpleOrbit {}

impl PartialOrd for SimpleOrbit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimpleOrbit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl Hash for SimpleOrbit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
    }
}

/// Page intersection number and η-value of an orbit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub j: i64,
    pub eta: i64,
}

/// A monomial ∏ γᵢ^{mᵢ}; the empty monomial is ∅, written `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitSet {
    factors: BTreeMap<SimpleOrbit, u32>,
}

impl OrbitSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `γ^m`, or `None` when a hyperbolic orbit is raised to a power ≥ 2.
    pub fn power(orbit: &SimpleOrbit, m: u32) -> Option<Self> {
        if m >= 2 && orbit.is_hyperbolic() {
            return None;
        }
        let mut factors = BTreeMap::new();
        if m > 0 {
            factors.insert(orbit.clone(), m);
        }
        Some(Self { factors })
    }

    pub fn single(orbit: &SimpleOrbit) -> Self {
        Self::power(orbit, 1).expect("first power is never zero")
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&SimpleOrbit, u32)> {
        self.factors.iter().map(|(o, &m)| (o, m))
    }

    /// Multiplicity of the orbit with the given name.
    pub fn multiplicity(&self, name: &str) -> u32 {
        self.factors
            .iter()
            .find(|(o, _)| o.name == name)
            .map_or(0, |(_, &m)| m)
    }

    /// Multiset union; `None` if a hyperbolic orbit would repeat.
    pub fn multiply(&self, other: &OrbitSet) -> Option<OrbitSet> {
        let mut factors = self.factors.clone();
        for (o, &m) in &other.factors {
            let slot = factors.entry(o.clone()).or_insert(0);
            *slot += m;
            if *slot >= 2 && o.is_hyperbolic() {
                return None;
            }
        }
        Some(OrbitSet { factors })
    }

    /// `self / other`, or `None` when some factor of `other` is missing.
    pub fn divide(&self, other: &OrbitSet) -> Option<OrbitSet> {
        let mut factors = self.factors.clone();
        for (o, &m) in &other.factors {
            let have = factors.get(o).copied().unwrap_or(0);
            match have.cmp(&m) {
                Ordering::Less => return None,
                Ordering::Equal => {
                    factors.remove(o);
                }
                Ordering::Greater => {
                    factors.insert(o.clone(), have - m);
                }
            }
        }
        Some(OrbitSet { factors })
    }

    /// Removes every factor with the given name.
    pub fn without(&self, name: &str) -> OrbitSet {
        OrbitSet {
            factors: self
                .factors
                .iter()
                .filter(|(o, _)| o.name != name)
                .map(|(o, &m)| (o.clone(), m))
                .collect(),
        }
    }

    pub fn action(&self) -> f64 {
        self.factors
            .iter()
            .map(|(o, &m)| f64::from(m) * o.action)
            .sum()
    }

    pub fn grade(&self) -> Grade {
        let mut g = Grade { j: 0, eta: 0 };
        for (o, &m) in &self.factors {
            g.j += i64::from(m) * i64::from(o.page_degree);
            g.eta += i64::from(m) * o.eta_class;
        }
        g
    }

    /// Sum of the orbit degrees with multiplicity.
    pub fn degree(&self) -> i64 {
        self.factors
            .iter()
            .map(|(o, &m)| i64::from(m) * o.degree)
            .sum()
    }

    /// Parses `"e^2*h"` style strings, resolving names through `lookup`.
    pub fn parse(s: &str, lookup: impl Fn(&str) -> Option<SimpleOrbit>) -> Result<OrbitSet> {
        let s = s.trim();
        let mut out = OrbitSet::empty();
        if s == "1" || s.is_empty() {
            return Ok(out);
        }
        for term in s.split('*') {
            let term = term.trim();
            let (name, exp) = match term.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim().parse::<u32>().map_err(|_| {
                        Error::InvalidInput(format!("bad exponent in {term:?}"))
                    })?,
                ),
                None => (term, 1),
            };
            let orbit = lookup(name)
                .ok_or_else(|| Error::InvalidInput(format!("undeclared orbit {name:?} in {s:?}")))?;
            let factor = OrbitSet::power(&orbit, exp).ok_or_else(|| {
                Error::InvalidInput(format!("{s:?} squares the hyperbolic orbit {name}"))
            })?;
            out = out.multiply(&factor).ok_or_else(|| {
                Error::InvalidInput(format!("{s:?} squares a hyperbolic orbit"))
            })?;
        }
        Ok(out)
    }
}

impl fmt::Display for OrbitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (o, &m)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if m == 1 {
                write!(f, "{}", o.name)?;
            } else {
                write!(f, "{}^{}", o.name, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eh() -> (SimpleOrbit, SimpleOrbit) {
        (SimpleOrbit::e(1.5).unwrap(), SimpleOrbit::h(1.4).unwrap())
    }

    #[test]
    fn hyperbolic_squares_vanish() {
        let (_, h) = eh();
        let h1 = OrbitSet::single(&h);
        assert_eq!(h1.multiply(&h1), None);
        assert_eq!(OrbitSet::power(&h, 2), None);
    }

    #[test]
    fn unit_and_powers() {
        let (e, _) = eh();
        let g = OrbitSet::single(&e);
        assert_eq!(OrbitSet::empty().multiply(&g), Some(g.clone()));
        let e2 = OrbitSet::power(&e, 2).unwrap();
        assert_eq!(e2.multiply(&g), OrbitSet::power(&e, 3));
    }

    #[test]
    fn division_rules() {
        let ep = SimpleOrbit::e_prime(3.0).unwrap();
        let hp = SimpleOrbit::h_prime(2.0).unwrap();
        let (_, h) = eh();
        let eh_p = OrbitSet::single(&ep).multiply(&OrbitSet::single(&hp)).unwrap();
        assert_eq!(eh_p.divide(&OrbitSet::single(&ep)), Some(OrbitSet::single(&hp)));
        assert_eq!(eh_p.divide(&OrbitSet::empty()), Some(eh_p.clone()));
        assert_eq!(OrbitSet::single(&h).divide(&OrbitSet::single(&ep)), None);
    }

    #[test]
    fn action_and_grade() {
        let (e, h) = eh();
        assert_eq!(OrbitSet::empty().action(), 0.0);
        assert!((OrbitSet::power(&e, 2).unwrap().action() - 3.0).abs() < 1e-12);
        let eh1 = OrbitSet::single(&e).multiply(&OrbitSet::single(&h)).unwrap();
        assert!((eh1.action() - 2.9).abs() < 1e-12);
        let e3h = OrbitSet::power(&e, 3).unwrap().multiply(&OrbitSet::single(&h)).unwrap();
        assert_eq!(e3h.grade(), Grade { j: 4, eta: 0 });
        let g = SimpleOrbit::new("g", OrbitKind::Elliptic, 1.0, 1).unwrap().with_eta(2);
        assert_eq!(OrbitSet::power(&g, 3).unwrap().grade().eta, 6);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let (e, h) = eh();
        let lookup = |n: &str| match n {
            "e" => Some(e.clone()),
            "h" => Some(h.clone()),
            _ => None,
        };
        let g = OrbitSet::parse("e^2*h", lookup).unwrap();
        assert_eq!(g.to_string(), "e^2*h");
        assert_eq!(OrbitSet::parse("1", lookup).unwrap(), OrbitSet::empty());
        assert!(OrbitSet::parse("h^2", lookup).is_err());
        assert!(OrbitSet::parse("x", lookup).is_err());
    }
}
