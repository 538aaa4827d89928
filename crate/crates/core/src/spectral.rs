//! Filtered complexes over F₂ and their spectral-sequence pages, computed from the
//! subspace formula `E^r_p = Z^r_p / (Z^{r−1}_{p−1} + ∂Z^{r−1}_{p+r−1})` degree by degree.
//!
//! Also hosts the page-level checks of the tensor-complex computation: the h'- and
//! h-filtrations, the right inverse s, and the e'-filtration of the U₀ cone.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::complexbuilder::{
    build_ecc_j, build_u0, ech_rel_boundary, mapping_cone, Generator, ModelComplex, TotalComplex,
    Variant,
};
use crate::error::{Error, Result};
use crate::f2core::{kernel_basis, span_rank, F2Vector};
use crate::orbitsets::OrbitSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// ∂ never raises the level.
    NonIncreasing,
    /// ∂ never lowers the level.
    NonDecreasing,
}

/// The named filtrations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Which {
    /// η-class of the V factor.
    F,
    /// Multiplicity of h.
    G,
    /// Multiplicity of h'.
    Gprime,
    /// Multiplicity of e'.
    E,
    /// η-class on a mapping cone.
    Fhat,
    /// Multiplicity of e' on a mapping cone.
    Ehat,
}

impl Which {
    pub fn direction(self) -> Direction {
        match self {
            Which::G => Direction::NonDecreasing,
            _ => Direction::NonIncreasing,
        }
    }

    fn level(self, g: &Generator) -> i64 {
        match self {
            Which::F | Which::Fhat => g.grading.eta,
            Which::G => i64::from(g.grading.h),
            Which::Gprime => i64::from(g.grading.h_prime),
            Which::E | Which::Ehat => i64::from(g.grading.e_prime),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "F" => Which::F,
            "G" => Which::G,
            "Gprime" | "G'" => Which::Gprime,
            "E" => Which::E,
            "Fhat" => Which::Fhat,
            "Ehat" => Which::Ehat,
            _ => return Err(Error::InvalidInput(format!("unknown filtration {s:?}"))),
        })
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::F => "F",
            Which::G => "G",
            Which::Gprime => "Gprime",
            Which::E => "E",
            Which::Fhat => "Fhat",
            Which::Ehat => "Ehat",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub name: String,
    pub base: ModelComplex,
    pub level: Vec<i64>,
    pub direction: Direction,
}

impl FilteredComplex {
    /// Errors with `DirectionViolated` if some differential entry breaks monotonicity.
    pub fn new(name: &str, base: ModelComplex, level: Vec<i64>, direction: Direction) -> Result<Self> {
        if level.len() != base.len() {
            return Err(Error::InvalidInput("one level per generator is required".into()));
        }
        for (r, c) in base.differential().entries() {
            let ok = match direction {
                Direction::NonIncreasing => level[r] <= level[c],
                Direction::NonDecreasing => level[r] >= level[c],
            };
            if !ok {
                return Err(Error::DirectionViolated(format!(
                    "{name}: ∂{} contains {} (levels {} → {})",
                    base.generators()[c].label,
                    base.generators()[r].label,
                    level[c],
                    level[r]
                )));
            }
        }
        Ok(Self {
            name: name.to_string(),
            base,
            level,
            direction,
        })
    }

    /// Level as seen by the nonincreasing machinery.
    fn internal(&self, i: usize) -> i64 {
        match self.direction {
            Direction::NonIncreasing => self.level[i],
            Direction::NonDecreasing => -self.level[i],
        }
    }

    fn external(&self, p: i64) -> i64 {
        match self.direction {
            Direction::NonIncreasing => p,
            Direction::NonDecreasing => -p,
        }
    }

    /// The complex of differential entries that preserve the level.
    pub fn associated_graded(&self) -> Result<ModelComplex> {
        let n = self.base.len();
        let cols = (0..n)
            .map(|c| self.base.boundary_of(c).filter(|r| self.level[r] == self.level[c]))
            .collect();
        let d = crate::f2core::F2Matrix::from_columns(n, cols)?;
        let mut c = ModelComplex::new(
            &format!("E0({})", self.name),
            self.base.generators().to_vec(),
            d,
        )?;
        c.bounds = self.base.bounds;
        Ok(c)
    }
}

pub fn make_filtration(c: &ModelComplex, which: Which) -> Result<FilteredComplex> {
    let level = c.generators().iter().map(|g| which.level(g)).collect();
    FilteredComplex::new(&which.to_string(), c.clone(), level, which.direction())
}

/// Dimensions and differential ranks of one page, keyed by (level p, degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageReport {
    pub filtration: String,
    pub r: u32,
    pub dims: BTreeMap<(i64, i64), usize>,
    /// Rank of the page-r differential leaving (p, degree).
    pub differential_ranks: BTreeMap<(i64, i64), usize>,
    /// True when every later differential vanishes.
    pub collapsed: bool,
}

impl PageReport {
    pub fn dim(&self, p: i64, d: i64) -> usize {
        self.dims.get(&(p, d)).copied().unwrap_or(0)
    }

    /// Total dimension at level p over all degrees.
    pub fn dim_at_level(&self, p: i64) -> usize {
        self.dims.iter().filter(|((q, _), _)| *q == p).map(|(_, v)| v).sum()
    }

    /// Total rank of the page differential leaving level p.
    pub fn rank_at_level(&self, p: i64) -> usize {
        self.differential_ranks
            .iter()
            .filter(|((q, _), _)| *q == p)
            .map(|(_, v)| v)
            .sum()
    }
}

struct PageEngine<'a> {
    fc: &'a FilteredComplex,
    by_degree: BTreeMap<i64, Vec<usize>>,
    z_cache: HashMap<(i64, i64, i64), Vec<F2Vector>>,
}

impl<'a> PageEngine<'a> {
    fn new(fc: &'a FilteredComplex) -> Self {
        Self {
            fc,
            by_degree: fc.base.degree_blocks(),
            z_cache: HashMap::new(),
        }
    }

    fn levels(&self) -> (i64, i64) {
        let lv: Vec<i64> = (0..self.fc.base.len()).map(|i| self.fc.internal(i)).collect();
        (
            lv.iter().copied().min().unwrap_or(0),
            lv.iter().copied().max().unwrap_or(0),
        )
    }

    /// Z^r_p in degree d: elements of F_p whose boundary lies in F_{p−r}.
    fn z(&mut self, p: i64, r: i64, d: i64) -> Vec<F2Vector> {
        if let Some(v) = self.z_cache.get(&(p, r, d)) {
            return v.clone();
        }
        let fc = self.fc;
        let cols: Vec<usize> = self
            .by_degree
            .get(&d)
            .map(|v| v.iter().copied().filter(|&i| fc.internal(i) <= p).collect())
            .unwrap_or_default();
        let out: Vec<F2Vector> = if r <= 0 {
            cols.iter().map(|&i| F2Vector::unit(i)).collect()
        } else {
            let rows: Vec<usize> = self
                .by_degree
                .get(&(d - 1))
                .map(|v| v.iter().copied().filter(|&i| fc.internal(i) > p - r).collect())
                .unwrap_or_default();
            let m = fc.base.differential().select(&rows, &cols);
            kernel_basis(&m)
                .into_iter()
                .map(|k| k.reindex(|c| Some(cols[c])))
                .collect()
        };
        self.z_cache.insert((p, r, d), out.clone());
        out
    }

    fn dim(&mut self, p: i64, r: i64, d: i64) -> usize {
        let num = self.z(p, r, d);
        if num.is_empty() {
            return 0;
        }
        let mut den = self.z(p - 1, r - 1, d);
        let up = self.z(p + r - 1, r - 1, d + 1);
        den.extend(up.iter().map(|v| self.fc.base.differential().apply(v)));
        num.len() - span_rank(den.iter())
    }

    fn dims(&mut self, r: i64) -> BTreeMap<(i64, i64), usize> {
        let (lo, hi) = self.levels();
        let degrees: Vec<i64> = self.by_degree.keys().copied().collect();
        let mut out = BTreeMap::new();
        for p in lo..=hi {
            for &d in &degrees {
                let v = self.dim(p, r, d);
                if v > 0 {
                    out.insert((p, d), v);
                }
            }
        }
        out
    }
}

/// Page r of the spectral sequence of `fc`.
pub fn page(fc: &FilteredComplex, r: u32) -> PageReport {
    let mut eng = PageEngine::new(fc);
    let (lo, hi) = eng.levels();
    let ri = i64::from(r);
    let cur = eng.dims(ri);
    let next = eng.dims(ri + 1);
    let inf = eng.dims(hi - lo + 2);
    let degrees: Vec<i64> = eng.by_degree.keys().copied().collect();
    let mut rank_out: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let get = |m: &BTreeMap<(i64, i64), usize>, k: (i64, i64)| m.get(&k).copied().unwrap_or(0);
    for p in (lo..=hi).rev() {
        for &d in degrees.iter().rev() {
            // d_r lands in (p, d) from (p + r, d + 1).
            let incoming = get(&rank_out, (p + ri, d + 1));
            let v = get(&cur, (p, d)) - get(&next, (p, d)) - incoming;
            if v > 0 {
                rank_out.insert((p, d), v);
            }
        }
    }
    let external = |m: BTreeMap<(i64, i64), usize>| -> BTreeMap<(i64, i64), usize> {
        m.into_iter().map(|((p, d), v)| ((fc.external(p), d), v)).collect()
    };
    PageReport {
        filtration: fc.name.clone(),
        r,
        collapsed: cur == inf,
        dims: external(cur),
        differential_ranks: external(rank_out),
    }
}

/// Pages 0..=r_max.
pub fn pages(fc: &FilteredComplex, r_max: u32) -> Vec<PageReport> {
    (0..=r_max).map(|r| page(fc, r)).collect()
}

/// The E^∞ page.
pub fn page_infinity(fc: &FilteredComplex) -> PageReport {
    let lv = &fc.level;
    let span = lv.iter().max().unwrap_or(&0) - lv.iter().min().unwrap_or(&0);
    page(fc, u32::try_from(span + 1).unwrap_or(1))
}

/// Outcome of one page-level check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClaimsReport {
    pub claims: Vec<Claim>,
}

impl ClaimsReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.claims.push(Claim {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// dim ECH♭_{j,d}(N) for j ≤ j_max.
fn flat_table(t: &TotalComplex) -> Result<BTreeMap<(u32, i64), usize>> {
    let mut out = BTreeMap::new();
    for j in 0..=t.bounds.j_max {
        for (d, h) in build_ecc_j(&t.n, Variant::Flat, j)?.homology_by_degree() {
            out.insert((j, d), h);
        }
    }
    Ok(out)
}

fn restrict(c: &ModelComplex, tag: &str, keep: impl Fn(&Generator) -> bool) -> Result<ModelComplex> {
    c.subcomplex(tag, keep)
}

/// Runs the six page-level checks on a tensor complex built from a post-limit V model.
///
/// Returns `ClaimFailed` naming the first failing check and a witness.
pub fn check_intermediate_claims(t: &TotalComplex) -> Result<ClaimsReport> {
    let report = intermediate_claims_report(t)?;
    if let Some(c) = report.claims.iter().find(|c| !c.passed) {
        return Err(Error::ClaimFailed {
            name: c.name.clone(),
            counterexample: c.detail.clone(),
        });
    }
    Ok(report)
}

/// Like [`check_intermediate_claims`] but returns failures inside the report.
pub fn intermediate_claims_report(t: &TotalComplex) -> Result<ClaimsReport> {
    if !matches!(t.v, crate::complexbuilder::VModel::PostLimit { .. }) {
        return Err(Error::InvalidModel("page checks use the post-limit V model".into()));
    }
    let b = t.bounds;
    let (k_max, m_max) = (i64::from(b.j_max), i64::from(b.m_max));
    let flat = flat_table(t)?;
    let fl = |j: i64, d: i64| -> usize {
        if j < 0 {
            return 0;
        }
        flat.get(&(j as u32, d)).copied().unwrap_or(0)
    };
    let mut rep = ClaimsReport::default();
    let c = &t.complex;

    // F: E¹ concentrated at p = 0.
    let f = make_filtration(c, Which::F)?;
    let e1f = page(&f, 1);
    let bad_f: Vec<_> = e1f.dims.iter().filter(|((p, _), v)| *p > 0 && **v > 0).collect();
    rep.push("E1(F) vanishes for p>0", bad_f.is_empty(), format!("{bad_f:?}"));

    // (i) and (ii): G' on (E⁰(G), ∂₀₀), split by h-multiplicity k.
    let g = make_filtration(c, Which::G)?;
    let e0g = g.associated_graded()?;
    let degrees: BTreeSet<i64> = c.generators().iter().map(|g| g.degree).collect();
    let mut mismatch_i = Vec::new();
    let mut bad_ii = Vec::new();
    for k in 0..=1i64 {
        let part = restrict(&e0g, "E0(G)_k", |g| i64::from(g.grading.h) == k)?;
        let gp = make_filtration(&part, Which::Gprime)?;
        let e1 = page(&gp, 1);
        for kp in 0..=1i64 {
            for &d in &degrees {
                let mut want = 0;
                for m in 0..=m_max {
                    for j in 0..=(k_max - m - k - kp) {
                        want += fl(j, d - 2 * m - k - kp);
                    }
                }
                let got = e1.dim(kp, d);
                if got != want {
                    mismatch_i.push((k, kp, d, got, want));
                }
            }
        }
        let e2 = page(&gp, 2);
        for (&(p, d), &v) in &e2.dims {
            if p == 1 && v > 0 {
                bad_ii.push((k, d, v));
            }
        }
    }
    rep.push(
        "(i) E1(G') = F[h',h] x ECH_flat(V) x ECH_flat(N)",
        mismatch_i.is_empty(),
        format!("(k, k', degree, got, want): {mismatch_i:?}"),
    );
    rep.push("(ii) E2_{k,1}(G') = 0", bad_ii.is_empty(), format!("(k, degree, dim): {bad_ii:?}"));

    // (iii) E¹(G) from the top page count of each e'-power.
    let e1g = page(&g, 1);
    let mut mismatch_iii = Vec::new();
    for k in 0..=1i64 {
        for &d in &degrees {
            let want: usize = (0..=m_max).map(|m| fl(k_max - m - k, d - 2 * m - k)).sum();
            let got = e1g.dim(k, d);
            if got != want {
                mismatch_iii.push((k, d, got, want));
            }
        }
    }
    rep.push(
        "(iii) E1(G) = F[e',h] x ECH(N,dN)",
        mismatch_iii.is_empty(),
        format!("(k, degree, got, want): {mismatch_iii:?}"),
    );

    // (iv) the right inverse s.
    let (iv_ok, iv_detail) = check_right_inverse(t, &e0g, &e1g)?;
    rep.push("(iv) d01 surjective with d01 s = id", iv_ok, iv_detail);

    // (v) E²₁(G) = 0.
    let e2g = page(&g, 2);
    let bad_v: Vec<_> = e2g.dims.iter().filter(|((p, _), v)| *p == 1 && **v > 0).collect();
    rep.push("(v) E2_1(G) = 0", bad_v.is_empty(), format!("{bad_v:?}"));

    // (vi) the U₀ cone filtered by e'-multiplicity.
    let u = build_u0(t)?;
    let cone = mapping_cone(&u, -2, c)?;
    let ehat = make_filtration(&cone, Which::Ehat)?;
    let e2 = page(&ehat, 2);
    let hat = ech_rel_boundary(&t.n, Variant::Full, b.j_max, b.guard)?;
    let mut bad_vi = Vec::new();
    for (n, degrees) in ehat_window(t)? {
        for d in degrees {
            let got = e2.dim(n, d);
            let want = if n == 0 { hat.limit.get(&d).copied().unwrap_or(0) } else { 0 };
            if got != want {
                bad_vi.push((n, d, got));
            }
        }
    }
    rep.push(
        "(vi) E2_n(Ehat) = 0 for n>0, E2_0 = hat ECH",
        bad_vi.is_empty(),
        format!("(n, degree, dim): {bad_vi:?}"),
    );
    Ok(rep)
}

/// Levels n of the e'-filtration on the U₀ cone, with the degrees where page 2 is
/// unaffected by truncation.
///
/// Page 2 at level n uses classes from levels n and n+1, whose N factors have page count
/// at most K−n−1. A degree D qualifies when D−2n−2, D−2n−1 and D−2n are stable
/// degrees of the hat group computed with that budget.
pub fn ehat_window(t: &TotalComplex) -> Result<BTreeMap<i64, BTreeSet<i64>>> {
    let b = t.bounds;
    let top = b.j_max.min(b.m_max);
    let mut out = BTreeMap::new();
    for n in 0..top {
        let budget = b.j_max - n - 1;
        if budget < 3 {
            break;
        }
        let stable = ech_rel_boundary(&t.n, Variant::Full, budget, b.guard.min(budget))?.stable_degrees();
        let ok = |d: i64| d < 0 || stable.contains(&d);
        let n = i64::from(n);
        let degrees = stable
            .iter()
            .map(|&d| d + 2 * n)
            .chain(stable.iter().map(|&d| d + 2 * n + 1))
            .chain(stable.iter().map(|&d| d + 2 * n + 2))
            .filter(|&d| ok(d - 2 * n - 2) && ok(d - 2 * n - 1) && ok(d - 2 * n))
            .collect();
        out.insert(n, degrees);
    }
    Ok(out)
}

/// Builds s(z) for z = e'^m ⊗ h c over ∂♭-cycle bases c of each ECC♭_j and checks
/// ∂₀₀ s(z) = 0, that the h-raising part of ∂₀ s(z) is z, and that the z span E¹₁(G).
fn check_right_inverse(t: &TotalComplex, e0g: &ModelComplex, e1g: &PageReport) -> Result<(bool, String)> {
    let b = t.bounds;
    let top = b.j_max.min(b.m_max);
    let ep = t.v.e_prime().expect("post-limit");
    let h = OrbitSet::single(&t.n.h);
    let lookup = |s: &str| t.n.lookup(s);
    let c = &t.complex;
    let mut zs_by_degree: BTreeMap<i64, Vec<F2Vector>> = BTreeMap::new();
    for j in 0..top {
        let ecc = build_ecc_j(&t.n, Variant::Flat, j)?;
        let monos: Vec<OrbitSet> = ecc
            .generators()
            .iter()
            .map(|g| OrbitSet::parse(&g.label, lookup))
            .collect::<Result<_>>()?;
        let cycles = kernel_basis(ecc.differential());
        for m in 0..(top - j) {
            let em = OrbitSet::power(&ep, m).unwrap_or_default();
            for cyc in &cycles {
                let terms: Vec<OrbitSet> = cyc.support().iter().map(|&i| monos[i].clone()).collect();
                let z_terms: Vec<(OrbitSet, OrbitSet)> = terms
                    .iter()
                    .map(|g| (em.clone(), g.multiply(&h).expect("flat monomials have no h")))
                    .collect();
                let z = t.vector_of(&z_terms)?;
                let mut s_terms = Vec::new();
                let mut cur = terms.clone();
                let mut i = 1u32;
                while !cur.is_empty() {
                    let e_pow = OrbitSet::power(&ep, m + i).unwrap_or_default();
                    s_terms.extend(cur.iter().map(|g| (e_pow.clone(), g.clone())));
                    let mut next = Vec::new();
                    for g in &cur {
                        next.extend(t.n.boundary_prime(g)?);
                    }
                    cur = cancel(next);
                    i += 1;
                }
                let s = t.vector_of(&s_terms)?;
                let full = c.differential().apply(&s);
                let d00 = e0g.differential().apply(&s);
                if !d00.is_zero() {
                    return Ok((false, format!("d00 s(z) != 0 for z = e'^{m} (x) h.{terms:?}")));
                }
                if &full + &d00 != z {
                    return Ok((false, format!("d01 s(z) != z for z = e'^{m} (x) h.{terms:?}")));
                }
                let d = c.generators()[z.support()[0]].degree;
                zs_by_degree.entry(d).or_default().push(z);
            }
        }
    }
    // The z classes must span E¹₁(G) = H of the h-multiplicity-one part of (E⁰(G), ∂₀₀).
    for (&(k, d), &want) in &e1g.dims {
        if k != 1 {
            continue;
        }
        let all = |_: usize| true;
        let step = e0g.two_step(d, &all);
        let mid: Vec<usize> = e0g.degree_blocks().get(&d).cloned().unwrap_or_default();
        let pos: HashMap<usize, usize> = mid.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut boundaries = step.boundaries();
        let base = boundaries.rank();
        for z in zs_by_degree.get(&d).into_iter().flatten() {
            boundaries.insert(&z.reindex(|g| pos.get(&g).copied()));
        }
        let spanned = boundaries.rank() - base;
        if spanned != want {
            return Ok((false, format!("degree {d}: z classes span {spanned}, E1_1(G) has {want}")));
        }
    }
    Ok((true, String::new()))
}

fn cancel(terms: Vec<OrbitSet>) -> Vec<OrbitSet> {
    let mut s = BTreeSet::new();
    for t in terms {
        if !s.remove(&t) {
            s.insert(t);
        }
    }
    s.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexbuilder::{build_ecc_variant, build_total_complex, Bounds, NModel, Piece, VModel};
    use crate::f2core::F2Matrix;

    #[test]
    fn unfiltered_page_one_is_homology() {
        let n = NModel::trivial();
        let c = build_ecc_variant(Piece::N(&n), Variant::Full, Bounds::default()).unwrap();
        let fc = FilteredComplex::new("0", c.clone(), vec![0; c.len()], Direction::NonIncreasing).unwrap();
        let e1 = page(&fc, 1);
        let h = c.homology_by_degree();
        for (d, v) in h {
            assert_eq!(e1.dim(0, d), v);
        }
    }

    #[test]
    fn filtration_levels() {
        let t = build_total_complex(&VModel::post_limit(), &NModel::trivial(), Bounds::default()).unwrap();
        let lvl = |w: Which, s: &str| {
            let f = make_filtration(&t.complex, w).unwrap();
            f.level[t.complex.index_of(s).unwrap()]
        };
        assert_eq!(lvl(Which::G, "1⊗e*h"), 1);
        assert_eq!(lvl(Which::G, "1⊗e^2"), 0);
        assert_eq!(lvl(Which::Gprime, "e'*h'⊗1"), 1);
        assert_eq!(lvl(Which::E, "e'^3*h'⊗1"), 3);
    }

    #[test]
    fn direction_is_enforced() {
        let t = build_total_complex(&VModel::post_limit(), &NModel::trivial(), Bounds::default()).unwrap();
        let c = &t.complex;
        let lv: Vec<i64> = c.generators().iter().map(|g| i64::from(g.grading.h)).collect();
        assert!(matches!(
            FilteredComplex::new("G", c.clone(), lv, Direction::NonIncreasing),
            Err(Error::DirectionViolated(_))
        ));
    }

    #[test]
    fn two_level_filtration_collapses_at_page_two() {
        // 0 ← a ← b with a at level 0 and b at level 1: d₁ kills both.
        let gens = ["a", "b"]
            .iter()
            .enumerate()
            .map(|(i, s)| Generator {
                label: s.to_string(),
                degree: i as i64,
                action: i as f64 + 1.0,
                grading: Default::default(),
                copy: 0,
            })
            .collect();
        let d = F2Matrix::from_entries(2, 2, [(0, 1)]).unwrap();
        let c = ModelComplex::new("pair", gens, d).unwrap();
        let fc = FilteredComplex::new("lv", c, vec![0, 1], Direction::NonIncreasing).unwrap();
        let e1 = page(&fc, 1);
        assert_eq!(e1.dim(0, 0), 1);
        assert_eq!(e1.dim(1, 1), 1);
        assert_eq!(e1.differential_ranks.get(&(1, 1)), Some(&1));
        assert!(!e1.collapsed);
        let e2 = page(&fc, 2);
        assert!(e2.dims.is_empty());
        assert!(e2.collapsed);
    }

    #[test]
    fn trivial_model_claims() {
        let t = build_total_complex(&VModel::post_limit(), &NModel::trivial(), Bounds::default()).unwrap();
        let rep = intermediate_claims_report(&t).unwrap();
        for c in &rep.claims {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
