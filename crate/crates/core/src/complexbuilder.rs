//! Chain complexes built from orbit-set models: ECC variants of the pieces N and V,
//! the tensor complex with the four-term differential ∂₀, the map U₀ and its mapping
//! cone, stabilization maps, quotient complexes, action truncation and direct limits.
//!
//! Every complex is graded by a relative index degree that the differential lowers by
//! exactly one. The boundary orbits carry degrees e = 0, h = 1, e' = 2, h' = 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::f2core::{induced_map_dims, F2Matrix, F2Vector, TwoStep};
use crate::orbitsets::{OrbitSet, SimpleOrbit};
use crate::rational::Q;

/// Multiplicities and gradings that filtrations read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Grading {
    /// Page intersection number of the N-side factor.
    pub j: i64,
    pub eta: i64,
    pub e: u32,
    pub h: u32,
    pub e_prime: u32,
    pub h_prime: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub label: String,
    pub degree: i64,
    pub action: f64,
    pub grading: Grading,
    /// Which summand of a mapping cone the generator lives in (0 outside cones).
    pub copy: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Uses both boundary orbits.
    Full,
    /// Uses only the elliptic boundary orbit.
    Flat,
    /// Uses only the hyperbolic boundary orbit.
    Sharp,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Flat => "flat",
            Variant::Sharp => "sharp",
        })
    }
}

/// Truncation bounds: e'-multiplicity cut, page-count cut, and the guard band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub m_max: u32,
    pub j_max: u32,
    pub guard: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            m_max: 6,
            j_max: 6,
            guard: 2,
        }
    }
}

/// A finite graded F₂ chain complex. Column i of the differential is ∂ of generator i.
#[derive(Clone, Debug)]
pub struct ModelComplex {
    pub tag: String,
    pub bounds: Option<Bounds>,
    generators: Vec<Generator>,
    differential: F2Matrix,
}

impl ModelComplex {
    /// Checks squareness, `∂² = 0` and that ∂ lowers the degree by one.
    pub fn new(tag: &str, generators: Vec<Generator>, differential: F2Matrix) -> Result<Self> {
        let n = generators.len();
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::InvalidModel(format!(
                "{tag}: differential is {}x{} for {n} generators",
                differential.rows(),
                differential.cols()
            )));
        }
        for (r, c) in differential.entries() {
            if generators[r].degree != generators[c].degree - 1 {
                return Err(Error::InvalidModel(format!(
                    "{tag}: ∂{} contains {} but degrees are {} and {}",
                    generators[c].label, generators[r].label, generators[c].degree, generators[r].degree
                )));
            }
        }
        if !differential.mul(&differential)?.is_zero() {
            return Err(Error::CompositionNonzero);
        }
        Ok(Self {
            tag: tag.to_string(),
            bounds: None,
            generators,
            differential,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn boundary_of(&self, i: usize) -> &F2Vector {
        self.differential.column(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Generator indices grouped by degree.
    pub fn degree_blocks(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            out.entry(g.degree).or_default().push(i);
        }
        out
    }

    /// `C_{d+1} → C_d → C_{d−1}` restricted to the generators accepted by `keep`.
    pub fn two_step(&self, d: i64, keep: &dyn Fn(usize) -> bool) -> TwoStep {
        let blocks = self.degree_blocks();
        let pick = |deg: i64| -> Vec<usize> {
            blocks
                .get(&deg)
                .map(|v| v.iter().copied().filter(|&i| keep(i)).collect())
                .unwrap_or_default()
        };
        let (up, mid, down) = (pick(d + 1), pick(d), pick(d - 1));
        TwoStep {
            d_in: self.differential.select(&mid, &up),
            d_out: self.differential.select(&down, &mid),
        }
    }

    /// Homology dimension per degree.
    pub fn homology_by_degree(&self) -> BTreeMap<i64, usize> {
        let all = |_: usize| true;
        self.degree_blocks()
            .keys()
            .map(|&d| (d, self.two_step(d, &all).homology_dim()))
            .collect()
    }

    pub fn total_homology(&self) -> usize {
        self.homology_by_degree().values().sum()
    }

    /// Errors unless every differential entry strictly lowers the action.
    pub fn audit_action(&self) -> Result<()> {
        for (r, c) in self.differential.entries() {
            let (src, dst) = (&self.generators[c], &self.generators[r]);
            if dst.action >= src.action {
                return Err(Error::InvalidModel(format!(
                    "{}: ∂{} contains {} without lowering action ({} → {})",
                    self.tag, src.label, dst.label, src.action, dst.action
                )));
            }
        }
        Ok(())
    }

    /// The subcomplex on the generators accepted by `keep`; errors if it is not closed.
    pub fn subcomplex(&self, tag: &str, keep: impl Fn(&Generator) -> bool) -> Result<ModelComplex> {
        let kept: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.generators[i])).collect();
        let mut pos = vec![None; self.len()];
        for (k, &i) in kept.iter().enumerate() {
            pos[i] = Some(k);
        }
        let mut cols = Vec::with_capacity(kept.len());
        for &i in &kept {
            let col = self.differential.column(i);
            if let Some(&out) = col.support().iter().find(|&&r| pos[r].is_none()) {
                return Err(Error::InvalidModel(format!(
                    "{tag}: ∂{} leaves the subcomplex through {}",
                    self.generators[i].label, self.generators[out].label
                )));
            }
            cols.push(col.reindex(|r| pos[r]));
        }
        let gens = kept.iter().map(|&i| self.generators[i].clone()).collect();
        let mut c = ModelComplex::new(tag, gens, F2Matrix::from_columns(kept.len(), cols)?)?;
        c.bounds = self.bounds;
        Ok(c)
    }

    /// Edge list `(source, target)` of the differential.
    pub fn edges(&self) -> Vec<(String, String)> {
        self.differential
            .entries()
            .map(|(r, c)| (self.generators[c].label.clone(), self.generators[r].label.clone()))
            .collect()
    }

    /// Checks `∂ u = u ∂`.
    pub fn check_chain_map(&self, u: &F2Matrix, what: &str) -> Result<()> {
        if u.rows() != self.len() || u.cols() != self.len() {
            return Err(Error::NotChainMap(format!("{what}: wrong shape")));
        }
        if self.differential.mul(u)? != u.mul(&self.differential)? {
            return Err(Error::NotChainMap(format!("{what} does not commute with ∂")));
        }
        Ok(())
    }
}

/// How a builder treats boundary terms outside the generator set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Missing {
    /// The generator set spans a quotient; outside terms vanish.
    Drop,
    /// The generator set must be a subcomplex.
    Error,
}

/// Assembles a complex from keyed generators and a boundary rule on keys.
fn assemble<K: Ord + Clone + fmt::Display>(
    tag: &str,
    items: Vec<(K, Generator)>,
    boundary: impl Fn(&K) -> Result<Vec<K>>,
    missing: Missing,
) -> Result<(ModelComplex, Vec<K>)> {
    let index: BTreeMap<K, usize> = items
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k.clone(), i))
        .collect();
    let mut cols = Vec::with_capacity(items.len());
    for (k, _) in &items {
        let mut rows = Vec::new();
        for t in boundary(k)? {
            match index.get(&t) {
                Some(&i) => rows.push(i),
                None if missing == Missing::Drop => {}
                None => {
                    return Err(Error::InvalidModel(format!(
                        "{tag}: ∂({k}) contains {t}, outside the truncation"
                    )))
                }
            }
        }
        cols.push(F2Vector::from_indices(rows));
    }
    let (keys, gens): (Vec<K>, Vec<Generator>) = items.into_iter().unzip();
    let d = F2Matrix::from_columns(gens.len(), cols)?;
    Ok((ModelComplex::new(tag, gens, d)?, keys))
}

fn power(o: &SimpleOrbit, m: u32) -> OrbitSet {
    OrbitSet::power(o, m).unwrap_or_default()
}

/// All monomials over `orbits` with Σ mᵢ·weight(γᵢ) ≤ max; weights must be ≥ 1.
pub fn monomials(orbits: &[SimpleOrbit], weight: impl Fn(&SimpleOrbit) -> i64, max: i64) -> Vec<OrbitSet> {
    fn rec(
        orbits: &[SimpleOrbit],
        weight: &dyn Fn(&SimpleOrbit) -> i64,
        budget: i64,
        acc: OrbitSet,
        out: &mut Vec<OrbitSet>,
    ) {
        let Some((first, rest)) = orbits.split_first() else {
            out.push(acc);
            return;
        };
        let w = weight(first).max(1);
        let cap = if first.is_hyperbolic() { 1 } else { budget / w };
        for m in 0..=cap.max(0) {
            if m * w > budget {
                break;
            }
            let next = acc
                .multiply(&power(first, m as u32))
                .expect("distinct orbits never collide");
            rec(rest, weight, budget - m * w, next, out);
        }
    }
    let mut out = Vec::new();
    if max >= 0 {
        rec(orbits, &weight, max, OrbitSet::empty(), &mut out);
    }
    out.sort();
    out
}

/// Toggles a term in an F₂ sum.
fn toggle<K: Ord>(set: &mut BTreeSet<K>, k: K) {
    if !set.remove(&k) {
        set.insert(k);
    }
}

fn canonical(targets: &[OrbitSet]) -> Vec<OrbitSet> {
    let mut s = BTreeSet::new();
    for t in targets {
        toggle(&mut s, t.clone());
    }
    s.into_iter().collect()
}

/// Combinatorial model of ECC(N): interior orbits plus the boundary pair e, h, with
/// ∂_N Γ = ∂♭_N Γ + h ∂′_N Γ specified on e-free, h-free monomials.
#[derive(Clone, Debug)]
pub struct NModel {
    pub interior: Vec<SimpleOrbit>,
    pub e: SimpleOrbit,
    pub h: SimpleOrbit,
    /// Monomials with page count up to this bound form the domain of the differentials.
    pub j_bound: u32,
    d_flat: BTreeMap<OrbitSet, Vec<OrbitSet>>,
    d_prime: BTreeMap<OrbitSet, Vec<OrbitSet>>,
}

/// Default actions A(e') > A(h') > A(e) > A(h) > 0.
pub const DEFAULT_ACTIONS: [f64; 4] = [1.0, 0.9, 0.8, 0.7];

impl NModel {
    /// Validates every admissibility condition.
    pub fn new(
        interior: Vec<SimpleOrbit>,
        e: SimpleOrbit,
        h: SimpleOrbit,
        j_bound: u32,
        d_flat: BTreeMap<OrbitSet, Vec<OrbitSet>>,
        d_prime: BTreeMap<OrbitSet, Vec<OrbitSet>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        if e.name != "e" || h.name != "h" || e.is_hyperbolic() || !h.is_hyperbolic() {
            return bad("boundary orbits must be elliptic e and hyperbolic h".into());
        }
        if e.page_degree != 1 || h.page_degree != 1 || e.degree != 0 || h.degree != 1 {
            return bad("e and h need page degree 1 and degrees 0 and 1".into());
        }
        let mut names = BTreeSet::new();
        for o in &interior {
            if ["e", "h", "e'", "h'"].contains(&o.name.as_str()) || !names.insert(o.name.clone()) {
                return bad(format!("duplicate or reserved orbit name {}", o.name));
            }
            if o.page_degree < 1 || o.degree < 1 {
                return bad(format!("interior orbit {} needs page degree and degree ≥ 1", o.name));
            }
        }
        let clean = |m: BTreeMap<OrbitSet, Vec<OrbitSet>>| -> BTreeMap<OrbitSet, Vec<OrbitSet>> {
            m.into_iter()
                .map(|(k, v)| (k, canonical(&v)))
                .filter(|(_, v)| !v.is_empty())
                .collect()
        };
        let model = Self {
            interior,
            e,
            h,
            j_bound,
            d_flat: clean(d_flat),
            d_prime: clean(d_prime),
        };
        model.audit()?;
        Ok(model)
    }

    /// The model with no interior orbits.
    pub fn trivial() -> Self {
        let [_, _, ae, ah] = DEFAULT_ACTIONS;
        Self::new(
            Vec::new(),
            SimpleOrbit::e(ae).expect("valid"),
            SimpleOrbit::h(ah).expect("valid"),
            u32::MAX / 4,
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("trivial model is admissible")
    }

    pub fn d_flat(&self) -> &BTreeMap<OrbitSet, Vec<OrbitSet>> {
        &self.d_flat
    }

    pub fn d_prime(&self) -> &BTreeMap<OrbitSet, Vec<OrbitSet>> {
        &self.d_prime
    }

    pub fn lookup(&self, name: &str) -> Option<SimpleOrbit> {
        match name {
            "e" => Some(self.e.clone()),
            "h" => Some(self.h.clone()),
            _ => self.interior.iter().find(|o| o.name == name).cloned(),
        }
    }

    /// e-free, h-free monomials with page count ≤ j_max.
    pub fn interior_monomials(&self, j_max: u32) -> Vec<OrbitSet> {
        monomials(&self.interior, |o| i64::from(o.page_degree), i64::from(j_max))
    }

    /// e-free, h-free monomials of degree ≤ d_max.
    pub fn interior_monomials_by_degree(&self, d_max: i64) -> Vec<OrbitSet> {
        monomials(&self.interior, |o| o.degree, d_max)
    }

    fn is_interior(&self, g: &OrbitSet) -> bool {
        g.factors().all(|(o, _)| self.interior.contains(o))
    }

    fn audit(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        for (part, map, j_drop, deg_drop, extra) in [
            ("d_flat", &self.d_flat, 0, 1, 0.0),
            ("d_prime", &self.d_prime, 1, 2, self.h.action),
        ] {
            for (src, targets) in map {
                if src.is_empty() || !self.is_interior(src) {
                    return bad(format!("{part}: source {src} must be a nonempty interior monomial"));
                }
                if src.grade().j > i64::from(self.j_bound) {
                    return bad(format!("{part}: source {src} exceeds the page bound {}", self.j_bound));
                }
                for t in targets {
                    if t.multiplicity("h") > 0 || !t.without("e").factors().all(|(o, _)| self.interior.contains(o)) {
                        return bad(format!("{part}: target {t} must use interior orbits and e only"));
                    }
                    if t.grade().j != src.grade().j - j_drop {
                        return bad(format!("{part}: {src} → {t} breaks the page grading"));
                    }
                    if t.degree() != src.degree() - deg_drop {
                        return bad(format!("{part}: {src} → {t} must lower the degree by {deg_drop}"));
                    }
                    if t.action() + extra >= src.action() {
                        return bad(format!("{part}: {src} → {t} does not lower the action"));
                    }
                }
            }
        }
        for g in self.interior_monomials(self.j_bound) {
            let g = [g];
            let ff = self.apply_flat(&self.apply_flat(&g)?)?;
            if !ff.is_empty() {
                return bad(format!("(∂♭)² ≠ 0 on {}", g[0]));
            }
            let mut anti = self.apply_prime(&self.apply_flat(&g)?)?;
            anti.extend(self.apply_flat(&self.apply_prime(&g)?)?);
            if !canonical(&anti).is_empty() {
                return bad(format!("∂♭∂′ + ∂′∂♭ ≠ 0 on {}", g[0]));
            }
        }
        Ok(())
    }

    /// Splits Γ = e^a h^κ Γ₀.
    fn split(&self, g: &OrbitSet) -> (u32, u32, OrbitSet) {
        (g.multiplicity("e"), g.multiplicity("h"), g.without("e").without("h"))
    }

    fn rule<'a>(
        &self,
        map: &'a BTreeMap<OrbitSet, Vec<OrbitSet>>,
        g0: &OrbitSet,
    ) -> Result<&'a [OrbitSet]> {
        if g0.grade().j > i64::from(self.j_bound) {
            return Err(Error::InvalidModel(format!(
                "{g0} lies outside the model's page bound {}",
                self.j_bound
            )));
        }
        Ok(map.get(g0).map_or(&[], |v| v.as_slice()))
    }

    /// ∂♭_N extended e- and h-equivariantly.
    pub fn boundary_flat(&self, g: &OrbitSet) -> Result<Vec<OrbitSet>> {
        let (a, k, g0) = self.split(g);
        let prefix = power(&self.e, a).multiply(&power(&self.h, k)).expect("e^a h^k");
        Ok(self
            .rule(&self.d_flat, &g0)?
            .iter()
            .filter_map(|t| prefix.multiply(t))
            .collect())
    }

    /// ∂′_N extended e-equivariantly; zero on monomials containing h.
    pub fn boundary_prime(&self, g: &OrbitSet) -> Result<Vec<OrbitSet>> {
        let (a, k, g0) = self.split(g);
        if k > 0 {
            return Ok(Vec::new());
        }
        let prefix = power(&self.e, a);
        Ok(self
            .rule(&self.d_prime, &g0)?
            .iter()
            .filter_map(|t| prefix.multiply(t))
            .collect())
    }

    /// ∂_N Γ = ∂♭_N Γ + h ∂′_N Γ.
    pub fn boundary(&self, g: &OrbitSet) -> Result<Vec<OrbitSet>> {
        let mut out = self.boundary_flat(g)?;
        let h = OrbitSet::single(&self.h);
        out.extend(self.boundary_prime(g)?.iter().filter_map(|t| t.multiply(&h)));
        Ok(out)
    }

    fn apply_flat(&self, terms: &[OrbitSet]) -> Result<Vec<OrbitSet>> {
        let mut out = Vec::new();
        for t in terms {
            out.extend(self.boundary_flat(t)?);
        }
        Ok(canonical(&out))
    }

    fn apply_prime(&self, terms: &[OrbitSet]) -> Result<Vec<OrbitSet>> {
        let mut out = Vec::new();
        for t in terms {
            out.extend(self.boundary_prime(t)?);
        }
        Ok(canonical(&out))
    }

    /// Generators e^a h^κ Γ₀ of the given variant with page count in `j_range`.
    pub fn generators(&self, variant: Variant, j_lo: u32, j_hi: u32) -> Vec<OrbitSet> {
        let mut out = Vec::new();
        for g0 in self.interior_monomials(j_hi) {
            let j0 = g0.grade().j as u32;
            let kappas: &[u32] = match variant {
                Variant::Full | Variant::Sharp => &[0, 1],
                Variant::Flat => &[0],
            };
            for &k in kappas {
                let a_max = if variant == Variant::Sharp { 0 } else { j_hi.saturating_sub(j0 + k) };
                for a in 0..=a_max {
                    let j = j0 + k + a;
                    if j < j_lo || j > j_hi {
                        continue;
                    }
                    let g = power(&self.e, a)
                        .multiply(&power(&self.h, k))
                        .and_then(|p| p.multiply(&g0))
                        .expect("boundary orbits do not collide with interior ones");
                    out.push(g);
                }
            }
        }
        out.sort_by(|x, y| (x.degree(), x.grade().j, x).cmp(&(y.degree(), y.grade().j, y)));
        out
    }
}

/// Combinatorial model of ECC(V).
#[derive(Clone, Debug)]
pub enum VModel {
    /// Core orbit of a solid torus with rotation number r; no differential.
    PreLimit { r: Q, core: SimpleOrbit },
    /// F[e']⊗Λ[h'] with ∂h' = ∅ and ∂e' = 0.
    PostLimit { e_prime: SimpleOrbit, h_prime: SimpleOrbit },
    /// Interior orbits with ∂_V(h'γ) = h'∂♭γ + γ + Pγ.
    Toy {
        e_prime: SimpleOrbit,
        h_prime: SimpleOrbit,
        interior: Vec<SimpleOrbit>,
        j_bound: u32,
        d_flat: BTreeMap<OrbitSet, Vec<OrbitSet>>,
        d_prime: BTreeMap<OrbitSet, Vec<OrbitSet>>,
    },
}

impl VModel {
    pub fn post_limit() -> Self {
        let [aep, ahp, _, _] = DEFAULT_ACTIONS;
        VModel::PostLimit {
            e_prime: SimpleOrbit::e_prime(aep).expect("valid"),
            h_prime: SimpleOrbit::h_prime(ahp).expect("valid"),
        }
    }

    /// Solid torus with rotation `r`; the core orbit is named `c`.
    pub fn pre_limit(r: Q) -> Result<Self> {
        if r <= Q::from_integer(0.into()) {
            return Err(Error::InvalidModel("rotation must be positive".into()));
        }
        let core = SimpleOrbit::new("c", crate::orbitsets::OrbitKind::Elliptic, 1.0, 0)?;
        Ok(VModel::PreLimit { r, core })
    }

    /// Validated toy model; targets must avoid e' and h'.
    pub fn toy(
        interior: Vec<SimpleOrbit>,
        j_bound: u32,
        d_flat: BTreeMap<OrbitSet, Vec<OrbitSet>>,
        d_prime: BTreeMap<OrbitSet, Vec<OrbitSet>>,
    ) -> Result<Self> {
        let VModel::PostLimit { e_prime, h_prime } = Self::post_limit() else {
            unreachable!()
        };
        let clean = |m: BTreeMap<OrbitSet, Vec<OrbitSet>>| -> BTreeMap<OrbitSet, Vec<OrbitSet>> {
            m.into_iter()
                .map(|(k, v)| (k, canonical(&v)))
                .filter(|(_, v)| !v.is_empty())
                .collect()
        };
        let v = VModel::Toy {
            e_prime,
            h_prime,
            interior,
            j_bound,
            d_flat: clean(d_flat),
            d_prime: clean(d_prime),
        };
        v.audit_toy()?;
        Ok(v)
    }

    fn audit_toy(&self) -> Result<()> {
        let VModel::Toy { interior, j_bound, d_flat, d_prime, .. } = self else {
            return Ok(());
        };
        let bad = |m: String| Err(Error::InvalidModel(m));
        for o in interior {
            if ["e", "h", "e'", "h'"].contains(&o.name.as_str()) || o.page_degree < 1 || o.degree < 1 {
                return bad(format!("bad interior V orbit {}", o.name));
            }
        }
        let inside = |g: &OrbitSet| g.factors().all(|(o, _)| interior.contains(o));
        for (part, map, deg_drop) in [("d_flat_V", d_flat, 1), ("d_prime_V", d_prime, 0)] {
            for (src, targets) in map {
                if src.is_empty() || !inside(src) || src.grade().j > i64::from(*j_bound) {
                    return bad(format!("{part}: bad source {src}"));
                }
                for t in targets {
                    let ok = inside(t)
                        && t.grade().j <= src.grade().j
                        && t.degree() == src.degree() - deg_drop
                        && t.action() < src.action()
                        && t.grade().eta <= src.grade().eta;
                    if !ok {
                        return bad(format!("{part}: entry {src} → {t} is not admissible"));
                    }
                }
            }
        }
        for g in monomials(interior, |o| i64::from(o.page_degree), i64::from(*j_bound)) {
            let dd = self.apply(&self.boundary(&g)?)?;
            let hp = self.h_prime().expect("toy has h'");
            let hg = g.multiply(&OrbitSet::single(&hp)).expect("h' is new");
            let dd2 = self.apply(&self.boundary(&hg)?)?;
            if !dd.is_empty() || !dd2.is_empty() {
                return bad(format!("∂_V² ≠ 0 near {g}"));
            }
        }
        Ok(())
    }

    fn apply(&self, terms: &[OrbitSet]) -> Result<Vec<OrbitSet>> {
        let mut out = Vec::new();
        for t in terms {
            out.extend(self.boundary(t)?);
        }
        Ok(canonical(&out))
    }

    pub fn e_prime(&self) -> Option<SimpleOrbit> {
        match self {
            VModel::PostLimit { e_prime, .. } | VModel::Toy { e_prime, .. } => Some(e_prime.clone()),
            VModel::PreLimit { .. } => None,
        }
    }

    pub fn h_prime(&self) -> Option<SimpleOrbit> {
        match self {
            VModel::PostLimit { h_prime, .. } | VModel::Toy { h_prime, .. } => Some(h_prime.clone()),
            VModel::PreLimit { .. } => None,
        }
    }

    /// ∂_V on a monomial e'^m h'^λ γ₀.
    pub fn boundary(&self, g: &OrbitSet) -> Result<Vec<OrbitSet>> {
        let (e_prime, h_prime) = match self {
            VModel::PreLimit { .. } => return Ok(Vec::new()),
            VModel::PostLimit { e_prime, h_prime } | VModel::Toy { e_prime, h_prime, .. } => {
                (e_prime, h_prime)
            }
        };
        let m = g.multiplicity("e'");
        let lambda = g.multiplicity("h'");
        let g0 = g.without("e'").without("h'");
        let em = power(e_prime, m);
        let mut out = Vec::new();
        if let VModel::Toy { d_flat, d_prime, j_bound, .. } = self {
            if g0.grade().j > i64::from(*j_bound) {
                return Err(Error::InvalidModel(format!("{g0} outside the toy V page bound")));
            }
            let prefix = em.multiply(&power(h_prime, lambda)).expect("e'^m h'^λ");
            for t in d_flat.get(&g0).map_or(&[][..], |v| v.as_slice()) {
                out.extend(prefix.multiply(t));
            }
            if lambda == 1 {
                for t in d_prime.get(&g0).map_or(&[][..], |v| v.as_slice()) {
                    out.extend(em.multiply(t));
                }
            }
        }
        if lambda == 1 {
            out.extend(em.multiply(&g0));
        }
        Ok(out)
    }

    fn interior(&self) -> &[SimpleOrbit] {
        match self {
            VModel::Toy { interior, .. } => interior,
            _ => &[],
        }
    }

    /// Generators e'^m h'^λ γ₀ with m ≤ m_max for the given variant.
    pub fn generators(&self, variant: Variant, m_max: u32) -> Vec<OrbitSet> {
        let (Some(ep), Some(hp)) = (self.e_prime(), self.h_prime()) else {
            return Vec::new();
        };
        let j_bound = match self {
            VModel::Toy { j_bound, .. } => *j_bound,
            _ => 0,
        };
        let mut out = Vec::new();
        for g0 in monomials(self.interior(), |o| i64::from(o.page_degree), i64::from(j_bound)) {
            let lambdas: &[u32] = match variant {
                Variant::Flat => &[0],
                _ => &[0, 1],
            };
            let m_hi = if variant == Variant::Sharp { 0 } else { m_max };
            for &l in lambdas {
                for m in 0..=m_hi {
                    let g = power(&ep, m)
                        .multiply(&power(&hp, l))
                        .and_then(|p| p.multiply(&g0))
                        .expect("distinct orbits");
                    out.push(g);
                }
            }
        }
        out.sort_by(|x, y| (x.degree(), x).cmp(&(y.degree(), y)));
        out
    }
}

fn orbit_generator(g: &OrbitSet, degree: i64) -> Generator {
    let gr = g.grade();
    Generator {
        label: g.to_string(),
        degree,
        action: g.action(),
        grading: Grading {
            j: gr.j,
            eta: gr.eta,
            e: g.multiplicity("e"),
            h: g.multiplicity("h"),
            e_prime: g.multiplicity("e'"),
            h_prime: g.multiplicity("h'"),
        },
        copy: 0,
    }
}

/// Either side of the decomposition, for [`build_ecc_variant`].
#[derive(Clone, Copy, Debug)]
pub enum Piece<'a> {
    N(&'a NModel),
    V(&'a VModel),
}

/// ECC of N (page count ≤ j_max) or V (e'-power ≤ m_max) in the given variant.
///
/// Flat and sharp variants are quotients by the span of monomials containing the
/// excluded boundary orbit; both spans are subcomplexes.
pub fn build_ecc_variant(piece: Piece<'_>, variant: Variant, bounds: Bounds) -> Result<ModelComplex> {
    match piece {
        Piece::N(n) => {
            if bounds.j_max > n.j_bound {
                return Err(Error::InvalidModel(format!(
                    "j_max {} exceeds the model page bound {}",
                    bounds.j_max, n.j_bound
                )));
            }
            build_n_range(n, variant, 0, bounds.j_max, &format!("ECC_{variant}(N)"))
        }
        Piece::V(VModel::PreLimit { r, core }) => {
            let items: Vec<(OrbitSet, Generator)> = (0..=bounds.j_max)
                .map(|k| {
                    let g = power(core, k);
                    let degree = if k == 0 {
                        0
                    } else {
                        crate::indices::cz_core_cover(k, r).unwrap_or(i64::MIN)
                    };
                    let mut gen = orbit_generator(&g, degree);
                    gen.grading.eta = i64::from(k);
                    (g, gen)
                })
                .collect();
            if items.iter().any(|(_, g)| g.degree == i64::MIN) {
                return Err(Error::DegenerateOrbit(format!("some cover of rotation {r}")));
            }
            let (c, _) = assemble("ECC(V) pre-limit", items, |_| Ok(Vec::new()), Missing::Error)?;
            Ok(with_bounds(c, bounds))
        }
        Piece::V(v) => {
            let gens = v.generators(variant, bounds.m_max);
            let items = gens
                .into_iter()
                .map(|g| {
                    let d = g.degree();
                    (g.clone(), orbit_generator(&g, d))
                })
                .collect();
            let boundary = |g: &OrbitSet| -> Result<Vec<OrbitSet>> {
                let terms = v.boundary(g)?;
                Ok(match variant {
                    Variant::Full => terms,
                    Variant::Flat => terms.into_iter().filter(|t| t.multiplicity("h'") == 0).collect(),
                    Variant::Sharp => terms.into_iter().filter(|t| t.multiplicity("e'") == 0).collect(),
                })
            };
            let (c, _) = assemble(&format!("ECC_{variant}(V)"), items, boundary, Missing::Drop)?;
            c.audit_action()?;
            Ok(with_bounds(c, bounds))
        }
    }
}

fn with_bounds(mut c: ModelComplex, bounds: Bounds) -> ModelComplex {
    c.bounds = Some(bounds);
    c
}

fn n_boundary(n: &NModel, variant: Variant, g: &OrbitSet) -> Result<Vec<OrbitSet>> {
    Ok(match variant {
        Variant::Full => n.boundary(g)?,
        Variant::Flat => n.boundary_flat(g)?,
        Variant::Sharp => n
            .boundary(g)?
            .into_iter()
            .filter(|t| t.multiplicity("e") == 0)
            .collect(),
    })
}

fn build_n_range(n: &NModel, variant: Variant, j_lo: u32, j_hi: u32, tag: &str) -> Result<ModelComplex> {
    let items = n
        .generators(variant, j_lo, j_hi)
        .into_iter()
        .map(|g| {
            let d = g.degree();
            (g.clone(), orbit_generator(&g, d))
        })
        .collect();
    let (c, _) = assemble(tag, items, |g| n_boundary(n, variant, g), Missing::Error)?;
    c.audit_action()?;
    Ok(c)
}

/// ECC_j(N): monomials of the variant with page count exactly j.
pub fn build_ecc_j(n: &NModel, variant: Variant, j: u32) -> Result<ModelComplex> {
    if j > n.j_bound {
        return Err(Error::InvalidModel(format!("j = {j} exceeds the model page bound")));
    }
    build_n_range(n, variant, j, j, &format!("ECC_{variant},{j}(N)"))
}

/// A chain map between two complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub src: ModelComplex,
    pub dst: ModelComplex,
    /// dst.len() × src.len().
    pub matrix: F2Matrix,
}

impl ChainMap {
    /// Checks `∂_dst f = f ∂_src`.
    pub fn new(src: ModelComplex, dst: ModelComplex, matrix: F2Matrix) -> Result<Self> {
        let lhs = dst.differential().mul(&matrix)?;
        let rhs = matrix.mul(src.differential())?;
        if lhs != rhs {
            return Err(Error::NotChainMap(format!("{} → {}", src.tag, dst.tag)));
        }
        Ok(Self { src, dst, matrix })
    }

    /// Rank of the induced map on homology in each source degree.
    pub fn induced_ranks(&self) -> Result<BTreeMap<i64, usize>> {
        let all = |_: usize| true;
        let mut out = BTreeMap::new();
        let src_blocks = self.src.degree_blocks();
        let dst_blocks = self.dst.degree_blocks();
        for (&d, src_mid) in &src_blocks {
            let Some(dst_mid) = dst_blocks.get(&d) else {
                out.insert(d, 0);
                continue;
            };
            let m = self.matrix.select(dst_mid, src_mid);
            let r = induced_map_dims(&m, &self.src.two_step(d, &all), &self.dst.two_step(d, &all))?;
            out.insert(d, r);
        }
        Ok(out)
    }
}

/// Multiplication by e: ECC_j → ECC_{j+1}.
pub fn stabilization_map(n: &NModel, variant: Variant, j: u32) -> Result<ChainMap> {
    if variant == Variant::Sharp {
        return Err(Error::InvalidInput("the sharp variant has no e to multiply by".into()));
    }
    let src = build_ecc_j(n, variant, j)?;
    let dst = build_ecc_j(n, variant, j + 1)?;
    let e = OrbitSet::single(&n.e);
    let mut cols = Vec::with_capacity(src.len());
    for g in src.generators() {
        let g = OrbitSet::parse(&g.label, |s| n.lookup(s))?;
        let eg = g.multiply(&e).expect("e is elliptic").to_string();
        let i = dst
            .index_of(&eg)
            .ok_or_else(|| Error::InvalidModel(format!("{eg} missing from ECC_{}", j + 1)))?;
        cols.push(F2Vector::unit(i));
    }
    let m = F2Matrix::from_columns(dst.len(), cols)?;
    ChainMap::new(src, dst, m)
}

/// Homology of each ECC_j, stabilization ranks, and two computations of the limit.
#[derive(Clone, Debug, PartialEq)]
pub struct RelBoundary {
    pub variant: Variant,
    pub j_max: u32,
    pub guard: u32,
    /// dim ECH_j in degree d, keyed (j, d).
    pub dims: BTreeMap<(u32, i64), usize>,
    /// Rank of ECH_j → ECH_{j+1} in degree d, keyed (j, d).
    pub map_ranks: BTreeMap<(u32, i64), usize>,
    /// Degrees where the induced maps are isomorphisms for the last three stages.
    pub stabilized: BTreeSet<i64>,
    /// Degrees whose generators all fit inside the guarded page window.
    pub certified: BTreeSet<i64>,
    /// Limit dimension via the direct limit, on stabilized degrees.
    pub limit: BTreeMap<i64, usize>,
    /// Homology of the quotient by span{eΓ − Γ}, on certified degrees.
    pub quotient: BTreeMap<i64, usize>,
}

impl RelBoundary {
    /// Degrees where both computations are trustworthy.
    pub fn stable_degrees(&self) -> BTreeSet<i64> {
        self.stabilized.intersection(&self.certified).copied().collect()
    }

    /// True when the two computations agree on every stable degree.
    pub fn agree(&self) -> bool {
        self.stable_degrees()
            .iter()
            .all(|d| self.limit.get(d) == self.quotient.get(d))
    }
}

/// Relative ECH of (N, ∂N) in the flat or full variant, by direct limit and by quotient.
pub fn ech_rel_boundary(n: &NModel, variant: Variant, j_max: u32, guard: u32) -> Result<RelBoundary> {
    if j_max < 3 {
        return Err(Error::InvalidInput("j_max must be at least 3".into()));
    }
    if variant == Variant::Sharp {
        return Err(Error::InvalidInput("relative ECH uses the flat or full variant".into()));
    }
    if j_max > n.j_bound {
        return Err(Error::InvalidModel("j_max exceeds the model page bound".into()));
    }
    let mut dims = BTreeMap::new();
    let mut map_ranks = BTreeMap::new();
    for j in 0..=j_max {
        let c = build_ecc_j(n, variant, j)?;
        for (d, h) in c.homology_by_degree() {
            dims.insert((j, d), h);
        }
        if j < j_max {
            for (d, r) in stabilization_map(n, variant, j)?.induced_ranks()? {
                map_ranks.insert((j, d), r);
            }
        }
    }
    let degrees: BTreeSet<i64> = dims.keys().map(|&(_, d)| d).collect();
    let dim = |j: u32, d: i64| dims.get(&(j, d)).copied().unwrap_or(0);
    let rank = |j: u32, d: i64| map_ranks.get(&(j, d)).copied().unwrap_or(0);
    let mut stabilized = BTreeSet::new();
    let mut limit = BTreeMap::new();
    for &d in &degrees {
        let iso = (j_max - 2..j_max).all(|j| dim(j, d) == dim(j + 1, d) && rank(j, d) == dim(j, d));
        if iso {
            stabilized.insert(d);
            limit.insert(d, dim(j_max, d));
        }
    }
    let h_extra = i64::from(variant == Variant::Full);
    let window = i64::from(j_max.saturating_sub(guard));
    let mut certified = BTreeSet::new();
    for &d in &degrees {
        let worst = n
            .interior_monomials_by_degree(d + 1)
            .iter()
            .map(|g| g.grade().j + h_extra)
            .max()
            .unwrap_or(0);
        if worst <= window {
            certified.insert(d);
        }
    }
    let q = quotient_complex(n, variant, j_max)?;
    let qh = q.homology_by_degree();
    let quotient = certified
        .iter()
        .map(|&d| (d, qh.get(&d).copied().unwrap_or(0)))
        .collect();
    Ok(RelBoundary {
        variant,
        j_max,
        guard,
        dims,
        map_ranks,
        stabilized,
        certified,
        limit,
        quotient,
    })
}

/// ECC(N)/span{eΓ − Γ}: e-free generators, differential with every e set to 1.
pub fn quotient_complex(n: &NModel, variant: Variant, j_max: u32) -> Result<ModelComplex> {
    let gens: Vec<OrbitSet> = n
        .generators(variant, 0, j_max)
        .into_iter()
        .filter(|g| g.multiplicity("e") == 0)
        .collect();
    let items = gens
        .into_iter()
        .map(|g| {
            let d = g.degree();
            (g.clone(), orbit_generator(&g, d))
        })
        .collect();
    let boundary = |g: &OrbitSet| -> Result<Vec<OrbitSet>> {
        Ok(n_boundary(n, variant, g)?
            .into_iter()
            .map(|t| t.without("e"))
            .collect())
    };
    let (c, _) = assemble(&format!("ECC_{variant}(N)/(e-1)"), items, boundary, Missing::Error)?;
    Ok(c)
}

/// The tensor complex ECC(V)⊗ECC(N) with ∂₀, truncated to a subcomplex.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub complex: ModelComplex,
    /// (γ, Γ) for each generator.
    pub keys: Vec<(OrbitSet, OrbitSet)>,
    pub v: VModel,
    pub n: NModel,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair(OrbitSet, OrbitSet);

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.0, self.1)
    }
}

/// Page count of γ⊗Γ: e', h' and e, h each meet the page once.
pub fn total_page_count(gamma: &OrbitSet, big_gamma: &OrbitSet) -> i64 {
    gamma.grade().j + big_gamma.grade().j
}

/// ∂₀(γ⊗Γ) = ∂_Vγ⊗Γ + (γ/e')⊗hΓ + (γ/h')⊗eΓ + γ⊗∂_NΓ.
pub fn d0_terms(v: &VModel, n: &NModel, gamma: &OrbitSet, big: &OrbitSet) -> Result<Vec<(OrbitSet, OrbitSet)>> {
    let ep = OrbitSet::single(&v.e_prime().ok_or_else(|| {
        Error::InvalidModel("the total complex needs a post-limit or toy V model".into())
    })?);
    let hp = OrbitSet::single(&v.h_prime().expect("post-limit or toy"));
    let e = OrbitSet::single(&n.e);
    let h = OrbitSet::single(&n.h);
    let mut out = Vec::new();
    for t in v.boundary(gamma)? {
        out.push((t, big.clone()));
    }
    if let (Some(q), Some(hg)) = (gamma.divide(&ep), big.multiply(&h)) {
        out.push((q, hg));
    }
    if let (Some(q), Some(eg)) = (gamma.divide(&hp), big.multiply(&e)) {
        out.push((q, eg));
    }
    for t in n.boundary(big)? {
        out.push((gamma.clone(), t));
    }
    Ok(out)
}

/// Generators γ⊗Γ with e'-multiplicity ≤ m_max and total page count ≤ j_max.
///
/// ∂₀ never raises the total page count or the e'-multiplicity, so both cuts are
/// subcomplexes and the construction checks closure.
pub fn build_total_complex(v: &VModel, n: &NModel, bounds: Bounds) -> Result<TotalComplex> {
    if matches!(v, VModel::PreLimit { .. }) {
        return Err(Error::InvalidModel("the total complex needs a post-limit or toy V model".into()));
    }
    if bounds.j_max > n.j_bound {
        return Err(Error::InvalidModel("j_max exceeds the N model page bound".into()));
    }
    let k = i64::from(bounds.j_max);
    let vgens = v.generators(Variant::Full, bounds.m_max);
    let ngens = n.generators(Variant::Full, 0, bounds.j_max);
    let mut items = Vec::new();
    for gamma in &vgens {
        for big in &ngens {
            if total_page_count(gamma, big) > k {
                continue;
            }
            let mut g = orbit_generator(&gamma.multiply(big).expect("disjoint orbit names"), gamma.degree() + big.degree());
            g.label = format!("{gamma}⊗{big}");
            g.grading.j = big.grade().j;
            g.grading.eta = gamma.grade().eta;
            g.grading.e = big.multiplicity("e");
            g.grading.h = big.multiplicity("h");
            items.push((Pair(gamma.clone(), big.clone()), g));
        }
    }
    items.sort_by(|a, b| (a.1.degree, &a.0).cmp(&(b.1.degree, &b.0)));
    let boundary = |p: &Pair| -> Result<Vec<Pair>> {
        Ok(d0_terms(v, n, &p.0, &p.1)?
            .into_iter()
            .map(|(a, b)| Pair(a, b))
            .collect())
    };
    let (mut c, keys) = assemble("ECC(V)⊗ECC(N)", items, boundary, Missing::Error)?;
    c.audit_action()?;
    for (r, col) in c.differential().entries() {
        let (src, dst) = (&c.generators()[col].grading, &c.generators()[r].grading);
        if dst.j < src.j || dst.e_prime > src.e_prime || dst.eta > src.eta {
            return Err(Error::InvalidModel(format!(
                "∂₀ entry {} → {} breaks a monotonicity",
                c.generators()[col].label,
                c.generators()[r].label
            )));
        }
    }
    c.bounds = Some(bounds);
    Ok(TotalComplex {
        complex: c,
        keys: keys.into_iter().map(|p| (p.0, p.1)).collect(),
        v: v.clone(),
        n: n.clone(),
        bounds,
    })
}

impl TotalComplex {
    pub fn index_of(&self, gamma: &OrbitSet, big: &OrbitSet) -> Option<usize> {
        self.keys.iter().position(|(a, b)| a == gamma && b == big)
    }

    fn key_index(&self) -> BTreeMap<(OrbitSet, OrbitSet), usize> {
        self.keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()
    }

    /// Matrix of a rule on keys; terms outside the truncation are errors.
    pub fn matrix_of(
        &self,
        rule: impl Fn(&OrbitSet, &OrbitSet) -> Result<Vec<(OrbitSet, OrbitSet)>>,
    ) -> Result<F2Matrix> {
        let index = self.key_index();
        let mut cols = Vec::with_capacity(self.keys.len());
        for (a, b) in &self.keys {
            let mut rows = Vec::new();
            for t in rule(a, b)? {
                let i = index.get(&t).ok_or_else(|| {
                    Error::InvalidModel(format!("{}⊗{} leaves the truncation", t.0, t.1))
                })?;
                rows.push(*i);
            }
            cols.push(F2Vector::from_indices(rows));
        }
        F2Matrix::from_columns(self.keys.len(), cols)
    }

    /// Vector of a list of keys.
    pub fn vector_of(&self, terms: &[(OrbitSet, OrbitSet)]) -> Result<F2Vector> {
        let index = self.key_index();
        let mut rows = Vec::new();
        for t in terms {
            rows.push(*index.get(t).ok_or_else(|| {
                Error::InvalidModel(format!("{}⊗{} lies outside the truncation", t.0, t.1))
            })?);
        }
        Ok(F2Vector::from_indices(rows))
    }
}

/// U₀(γ⊗Γ) = (γ/e')⊗eΓ, checked to commute with ∂₀.
pub fn build_u0(c: &TotalComplex) -> Result<F2Matrix> {
    let ep = OrbitSet::single(&c.v.e_prime().expect("total complex has e'"));
    let e = OrbitSet::single(&c.n.e);
    let u = c.matrix_of(|a, b| {
        Ok(match (a.divide(&ep), b.multiply(&e)) {
            (Some(q), Some(eb)) => vec![(q, eb)],
            _ => Vec::new(),
        })
    })?;
    c.complex.check_chain_map(&u, "U₀")?;
    Ok(u)
}

/// Cone of a chain map `u` of degree `u_degree` on `c`, differential [[∂, 0], [u, ∂]].
///
/// The second copy is shifted so that the cone differential lowers degree by one.
pub fn mapping_cone(u: &F2Matrix, u_degree: i64, c: &ModelComplex) -> Result<ModelComplex> {
    c.check_chain_map(u, "cone map")?;
    for (r, col) in u.entries() {
        if c.generators()[r].degree != c.generators()[col].degree + u_degree {
            return Err(Error::NotChainMap(format!(
                "map is not homogeneous of degree {u_degree}"
            )));
        }
    }
    let n = c.len();
    let shift = -1 - u_degree;
    let mut gens = Vec::with_capacity(2 * n);
    for g in c.generators() {
        let mut g0 = g.clone();
        g0.label = format!("({},0)", g.label);
        g0.copy = 0;
        gens.push(g0);
    }
    for g in c.generators() {
        let mut g1 = g.clone();
        g1.label = format!("(0,{})", g.label);
        g1.degree += shift;
        g1.copy = 1;
        gens.push(g1);
    }
    let mut cols = Vec::with_capacity(2 * n);
    for i in 0..n {
        let top = c.boundary_of(i).clone();
        let bottom = u.column(i).reindex(|r| Some(r + n));
        cols.push(&top + &bottom);
    }
    for i in 0..n {
        cols.push(c.boundary_of(i).reindex(|r| Some(r + n)));
    }
    let d = F2Matrix::from_columns(2 * n, cols)?;
    let mut cone = ModelComplex::new(&format!("Cone({})", c.tag), gens, d)?;
    cone.bounds = c.bounds;
    Ok(cone)
}

/// Subcomplex of generators with action ≤ L.
pub fn action_truncate(c: &ModelComplex, l: f64) -> Result<ModelComplex> {
    c.subcomplex(&format!("{}^(≤{l})", c.tag), |g| g.action <= l)
}

/// Per-grade limit of a finite telescope `V₀ → V₁ → … → V_N`.
///
/// Returns the image of stage N−1 in stage N, which is the colimit once the telescope
/// has stabilized; a single stage is returned unchanged.
pub fn direct_limit<G: Ord + Clone>(
    stages: &[BTreeMap<G, usize>],
    maps: &[BTreeMap<G, usize>],
) -> Result<BTreeMap<G, usize>> {
    if stages.is_empty() {
        return Ok(BTreeMap::new());
    }
    if maps.len() + 1 != stages.len() {
        return Err(Error::InvalidInput(format!(
            "{} stages need {} maps, got {}",
            stages.len(),
            stages.len() - 1,
            maps.len()
        )));
    }
    let last = stages.len() - 1;
    if last == 0 {
        return Ok(stages[0].clone());
    }
    let grades: BTreeSet<G> = stages.iter().flat_map(|s| s.keys().cloned()).collect();
    let mut out = BTreeMap::new();
    for g in grades {
        for (i, m) in maps.iter().enumerate() {
            let r = m.get(&g).copied().unwrap_or(0);
            let bound = stages[i].get(&g).copied().unwrap_or(0).min(stages[i + 1].get(&g).copied().unwrap_or(0));
            if r > bound {
                return Err(Error::InvalidInput("map rank exceeds a stage dimension".into()));
            }
        }
        out.insert(g.clone(), maps[last - 1].get(&g).copied().unwrap_or(0));
    }
    Ok(out)
}
