//! Rotationally symmetric contact forms `g dθ + f dt` on a torus shell and
//! `g dθ + f/(2π) dφ` on a solid torus, described by piecewise polynomial
//! trajectories (f, g) with rational coefficients.
//!
//! Contact conditions, Reeb slopes and C¹ matching are exact. Only the root
//! finding inside [`scan_morse_bott`] uses floating point.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use num::bigint::BigInt;
use num::{Integer, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{convergents, frac, q, to_f64, Q};

/// A polynomial in a local coordinate, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with the given constant term.
    pub fn integral(&self, c0: Q) -> Poly {
        let mut out = vec![c0];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / q(i as i64 + 1)),
        );
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&q(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `p(s + m t)`.
    pub fn compose_affine(&self, s: &Q, m: &Q) -> Poly {
        let lin = Poly::new(vec![s.clone(), m.clone()]);
        let mut out = Poly::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(&lin).add(&Poly::constant(c.clone()));
        }
        out
    }
}

/// Whether the trajectory lives on `T²×[a,b]` (coordinate y) or on `S¹×D²` (coordinate ρ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    TorusShell,
    SolidTorus,
}

/// One polynomial piece on `[start, end]`; `f` and `g` use the local coordinate `x − start`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub start: Q,
    pub end: Q,
    pub f: Poly,
    pub g: Poly,
}

impl Piece {
    fn len(&self) -> Q {
        &self.end - &self.start
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReebProfile {
    side: Side,
    pieces: Vec<Piece>,
    fast: Vec<FastPiece>,
}

/// Floating-point copies of a piece's coefficients for f, g, f′, g′.
#[derive(Clone, Debug, PartialEq)]
struct FastPiece {
    start: f64,
    end: f64,
    coeffs: [Vec<f64>; 4],
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

/// Values of f, g, f′, g′ at one parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub f: Q,
    pub g: Q,
    pub df: Q,
    pub dg: Q,
}

impl ReebProfile {
    /// Validates contiguity, exact C¹ matching and, on a solid torus, smoothness at ρ = 0.
    pub fn new(side: Side, pieces: Vec<Piece>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if pieces.is_empty() {
            return bad("a profile needs at least one piece".into());
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.end <= p.start {
                return bad(format!("piece {i} has empty range [{}, {}]", p.start, p.end));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if a.end != b.start {
                return bad(format!("pieces {i} and {} are not contiguous", i + 1));
            }
            let t = a.len();
            let zero = Q::zero();
            let matches = a.f.eval(&t) == b.f.eval(&zero)
                && a.g.eval(&t) == b.g.eval(&zero)
                && a.f.derivative().eval(&t) == b.f.derivative().eval(&zero)
                && a.g.derivative().eval(&t) == b.g.derivative().eval(&zero);
            if !matches {
                return bad(format!("pieces {i} and {} are not C¹ at {}", i + 1, a.end));
            }
        }
        if side == Side::SolidTorus {
            let first = &pieces[0];
            if !first.start.is_zero() {
                return bad("a solid-torus profile starts at ρ = 0".into());
            }
            if !first.f.coeff(0).is_zero() {
                return bad("f(0) must vanish on a solid torus".into());
            }
            for poly in [&first.f, &first.g] {
                if poly.coeffs().iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
                    return bad("odd-order derivatives at ρ = 0 must vanish".into());
                }
            }
        }
        let fast = pieces
            .iter()
            .map(|p| {
                let conv = |poly: &Poly| poly.coeffs().iter().map(to_f64).collect::<Vec<f64>>();
                FastPiece {
                    start: to_f64(&p.start),
                    end: to_f64(&p.end),
                    coeffs: [
                        conv(&p.f),
                        conv(&p.g),
                        conv(&p.f.derivative()),
                        conv(&p.g.derivative()),
                    ],
                }
            })
            .collect();
        Ok(Self { side, pieces, fast })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> Q {
        self.pieces[0].start.clone()
    }

    pub fn end(&self) -> Q {
        self.pieces.last().expect("nonempty").end.clone()
    }

    /// Piece breakpoints including both ends.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self.pieces.iter().map(|p| p.start.clone()).collect();
        out.push(self.end());
        out
    }

    fn locate(&self, x: &Q) -> Result<(&Piece, Q)> {
        if *x < self.start() || *x > self.end() {
            return Err(Error::InvalidInput(format!("{x} lies outside the profile range")));
        }
        let p = self
            .pieces
            .iter()
            .find(|p| *x <= p.end)
            .expect("x is in range");
        Ok((p, x - &p.start))
    }

    pub fn jet(&self, x: &Q) -> Result<Jet> {
        let (p, t) = self.locate(x)?;
        Ok(Jet {
            f: p.f.eval(&t),
            g: p.g.eval(&t),
            df: p.f.derivative().eval(&t),
            dg: p.g.derivative().eval(&t),
        })
    }

    /// (f, g, f′, g′) in floating point.
    pub fn jet_f64(&self, x: f64) -> [f64; 4] {
        let p = self
            .fast
            .iter()
            .find(|p| x <= p.end)
            .unwrap_or_else(|| self.fast.last().expect("nonempty"));
        let t = x - p.start;
        [
            horner(&p.coeffs[0], t),
            horner(&p.coeffs[1], t),
            horner(&p.coeffs[2], t),
            horner(&p.coeffs[3], t),
        ]
    }

    /// The side-appropriate contact expression: fg′−f′g on a shell, f′g−fg′ on a solid torus.
    pub fn contact_expression(&self, x: &Q) -> Result<Q> {
        let j = self.jet(x)?;
        Ok(contact_of(self.side, &j.f, &j.g, &j.df, &j.dg))
    }

    /// Reeb direction (θ, t components, up to a positive factor).
    pub fn reeb_direction(&self, x: &Q) -> Result<(Q, Q)> {
        let j = self.jet(x)?;
        Ok(direction_of(self.side, j.df, j.dg))
    }

    /// The same trajectory as a torus-shell profile in y = c − ρ.
    pub fn mirror(&self, c: &Q) -> Result<ReebProfile> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.iter().rev() {
            let len = p.len();
            pieces.push(Piece {
                start: c - &p.end,
                end: c - &p.start,
                f: p.f.compose_affine(&len, &q(-1)),
                g: p.g.compose_affine(&len, &q(-1)),
            });
        }
        ReebProfile::new(Side::TorusShell, pieces)
    }
}

fn contact_of(side: Side, f: &Q, g: &Q, df: &Q, dg: &Q) -> Q {
    let e = f * dg - df * g;
    match side {
        Side::TorusShell => e,
        Side::SolidTorus => -e,
    }
}

fn direction_of(side: Side, df: Q, dg: Q) -> (Q, Q) {
    match side {
        Side::TorusShell => (-df, dg),
        Side::SolidTorus => (df, -dg),
    }
}

/// Extended rational slope in the (θ, t) basis; the meridian is ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Finite(Q),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

/// −g′(x)/f′(x), exactly.
pub fn reeb_slope(p: &ReebProfile, x: &Q) -> Result<Slope> {
    let j = p.jet(x)?;
    if j.df.is_zero() {
        if j.dg.is_zero() {
            return Err(Error::DegenerateDirection(format!("f′ = g′ = 0 at {x}")));
        }
        return Ok(Slope::Infinite);
    }
    Ok(Slope::Finite(-(j.dg / j.df)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContactReport {
    pub ok: bool,
    /// Minimum of the contact expression over the sampled parameters.
    pub margin: f64,
    /// Sign of lim E/ρ at the axis; `None` on a torus shell.
    pub axis_ok: Option<bool>,
}

/// Grid size used by [`check_contact`].
pub const CONTACT_GRID: i64 = 1000;

/// Evaluates the contact expression exactly on a uniform grid plus all breakpoints.
pub fn check_contact(p: &ReebProfile) -> ContactReport {
    let (a, b) = (p.start(), p.end());
    let mut points: Vec<Q> = (0..=CONTACT_GRID)
        .map(|k| &a + (&b - &a) * frac(k, CONTACT_GRID))
        .collect();
    points.extend(p.breakpoints());
    let axis = p.side == Side::SolidTorus;
    let mut margin: Option<Q> = None;
    for x in &points {
        if axis && x.is_zero() {
            continue;
        }
        let e = p.contact_expression(x).expect("grid lies in range");
        if margin.as_ref().map_or(true, |m| e < *m) {
            margin = Some(e);
        }
    }
    let margin = margin.unwrap_or_else(Q::zero);
    let axis_ok = axis.then(|| {
        let first = &p.pieces[0];
        let (f, g) = (&first.f, &first.g);
        let e = f.derivative().mul(g).sub(&f.mul(&g.derivative()));
        e.coeff(0).is_zero() && e.coeff(1).is_positive()
    });
    ContactReport {
        ok: margin.is_positive() && axis_ok != Some(false),
        margin: to_f64(&margin),
        axis_ok,
    }
}

/// A torus foliated by closed Reeb orbits of one rational slope.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseBottRecord {
    pub parameter: f64,
    pub slope: Slope,
    /// Action a·g + b·f of the simple orbit.
    pub action: f64,
    /// Primitive integer vector (a, b) along the Reeb flow, slope b/a.
    pub direction: (i64, i64),
}

impl MorseBottRecord {
    /// Slope written as p/q with q ≥ 0; ∞ is 1/0.
    pub fn slope_pq(&self) -> (i64, i64) {
        let (a, b) = self.direction;
        if a == 0 {
            (1, 0)
        } else if a > 0 {
            (b, a)
        } else {
            (-b, -a)
        }
    }
}

fn slope_from(a: i64, b: i64) -> Slope {
    if a == 0 {
        Slope::Infinite
    } else {
        Slope::Finite(frac(b, a))
    }
}

/// Samples per piece used by [`scan_morse_bott`].
pub const SCAN_SAMPLES: usize = 4096;
/// Cap on the candidate count; the t-component bound is clipped to stay below it.
pub const MAX_CANDIDATES: f64 = 4e6;
/// Parameter tolerance of the root refinement.
pub const SCAN_TOL: f64 = 1e-12;

struct Sample {
    x: f64,
    /// Raw angle of the Reeb direction.
    raw: f64,
    /// Unwrapped angle.
    angle: f64,
    w: (f64, f64),
    piece: usize,
    /// |E| / |(f′, g′)|, the action of a unit-norm orbit direction.
    dist: f64,
}

fn primitive(x: &Q, y: &Q) -> Option<(i64, i64)> {
    let l = x.denom().lcm(y.denom());
    let a: BigInt = x.numer() * (&l / x.denom());
    let b: BigInt = y.numer() * (&l / y.denom());
    let g = a.gcd(&b);
    if g.is_zero() {
        return None;
    }
    Some(((&a / &g).to_i64()?, (&b / &g).to_i64()?))
}

/// All Morse–Bott tori with slope denominator ≤ `q_max` and simple-orbit action ≤ `l`.
///
/// Candidate primitive vectors are bounded using action = |(a,b)|·|E|/|(f′,g′)|. Roots of
/// the cross product between the Reeb direction and each candidate are refined by
/// bisection. A piece of constant rational direction yields one record at its midpoint.
pub fn scan_morse_bott(p: &ReebProfile, l: f64, q_max: u32) -> Vec<MorseBottRecord> {
    let side = p.side;
    let mut samples: Vec<Sample> = Vec::new();
    let mut constant: Vec<Option<(i64, i64)>> = Vec::new();
    let n = (SCAN_SAMPLES / p.pieces.len()).max(64);
    for (pi, piece) in p.pieces.iter().enumerate() {
        let (df, dg) = (piece.f.derivative(), piece.g.derivative());
        let mid = piece.len() / q(2);
        let (mf, mg) = (df.eval(&mid), dg.eval(&mid));
        let cross = df.scale(&mg).sub(&dg.scale(&mf));
        constant.push(if cross.is_zero() && !(mf.is_zero() && mg.is_zero()) {
            let (w1, w2) = direction_of(side, mf, mg);
            primitive(&w1, &w2)
        } else {
            None
        });
        let len = piece.len();
        let first = if pi == 0 { 0 } else { 1 };
        for k in first..=n {
            let t = &len * frac(k as i64, n as i64);
            let (d1, d2) = if side == Side::SolidTorus && pi == 0 && k == 0 {
                (df.derivative().eval(&t), dg.derivative().eval(&t))
            } else {
                (df.eval(&t), dg.eval(&t))
            };
            let (w1, w2) = direction_of(side, d1, d2);
            let w = (to_f64(&w1), to_f64(&w2));
            samples.push(Sample {
                x: to_f64(&(&piece.start + &t)),
                raw: w.1.atan2(w.0),
                angle: 0.0,
                w,
                piece: pi,
                dist: 0.0,
            });
        }
    }
    let tau = std::f64::consts::TAU;
    let mut prev: Option<f64> = None;
    for s in samples.iter_mut() {
        s.angle = match prev {
            None => s.raw,
            Some(pa) => {
                let k = ((pa - s.raw) / tau).round();
                s.raw + k * tau
            }
        };
        prev = Some(s.angle);
    }

    let mut k_min = f64::INFINITY;
    for s in samples.iter_mut() {
        let [f, g, df, dg] = p.jet_f64(s.x);
        let norm = df.hypot(dg);
        if norm > 0.0 && !(side == Side::SolidTorus && s.x == 0.0) {
            let e = match side {
                Side::TorusShell => f * dg - df * g,
                Side::SolidTorus => df * g - f * dg,
            };
            s.dist = e.abs() / norm;
            k_min = k_min.min(s.dist);
        }
    }
    if !(k_min.is_finite() && k_min > 0.0) {
        return Vec::new();
    }
    let bound = l / (0.5 * k_min);
    let qm = i64::from(q_max);
    let b_max = bound.floor().min(MAX_CANDIDATES / (2 * qm + 1) as f64) as i64;
    let mut cands: Vec<(f64, i64, i64, f64)> = Vec::new();
    for a in -qm..=qm {
        for b in -b_max..=b_max {
            if (a, b) == (0, 0) || a.gcd(&b) != 1 {
                continue;
            }
            let norm = ((a * a + b * b) as f64).sqrt();
            if norm > bound {
                continue;
            }
            cands.push(((b as f64).atan2(a as f64), a, b, norm));
        }
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut out: Vec<MorseBottRecord> = Vec::new();
    let push = |x: f64, a: i64, b: i64, out: &mut Vec<MorseBottRecord>| {
        let [f, g, df, dg] = p.jet_f64(x);
        let (w1, w2) = match side {
            Side::TorusShell => (-df, dg),
            Side::SolidTorus => (df, -dg),
        };
        if w1 * a as f64 + w2 * b as f64 <= 0.0 {
            return;
        }
        let action = a as f64 * g + b as f64 * f;
        if action > 0.0 && action <= l {
            out.push(MorseBottRecord {
                parameter: x,
                slope: slope_from(a, b),
                action,
                direction: (a, b),
            });
        }
    };

    for (pi, dir) in constant.iter().enumerate() {
        if let Some((a, b)) = *dir {
            if a.abs() <= qm {
                let piece = &p.pieces[pi];
                push(to_f64(&((&piece.start + &piece.end) / q(2))), a, b, &mut out);
            }
        }
    }

    let in_range = |lo: f64, hi: f64, closed: bool, max_norm: f64| -> Vec<(i64, i64)> {
        let mut hits = Vec::new();
        let k_lo = ((lo - std::f64::consts::PI) / tau).floor() as i64;
        let k_hi = ((hi + std::f64::consts::PI) / tau).ceil() as i64;
        for k in k_lo..=k_hi {
            let shift = k as f64 * tau;
            let (l0, h0) = (lo - shift, hi - shift);
            let start = cands.partition_point(|c| c.0 < l0);
            for c in &cands[start..] {
                if c.0 > h0 {
                    break;
                }
                let strict = c.0 > l0 && c.0 < h0;
                if (strict || closed) && c.3 <= max_norm {
                    hits.push((c.1, c.2));
                }
            }
        }
        hits
    };

    for (i, s) in samples.iter().enumerate() {
        let axis = side == Side::SolidTorus && i == 0;
        if axis || constant[s.piece].is_some() {
            continue;
        }
        for (a, b) in in_range(s.raw, s.raw, true, f64::INFINITY) {
            push(s.x, a, b, &mut out);
        }
    }
    for w in samples.windows(2) {
        let (s0, s1) = (&w[0], &w[1]);
        if constant[s1.piece].is_some() {
            continue;
        }
        let (lo, hi) = if s0.angle <= s1.angle {
            (s0.angle, s1.angle)
        } else {
            (s1.angle, s0.angle)
        };
        if hi - lo >= std::f64::consts::PI {
            continue;
        }
        let near = s0.dist.min(s1.dist);
        let max_norm = if near > 0.0 { l / (0.5 * near) } else { f64::INFINITY };
        for (a, b) in in_range(lo, hi, false, max_norm) {
            let cross = |w: (f64, f64)| w.0 * b as f64 - w.1 * a as f64;
            let at = |x: f64| {
                let [_, _, df, dg] = p.jet_f64(x);
                match side {
                    Side::TorusShell => cross((-df, dg)),
                    Side::SolidTorus => cross((df, -dg)),
                }
            };
            let (mut lx, mut hx) = (s0.x, s1.x);
            let (c0, c1) = (cross(s0.w), cross(s1.w));
            if c0 == 0.0 || c1 == 0.0 || c0.signum() == c1.signum() {
                let x = if c0.abs() <= c1.abs() { lx } else { hx };
                push(x, a, b, &mut out);
                continue;
            }
            let mut clo = c0;
            for _ in 0..200 {
                if hx - lx <= SCAN_TOL {
                    break;
                }
                let mid = 0.5 * (lx + hx);
                let cm = at(mid);
                if cm == 0.0 {
                    lx = mid;
                    hx = mid;
                    break;
                }
                if cm.signum() == clo.signum() {
                    lx = mid;
                    clo = cm;
                } else {
                    hx = mid;
                }
            }
            push(0.5 * (lx + hx), a, b, &mut out);
        }
    }

    let ranges: Vec<(f64, f64, (i64, i64))> = constant
        .iter()
        .enumerate()
        .filter_map(|(pi, d)| {
            d.map(|d| (to_f64(&p.pieces[pi].start), to_f64(&p.pieces[pi].end), d))
        })
        .collect();
    out.sort_by(|x, y| {
        x.parameter
            .total_cmp(&y.parameter)
            .then(x.direction.cmp(&y.direction))
    });
    let mut dedup: Vec<MorseBottRecord> = Vec::new();
    for r in out {
        let inside_constant = ranges.iter().any(|(s, e, d)| {
            *d == r.direction
                && r.parameter >= s - 1e-9
                && r.parameter <= e + 1e-9
                && r.parameter != 0.5 * (s + e)
        });
        let dup = dedup
            .iter()
            .any(|q| q.direction == r.direction && (q.parameter - r.parameter).abs() < 1e-9);
        if !inside_constant && !dup {
            dedup.push(r);
        }
    }
    dedup
}

/// `(ν ρ², C − ρ²)` on the unit disk: constant Reeb slope 1/ν.
pub fn example_one(nu: &Q, c: &Q) -> Result<ReebProfile> {
    if !nu.is_positive() || *c <= q(1) {
        return Err(Error::InfeasibleParameters("need ν > 0 and C > 1".into()));
    }
    ReebProfile::new(
        Side::SolidTorus,
        vec![Piece {
            start: q(0),
            end: q(1),
            f: Poly::new(vec![q(0), q(0), nu.clone()]),
            g: Poly::new(vec![c.clone(), q(0), q(-1)]),
        }],
    )
}

/// `(ρ², C − ρ⁴)` on the unit disk: Reeb slope 2ρ².
pub fn example_two(c: &Q) -> Result<ReebProfile> {
    if *c <= q(1) {
        return Err(Error::InfeasibleParameters("need C > 1".into()));
    }
    ReebProfile::new(
        Side::SolidTorus,
        vec![Piece {
            start: q(0),
            end: q(1),
            f: Poly::new(vec![q(0), q(0), q(1)]),
            g: Poly::new(vec![c.clone(), q(0), q(0), q(0), q(-1)]),
        }],
    )
}

/// Integrates (f′, g′) pieces from an initial point into a profile.
fn integrate(side: Side, start: Q, f0: Q, g0: Q, derivs: Vec<(Q, Poly, Poly)>) -> Result<ReebProfile> {
    let mut pieces = Vec::with_capacity(derivs.len());
    let (mut x, mut f, mut g) = (start, f0, g0);
    for (len, df, dg) in derivs {
        let pf = df.integral(f.clone());
        let pg = dg.integral(g.clone());
        f = pf.eval(&len);
        g = pg.eval(&len);
        let end = &x + &len;
        pieces.push(Piece {
            start: x.clone(),
            end: end.clone(),
            f: pf,
            g: pg,
        });
        x = end;
    }
    ReebProfile::new(side, pieces)
}

/// Parameters and audit of an α_δ-type profile on `[1, 2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaDelta {
    pub profile: ReebProfile,
    pub delta: Q,
    pub anchor: (Q, Q),
    pub eps_prox: f64,
    /// Half-width of the parabolic end zones.
    pub s: Q,
    /// Amplitude of the g′ bump that places the endpoint on the fixed ray.
    pub beta: Q,
}

/// Default proximity radius: 5% of |(f(1), g(1))|.
pub fn default_eps_prox(anchor: (&Q, &Q)) -> f64 {
    0.05 * to_f64(anchor.0).hypot(to_f64(anchor.1))
}

/// Profile on `[1, 2]` with f′/g′ = φ piecewise linear: 2(y−1) up to 1+s, then up to δ
/// at 3/2, then down symmetrically. g′ = 1 + β·b′ with a C¹ cubic bump b on
/// `[1+s, 2−s]`; β puts (f(2), g(2)) on the ray through (f(1), g(1)+1).
pub fn build_alpha_delta(delta: &Q, anchor: (Q, Q), eps_prox: Option<f64>) -> Result<AlphaDelta> {
    let infeasible = |m: &str| Err(Error::InfeasibleParameters(m.to_string()));
    if !delta.is_positive() || *delta >= q(1) {
        return infeasible("δ must lie in (0, 1)");
    }
    let (f1, g1) = anchor.clone();
    if !f1.is_positive() {
        return infeasible("f(1) must be positive");
    }
    let eps = eps_prox.unwrap_or_else(|| default_eps_prox((&f1, &g1)));
    let s = (delta / q(4)).min(frac(1, 8));
    let mid_len = frac(1, 2) - &s;
    let bump_len = q(1) - q(2) * &s;
    // φ on each piece in local coordinates.
    let phi = [
        Poly::new(vec![q(0), q(2)]),
        Poly::new(vec![q(2) * &s, (delta - q(2) * &s) / &mid_len]),
        Poly::new(vec![delta.clone(), -(delta - q(2) * &s) / &mid_len]),
        Poly::new(vec![q(2) * &s, q(-2)]),
    ];
    let lens = [s.clone(), mid_len.clone(), mid_len.clone(), s.clone()];
    // b′ of the cubic smoothstep on [1+s, 2−s], split at 3/2.
    let u = |off: &Q| Poly::new(vec![off / &bump_len, q(1) / &bump_len]);
    let smooth_prime = |off: &Q| {
        let uu = u(off);
        uu.mul(&Poly::constant(q(1)).sub(&uu)).scale(&(q(6) / &bump_len))
    };
    let bprime = [
        Poly::zero(),
        smooth_prime(&q(0)),
        smooth_prime(&mid_len),
        Poly::zero(),
    ];
    let mut a_int = Q::zero();
    let mut b_int = Q::zero();
    for i in 0..4 {
        a_int += phi[i].integral(q(0)).eval(&lens[i]);
        b_int += phi[i].mul(&bprime[i]).integral(q(0)).eval(&lens[i]);
    }
    let denom = &f1 - &b_int * (&g1 + q(1));
    if !denom.is_positive() {
        return infeasible("the anchor admits no endpoint on the fixed ray");
    }
    let beta = &a_int * (&g1 + q(1)) / denom;
    let derivs = (0..4)
        .map(|i| {
            let dg = Poly::constant(q(1)).add(&bprime[i].scale(&beta));
            let df = phi[i].mul(&dg);
            (lens[i].clone(), df, dg)
        })
        .collect();
    let profile = integrate(Side::TorusShell, q(1), f1.clone(), g1.clone(), derivs)?;
    let out = AlphaDelta {
        profile,
        delta: delta.clone(),
        anchor: (f1, g1),
        eps_prox: eps,
        s,
        beta,
    };
    let failed: Vec<String> = audit_alpha_delta(&out)
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect();
    if !failed.is_empty() {
        return Err(Error::InfeasibleParameters(format!(
            "conditions fail: {}",
            failed.join(", ")
        )));
    }
    Ok(out)
}

/// The six defining conditions of an α_δ profile, each with its verdict.
pub fn audit_alpha_delta(ad: &AlphaDelta) -> Vec<(String, bool)> {
    let p = &ad.profile;
    let (f1, g1) = (&ad.anchor.0, &ad.anchor.1);
    let grid: Vec<Q> = (0..=400).map(|k| q(1) + frac(k, 400)).collect();
    let mut pts = grid.clone();
    pts.extend(p.breakpoints());
    pts.sort();
    pts.dedup();
    let jets: Vec<(Q, Jet)> = pts.iter().map(|x| (x.clone(), p.jet(x).expect("in range"))).collect();

    let contact = check_contact(p).ok;
    let prox = jets.iter().all(|(_, j)| {
        to_f64(&(&j.f - f1)).hypot(to_f64(&(&j.g - g1))) <= ad.eps_prox
    });
    let three_half = frac(3, 2);
    let ratio = |j: &Jet| &j.df / &j.dg;
    let mut ratio_ok = jets.iter().all(|(_, j)| {
        j.dg.is_positive() && !ratio(j).is_negative() && ratio(j) <= ad.delta
    });
    ratio_ok &= ratio(&p.jet(&three_half).expect("in range")) == ad.delta;
    for w in jets.windows(2) {
        let (x0, j0) = &w[0];
        let (x1, j1) = &w[1];
        let (r0, r1) = (ratio(j0), ratio(j1));
        if *x1 <= three_half && r1 <= r0 {
            ratio_ok = false;
        }
        if *x0 >= three_half && r1 >= r0 {
            ratio_ok = false;
        }
    }
    let first = &p.pieces()[0];
    let near_one = first.f == Poly::new(vec![f1.clone(), q(0), q(1)])
        && first.g == Poly::new(vec![g1.clone(), q(1)]);
    let last = p.pieces().last().expect("nonempty");
    let end = p.jet(&q(2)).expect("in range");
    let len = last.end.clone() - &last.start;
    // f(2) − (y−2)² and g(2) + (y−2) in the local coordinate y = 2 − len + t.
    let want_f = Poly::new(vec![&end.f - &len * &len, q(2) * &len, q(-1)]);
    let want_g = Poly::new(vec![&end.g - &len, q(1)]);
    let near_two = last.f == want_f && last.g == want_g;
    let on_ray = &end.f * (g1 + q(1)) == f1 * &end.g;
    vec![
        ("(1) contact".into(), contact),
        ("(2) proximity".into(), prox),
        ("(3) f'/g' shape".into(), ratio_ok),
        ("(4) parabola at y=1".into(), near_one),
        ("(5) parabola at y=2".into(), near_two),
        ("(6) endpoint ray".into(), on_ray),
    ]
}

/// Solid-torus profile on `[0, 1]`: `(ρ², C−ρ²)` on `[0, 1/10]`, `(f₁−(ρ−1)², g₁−(ρ−1))`
/// on `[9/10, 1]`, and in between slope σ rising linearly from 1 to 5 with
/// f′ = q > 0 chosen so that both ends meet.
pub fn build_v_profile(anchor: (Q, Q), c: &Q) -> Result<ReebProfile> {
    let infeasible = |m: String| Err(Error::InfeasibleParameters(m));
    if *c <= q(1) {
        return infeasible("C must exceed 1".into());
    }
    let (f1, g1) = anchor;
    let (a, m, b) = (frac(1, 10), frac(1, 2), frac(9, 10));
    let one_minus_b = q(1) - &b;
    let sigma_end = q(1) / (q(2) * &one_minus_b);
    let span = &b - &a;
    let half = &m - &a;
    // σ and the base q are linear in ρ; write them in each piece's local coordinate.
    let sigma_slope = (&sigma_end - q(1)) / &span;
    let sigma = |off: &Q| Poly::new(vec![q(1) + &sigma_slope * off, sigma_slope.clone()]);
    let q_lo = q(2) * &a;
    let q_hi = q(2) * &one_minus_b;
    let q_slope = (&q_hi - &q_lo) / &span;
    let base = |off: &Q| Poly::new(vec![&q_lo + &q_slope * off, q_slope.clone()]);
    let bump = Poly::new(vec![q(0), half.clone(), q(-1)]);
    let sig = [sigma(&q(0)), sigma(&half)];
    let bas = [base(&q(0)), base(&half)];
    let int = |p: &Poly| p.integral(q(0)).eval(&half);
    let (fa, ga) = (&a * &a, c - &a * &a);
    let fb = &f1 - &one_minus_b * &one_minus_b;
    let gb = &g1 + &one_minus_b;
    // f(b) = fa + Σ ∫(base + kᵢ bump), g(b) = ga − Σ ∫σ(base + kᵢ bump).
    let rhs_f = &fb - &fa - int(&bas[0]) - int(&bas[1]);
    let rhs_g = &ga - &gb - int(&sig[0].mul(&bas[0])) - int(&sig[1].mul(&bas[1]));
    let (a11, a12) = (int(&bump), int(&bump));
    let (a21, a22) = (int(&sig[0].mul(&bump)), int(&sig[1].mul(&bump)));
    let det = &a11 * &a22 - &a12 * &a21;
    if det.is_zero() {
        return infeasible("singular matching system".into());
    }
    let k1 = (&rhs_f * &a22 - &a12 * &rhs_g) / &det;
    let k2 = (&a11 * &rhs_g - &a21 * &rhs_f) / &det;
    let qs = [bas[0].add(&bump.scale(&k1)), bas[1].add(&bump.scale(&k2))];
    for qp in &qs {
        let mut pts = vec![q(0), half.clone()];
        let vertex_den = q(2) * qp.coeff(2);
        if !vertex_den.is_zero() {
            let v = -qp.coeff(1) / vertex_den;
            if v.is_positive() && v < half {
                pts.push(v);
            }
        }
        if pts.iter().any(|t| !qp.eval(t).is_positive()) {
            return infeasible("f′ would vanish in the middle zone".into());
        }
    }
    let derivs = vec![
        (a.clone(), Poly::new(vec![q(0), q(2)]), Poly::new(vec![q(0), q(-2)])),
        (half.clone(), qs[0].clone(), sig[0].mul(&qs[0]).scale(&q(-1))),
        (half.clone(), qs[1].clone(), sig[1].mul(&qs[1]).scale(&q(-1))),
        (one_minus_b.clone(), Poly::new(vec![q(2) * &one_minus_b, q(-2)]), Poly::constant(q(-1))),
    ];
    let profile = integrate(Side::SolidTorus, q(0), q(0), c.clone(), derivs)
        .map_err(|e| Error::InfeasibleParameters(e.to_string()))?;
    if !check_contact(&profile).ok {
        return infeasible("contact condition fails for this anchor and C".into());
    }
    Ok(profile)
}

/// Output of [`build_action_floor_extension`].
#[derive(Clone, Debug, PartialEq)]
pub struct FloorExtension {
    pub profile: ReebProfile,
    /// Exact |R|⁻¹ on the straight segment.
    pub k: f64,
    /// Surrogate slope magnitude at the end of the turn.
    pub r_prime: Q,
    /// End of the straight segment.
    pub y0: Q,
    /// Final g value N at y = 1/2.
    pub n: Q,
}

/// Profile on `[0, 1/2]` starting at (c, 0) with Reeb slope r < 0 whose closed orbits all
/// have action ≥ L: a long straight segment, a short turn to slope r′ whose window
/// holds only integer vectors of norm > L/K, and a quadratic sweep to (1, N).
pub fn build_action_floor_extension(l: f64, c: &Q, r: &Q) -> Result<FloorExtension> {
    let infeasible = |m: String| Err(Error::InfeasibleParameters(m));
    if !(l > 0.0) || !c.is_positive() || !r.is_negative() {
        return infeasible("need L > 0, c > 0 and r < 0".into());
    }
    let rabs = r.abs();
    let rf = to_f64(&rabs);
    let k = to_f64(c) * rf / (1.0 + rf * rf).sqrt();
    let need = l / k;
    let conv = convergents(&rabs);
    let above = conv.iter().find(|(pn, qn)| {
        let v = Q::new(pn.clone(), qn.clone());
        v > rabs && qn.to_f64().unwrap_or(f64::INFINITY) > need
    });
    let Some((pn, qn)) = above else {
        return infeasible("the slope surrogate has no convergent with a large enough denominator".into());
    };
    let r_prime = (&rabs + Q::new(pn.clone(), qn.clone())) / q(2);
    let y0 = frac(1, 100);
    let h2 = y0.clone();
    let h3 = frac(1, 2) - q(2) * &y0;
    let gap = to_f64(&(&r_prime - &rabs));
    let ell_f = 2.0 * l * (1.0 + to_f64(&r_prime)) / (1.5 * to_f64(&y0) * gap);
    let ell = Q::from_integer(BigInt::from(ell_f.ceil() as i64 + 1));
    let d = (q(1), rabs.clone());
    let dp = (q(1), r_prime.clone());
    let p0 = (c + &ell * &y0, &ell * &y0 * &rabs);
    let sigma = &ell * &y0 / q(2);
    let x0 = (&p0.0 + &sigma * &d.0, &p0.1 + &sigma * &d.1);
    let norm_x0 = to_f64(&x0.0).hypot(to_f64(&x0.1));
    let n_big = Q::from_integer(BigInt::from((4.0 * norm_x0).ceil() as i64));
    let ratio = &h2 / &h3;
    let s = (&n_big - &x0.1) / (&r_prime * (q(1) + &ratio));
    let sigma_p = &s * &ratio;
    let p1 = (&x0.0 + &sigma_p * &dp.0, &x0.1 + &sigma_p * &dp.1);
    let x = (&p1.0 + &s * &dp.0, &p1.1 + &s * &dp.1);
    let qpt = (q(1), n_big.clone());
    let straight = (
        y0.clone(),
        Poly::constant(&ell * &d.0),
        Poly::constant(&ell * &d.1),
    );
    let bezier_prime = |p: &(Q, Q), ctl: &(Q, Q), e: &(Q, Q), h: &Q| {
        // B′(t) = (2/h)[(1 − t/h)(X − P) + (t/h)(E − X)].
        let lin = |i: usize| {
            let (pi, ci, ei) = match i {
                0 => (&p.0, &ctl.0, &e.0),
                _ => (&p.1, &ctl.1, &e.1),
            };
            let v0 = ci - pi;
            let v1 = ei - ci;
            Poly::new(vec![q(2) * &v0 / h, q(2) * (&v1 - &v0) / (h * h)])
        };
        (lin(0), lin(1))
    };
    let (tf, tg) = bezier_prime(&p0, &x0, &p1, &h2);
    let (ef, eg) = bezier_prime(&p1, &x, &qpt, &h3);
    let profile = integrate(
        Side::TorusShell,
        q(0),
        c.clone(),
        q(0),
        vec![straight, (h2.clone(), tf, tg), (h3.clone(), ef, eg)],
    )
    .map_err(|e| Error::InfeasibleParameters(e.to_string()))?;
    if !check_contact(&profile).ok {
        return infeasible("the extension fails the contact condition".into());
    }
    Ok(FloorExtension {
        profile,
        k,
        r_prime,
        y0,
        n: n_big,
    })
}

/// Standalone SVG 1.1 polyline of the (f, g) trajectory with labelled axes.
pub fn profile_svg(p: &ReebProfile) -> String {
    const W: f64 = 480.0;
    const H: f64 = 480.0;
    const PAD: f64 = 40.0;
    let (a, b) = (to_f64(&p.start()), to_f64(&p.end()));
    let mut xs: Vec<f64> = (0..=400).map(|k| a + (b - a) * f64::from(k) / 400.0).collect();
    xs.extend(p.breakpoints().iter().map(to_f64));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| {
            let [f, g, _, _] = p.jet_f64(x);
            (f, g)
        })
        .collect();
    let (mut fmin, mut fmax, mut gmin, mut gmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(f, g) in &pts {
        fmin = fmin.min(f);
        fmax = fmax.max(f);
        gmin = gmin.min(g);
        gmax = gmax.max(g);
    }
    let span = |lo: f64, hi: f64| if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let (fs, gs) = (span(fmin, fmax), span(gmin, gmax));
    let map = |f: f64, g: f64| {
        (
            PAD + (f - fmin) / fs * (W - 2.0 * PAD),
            H - PAD - (g - gmin) / gs * (H - 2.0 * PAD),
        )
    };
    let mut poly = String::new();
    for (i, &(f, g)) in pts.iter().enumerate() {
        let (x, y) = map(f, g);
        if i > 0 {
            poly.push(' ');
        }
        let _ = write!(poly, "{x:.3},{y:.3}");
    }
    let side = match p.side {
        Side::TorusShell => "y",
        Side::SolidTorus => "rho",
    };
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<line x1=\"{PAD}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"black\"/>",
        y = H - PAD,
        x2 = W - PAD
    );
    let _ = writeln!(
        s,
        "<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{y}\" stroke=\"black\"/>",
        y = H - PAD
    );
    let _ = writeln!(
        s,
        "<text x=\"{x}\" y=\"{y}\" font-size=\"14\">f [{fmin:.4}, {fmax:.4}]</text>",
        x = W / 2.0 - 60.0,
        y = H - 10.0
    );
    let _ = writeln!(
        s,
        "<text x=\"10\" y=\"{y}\" font-size=\"14\" transform=\"rotate(-90 10 {y})\">g [{gmin:.4}, {gmax:.4}]</text>",
        y = H / 2.0 + 60.0
    );
    let _ = writeln!(
        s,
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{poly}\"/>"
    );
    let (sx, sy) = map(pts[0].0, pts[0].1);
    let _ = writeln!(
        s,
        "<circle cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"4\" fill=\"darkred\"><title>{side} = {a}</title></circle>"
    );
    s.push_str("</svg>\n");
    s
}

pub fn emit_profile_plot(p: &ReebProfile, path: &Path) -> Result<()> {
    std::fs::write(path, profile_svg(p))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    #[test]
    fn example_one_contact_and_slope() {
        let nu = frac(7, 10);
        let p = example_one(&nu, &q(2)).unwrap();
        let rep = check_contact(&p);
        assert!(rep.ok);
        assert_eq!(rep.axis_ok, Some(true));
        let x = frac(1, 3);
        // E = 2νρC at every interior point.
        assert_eq!(p.contact_expression(&x).unwrap(), q(2) * &nu * &x * q(2));
        assert_eq!(reeb_slope(&p, &x).unwrap(), Slope::Finite(q(1) / &nu));
        assert!(matches!(reeb_slope(&p, &q(0)), Err(Error::DegenerateDirection(_))));
    }

    #[test]
    fn degenerate_shell_is_not_contact() {
        let p = ReebProfile::new(
            Side::TorusShell,
            vec![Piece {
                start: q(1),
                end: q(2),
                f: Poly::new(vec![q(1), q(1)]),
                g: Poly::new(vec![q(1), q(1)]),
            }],
        )
        .unwrap();
        assert!(!check_contact(&p).ok);
        assert_eq!(check_contact(&p).margin, 0.0);
    }

    #[test]
    fn vertical_direction_has_infinite_slope() {
        let ad = build_alpha_delta(&frac(1, 10), (q(24), q(2)), None).unwrap();
        assert_eq!(reeb_slope(&ad.profile, &q(1)).unwrap(), Slope::Infinite);
        assert_eq!(reeb_slope(&ad.profile, &q(2)).unwrap(), Slope::Infinite);
    }

    #[test]
    fn c1_mismatch_rejected() {
        let pieces = vec![
            Piece { start: q(0), end: q(1), f: Poly::new(vec![q(1), q(1)]), g: Poly::new(vec![q(1)]) },
            Piece { start: q(1), end: q(2), f: Poly::new(vec![q(2), q(2)]), g: Poly::new(vec![q(1)]) },
        ];
        assert!(ReebProfile::new(Side::TorusShell, pieces).is_err());
        let odd = vec![Piece {
            start: q(0),
            end: q(1),
            f: Poly::new(vec![q(0), q(1)]),
            g: Poly::new(vec![q(2)]),
        }];
        assert!(ReebProfile::new(Side::SolidTorus, odd).is_err());
    }

    #[test]
    fn mirror_preserves_contact_expression() {
        let p = example_two(&q(3)).unwrap();
        let m = p.mirror(&q(3)).unwrap();
        for k in 1..10 {
            let rho = frac(k, 10);
            let y = q(3) - &rho;
            assert_eq!(p.contact_expression(&rho).unwrap(), m.contact_expression(&y).unwrap());
        }
    }

    #[test]
    fn alpha_delta_audit_passes() {
        let ad = build_alpha_delta(&parse_rational("0.1414213").unwrap(), (q(24), q(2)), None).unwrap();
        for (name, ok) in audit_alpha_delta(&ad) {
            assert!(ok, "{name}");
        }
        assert!(build_alpha_delta(&frac(1, 10), (q(1), q(2)), None).is_err());
    }

    #[test]
    fn v_profile_conditions() {
        let p = build_v_profile((q(24), q(3)), &q(60)).unwrap();
        assert!(check_contact(&p).ok);
        let first = &p.pieces()[0];
        assert_eq!(first.f, Poly::new(vec![q(0), q(0), q(1)]));
        assert_eq!(first.g, Poly::new(vec![q(60), q(0), q(-1)]));
        assert_eq!(reeb_slope(&p, &frac(1, 20)).unwrap(), Slope::Finite(q(1)));
        assert_eq!(reeb_slope(&p, &q(1)).unwrap(), Slope::Infinite);
        let end = p.jet(&q(1)).unwrap();
        assert_eq!((end.f, end.g), (q(24), q(3)));
    }

    #[test]
    fn svg_is_deterministic() {
        let p = example_one(&frac(7, 10), &q(2)).unwrap();
        let a = profile_svg(&p);
        assert_eq!(a, profile_svg(&p));
        assert!(a.contains("<polyline"));
    }
}
