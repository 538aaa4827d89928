//! Versioned JSON configuration for N models and Reeb profiles.
//!
//! Monomials are written multiplicatively, e.g. `"e^2*g1"`; rationals are strings such
//! as `"7/5"` or `"1.4142"` so they load exactly.

use std::collections::BTreeMap;
use std::path::Path;

use echobd::complexbuilder::{Bounds, NModel, DEFAULT_ACTIONS};
use echobd::orbitsets::{OrbitKind, OrbitSet, SimpleOrbit};
use echobd::rational::{parse_rational, Q};
use echobd::reebprofiles::{
    audit_alpha_delta, build_action_floor_extension, build_alpha_delta, build_v_profile, example_one, example_two,
    scan_morse_bott, Piece, Poly, ReebProfile, Side,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindDecl {
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDecl {
    pub name: String,
    pub kind: KindDecl,
    pub action: f64,
    pub page_degree: u32,
    pub degree: i64,
    #[serde(default)]
    pub eta: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDecl {
    pub m_max: u32,
    pub j_max: u32,
    pub guard: u32,
}

impl From<BoundsDecl> for Bounds {
    fn from(b: BoundsDecl) -> Self {
        Bounds {
            m_max: b.m_max,
            j_max: b.j_max,
            guard: b.guard,
        }
    }
}

/// Interior orbits of N with the two differentials on e-free, h-free monomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub schema: u32,
    pub orbits: Vec<OrbitDecl>,
    #[serde(default)]
    pub d_flat: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub d_prime: BTreeMap<String, Vec<String>>,
    pub j_bound: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsDecl>,
}

fn check_schema(schema: u32) -> Result<(), CliError> {
    if schema != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "unsupported schema version {schema}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl ModelConfig {
    pub fn to_model(&self) -> Result<NModel, CliError> {
        check_schema(self.schema)?;
        let [_, _, ae, ah] = DEFAULT_ACTIONS;
        let e = SimpleOrbit::e(ae)?;
        let h = SimpleOrbit::h(ah)?;
        let mut interior = Vec::new();
        for o in &self.orbits {
            let kind = match o.kind {
                KindDecl::Elliptic => OrbitKind::Elliptic,
                KindDecl::Hyperbolic => OrbitKind::Hyperbolic,
            };
            interior.push(
                SimpleOrbit::new(&o.name, kind, o.action, o.page_degree)?
                    .with_degree(o.degree)
                    .with_eta(o.eta),
            );
        }
        let lookup = |s: &str| -> Option<SimpleOrbit> {
            match s {
                "e" => Some(e.clone()),
                "h" => Some(h.clone()),
                _ => interior.iter().find(|o| o.name == s).cloned(),
            }
        };
        let parse_map = |m: &BTreeMap<String, Vec<String>>| -> Result<BTreeMap<OrbitSet, Vec<OrbitSet>>, CliError> {
            let mut out = BTreeMap::new();
            for (k, v) in m {
                let src = OrbitSet::parse(k, lookup)?;
                let targets = v.iter().map(|t| OrbitSet::parse(t, lookup)).collect::<Result<Vec<_>, _>>()?;
                out.insert(src, targets);
            }
            Ok(out)
        };
        let d_flat = parse_map(&self.d_flat)?;
        let d_prime = parse_map(&self.d_prime)?;
        Ok(NModel::new(interior.clone(), e.clone(), h.clone(), self.j_bound, d_flat, d_prime)?)
    }

    pub fn from_model(n: &NModel, bounds: Option<Bounds>) -> Self {
        let render = |m: &BTreeMap<OrbitSet, Vec<OrbitSet>>| -> BTreeMap<String, Vec<String>> {
            m.iter()
                .map(|(k, v)| (k.to_string(), v.iter().map(|t| t.to_string()).collect()))
                .collect()
        };
        Self {
            schema: SCHEMA_VERSION,
            orbits: n
                .interior
                .iter()
                .map(|o| OrbitDecl {
                    name: o.name.clone(),
                    kind: if o.is_hyperbolic() { KindDecl::Hyperbolic } else { KindDecl::Elliptic },
                    action: o.action,
                    page_degree: o.page_degree,
                    degree: o.degree,
                    eta: o.eta_class,
                })
                .collect(),
            d_flat: render(n.d_flat()),
            d_prime: render(n.d_prime()),
            j_bound: n.j_bound,
            bounds: bounds.map(|b| BoundsDecl {
                m_max: b.m_max,
                j_max: b.j_max,
                guard: b.guard,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideDecl {
    Torus,
    Solid,
}

/// Coefficients in the local coordinate `x − start`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDecl {
    pub start: String,
    pub end: String,
    pub f: Vec<String>,
    pub g: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    Pieces { side: SideDecl, pieces: Vec<PieceDecl> },
    AlphaDelta { delta: String, anchor: [String; 2], eps_prox: Option<f64> },
    ExampleOne { nu: String, c: String },
    ExampleTwo { c: String },
    VProfile { anchor: [String; 2], c: String },
    FloorExtension { l: f64, c: String, r: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub schema: u32,
    pub construction: Construction,
}

/// A profile together with the construction-specific audit lines.
pub struct LoadedProfile {
    pub profile: ReebProfile,
    pub audit: Vec<(String, bool)>,
}

fn rat(s: &str) -> Result<Q, CliError> {
    Ok(parse_rational(s)?)
}

fn poly(c: &[String]) -> Result<Poly, CliError> {
    Ok(Poly::new(c.iter().map(|s| rat(s)).collect::<Result<_, _>>()?))
}

impl ProfileConfig {
    pub fn load(&self) -> Result<LoadedProfile, CliError> {
        check_schema(self.schema)?;
        let plain = |profile| LoadedProfile { profile, audit: Vec::new() };
        Ok(match &self.construction {
            Construction::Pieces { side, pieces } => {
                let side = match side {
                    SideDecl::Torus => Side::TorusShell,
                    SideDecl::Solid => Side::SolidTorus,
                };
                let pieces = pieces
                    .iter()
                    .map(|p| {
                        Ok(Piece {
                            start: rat(&p.start)?,
                            end: rat(&p.end)?,
                            f: poly(&p.f)?,
                            g: poly(&p.g)?,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                plain(ReebProfile::new(side, pieces)?)
            }
            Construction::AlphaDelta { delta, anchor, eps_prox } => {
                let ad = build_alpha_delta(&rat(delta)?, (rat(&anchor[0])?, rat(&anchor[1])?), *eps_prox)?;
                let audit = audit_alpha_delta(&ad);
                LoadedProfile { profile: ad.profile, audit }
            }
            Construction::ExampleOne { nu, c } => plain(example_one(&rat(nu)?, &rat(c)?)?),
            Construction::ExampleTwo { c } => plain(example_two(&rat(c)?)?),
            Construction::VProfile { anchor, c } => plain(build_v_profile((rat(&anchor[0])?, rat(&anchor[1])?), &rat(c)?)?),
            Construction::FloorExtension { l, c, r } => {
                let ext = build_action_floor_extension(*l, &rat(c)?, &rat(r)?)?;
                let short = scan_morse_bott(&ext.profile, *l, 200).iter().filter(|rec| rec.action < *l).count();
                LoadedProfile {
                    profile: ext.profile,
                    audit: vec![(format!("no closed orbit of action below {l} (q_max 200)"), short == 0)],
                }
            }
        })
    }
}
