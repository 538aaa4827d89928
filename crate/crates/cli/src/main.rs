//! `echobd` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on invalid input.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use echobd::complexbuilder::{
    build_ecc_variant, build_total_complex, build_u0, mapping_cone, Bounds, ModelComplex, NModel, Piece, VModel,
    Variant,
};
use echobd::indices::core_index_table;
use echobd::rational::parse_rational;
use echobd::reebprofiles::{check_contact, emit_profile_plot, scan_morse_bott};
use echobd::scenarios::{
    fixture_one_orbit, fixture_trivial, random_admissible_nmodel, run_corollary_v_variants, run_hat_theorem,
    run_main_theorem, run_solid_torus, with_pool, ModelSize, ScenarioResult,
};
use echobd::spectral::{make_filtration, page, Which};
use rayon::prelude::*;

use config::{read_json, ModelConfig, ProfileConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] echobd::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("check failed: {0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) | CliError::Core(echobd::Error::ClaimFailed { .. }) => 1,
            _ => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "echobd", version, about = "Exact checks for embedded contact homology models over F2")]
struct Cli {
    /// Omit timestamps and timings so identical runs produce identical output.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads; defaults to ECHOBD_THREADS or the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Full,
    Flat,
    Sharp,
    /// The tensor complex with the post-limit V model.
    Total,
    /// The mapping cone of U0 on the tensor complex.
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    SolidTorus,
    VVariants,
    Main,
    Hat,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FiltrationArg {
    F,
    G,
    Gprime,
    E,
    Fhat,
    Ehat,
}

impl From<FiltrationArg> for Which {
    fn from(f: FiltrationArg) -> Self {
        match f {
            FiltrationArg::F => Which::F,
            FiltrationArg::G => Which::G,
            FiltrationArg::Gprime => Which::Gprime,
            FiltrationArg::E => Which::E,
            FiltrationArg::Fhat => Which::Fhat,
            FiltrationArg::Ehat => Which::Ehat,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Contact condition and construction audit of a profile.
    CheckProfile {
        #[arg(long)]
        profile: PathBuf,
    },
    /// CSV of Morse-Bott tori with action at most L.
    ScanOrbits {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long = "L")]
        l: f64,
        #[arg(long)]
        qmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Standalone SVG of a profile curve.
    PlotProfile {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Conley-Zehnder indices 2 floor(n r) + 1 of the core covers.
    Indices {
        #[arg(long)]
        r: String,
        #[arg(long)]
        n: u32,
    },
    /// Homology dimensions per degree.
    Homology {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        variant: VariantArg,
        #[arg(long)]
        jmax: Option<u32>,
        #[arg(long)]
        mmax: Option<u32>,
    },
    /// Spectral-sequence pages of a filtration on the tensor complex or its U0 cone.
    Pages {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        filtration: FiltrationArg,
        /// Last page to compute.
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long)]
        jmax: Option<u32>,
        #[arg(long)]
        mmax: Option<u32>,
    },
    /// Seeded admissible N model as JSON.
    GenModel {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        orbits: usize,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End-to-end verification scenarios.
    Verify {
        #[arg(value_enum)]
        scenario: ScenarioArg,
        /// First seed of the random models.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random models.
        #[arg(long, default_value_t = 20)]
        models: u64,
        #[arg(long, default_value_t = 6)]
        max_orbits: usize,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        #[arg(long, default_value_t = 6)]
        mmax: u32,
        #[arg(long, default_value_t = 2)]
        guard: u32,
        /// Extra model to include.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Rotation stages of the solid torus check.
        #[arg(long, value_delimiter = ',', default_value = "1.4142,14.142,141.42")]
        r_list: Vec<String>,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// e'-power bound of the V variant check.
        #[arg(long, default_value_t = 8)]
        v_mmax: u32,
        /// Directory for per-table CSV files.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let started = Instant::now();
    let deterministic = cli.deterministic;
    match with_pool(threads, move || run(cli)) {
        Ok(out) => {
            print!("{out}");
            if !deterministic {
                eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
            }
            ExitCode::SUCCESS
        }
        Err((out, e)) => {
            print!("{out}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

type Outcome = Result<String, (String, CliError)>;

fn run(cli: Cli) -> Outcome {
    let plain = |r: Result<String, CliError>| r.map_err(|e| (String::new(), e));
    match cli.cmd {
        Cmd::CheckProfile { profile } => check_profile(&profile),
        Cmd::ScanOrbits { profile, l, qmax, out } => plain(scan_orbits(&profile, l, qmax, out.as_deref())),
        Cmd::PlotProfile { profile, out } => plain(plot_profile(&profile, &out)),
        Cmd::Indices { r, n } => plain(indices(&r, n)),
        Cmd::Homology { model, variant, jmax, mmax } => plain(homology(&model, variant, jmax, mmax)),
        Cmd::Pages { model, filtration, r, jmax, mmax } => plain(pages(&model, filtration, r, jmax, mmax)),
        Cmd::GenModel { seed, orbits, jmax, out } => plain(gen_model(seed, orbits, jmax, out.as_deref())),
        Cmd::Verify {
            scenario,
            seed,
            models,
            max_orbits,
            jmax,
            mmax,
            guard,
            model,
            r_list,
            n_max,
            v_mmax,
            csv_dir,
        } => {
            let opts = VerifyOpts {
                scenario,
                seed,
                models,
                max_orbits,
                bounds: Bounds { m_max: mmax, j_max: jmax, guard },
                model,
                r_list,
                n_max,
                v_mmax,
                csv_dir,
                deterministic: cli.deterministic,
            };
            verify(&opts)
        }
    }
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn emit(text: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(p) => {
            std::fs::File::create(p)?.write_all(text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn check_profile(path: &Path) -> Outcome {
    let inner = || -> Result<(String, bool), CliError> {
        let loaded = read_json::<ProfileConfig>(path)?.load()?;
        let c = check_contact(&loaded.profile);
        let mut s = String::new();
        let mut ok = c.ok && c.axis_ok != Some(false);
        let _ = writeln!(s, "contact condition: {} (margin {})", if c.ok { "ok" } else { "FAIL" }, c.margin);
        if let Some(axis) = c.axis_ok {
            let _ = writeln!(s, "axis smoothness: {}", if axis { "ok" } else { "FAIL" });
        }
        for (what, pass) in &loaded.audit {
            ok &= *pass;
            let _ = writeln!(s, "{what}: {}", if *pass { "ok" } else { "FAIL" });
        }
        Ok((s, ok))
    };
    match inner() {
        Ok((s, true)) => Ok(s),
        Ok((s, false)) => Err((s, CliError::Failed("profile audit".into()))),
        Err(e) => Err((String::new(), e)),
    }
}

fn scan_orbits(path: &Path, l: f64, qmax: u32, out: Option<&Path>) -> Result<String, CliError> {
    if !(l > 0.0) {
        return Err(CliError::Config("L must be positive".into()));
    }
    let loaded = read_json::<ProfileConfig>(path)?.load()?;
    let rows: Vec<Vec<String>> = scan_morse_bott(&loaded.profile, l, qmax)
        .iter()
        .map(|r| {
            let (p, q) = r.slope_pq();
            vec![
                format!("{:.12}", r.parameter),
                r.direction.0.to_string(),
                r.direction.1.to_string(),
                format!("{p}/{q}"),
                format!("{:.9}", r.action),
            ]
        })
        .collect();
    emit(csv_string(&["parameter", "a", "b", "slope", "action"], &rows)?, out)
}

fn plot_profile(path: &Path, out: &Path) -> Result<String, CliError> {
    let loaded = read_json::<ProfileConfig>(path)?.load()?;
    emit_profile_plot(&loaded.profile, out)?;
    Ok(String::new())
}

fn indices(r: &str, n: u32) -> Result<String, CliError> {
    let r = parse_rational(r)?;
    let rows: Vec<Vec<String>> = core_index_table(&r, n)?
        .into_iter()
        .map(|(n, cz)| vec![n.to_string(), cz.to_string()])
        .collect();
    csv_string(&["n", "cz"], &rows)
}

fn load_model(path: &Path) -> Result<(NModel, Option<Bounds>), CliError> {
    let cfg: ModelConfig = read_json(path)?;
    Ok((cfg.to_model()?, cfg.bounds.map(Into::into)))
}

fn resolve_bounds(file: Option<Bounds>, n: &NModel, jmax: Option<u32>, mmax: Option<u32>) -> Bounds {
    let mut b = file.unwrap_or_default();
    b.j_max = b.j_max.min(n.j_bound);
    if let Some(j) = jmax {
        b.j_max = j;
    }
    if let Some(m) = mmax {
        b.m_max = m;
    }
    b
}

fn cone_of(n: &NModel, bounds: Bounds) -> Result<ModelComplex, CliError> {
    let t = build_total_complex(&VModel::post_limit(), n, bounds)?;
    let u = build_u0(&t)?;
    Ok(mapping_cone(&u, -2, &t.complex)?)
}

fn homology(path: &Path, variant: VariantArg, jmax: Option<u32>, mmax: Option<u32>) -> Result<String, CliError> {
    let (n, file_bounds) = load_model(path)?;
    let bounds = resolve_bounds(file_bounds, &n, jmax, mmax);
    let c = match variant {
        VariantArg::Full => build_ecc_variant(Piece::N(&n), Variant::Full, bounds)?,
        VariantArg::Flat => build_ecc_variant(Piece::N(&n), Variant::Flat, bounds)?,
        VariantArg::Sharp => build_ecc_variant(Piece::N(&n), Variant::Sharp, bounds)?,
        VariantArg::Total => build_total_complex(&VModel::post_limit(), &n, bounds)?.complex,
        VariantArg::Cone => cone_of(&n, bounds)?,
    };
    let rows: Vec<Vec<String>> = c
        .homology_by_degree()
        .into_iter()
        .map(|(d, h)| vec![d.to_string(), h.to_string()])
        .collect();
    csv_string(&["degree", "dim"], &rows)
}

fn pages(path: &Path, f: FiltrationArg, r_max: u32, jmax: Option<u32>, mmax: Option<u32>) -> Result<String, CliError> {
    let (n, file_bounds) = load_model(path)?;
    let bounds = resolve_bounds(file_bounds, &n, jmax, mmax);
    let which = Which::from(f);
    let c = match which {
        Which::Fhat | Which::Ehat => cone_of(&n, bounds)?,
        _ => build_total_complex(&VModel::post_limit(), &n, bounds)?.complex,
    };
    let fc = make_filtration(&c, which)?;
    let reports: Vec<_> = (0..=r_max).into_par_iter().map(|r| page(&fc, r)).collect();
    let mut rows = Vec::new();
    for rep in &reports {
        for (&(p, d), &dim) in &rep.dims {
            let rank = rep.differential_ranks.get(&(p, d)).copied().unwrap_or(0);
            rows.push(vec![
                which.to_string(),
                rep.r.to_string(),
                p.to_string(),
                d.to_string(),
                dim.to_string(),
                rank.to_string(),
            ]);
        }
    }
    csv_string(&["filtration", "page", "level", "degree", "dim", "rank"], &rows)
}

fn gen_model(seed: u64, orbits: usize, jmax: u32, out: Option<&Path>) -> Result<String, CliError> {
    let n = random_admissible_nmodel(seed, ModelSize { orbits, j_max: jmax })?;
    let cfg = ModelConfig::from_model(&n, None);
    let text = serde_json::to_string_pretty(&cfg).map_err(|e| CliError::Io(e.to_string()))? + "\n";
    emit(text, out)
}

struct VerifyOpts {
    scenario: ScenarioArg,
    seed: u64,
    models: u64,
    max_orbits: usize,
    bounds: Bounds,
    model: Option<PathBuf>,
    r_list: Vec<String>,
    n_max: u32,
    v_mmax: u32,
    csv_dir: Option<PathBuf>,
    deterministic: bool,
}

fn theorem_models(o: &VerifyOpts) -> Result<Vec<(String, NModel)>, CliError> {
    let mut out = vec![
        ("trivial".to_string(), fixture_trivial()),
        ("one-orbit".to_string(), fixture_one_orbit()),
    ];
    if let Some(p) = &o.model {
        out.push((p.display().to_string(), load_model(p)?.0));
    }
    for s in o.seed..o.seed + o.models {
        let size = ModelSize { orbits: (s as usize) % (o.max_orbits + 1), j_max: o.bounds.j_max };
        out.push((format!("seed{s}"), random_admissible_nmodel(s, size)?));
    }
    Ok(out)
}

fn write_tables(dir: &Path, tag: &str, r: &ScenarioResult) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for (name, t) in &r.tables {
        let rows: Vec<Vec<String>> = t.iter().map(|(g, d)| vec![g.to_string(), d.to_string()]).collect();
        let file = dir.join(format!("{}_{}_{}.csv", r.name, tag.replace(['/', '\\'], "_"), name));
        std::fs::write(file, csv_string(&["grade", "dim"], &rows)?)?;
    }
    Ok(())
}

fn verify(o: &VerifyOpts) -> Outcome {
    let mut text = String::new();
    if !o.deterministic {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(text, "# run at unix time {now}");
    }
    let fail = |text: String, e: CliError| Err((text, e));
    let want = |s: ScenarioArg| o.scenario == s || o.scenario == ScenarioArg::All;
    let mut results: Vec<(String, Result<ScenarioResult, echobd::Error>)> = Vec::new();
    if want(ScenarioArg::SolidTorus) {
        let r_list = match o.r_list.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>() {
            Ok(v) => v,
            Err(e) => return fail(text, e.into()),
        };
        results.push(("stages".into(), run_solid_torus(&r_list, o.n_max)));
    }
    if want(ScenarioArg::VVariants) {
        results.push(("post-limit".into(), run_corollary_v_variants(o.v_mmax)));
    }
    if want(ScenarioArg::Main) || want(ScenarioArg::Hat) {
        let models = match theorem_models(o) {
            Ok(m) => m,
            Err(e) => return fail(text, e),
        };
        let b = o.bounds;
        let (main, hat) = (want(ScenarioArg::Main), want(ScenarioArg::Hat));
        let runs: Vec<Vec<(String, Result<ScenarioResult, echobd::Error>)>> = models
            .par_iter()
            .map(|(tag, n)| {
                let mut v = Vec::new();
                if main {
                    v.push((tag.clone(), run_main_theorem(n, b)));
                }
                if hat {
                    v.push((tag.clone(), run_hat_theorem(n, b)));
                }
                v
            })
            .collect();
        results.extend(runs.into_iter().flatten());
    }
    let mut failed = 0;
    for (tag, r) in &results {
        match r {
            Ok(r) => {
                let _ = write!(text, "[{tag}] {}", r.report());
                if !r.passed {
                    failed += 1;
                }
                if let Some(dir) = &o.csv_dir {
                    if let Err(e) = write_tables(dir, tag, r) {
                        return fail(text, e);
                    }
                }
            }
            Err(e @ (echobd::Error::InvalidInput(_) | echobd::Error::InvalidModel(_))) => {
                return fail(text, e.clone().into());
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(text, "[{tag}] error: {e}");
            }
        }
    }
    let _ = writeln!(text, "summary: {} run(s), {failed} failed", results.len());
    if failed > 0 {
        return fail(text, CliError::Failed(format!("{failed} scenario run(s)")));
    }
    Ok(text)
}
