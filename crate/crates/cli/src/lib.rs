//! Command-line front end: argument model, job dispatch and deterministic
//! CSV/JSON emission.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use xx0::acceptance::run_all;
use xx0::fredholm::{fredholm_det_indexed, z_discrete_via_fd, BesselKernel, ContourKernel};
use xx0::nibm::{thresholds, width_cdf_exact, width_cdf_mc};
use xx0::phase::{
    fe_from_tw, fe_gw_exact, fe_gw_finite, fe_gw_tw, fe_quadratic_finite, fe_selberg_finite, fe_zero, wall_curves,
    FreeEnergyResult, PhasePoint, TwModel, WallModel,
};
use xx0::potential::{selberg_couplings, weight_expanded, CouplingVector, WeightFunction};
use xx0::selberg::{c_series, c_star_selberg, z_selberg, z_series, SeriesModel, SeriesRoute};
use xx0::toeplitz::{heine_szego_oracle, toeplitz_minor_det, DiscreteDomain, Domain};
use xx0::tracy_widom::{tracy_widom_cdf, tw_tail_log, TailSide};
use xx0::{Error, Partition};

#[derive(Debug, Parser, Serialize)]
#[command(name = "xx0", version, about = "Partition functions, correlators, Tracy-Widom statistics and phase data for generalized XX0 chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; `-` writes to stdout.
    #[arg(long, short, global = true, default_value = "-")]
    pub output: String,
    /// Random seed, echoed in the output metadata.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker-thread cap.
    #[arg(long, global = true, env = "XX0_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Partition function by one or more methods.
    Zfun(ZfunArgs),
    /// Schur-function correlators.
    Corr(CorrArgs),
    /// Tracy-Widom CDF and tail approximations on a grid.
    Tw(TwArgs),
    /// Free-energy grids or wall polylines.
    Phase(PhaseArgs),
    /// Random-walk width statistics.
    Nibm(NibmArgs),
    /// Coupling coefficients Delta_m of a model.
    Expand(ExpandArgs),
    /// Run the acceptance suite; exit 0 iff every criterion passes.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Zero,
    Gw,
    Quadratic,
    Single,
    Selberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Toeplitz,
    Selberg,
    Series,
    Fredholm,
    Heine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Cauchy,
    Termwise,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = Model::Gw)]
    pub model: Model,
    /// Time / coupling scale t.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Number of flipped spins N_f.
    #[arg(long, default_value_t = 2)]
    pub nf: usize,
    /// Chain length N; omit for the continuous (infinite) chain.
    #[arg(long)]
    pub n: Option<usize>,
    /// Rotation angle of the discrete domain, z^N = e^{i angle}.
    #[arg(long, default_value_t = 0.0)]
    pub angle: f64,
    /// Interaction range of the single-term model.
    #[arg(long, default_value_t = 2)]
    pub range: usize,
    /// Coupling of the single-term model.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ZfunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated methods; the first is the reference for rel_gap.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "toeplitz")]
    pub method: Vec<Method>,
    /// Series cutoff (partition weight).
    #[arg(long, default_value_t = 80)]
    pub cutoff: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CorrArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Partition inserted as s_lambda(z), e.g. "2,1".
    #[arg(long, default_value = "1")]
    pub lambda: String,
    /// Partition inserted as s_mu(1/z); omit for the starred correlator.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "toeplitz")]
    pub method: Vec<Method>,
    #[arg(long, value_enum, default_value_t = Route::Cauchy)]
    pub route: Route,
    #[arg(long, default_value_t = 80)]
    pub cutoff: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TwArgs {
    #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseModel {
    GwTw,
    GwExact,
    GwFinite,
    Quadratic,
    Selberg,
    Zero,
    GwFromTw,
    SelbergFromTw,
}

#[derive(Debug, Args, Serialize)]
pub struct PhaseArgs {
    #[arg(long, value_enum, default_value_t = PhaseModel::GwFinite)]
    pub model: PhaseModel,
    #[arg(long, default_value_t = 0.1)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 30)]
    pub tau_steps: usize,
    /// Range of n_inv (or lambda for the quadratic model).
    #[arg(long, default_value_t = 0.5)]
    pub ninv_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub ninv_max: f64,
    #[arg(long, default_value_t = 30)]
    pub ninv_steps: usize,
    /// N_f used by the Tracy-Widom reconstructions.
    #[arg(long, default_value_t = 50)]
    pub nf: usize,
    /// Truncation of the quadratic model's infinite free energy.
    #[arg(long, default_value_t = 200)]
    pub cap: usize,
    /// Emit wall polylines instead of a grid.
    #[arg(long)]
    pub walls: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct NibmArgs {
    #[arg(long, default_value_t = 2)]
    pub nf: usize,
    #[arg(long, default_value_t = 6)]
    pub t: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Skip the exact column.
    #[arg(long)]
    pub no_exact: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    #[arg(long, value_enum, default_value_t = Model::Selberg)]
    pub model: Model,
    /// Truncation order of the Selberg expansion (odd).
    #[arg(long, default_value_t = 161)]
    pub order: usize,
    #[arg(long, default_value_t = 2)]
    pub range: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }
    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Validation(String),
    /// Numerical failure: exit code 1.
    Numerical(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) | Error::OutOfRange { .. } | Error::SizeGuard(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

fn weight_for(m: &ModelArgs) -> CliResult<WeightFunction> {
    Ok(match m.model {
        Model::Zero => WeightFunction::one(),
        Model::Gw => WeightFunction::gw(m.t),
        Model::Quadratic => WeightFunction::quadratic(m.t),
        Model::Selberg => WeightFunction::selberg(m.t),
        Model::Single => weight_expanded(&single(m.range, m.delta)?, m.t),
    })
}

fn single(range: usize, delta: f64) -> CliResult<CouplingVector> {
    if range == 0 {
        return Err(invalid("--range must be at least 1"));
    }
    Ok(CouplingVector::single(range, delta))
}

fn series_model(m: &ModelArgs) -> CliResult<SeriesModel> {
    Ok(match m.model {
        Model::Gw => SeriesModel::Gw,
        Model::Quadratic => SeriesModel::Quadratic,
        Model::Single => {
            single(m.range, m.delta)?;
            SeriesModel::Single { n: m.range, delta: m.delta }
        }
        Model::Zero => SeriesModel::General(CouplingVector::zero()),
        Model::Selberg => return Err(invalid("the series route has no Selberg model; use --method selberg")),
    })
}

fn domain_for(m: &ModelArgs) -> CliResult<Domain> {
    Ok(match m.n {
        None => Domain::Continuous,
        Some(n) => Domain::Discrete(DiscreteDomain::new(n, num_complex_polar(m.angle))?),
    })
}

fn num_complex_polar(angle: f64) -> num_complex::Complex64 {
    num_complex::Complex64::from_polar(1.0, angle)
}

fn check_model(m: &ModelArgs) -> CliResult<()> {
    if m.nf == 0 {
        return Err(invalid("--nf must be positive"));
    }
    if !m.t.is_finite() || m.t < 0.0 {
        return Err(invalid("--t must be a nonnegative number"));
    }
    Ok(())
}

fn parse_partition(s: &str) -> CliResult<Partition> {
    Partition::parse(s).map_err(CliError::from)
}

fn zfun(a: &ZfunArgs) -> CliResult<Table> {
    let m = &a.model;
    check_model(m)?;
    let mut t = Table::new(&["method", "value", "ln_abs", "rel_gap"]);
    let mut reference = None;
    for &method in &a.method {
        let v: f64 = match method {
            Method::Toeplitz => {
                toeplitz_minor_det(&weight_for(m)?, m.nf, &Partition::empty(), &Partition::empty(), &domain_for(m)?)?.value()
            }
            Method::Selberg => {
                if m.model != Model::Selberg || m.n.is_some() {
                    return Err(invalid("the Selberg closed form needs --model selberg on the continuous chain"));
                }
                z_selberg(m.t, m.nf)?.value()
            }
            Method::Series => {
                if m.n.is_some() {
                    return Err(invalid("the series route is for the continuous chain"));
                }
                z_series(&series_model(m)?, m.t, m.nf, a.cutoff)?.value.value()
            }
            Method::Fredholm => {
                let f = weight_for(m)?;
                match (m.n, m.model) {
                    (Some(n), _) => z_discrete_via_fd(&f, m.nf, &DiscreteDomain::new(n, num_complex_polar(m.angle))?)?,
                    (None, Model::Gw) => {
                        (m.t * m.t).exp() * fredholm_det_indexed(&BesselKernel { t: m.t, start: m.nf as i64 })?.value
                    }
                    (None, _) => {
                        let g = ContourKernel::new(&f, 0.5, m.nf as i64)?;
                        let pref = (m.nf as f64 * f.log_constant() + f.log_szego_constant()).exp();
                        pref * fredholm_det_indexed(&g)?.value
                    }
                }
            }
            Method::Heine => {
                let e = Partition::empty();
                heine_szego_oracle(&weight_for(m)?, m.nf, &domain_for(m)?, &e, &e)?.re
            }
        };
        let r = *reference.get_or_insert(v);
        let gap = if r == 0.0 { (v - r).abs() } else { (v - r).abs() / r.abs() };
        t.push(vec![format!("{method:?}").to_lowercase().as_str().into(), v.into(), v.abs().ln().into(), gap.into()]);
    }
    Ok(t)
}

fn corr(a: &CorrArgs) -> CliResult<Table> {
    let m = &a.model;
    check_model(m)?;
    let lambda = parse_partition(&a.lambda)?;
    let mu = a.mu.as_deref().map(parse_partition).transpose()?;
    let mu_or_empty = mu.clone().unwrap_or_default();
    let mut t = Table::new(&["method", "value", "rel_gap"]);
    let mut reference = None;
    for &method in &a.method {
        let v: f64 = match method {
            Method::Toeplitz => toeplitz_minor_det(&weight_for(m)?, m.nf, &lambda, &mu_or_empty, &domain_for(m)?)?.value(),
            Method::Heine => heine_szego_oracle(&weight_for(m)?, m.nf, &domain_for(m)?, &lambda, &mu_or_empty)?.re,
            Method::Series => {
                if m.n.is_some() {
                    return Err(invalid("the series route is for the continuous chain"));
                }
                let route = match a.route {
                    Route::Cauchy => SeriesRoute::Cauchy,
                    Route::Termwise => SeriesRoute::Termwise,
                };
                c_series(&series_model(m)?, &lambda, mu.as_ref(), m.t, m.nf, a.cutoff, route)?.value.value()
            }
            Method::Selberg => {
                if m.model != Model::Selberg || mu.is_some() || m.n.is_some() {
                    return Err(invalid("the Selberg closed form covers starred correlators of --model selberg only"));
                }
                c_star_selberg(&lambda, m.t, m.nf)?.value()
            }
            Method::Fredholm => return Err(invalid("correlators have no Fredholm route")),
        };
        let r = *reference.get_or_insert(v);
        let gap = if r == 0.0 { (v - r).abs() } else { (v - r).abs() / r.abs() };
        t.push(vec![format!("{method:?}").to_lowercase().as_str().into(), v.into(), gap.into()]);
    }
    Ok(t)
}

fn grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) {
        return Err(invalid("grid needs step > 0 and max >= min"));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| min + step * i as f64).collect())
}

fn linspace(min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if steps == 0 || !(max >= min) {
        return Err(invalid("grid needs at least one step and max >= min"));
    }
    Ok((0..=steps).map(|i| min + (max - min) * i as f64 / steps as f64).collect())
}

fn tw(a: &TwArgs) -> CliResult<Table> {
    let mut t = Table::new(&["x", "F", "ln_sf_right_tail", "ln_F_left_tail"]);
    for x in grid(a.xmin, a.xmax, a.step)? {
        let f = tracy_widom_cdf(x)?;
        let right = tw_tail_log(x, TailSide::Right).ok();
        let left = tw_tail_log(x, TailSide::Left).ok();
        t.push(vec![x.into(), f.into(), right.into(), left.into()]);
    }
    Ok(t)
}

fn fe_row(t: &mut Table, tau: f64, y: f64, r: FreeEnergyResult) {
    t.push(vec![tau.into(), y.into(), r.value.into(), r.branch.into(), r.wall_distance.into()]);
}

fn phase(a: &PhaseArgs) -> CliResult<Table> {
    if a.walls {
        let model = match a.model {
            PhaseModel::GwTw | PhaseModel::GwExact | PhaseModel::GwFromTw => WallModel::GwInfinite,
            PhaseModel::GwFinite => WallModel::GwFinite,
            PhaseModel::Selberg | PhaseModel::SelbergFromTw => WallModel::Selberg,
            PhaseModel::Quadratic | PhaseModel::Zero => return Err(invalid("this model has no wall curves in the (tau, n_inv) plane")),
        };
        let mut t = Table::new(&["curve", "order", "solid", "tau", "n_inv"]);
        for c in wall_curves(model, a.tau_max, a.tau_steps) {
            for (x, y) in &c.points {
                t.push(vec![c.label.into(), (c.order as usize).into(), Cell::Bool(c.solid), (*x).into(), (*y).into()]);
            }
        }
        return Ok(t);
    }
    if a.model == PhaseModel::Quadratic {
        let mut t = Table::new(&["lambda", "F", "branch", "wall_distance"]);
        for l in linspace(a.ninv_min, a.ninv_max, a.ninv_steps)? {
            let r = fe_quadratic_finite(l, a.cap)?;
            t.push(vec![l.into(), r.value.into(), r.branch.into(), r.wall_distance.into()]);
        }
        return Ok(t);
    }
    let taus = linspace(a.tau_min, a.tau_max, a.tau_steps)?;
    let ys = linspace(a.ninv_min, a.ninv_max, a.ninv_steps)?;
    let mut t = Table::new(&["tau", "n_inv", "F", "branch", "wall_distance"]);
    for &tau in &taus {
        for &y in &ys {
            let p = PhasePoint::new(tau, y)?;
            let r = match a.model {
                PhaseModel::GwTw => fe_gw_tw(tau),
                PhaseModel::GwExact => fe_gw_exact(tau),
                PhaseModel::GwFinite => fe_gw_finite(p),
                PhaseModel::Selberg => fe_selberg_finite(p)?,
                PhaseModel::Zero => fe_zero(p),
                PhaseModel::GwFromTw => fe_from_tw(TwModel::Gw, p, a.nf)?,
                PhaseModel::SelbergFromTw => fe_from_tw(TwModel::Selberg, p, a.nf)?,
                PhaseModel::Quadratic => unreachable!(),
            };
            fe_row(&mut t, tau, y, r);
        }
    }
    Ok(t)
}

fn nibm(a: &NibmArgs, seed: u64) -> CliResult<Table> {
    let est = width_cdf_mc(a.nf, a.t, a.samples, seed)?;
    let mut t = Table::new(&["n", "threshold", "empirical", "sigma", "wilson_lo", "wilson_hi", "exact"]);
    for (e, n) in est.iter().zip(thresholds(a.nf, a.t)) {
        let exact = if a.no_exact { None } else { Some(width_cdf_exact(a.nf, a.t, n)?) };
        t.push(vec![n.into(), (2 * n).into(), e.estimate.into(), e.sigma.into(), e.wilson_lo.into(), e.wilson_hi.into(), exact.into()]);
    }
    Ok(t)
}

fn expand(a: &ExpandArgs) -> CliResult<Table> {
    let cv = match a.model {
        Model::Selberg => {
            if a.order == 0 || a.order % 2 == 0 {
                return Err(invalid("--order must be odd and positive"));
            }
            selberg_couplings(a.order)
        }
        Model::Gw => CouplingVector::gw(),
        Model::Quadratic => CouplingVector::quadratic(),
        Model::Single => single(a.range, a.delta)?,
        Model::Zero => CouplingVector::zero(),
    };
    let mut t = Table::new(&["m", "delta"]);
    for (i, d) in cv.deltas().iter().enumerate() {
        t.push(vec![(i + 1).into(), (*d).into()]);
    }
    Ok(t)
}

fn validate() -> (Table, bool) {
    let results = run_all();
    let mut t = Table::new(&["id", "title", "passed", "detail"]);
    for r in &results {
        eprintln!("{r}");
        t.push(vec![(r.id as usize).into(), r.title.into(), Cell::Bool(r.passed), r.detail.as_str().into()]);
    }
    (t, results.iter().all(|r| r.passed))
}

fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Float(v) => format_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => csv_field(s),
        Cell::Bool(b) => b.to_string(),
        Cell::Missing => String::new(),
    }
}

fn json_cell(c: &Cell) -> serde_json::Value {
    match c {
        Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, serde_json::Value::Number),
        Cell::Int(v) => (*v).into(),
        Cell::Text(s) => s.clone().into(),
        Cell::Bool(b) => (*b).into(),
        Cell::Missing => serde_json::Value::Null,
    }
}

/// Serialises a table with its metadata header.
pub fn emit(table: &Table, format: Format, config: &serde_json::Value, seed: u64) -> String {
    let version = env!("CARGO_PKG_VERSION");
    match format {
        Format::Csv => {
            let mut out = format!("# xx0 {version}\n# config: {config}\n# seed: {seed}\n");
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                out.push_str(&row.iter().map(csv_cell).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({
                "meta": { "tool": "xx0", "version": version, "config": config, "seed": seed },
                "columns": table.columns,
                "rows": table.rows.iter().map(|r| r.iter().map(json_cell).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
            s.push('\n');
            s
        }
    }
}

/// Runs one job and writes its output. Returns the process exit code.
pub fn run(cli: &Cli) -> CliResult<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(invalid("--threads must be positive"));
        }
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (table, code) = match &cli.command {
        Command::Zfun(a) => (zfun(a)?, 0),
        Command::Corr(a) => (corr(a)?, 0),
        Command::Tw(a) => (tw(a)?, 0),
        Command::Phase(a) => (phase(a)?, 0),
        Command::Nibm(a) => (nibm(a, cli.seed)?, 0),
        Command::Expand(a) => (expand(a)?, 0),
        Command::Validate => {
            let (t, ok) = validate();
            (t, if ok { 0 } else { 1 })
        }
    };
    let config = serde_json::to_value(cli).expect("serialisable config");
    let text = emit(&table, cli.format, &config, cli.seed);
    if cli.output == "-" {
        std::io::stdout().lock().write_all(text.as_bytes())?;
    } else {
        std::fs::write(&cli.output, text)?;
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["a", "b"]);
        let s = emit(&t, Format::Csv, &serde_json::json!({}), 3);
        let body: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["a,b"]);
        assert!(s.contains("# seed: 3"));
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("x\"y"), "\"x\"\"y\"");
    }

    #[test]
    fn json_has_meta() {
        let mut t = Table::new(&["x"]);
        t.push(vec![Cell::Missing]);
        let s = emit(&t, Format::Json, &serde_json::json!({"k": 1}), 9);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["meta"]["seed"], 9);
        assert!(v["rows"][0][0].is_null());
    }

    #[test]
    fn grids() {
        assert_eq!(grid(-8.0, 4.0, 0.25).unwrap().len(), 49);
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert_eq!(linspace(0.0, 1.0, 4).unwrap().len(), 5);
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::Invalid("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(Error::Singular("x".into())).exit_code(), 1);
    }
}
