//! Command-line front end. [`run`] parses arguments, validates every input
//! before producing output, and maps errors to exit codes (1 domain, 2 numeric).

use crate::analysis::{self, DEFAULT_BINS, DEFAULT_GRID_POINTS};
use crate::edgeworth::{dimension_for, ell_from_factor, goe_correction, CorrectedLaw, EdgeworthApprox, GammaMode, GoeParams, SpikeParams};
use crate::error::{Error, Result};
use crate::grid::parse_grid;
use crate::identities::identity_suite;
use crate::simulation::{format_float, goe_monte_carlo, monte_carlo, Method, SampleSet, SimConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "spiked-edgeworth", version, about = "Edgeworth-corrected law of the largest eigenvalue of a rank-one spiked covariance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate p₁, the corrected CDF and density at points or on a grid
    Approx {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Use the limiting ratio γ in the correction polynomial
        #[arg(long)]
        limit_gamma: Option<f64>,
        /// Clamp the corrected CDF to [0, 1]
        #[arg(long)]
        clamp: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Corrected quantiles F_E⁻¹(u)
    Quantile {
        #[command(flatten)]
        model: ModelArgs,
        /// Probability levels in (0, 1)
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
        #[arg(long)]
        limit_gamma: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo replicates of the largest eigenvalue
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Goodness of fit of a saved sample set against both laws
    Compare {
        /// Sample CSV; its JSON sidecar is read from the same path with a .json extension
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        model: OptionalModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residuals of the exact identities at (ℓ, γ)
    CheckIdentities {
        #[arg(long, allow_negative_numbers = true)]
        ell: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rank-one perturbation of a GOE matrix: correction table, or a Monte Carlo fit with --replicates
    Goe {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "SPIKED_EDGEWORTH_WORKERS")]
        workers: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Density and histogram tables for re-drawing the comparison figures
    Figure {
        #[command(flatten)]
        model: OptionalModelArgs,
        /// Use saved samples instead of simulating
        #[arg(long)]
        input: Option<PathBuf>,
        /// All n ∈ {50, 100} × γ ∈ {0.1, 1} settings, for each --ell-factor (default 0.3 and 0.5)
        #[arg(long)]
        paper_settings: bool,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// Explicit density grid lo:hi:step on the eigenvalue scale
        #[arg(long)]
        grid: Option<String>,
        /// Output directory
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    rest: ShapeArgs,
}

#[derive(Debug, Args)]
struct OptionalModelArgs {
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    rest: ShapeArgs,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Aspect ratio; p = round(γ n)
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Dimension; overrides --gamma, which must then agree up to rounding
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, conflicts_with = "ell_factor", allow_negative_numbers = true)]
    ell: Option<f64>,
    /// ℓ = (1 + f)(1 + √γ_n); repeatable for `figure --paper-settings`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ell_factor: Vec<f64>,
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Standardized evaluation points
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "grid")]
    x: Vec<f64>,
    /// Grid lo:hi:step of standardized points
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Secular)]
    method: Method,
    /// Worker threads (default: available CPUs)
    #[arg(long, env = "SPIKED_EDGEWORTH_WORKERS")]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

fn resolve_p(n: usize, shape: &ShapeArgs) -> Result<usize> {
    match (shape.p, shape.gamma) {
        (Some(p), Some(gamma)) => {
            let implied = dimension_for(gamma, n)?;
            if implied != p {
                return Err(Error::domain(format!(
                    "--p {p} and --gamma {gamma} disagree: round(gamma * n) = {implied}"
                )));
            }
            Ok(p)
        }
        (Some(p), None) => Ok(p),
        (None, Some(gamma)) => dimension_for(gamma, n),
        (None, None) => Err(Error::domain("one of --gamma or --p is required")),
    }
}

fn resolve_ells(n: usize, p: usize, shape: &ShapeArgs) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("--n must be positive"));
    }
    match (shape.ell, shape.ell_factor.as_slice()) {
        (Some(ell), []) => Ok(vec![ell]),
        (None, []) => Err(Error::domain("one of --ell or --ell-factor is required")),
        (None, factors) => Ok(factors.iter().map(|&f| ell_from_factor(f, p as f64 / n as f64)).collect()),
        (Some(_), _) => Err(Error::domain("--ell and --ell-factor are mutually exclusive")),
    }
}

fn resolve_params(n: usize, shape: &ShapeArgs) -> Result<SpikeParams> {
    let p = resolve_p(n, shape)?;
    let ells = resolve_ells(n, p, shape)?;
    if ells.len() != 1 {
        return Err(Error::domain("exactly one --ell-factor value is allowed here"));
    }
    SpikeParams::new(ells[0], n, p)
}

fn mode(limit_gamma: Option<f64>) -> Result<GammaMode> {
    match limit_gamma {
        None => Ok(GammaMode::FiniteGammaN),
        Some(g) if g.is_finite() && g >= 0.0 => Ok(GammaMode::LimitGamma(g)),
        Some(g) => Err(Error::domain(format!("--limit-gamma must be non-negative, got {g}"))),
    }
}

fn points(args: &PointArgs) -> Result<Vec<f64>> {
    let xs = match &args.grid {
        Some(g) => parse_grid(g)?,
        None if args.x.is_empty() => vec![0.0],
        None => args.x.clone(),
    };
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("evaluation points must be finite"));
    }
    Ok(xs)
}

fn workers(w: Option<usize>) -> usize {
    w.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn echo(stderr: &mut dyn Write, params: &SpikeParams, seed: Option<u64>) {
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    let _ = writeln!(
        stderr,
        "effective: n={} p={} gamma_n={} ell={} seed={}",
        params.n(),
        params.p(),
        format_float(params.gamma_n()),
        format_float(params.ell()),
        seed
    );
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn params_json(params: &SpikeParams, mode: GammaMode) -> Value {
    json!({
        "n": params.n(),
        "p": params.p(),
        "gamma_n": num(params.gamma_n()),
        "ell": num(params.ell()),
        "mode": mode,
    })
}

/// Rows of numbers rendered as CSV or as a JSON document with a `rows` array.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self, meta: Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.header.iter().zip(row).map(|(h, &v)| (h.to_string(), num(v))).collect()))
            .collect();
        let mut doc = meta;
        doc["rows"] = Value::Array(rows);
        pretty(&doc)
    }

    fn render(&self, format: Format, meta: Value) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(meta),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn emit(out: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn law_table(law: &CorrectedLaw, xs: &[f64], clamp: bool) -> Table {
    Table {
        header: vec!["x", "p1", "cdf", "density", "y", "rescaled_density"],
        rows: xs
            .iter()
            .map(|&x| {
                let cdf = if clamp { law.cdf_clamped(x) } else { law.cdf(x) };
                let y = law.destandardize(x);
                vec![x, law.p1(x), cdf, law.density(x), y, law.rescaled_density(y)]
            })
            .collect(),
    }
}

fn cmd_approx(model: &ModelArgs, pts: &PointArgs, limit: Option<f64>, clamp: bool, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let params = resolve_params(model.n, &model.rest)?;
    let mode = mode(limit)?;
    let xs = points(pts)?;
    let approx = EdgeworthApprox::new(&params, mode)?;
    echo(stderr, &params, None);
    let mut meta = json!({ "params": params_json(&params, mode) });
    meta["rho_n"] = num(approx.rho);
    meta["sigma_n"] = num(approx.sigma);
    meta["alpha2"] = num(approx.alpha2);
    meta["alpha0"] = num(approx.alpha0);
    meta["validity_index"] = num(approx.validity_index());
    let text = law_table(&approx.law(), &xs, clamp).render(out.format, meta);
    emit(out, &text, stdout)
}

fn cmd_quantile(model: &ModelArgs, us: &[f64], limit: Option<f64>, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let params = resolve_params(model.n, &model.rest)?;
    let mode = mode(limit)?;
    let approx = EdgeworthApprox::new(&params, mode)?;
    let rows = us
        .iter()
        .map(|&u| {
            let x = approx.quantile(u)?;
            Ok(vec![u, x, approx.law().destandardize(x)])
        })
        .collect::<Result<Vec<_>>>()?;
    echo(stderr, &params, None);
    let table = Table { header: vec!["u", "x", "ell_hat"], rows };
    let text = table.render(out.format, json!({ "params": params_json(&params, mode) }));
    emit(out, &text, stdout)
}

fn sim_config(params: SpikeParams, mc: &McArgs) -> Result<SimConfig> {
    SimConfig::new(params, mc.replicates, mc.seed, mc.method)?.with_workers(workers(mc.workers))
}

fn sample_json(set: &SampleSet) -> String {
    let rows: Vec<Value> = set
        .replicates()
        .iter()
        .map(|r| json!({ "replicate_index": r.replicate_index, "ell_hat": num(r.ell_hat), "r_n": num(r.r_n) }))
        .collect();
    pretty(&json!({ "meta": set.meta(), "replicates": rows }))
}

fn cmd_simulate(model: &ModelArgs, mc: &McArgs, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let params = resolve_params(model.n, &model.rest)?;
    let config = sim_config(params, mc)?;
    echo(stderr, &params, Some(mc.seed));
    let set = monte_carlo(&config)?;
    match (&out.output, out.format) {
        (Some(path), Format::Csv) => {
            let sidecar = set.write_files(path)?;
            let _ = writeln!(stderr, "wrote {} and {}", path.display(), sidecar.display());
        }
        (Some(path), Format::Json) => std::fs::write(path, sample_json(&set))?,
        (None, Format::Csv) => stdout.write_all(set.to_csv().as_bytes())?,
        (None, Format::Json) => stdout.write_all(sample_json(&set).as_bytes())?,
    }
    Ok(())
}

fn check_against(shape: &OptionalModelArgs, params: &SpikeParams) -> Result<()> {
    let given = shape.n.is_some() || shape.rest.gamma.is_some() || shape.rest.p.is_some() || shape.rest.ell.is_some() || !shape.rest.ell_factor.is_empty();
    if !given {
        return Ok(());
    }
    let n = shape.n.unwrap_or(params.n());
    let mut rest = ShapeArgs { gamma: shape.rest.gamma, p: shape.rest.p, ell: shape.rest.ell, ell_factor: shape.rest.ell_factor.clone() };
    if rest.gamma.is_none() && rest.p.is_none() {
        rest.p = Some(params.p());
    }
    if rest.ell.is_none() && rest.ell_factor.is_empty() {
        rest.ell = Some(params.ell());
    }
    let requested = resolve_params(n, &rest)?;
    let same = requested.n() == params.n() && requested.p() == params.p() && (requested.ell() - params.ell()).abs() <= 1e-12 * params.ell();
    if same {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "requested parameters (n = {}, p = {}, ell = {}) do not match the sample metadata (n = {}, p = {}, ell = {})",
            requested.n(),
            requested.p(),
            requested.ell(),
            params.n(),
            params.p(),
            params.ell()
        )))
    }
}

fn cmd_compare(input: &Path, model: &OptionalModelArgs, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let set = SampleSet::read_files(input)?;
    let params = set.meta().params()?;
    check_against(model, &params)?;
    let report = analysis::compare(&set, &params)?;
    echo(stderr, &params, Some(set.meta().seed));
    let text = match out.format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => {
            let v = serde_json::to_value(&report).expect("report serializes");
            let mut s = String::from("field,value\n");
            for (k, val) in v.as_object().expect("report is an object") {
                if let Some(x) = val.as_f64().filter(|_| val.is_f64()) {
                    s.push_str(&format!("{k},{}\n", format_float(x)));
                } else if !val.is_object() {
                    s.push_str(&format!("{k},{val}\n"));
                }
            }
            s
        }
    };
    emit(out, &text, stdout)
}

fn cmd_identities(ell: f64, gamma: f64, n: usize, tol: f64, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(format!("--tol must be positive, got {tol}")));
    }
    if n == 0 {
        return Err(Error::domain("--n must be positive"));
    }
    let checks = identity_suite(ell, gamma, n)?;
    let _ = writeln!(stderr, "effective: n={n} gamma={} ell={} seed=none", format_float(gamma), format_float(ell));
    let failed: Vec<&str> = checks.iter().filter(|c| !(c.residual <= tol)).map(|c| c.name).collect();
    let text = match out.format {
        Format::Csv => {
            let mut s = String::from("identity,value,reference,residual,pass\n");
            for c in &checks {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.name,
                    format_float(c.value),
                    format_float(c.reference),
                    format_float(c.residual),
                    c.residual <= tol
                ));
            }
            s
        }
        Format::Json => pretty(&json!({ "ell": num(ell), "gamma": num(gamma), "n": n, "tol": num(tol), "checks": checks })),
    };
    emit(out, &text, stdout)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::numeric(format!("identities above tolerance {tol}: {}", failed.join(", "))))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_goe(theta: f64, p: usize, pts: &PointArgs, replicates: Option<usize>, seed: u64, w: Option<usize>, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let params = GoeParams::new(theta, p)?;
    let corr = goe_correction(params);
    let xs = points(pts)?;
    if replicates == Some(0) {
        return Err(Error::domain("--replicates must be at least 1"));
    }
    let _ = writeln!(stderr, "effective: p={p} theta={} seed={seed}", format_float(theta));
    let meta = json!({
        "theta": num(theta), "p": p, "rho": num(corr.rho), "sigma": num(corr.sigma),
        "alpha2": num(corr.alpha2), "alpha0": num(corr.alpha0),
    });
    let text = match replicates {
        None => law_table(&corr.law(), &xs, false).render(out.format, meta),
        Some(r) => {
            let samples = goe_monte_carlo(params, r, seed, workers(w))?;
            let report = analysis::compare_goe(&samples)?;
            match out.format {
                Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
                Format::Csv => {
                    let mut s = String::from("replicate_index,theta_hat,r_p\n");
                    for (i, (t, r)) in samples.theta_hat.iter().zip(&samples.r_p).enumerate() {
                        s.push_str(&format!("{i},{},{}\n", format_float(*t), format_float(*r)));
                    }
                    let _ = writeln!(stderr, "{}", serde_json::to_string(&report).expect("report serializes"));
                    s
                }
            }
        }
    };
    emit(out, &text, stdout)
}

struct FigureJob {
    label: String,
    params: SpikeParams,
    samples: Option<SampleSet>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_figure(
    model: &OptionalModelArgs,
    input: Option<&Path>,
    paper: bool,
    mc: &McArgs,
    bins: usize,
    grid_points: usize,
    grid: Option<&str>,
    output: &Path,
    stderr: &mut dyn Write,
) -> Result<()> {
    let grid = grid.map(parse_grid).transpose()?;
    if bins < 10 {
        return Err(Error::domain(format!("--bins must be at least 10, got {bins}")));
    }
    if grid.is_none() && grid_points < 100 {
        return Err(Error::domain(format!("--grid-points must be at least 100, got {grid_points}")));
    }
    let mut jobs = Vec::new();
    if let Some(path) = input {
        if paper {
            return Err(Error::domain("--input and --paper-settings are mutually exclusive"));
        }
        let set = SampleSet::read_files(path)?;
        let params = set.meta().params()?;
        check_against(model, &params)?;
        jobs.push(FigureJob { label: "figure".into(), params, samples: Some(set) });
    } else if paper {
        if model.n.is_some() || model.rest.gamma.is_some() || model.rest.p.is_some() || model.rest.ell.is_some() {
            return Err(Error::domain("--paper-settings fixes n and gamma; only --ell-factor may be given"));
        }
        let factors = if model.rest.ell_factor.is_empty() { vec![0.3, 0.5] } else { model.rest.ell_factor.clone() };
        for &f in &factors {
            for n in [50usize, 100] {
                for gamma in [0.1, 1.0] {
                    let p = dimension_for(gamma, n)?;
                    let params = SpikeParams::new(ell_from_factor(f, p as f64 / n as f64), n, p)?;
                    jobs.push(FigureJob { label: format!("ellf{f}_n{n}_gamma{gamma}"), params, samples: None });
                }
            }
        }
    } else {
        let n = model.n.ok_or_else(|| Error::domain("--n is required unless --input or --paper-settings is given"))?;
        let params = resolve_params(n, &model.rest)?;
        jobs.push(FigureJob { label: "figure".into(), params, samples: None });
    }
    for job in &jobs {
        if job.samples.is_none() {
            sim_config(job.params, mc)?;
        }
    }
    std::fs::create_dir_all(output)?;
    for job in jobs {
        let set = match job.samples {
            Some(s) => s,
            None => monte_carlo(&sim_config(job.params, mc)?)?,
        };
        echo(stderr, &job.params, Some(set.meta().seed));
        let fig = match &grid {
            Some(g) => analysis::figure_data_on_grid(&set, &job.params, bins, g.clone())?,
            None => analysis::figure_data(&set, &job.params, bins, grid_points)?,
        };
        std::fs::write(output.join(format!("{}_density.csv", job.label)), fig.density_csv())?;
        std::fs::write(output.join(format!("{}_histogram.csv", job.label)), fig.histogram_csv())?;
        std::fs::write(output.join(format!("{}_meta.json", job.label)), fig.metadata_json())?;
    }
    Ok(())
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Approx { model, points, limit_gamma, clamp, out } => cmd_approx(&model, &points, limit_gamma, clamp, &out, stdout, stderr),
        Command::Quantile { model, u, limit_gamma, out } => cmd_quantile(&model, &u, limit_gamma, &out, stdout, stderr),
        Command::Simulate { model, mc, out } => cmd_simulate(&model, &mc, &out, stdout, stderr),
        Command::Compare { input, model, out } => cmd_compare(&input, &model, &out, stdout, stderr),
        Command::CheckIdentities { ell, gamma, n, tol, out } => cmd_identities(ell, gamma, n, tol, &out, stdout, stderr),
        Command::Goe { theta, p, points, replicates, seed, workers, out } => cmd_goe(theta, p, &points, replicates, seed, workers, &out, stdout, stderr),
        Command::Figure { model, input, paper_settings, mc, bins, grid_points, grid, output } => {
            cmd_figure(&model, input.as_deref(), paper_settings, &mc, bins, grid_points, grid.as_deref(), &output, stderr)
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
