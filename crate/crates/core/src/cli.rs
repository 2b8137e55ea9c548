//! The `htjack` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cumulants::{moments_from_cumulants, CumulantVector, MomentVector};
use crate::density::{density_for, CrystalDensity, DEFAULT_MASS_TOL};
use crate::error::{Error, Result};
use crate::exactseries::{format_rational, parse_rational, Rational};
use crate::rtransform::{
    equivalence_report, family_cumulants, transform_cumulants, transform_moments, EnsembleSpec,
};
use crate::sampler::{histogram, mcmc_run, read_samples_csv, write_samples_csv, ChainConfig, McmcOutput};
use crate::shiftedjack::{gamma_product_check, qstar_row, qstar_rows, RowQStarInput};
use crate::spectra::{
    find_roots, interlacing_violations, leading_bound, spectrum_root_agreement, top_truncated_eigs,
    JacobiOperator, DEFAULT_TOL,
};
use crate::svg::Overlay;

pub const THREADS_ENV: &str = "HTJACK_THREADS";

#[derive(Debug, Parser)]
#[command(name = "htjack", version, about = "High-temperature limits of discrete beta-ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Planch,
    Alpha,
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Paths,
    Transform,
    Both,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, Default, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, value_parser = rational_arg)]
    gamma: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    eta: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    c: Option<Rational>,
    #[arg(long = "M")]
    m: Option<u32>,
}

impl FamilyArgs {
    fn is_empty(&self) -> bool {
        self.family.is_none() && self.eta.is_none() && self.c.is_none() && self.m.is_none()
    }

    fn spec(&self) -> Result<EnsembleSpec> {
        let family = self
            .family
            .ok_or_else(|| Error::Parameter("--family is required".into()))?;
        let need = |v: &Option<Rational>, name: &str| {
            v.clone()
                .ok_or_else(|| Error::Parameter(format!("--{name} is required for this family")))
        };
        let reject = |present: bool, name: &str| {
            if present {
                Err(Error::Parameter(format!("--{name} does not apply to this family")))
            } else {
                Ok(())
            }
        };
        let gamma = need(&self.gamma, "gamma")?;
        match family {
            FamilyArg::Planch => {
                reject(self.c.is_some(), "c")?;
                reject(self.m.is_some(), "M")?;
                EnsembleSpec::planch(gamma, need(&self.eta, "eta")?)
            }
            FamilyArg::Alpha => {
                reject(self.m.is_some(), "M")?;
                EnsembleSpec::alpha(gamma, need(&self.c, "c")?, need(&self.eta, "eta")?)
            }
            FamilyArg::Beta => {
                reject(self.eta.is_some(), "eta")?;
                let m = self
                    .m
                    .ok_or_else(|| Error::Parameter("--M is required for this family".into()))?;
                EnsembleSpec::beta(gamma, need(&self.c, "c")?, m)
            }
        }
    }
}

#[derive(Clone, Debug, Args)]
struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact moments of a family or of explicit cumulants.
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        /// Explicit cumulants κ₁,κ₂,… (used with --gamma instead of --family).
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        kappa: Vec<Rational>,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Method::Transform)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cumulants of a family, or recovered from explicit moments.
    Cumulants {
        #[command(flatten)]
        family: FamilyArgs,
        /// Explicit moments m₁,m₂,… (used with --gamma instead of --family).
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        moments: Vec<Rational>,
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compares path-sum and functional-equation moments.
    CheckEquivalence {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        kappa: Vec<Rational>,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One-row shifted Jack values Q*₍ₖ₎(x; θ) for k = 0..=K.
    Qstar {
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required = true)]
        x: Vec<Rational>,
        #[arg(long, value_parser = rational_arg)]
        theta: Rational,
        #[arg(long)]
        k: usize,
        /// Sum over index tuples instead of the recursion.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Partial sums of Q* against the gamma-function product.
    CheckGammaProduct {
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required = true)]
        x: Vec<Rational>,
        #[arg(long, value_parser = rational_arg)]
        theta: Rational,
        #[arg(long, value_parser = rational_arg)]
        z: Rational,
        #[arg(long, default_value_t = 40)]
        k_max: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Largest zeros of the characteristic function.
    Roots {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Top eigenvalues of a truncated Jacobi operator.
    Eigs {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Truncation size (ignored for beta, which is finite).
        #[arg(long, default_value_t = 1000)]
        trunc: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Zeros vs truncated eigenvalues along a truncation ladder, plus interlacing.
    VerifySpectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,4000")]
        trunc: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Crystallized limit density.
    Density {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_MASS_TOL)]
        mass_tol: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Grid points for CSV output.
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Metropolis sampling of a pure Jack measure; writes shifted positions as CSV.
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "N")]
        n: usize,
        /// Defaults to γ/N.
        #[arg(long, value_parser = rational_arg)]
        theta: Option<Rational>,
        #[arg(long)]
        sweeps: u64,
        /// Defaults to 20% of sweeps.
        #[arg(long)]
        burn_in: Option<u64>,
        /// Defaults to keeping about 1000 sweeps per chain.
        #[arg(long)]
        thin: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        chains: usize,
        /// Metropolis updates per sweep; defaults to N.
        #[arg(long)]
        updates_per_sweep: Option<usize>,
        /// Also write per-chain diagnostics (acceptance, log-weight trace) as JSON.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// KS distance between a density and samples, with an optional SVG overlay.
    Compare {
        #[arg(long)]
        density: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        bin_width: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Runs the γ = 2, η ∈ {1/2, 1}, N = 300 sampling-vs-density comparison end to end.
    ReproduceFigures {
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
        #[arg(long = "N", default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        sweeps: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        chains: usize,
        #[arg(long, default_value_t = 0.05)]
        bin_width: f64,
    },
}

impl Command {
    fn family_args(&self) -> Option<&FamilyArgs> {
        match self {
            Command::Moments { family, kappa, .. } | Command::CheckEquivalence { family, kappa, .. } => {
                kappa.is_empty().then_some(family)
            }
            Command::Cumulants { family, moments, .. } => moments.is_empty().then_some(family),
            Command::Roots { family, .. }
            | Command::Eigs { family, .. }
            | Command::VerifySpectrum { family, .. }
            | Command::Density { family, .. }
            | Command::Sample { family, .. } => Some(family),
            _ => None,
        }
    }
}

/// Parses `argv` and resolves the ensemble flags without running anything.
pub fn check_args<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(f) = cli.command.family_args() {
        f.spec()?;
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command, and returns the exit code:
/// 0 on success, 1 for invalid input, 2 when a computation fails.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let report = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{report}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Parse(_) | Error::Precondition(_) => 1,
        _ => 2,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parameter(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A second call in the same process (tests) finds the pool already built; that is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Writes `body` to `--out` or stdout.
fn emit(out: &OutArgs, body: &str) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, body)?,
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes())?;
            so.flush()?;
        }
    }
    Ok(())
}

fn csv_comment(config: &Value) -> String {
    format!("# config: {config}\n")
}

/// CSV text with the config as a leading `#` comment when written to a file.
fn csv_body(out: &OutArgs, config: &Value, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(header)?;
    for r in rows {
        wr.write_record(r)?;
    }
    let bytes = wr.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    Ok(if out.out.is_some() { csv_comment(config) + &text } else { text })
}

fn json_body<T: Serialize>(config: &Value, result: &T) -> Result<String> {
    let mut v = serde_json::to_value(result)?;
    match &mut v {
        Value::Object(map) => {
            map.insert("config".into(), config.clone());
        }
        other => {
            v = json!({ "config": config, "result": other.take() });
        }
    }
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn q(r: &Rational) -> String {
    format_rational(r)
}

fn qs(v: &[Rational]) -> Vec<String> {
    v.iter().map(q).collect()
}

/// Cumulants from `--family` or from `--kappa` with `--gamma`.
fn cumulant_source(family: &FamilyArgs, kappa: &[Rational], order: usize) -> Result<(CumulantVector, Value)> {
    if !kappa.is_empty() {
        if !family.is_empty() {
            return Err(Error::Parameter("--kappa cannot be combined with --family or family parameters".into()));
        }
        let gamma = family
            .gamma
            .clone()
            .ok_or_else(|| Error::Parameter("--kappa needs --gamma".into()))?;
        let config = json!({ "gamma": q(&gamma), "kappa": qs(kappa) });
        return Ok((CumulantVector::new(gamma, kappa.to_vec())?, config));
    }
    let spec = family.spec()?;
    let config = json!({ "spec": spec });
    Ok((family_cumulants(&spec, order), config))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Moments { family, kappa, order, method, format, out } => {
            let (kv, mut config) = cumulant_source(&family, &kappa, order)?;
            config["order"] = json!(order);
            config["method"] = json!(format!("{method:?}").to_lowercase());
            let paths = matches!(method, Method::Paths | Method::Both)
                .then(|| moments_from_cumulants(&kv, order))
                .transpose()?;
            let transform = matches!(method, Method::Transform | Method::Both)
                .then(|| transform_moments(&kv, order))
                .transpose()?;
            let cols: Vec<(&str, MomentVector)> = [("paths", paths), ("transform", transform)]
                .into_iter()
                .filter_map(|(n, m)| m.map(|m| (n, m)))
                .collect();
            match format {
                Format::Json => {
                    let mut result = serde_json::Map::new();
                    for (name, mv) in &cols {
                        result.insert((*name).into(), json!(qs(&mv.m)));
                    }
                    emit(&out, &json_body(&config, &Value::Object(result))?)
                }
                Format::Csv => {
                    let mut header = vec!["ell"];
                    header.extend(cols.iter().map(|(n, _)| *n));
                    let rows: Vec<Vec<String>> = (0..order)
                        .map(|i| {
                            let mut r = vec![(i + 1).to_string()];
                            r.extend(cols.iter().map(|(_, mv)| q(&mv.m[i])));
                            r
                        })
                        .collect();
                    emit(&out, &csv_body(&out, &config, &header, &rows)?)
                }
                Format::Svg => Err(Error::Parameter("moments has no SVG output".into())),
            }
        }
        Command::Cumulants { family, moments, order, format, out } => {
            let (kappa, gamma, config) = if !moments.is_empty() {
                if !family.is_empty() {
                    return Err(Error::Parameter("--moments cannot be combined with --family".into()));
                }
                let gamma = family
                    .gamma
                    .clone()
                    .ok_or_else(|| Error::Parameter("--moments needs --gamma".into()))?;
                let k = moments.len();
                let kv = transform_cumulants(&MomentVector::new(moments.clone()), &gamma, k)?;
                let config = json!({ "gamma": q(&gamma), "moments": qs(&moments) });
                (kv.kappa().to_vec(), gamma, config)
            } else {
                let spec = family.spec()?;
                let kv = family_cumulants(&spec, order);
                (kv.kappa().to_vec(), kv.gamma().clone(), json!({ "spec": spec, "order": order }))
            };
            match format {
                Format::Json => emit(&out, &json_body(&config, &json!({ "gamma": q(&gamma), "kappa": qs(&kappa) }))?),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = kappa
                        .iter()
                        .enumerate()
                        .map(|(i, k)| vec![(i + 1).to_string(), q(k)])
                        .collect();
                    emit(&out, &csv_body(&out, &config, &["n", "kappa"], &rows)?)
                }
                Format::Svg => Err(Error::Parameter("cumulants has no SVG output".into())),
            }
        }
        Command::CheckEquivalence { family, kappa, order, out } => {
            let (kv, mut config) = cumulant_source(&family, &kappa, order)?;
            config["order"] = json!(order);
            let report = equivalence_report(&kv, order)?;
            emit(&out, &json_body(&config, &report)?)?;
            match report.first_mismatch() {
                Some(row) => Err(Error::Mismatch {
                    ell: row.ell,
                    paths: q(&row.paths),
                    transform: q(&row.transform),
                }),
                None => Ok(()),
            }
        }
        Command::Qstar { x, theta, k, brute_force, format, out } => {
            let config = json!({ "x": qs(&x), "theta": q(&theta), "k": k, "brute_force": brute_force });
            let values = if brute_force {
                (0..=k)
                    .map(|j| qstar_row(&RowQStarInput::new(x.clone(), theta.clone(), j)?))
                    .collect::<Result<Vec<_>>>()?
            } else {
                RowQStarInput::new(x.clone(), theta.clone(), k)?;
                qstar_rows(&x, &theta, k)
            };
            match format {
                Format::Json => emit(&out, &json_body(&config, &json!({ "qstar": qs(&values) }))?),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| vec![j.to_string(), q(v)])
                        .collect();
                    emit(&out, &csv_body(&out, &config, &["k", "qstar"], &rows)?)
                }
                Format::Svg => Err(Error::Parameter("qstar has no SVG output".into())),
            }
        }
        Command::CheckGammaProduct { x, theta, z, k_max, tol, out } => {
            let config = json!({ "x": qs(&x), "theta": q(&theta), "z": q(&z), "k_max": k_max, "tol": tol });
            let report = gamma_product_check(&x, &theta, &z, k_max, tol)?;
            emit(&out, &json_body(&config, &report)?)?;
            if report.pass {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "partial sum misses the gamma product by {:e} (tolerance {tol:e})",
                    report.abs_err
                )))
            }
        }
        Command::Roots { family, count, tol, format, out } => {
            let spec = family.spec()?;
            let config = json!({ "spec": spec, "count": count, "tol": tol });
            let roots = find_roots(&spec, count, tol)?;
            match format {
                Format::Json => emit(&out, &json_body(&config, &roots)?),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = roots
                        .roots
                        .iter()
                        .enumerate()
                        .map(|(i, r)| vec![(i + 1).to_string(), r.to_string()])
                        .collect();
                    emit(&out, &csv_body(&out, &config, &["k", "root"], &rows)?)
                }
                Format::Svg => Err(Error::Parameter("roots has no SVG output".into())),
            }
        }
        Command::Eigs { family, count, trunc, format, out } => {
            let spec = family.spec()?;
            let op = JacobiOperator::new(spec.clone());
            let size = op.finite_size().unwrap_or(trunc);
            let config = json!({ "spec": spec, "count": count, "trunc": size });
            let eigs = top_truncated_eigs(&op, size, count)?;
            match format {
                Format::Json => emit(&out, &json_body(&config, &json!({ "eigenvalues": eigs }))?),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = eigs
                        .iter()
                        .enumerate()
                        .map(|(i, r)| vec![(i + 1).to_string(), r.to_string()])
                        .collect();
                    emit(&out, &csv_body(&out, &config, &["k", "eigenvalue"], &rows)?)
                }
                Format::Svg => Err(Error::Parameter("eigs has no SVG output".into())),
            }
        }
        Command::VerifySpectrum { family, count, trunc, tol, out } => {
            let spec = family.spec()?;
            let config = json!({ "spec": spec, "count": count, "trunc": trunc, "tol": tol });
            let report = spectrum_root_agreement(&spec, count, &trunc, tol)?;
            let violations = interlacing_violations(&report.roots, leading_bound(&spec), tol);
            let result = json!({ "agreement": report, "interlacing_violations": violations });
            emit(&out, &json_body(&config, &result)?)?;
            if violations.is_empty() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{} interlacing violations", violations.len())))
            }
        }
        Command::Density { family, mass_tol, tol, points, format, out } => {
            let spec = family.spec()?;
            let config = json!({ "spec": spec, "mass_tol": mass_tol, "tol": tol });
            let (roots, build) = density_for(&spec, mass_tol, tol)?;
            let d = &build.density;
            match format {
                Format::Json => emit(&out, &json_body(&config, d)?),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = d
                        .grid(points)
                        .into_iter()
                        .map(|(x, f)| vec![x.to_string(), f.to_string()])
                        .collect();
                    emit(&out, &csv_body(&out, &config, &["x", "f"], &rows)?)
                }
                Format::Svg => {
                    let overlay = Overlay {
                        title: format!("{} density, {} zeros", spec.family(), roots.roots.len()),
                        comment: Some(format!("config: {config}")),
                        density: Some(d),
                        bins: &[],
                    };
                    emit(&out, &overlay.render())
                }
            }
        }
        Command::Sample {
            family,
            n,
            theta,
            sweeps,
            burn_in,
            thin,
            seed,
            chains,
            updates_per_sweep,
            diagnostics,
            out,
        } => {
            let spec = family.spec()?;
            let mut cfg = ChainConfig::new(spec, n, sweeps, seed)?;
            if let Some(t) = theta {
                cfg.theta = t;
            }
            if let Some(b) = burn_in {
                cfg.burn_in = b;
                cfg.thin = (sweeps.saturating_sub(b) / 1000).max(1);
            }
            if let Some(t) = thin {
                cfg.thin = t;
            }
            if let Some(u) = updates_per_sweep {
                cfg.updates_per_sweep = u;
            }
            cfg.chains = chains;
            let output = mcmc_run(&cfg)?;
            let config = serde_json::to_value(&cfg)?;
            let mut body = if out.out.is_some() { csv_comment(&config).into_bytes() } else { Vec::new() };
            write_samples_csv(&output, &mut body)?;
            emit(&out, std::str::from_utf8(&body).expect("csv output is UTF-8"))?;
            if let Some(path) = diagnostics {
                fs::write(path, json_body(&config, &json!({ "chains": output.diagnostics }))?)?;
            }
            Ok(())
        }
        Command::Compare { density, samples, bin_width, svg, out } => {
            let d: CrystalDensity = serde_json::from_str(&fs::read_to_string(&density)?)?;
            let xs = read_samples_csv(fs::File::open(&samples)?)?;
            let config = json!({ "density": density, "samples": samples, "bin_width": bin_width });
            let ks = d.ks_distance(&xs)?;
            if let Some(path) = svg {
                let bins = histogram(&xs, bin_width)?;
                let overlay = Overlay {
                    title: format!("KS = {ks:.4}, {} samples", xs.len()),
                    comment: Some(format!("config: {config}")),
                    density: Some(&d),
                    bins: &bins,
                };
                fs::write(path, overlay.render())?;
            }
            emit(&out, &json_body(&config, &json!({ "ks": ks, "n_samples": xs.len() }))?)
        }
        Command::ReproduceFigures { out_dir, n, sweeps, seed, chains, bin_width } => {
            let files = reproduce_figures(&out_dir, n, sweeps, seed, chains, bin_width)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterRow {
    /// Predicted interval `[a, b]`.
    pub interval: [f64; 2],
    pub predicted_mass: f64,
    pub empirical_mass: f64,
    /// Largest sample in the cluster matched to this interval.
    pub empirical_right: Option<f64>,
    pub right_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureReport {
    pub ks: f64,
    pub n_samples: usize,
    pub acceptance_rates: Vec<f64>,
    pub clusters: Vec<ClusterRow>,
    /// Gaps between consecutive empirical clusters with at least 1% of the samples.
    pub empirical_gaps: Vec<f64>,
}

/// Splits sorted samples wherever consecutive values are more than `1/2` apart.
fn clusters(sorted: &[f64]) -> Vec<(f64, f64, usize)> {
    let mut out: Vec<(f64, f64, usize)> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some((_, hi, n)) if x - *hi <= 0.5 => {
                *hi = x;
                *n += 1;
            }
            _ => out.push((x, x, 1)),
        }
    }
    out
}

/// Compares pooled MCMC samples with a density: KS distance and per-interval cluster match.
pub fn figure_report(d: &CrystalDensity, output: &McmcOutput) -> Result<FigureReport> {
    let mut xs = output.pooled();
    xs.sort_by(f64::total_cmp);
    let ks = d.ks_distance(&xs)?;
    let total = xs.len() as f64;
    let found = clusters(&xs);
    let masses = d.interval_masses();
    let rows = d
        .intervals()
        .iter()
        .zip(masses)
        .map(|(&[a, b], predicted_mass)| {
            let hit = found.iter().find(|(lo, hi, _)| *hi >= a - 0.5 && *lo <= b + 0.5);
            ClusterRow {
                interval: [a, b],
                predicted_mass,
                empirical_mass: hit.map_or(0.0, |c| c.2 as f64 / total),
                empirical_right: hit.map(|c| c.1),
                right_error: hit.map(|c| (c.1 - b).abs()),
            }
        })
        .collect();
    let big: Vec<_> = found.iter().filter(|c| c.2 as f64 >= 0.01 * total).collect();
    let empirical_gaps = big.windows(2).map(|w| w[1].0 - w[0].1).collect();
    Ok(FigureReport {
        ks,
        n_samples: xs.len(),
        acceptance_rates: output.diagnostics.iter().map(|c| c.acceptance_rate).collect(),
        clusters: rows,
        empirical_gaps,
    })
}

fn eta_tag(eta: &Rational) -> String {
    format_rational(eta).replace('/', "-")
}

/// Writes `figure_eta_<η>.svg` and `figure_eta_<η>.json` for η ∈ {1/2, 1}; returns the paths.
pub fn reproduce_figures(
    out_dir: &Path,
    n: usize,
    sweeps: u64,
    seed: u64,
    chains: usize,
    bin_width: f64,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let gamma = Rational::from_integer(2.into());
    let mut files = Vec::new();
    for eta in [Rational::new(1.into(), 2.into()), Rational::from_integer(1.into())] {
        let spec = EnsembleSpec::planch(gamma.clone(), eta.clone())?;
        let mut cfg = ChainConfig::new(spec.clone(), n, sweeps, seed)?;
        cfg.chains = chains;
        let output = mcmc_run(&cfg)?;
        let (_, build) = density_for(&spec, DEFAULT_MASS_TOL, DEFAULT_TOL)?;
        let report = figure_report(&build.density, &output)?;
        let config = json!({ "sampler": cfg, "density_mass_tol": DEFAULT_MASS_TOL, "root_tol": DEFAULT_TOL, "bin_width": bin_width });
        let bins = histogram(&output.pooled(), bin_width)?;
        let overlay = Overlay {
            title: format!("γ = 2, η = {}, N = {n}: KS = {:.4}", format_rational(&eta), report.ks),
            comment: Some(format!("config: {config}")),
            density: Some(&build.density),
            bins: &bins,
        };
        let stem = out_dir.join(format!("figure_eta_{}", eta_tag(&eta)));
        let svg_path = stem.with_extension("svg");
        let json_path = stem.with_extension("json");
        fs::write(&svg_path, overlay.render())?;
        fs::write(&json_path, json_body(&config, &report)?)?;
        files.push(svg_path);
        files.push(json_path);
    }
    Ok(files)
}
