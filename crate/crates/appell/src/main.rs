//! Command-line front end. Everything here is argument plumbing; the
//! mathematics lives in the library.
//!
//! Exit codes: 0 when the requested checks pass (or the command only
//! generates data), 1 when a verification fails (the JSON witness goes to
//! stdout), 2 for usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use appell::spectral::DiracScheme;
use appell::{
    appell_w_all, bessel_identity_check, central_u_series, count_symbol_zeros, dft_finite,
    discrepancy_report, egf_truncate, egf_verify, falling_factorial, heat_propagate,
    heat_t_coefficients, hermite_polynomial, intertwine_check, kappa_series, l1_level_points,
    lambda_series_per_coordinate, parse_rational, pincherle_series, product_rule_check,
    quadrature_inverse_check, quasi_monomial, relations_report, rodrigues_verify, symbol,
    AppellFamilySpec, CliffordPolynomial, Ladder, LatticePoint, MultiIndex, Multivector,
    Rational, TruncatedSeries,
};

#[derive(Parser)]
#[command(
    name = "appell",
    version,
    about = "Exact Appell-set calculus for Clifford-vector-valued polynomials on the lattice hZ^n"
)]
struct Cli {
    /// Output format for the primary result.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the primary result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate polynomials and lattice data.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Verify defining identities exactly; failures exit 1 with a witness.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Cross-check printed closed forms against the defining relations.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Print an exact series truncation from the kappa catalog.
    Series {
        #[command(flatten)]
        family: FamilyArgs,
        /// Which series to expand.
        #[arg(long, value_enum, default_value_t = SeriesKind::Kappa)]
        which: SeriesKind,
        /// Truncation order.
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Evaluate the Fourier symbol of a Dirac discretization at a frequency.
    Symbol {
        /// Discretization scheme.
        #[arg(long, value_enum, default_value_t = SchemeArg::Forward)]
        scheme: SchemeArg,
        /// Mesh width (decimal or rational).
        #[arg(long, default_value = "1")]
        h: String,
        /// Frequency vector, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<f64>,
    },
    /// Count symbol zeros on the fundamental-zone grid.
    Doublers {
        #[arg(long, value_enum, default_value_t = SchemeArg::Central)]
        scheme: SchemeArg,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Grid points per axis (even values place y=0 and the corners on the grid).
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Fourier transform of a finitely supported lattice function.
    Dft {
        /// JSON file: {"h": "1/2", "samples": [{"point": [..], "value": [{"blade": [..], "coeff": ".."}]}]}.
        #[arg(long)]
        input: PathBuf,
        /// Frequency vector, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<f64>,
    },
    /// Cross-check Bessel values: Gamma series vs 0F1 vs the s=1/2 closed form.
    Bessel {
        /// Cases as s:u pairs, comma separated.
        #[arg(long, default_value = "0.5:0.5,0.5:2,0.5:5,1.5:2,0:1,3:4")]
        cases: String,
        /// Maximum admitted relative spread between the routes.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Validate sigma^{-1} = int_0^inf exp(-s sigma) ds by quadrature on a truncation.
    Quadinv {
        #[command(flatten)]
        family: FamilyArgs,
        /// Truncation degree.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Upper integration limit.
        #[arg(long, default_value_t = 40.0)]
        s_max: f64,
        /// Number of Gauss-Legendre panels.
        #[arg(long, default_value_t = 200)]
        panels: usize,
        /// Maximum admitted entrywise error.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Appell polynomials w_0..w_k.
    Appell {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Quasi-monomial m_alpha for a ladder; the dimension is alpha's length.
    Quasimonomial {
        #[command(flatten)]
        family: FamilyArgs,
        /// Multi-index, comma separated, e.g. 2,0,1.
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = LadderArg::Forward)]
        ladder: LadderArg,
    },
    /// Truncated exponential generating function (w_k is the t^k/k! coefficient).
    Egf {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Falling factorial (x;h)_alpha.
    Falling {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "1")]
        h: String,
    },
    /// Continuum Hermite polynomial H_beta.
    Hermite {
        #[arg(long)]
        beta: String,
    },
    /// Heat evolution exp(t Lap_h) of the central quasi-monomial m_alpha.
    Heat {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "1")]
        h: String,
        /// Evolution time (rational).
        #[arg(long, default_value = "1")]
        t: String,
        /// Emit the full list of t-power coefficients instead of one time slice.
        #[arg(long)]
        coefficients: bool,
    },
    /// Lattice points with |m|_1 on the level used by the even-degree expansion.
    Levelpoints {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Per-coordinate bound on |m_j|.
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Ladder commutation relations on a degree truncation.
    Relations {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long, default_value_t = 5)]
        degree: usize,
    },
    /// Lowering property D_h^+ w_k = k w_{k-1} for k <= k.
    Appell {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 6)]
        k: usize,
        /// Scale w at this index by 2 first, forcing a controlled failure
        /// (exercises the nonzero exit path).
        #[arg(long)]
        corrupt_mu: Option<usize>,
    },
    /// Rodrigues route lambda(0) sigma^{-1} w^fall_k equals the operational route.
    Rodrigues {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Intertwining Lambda_h = sigma^{-1} X_h sigma on a degree truncation.
    Intertwine {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// Discrete Leibniz rule on random polynomial pairs.
    Productrule {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Report printed closed forms that contradict the defining relations.
    Discrepancies {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1")]
        h: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Falling,
    Charlier,
    Bernoulli2,
    Chermite2h,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LadderArg {
    Forward,
    Central,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Forward,
    Backward,
    Central,
}

impl From<SchemeArg> for DiracScheme {
    fn from(s: SchemeArg) -> DiracScheme {
        match s {
            SchemeArg::Forward => DiracScheme::Forward,
            SchemeArg::Backward => DiracScheme::Backward,
            SchemeArg::Central => DiracScheme::Central,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    /// kappa itself.
    Kappa,
    /// 1/kappa.
    Reciprocal,
    /// kappa'/kappa.
    Pincherle,
    /// Per-coordinate Fourier-dual factor lambda.
    Lambda,
    /// log lambda, normalized to vanish at 0.
    LogLambda,
    /// Formal inverse substitution u for the central ladder (kappa-independent).
    CentralU,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Appell family.
    #[arg(long, value_enum, default_value_t = FamilyKind::Falling)]
    family: FamilyKind,
    /// Lattice dimension.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Mesh width as a rational, e.g. 1 or 1/2.
    #[arg(long, default_value = "1")]
    h: String,
    /// Poisson-Charlier parameter (charlier only; default 1).
    #[arg(long)]
    a: Option<String>,
    /// Plain kappa coefficients, constant first, comma separated (custom only).
    #[arg(long, value_delimiter = ',')]
    coeffs: Option<Vec<String>>,
}

impl FamilyArgs {
    fn build(&self) -> anyhow::Result<AppellFamilySpec> {
        self.build_with_n(self.n)
    }

    fn build_with_n(&self, n: usize) -> anyhow::Result<AppellFamilySpec> {
        let h = parse_rational(&self.h)?;
        let spec = match self.family {
            FamilyKind::Falling => AppellFamilySpec::falling(n, h)?,
            FamilyKind::Charlier => {
                let a = match &self.a {
                    Some(s) => parse_rational(s)?,
                    None => Rational::from_integer(1.into()),
                };
                AppellFamilySpec::charlier(n, h, a)?
            }
            FamilyKind::Bernoulli2 => AppellFamilySpec::bernoulli2(n, h)?,
            FamilyKind::Chermite2h => AppellFamilySpec::clifford_hermite_2h(n, h)?,
            FamilyKind::Custom => {
                let raw = self
                    .coeffs
                    .as_ref()
                    .ok_or_else(|| anyhow!("--coeffs is required for --family custom"))?;
                let coeffs = raw
                    .iter()
                    .map(|s| parse_rational(s).map_err(Into::into))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                AppellFamilySpec::custom(n, h, coeffs)?
            }
        };
        Ok(spec)
    }
}

/// What a subcommand produced, before rendering.
enum Payload {
    Json(Value),
    Poly(CliffordPolynomial),
    Polys(Vec<(String, CliffordPolynomial)>),
    Series { name: String, series: TruncatedSeries },
    Points(Vec<LatticePoint>),
}

fn parse_multi_index(s: &str) -> anyhow::Result<MultiIndex> {
    let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
    let entries = trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .with_context(|| format!("bad multi-index entry {part:?}"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if entries.is_empty() {
        bail!("empty multi-index");
    }
    Ok(MultiIndex::new(entries))
}

fn parse_float_mesh(s: &str) -> anyhow::Result<f64> {
    if let Ok(v) = s.trim().parse::<f64>() {
        return Ok(v);
    }
    Ok(appell::rational::to_f64(&parse_rational(s)?))
}

fn parse_bessel_cases(s: &str) -> anyhow::Result<Vec<(f64, f64)>> {
    s.split(',')
        .map(|pair| {
            let (s_part, u_part) = pair
                .split_once(':')
                .ok_or_else(|| anyhow!("bessel case {pair:?} is not of the form s:u"))?;
            Ok((
                s_part.trim().parse::<f64>().with_context(|| format!("bad index {s_part:?}"))?,
                u_part.trim().parse::<f64>().with_context(|| format!("bad point {u_part:?}"))?,
            ))
        })
        .collect()
}

fn read_dft_input(path: &PathBuf, n: usize) -> anyhow::Result<Vec<(LatticePoint, Multivector)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).context("parsing sample file")?;
    let h = parse_rational(
        value
            .get("h")
            .and_then(Value::as_str)
            .ok_or_else(|| anyhow!("sample file needs a string field \"h\""))?,
    )?;
    let samples = value
        .get("samples")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("sample file needs an array field \"samples\""))?;
    let mut out = Vec::with_capacity(samples.len());
    for sample in samples {
        let point = sample
            .get("point")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("sample needs an integer array \"point\""))?
            .iter()
            .map(|v| v.as_i64().ok_or_else(|| anyhow!("non-integer lattice multiple")))
            .collect::<anyhow::Result<Vec<i64>>>()?;
        let mv = Multivector::from_json(
            sample.get("value").ok_or_else(|| anyhow!("sample needs a \"value\""))?,
            n,
        )?;
        out.push((LatticePoint::new(h.clone(), point)?, mv));
    }
    Ok(out)
}

fn run(cli: &Cli) -> anyhow::Result<(Payload, bool)> {
    match &cli.command {
        Command::Gen { what } => run_gen(what),
        Command::Verify { what } => run_verify(what),
        Command::Check { what } => run_check(what),
        Command::Series { family, which, order } => {
            let h = parse_rational(&family.h)?;
            let (name, series) = match which {
                SeriesKind::CentralU => ("central-u".to_string(), central_u_series(&h, *order)?),
                _ => {
                    let spec = family.build()?;
                    let kappa = spec.kappa();
                    match which {
                        SeriesKind::Kappa => (format!("kappa[{}]", kappa.name()), kappa_series(kappa, *order)?),
                        SeriesKind::Reciprocal => (
                            format!("1/kappa[{}]", kappa.name()),
                            kappa_series(kappa, *order)?.reciprocal()?,
                        ),
                        SeriesKind::Pincherle => (
                            format!("pincherle[{}]", kappa.name()),
                            pincherle_series(kappa, *order)?,
                        ),
                        SeriesKind::Lambda => (
                            format!("lambda[{}]", kappa.name()),
                            lambda_series_per_coordinate(kappa, &h, *order)?,
                        ),
                        SeriesKind::LogLambda => (
                            format!("log-lambda[{}]", kappa.name()),
                            appell::series::log_lambda_factor_series(kappa, &h, *order)?,
                        ),
                        SeriesKind::CentralU => unreachable!(),
                    }
                }
            };
            Ok((Payload::Series { name, series }, true))
        }
        Command::Symbol { scheme, h, y } => {
            let h = parse_float_mesh(h)?;
            let s = symbol((*scheme).into(), h, y.len(), y)?;
            Ok((
                Payload::Json(json!({
                    "scheme": DiracScheme::from(*scheme).name(),
                    "h": h,
                    "y": y,
                    "symbol": s.to_json(),
                    "frobenius_sq": s.frobenius_sq(),
                })),
                true,
            ))
        }
        Command::Doublers { scheme, h, n, grid } => {
            let h = parse_float_mesh(h)?;
            let report = count_symbol_zeros((*scheme).into(), h, *n, *grid)?;
            Ok((Payload::Json(report.to_json()), true))
        }
        Command::Dft { input, y } => {
            let samples = read_dft_input(input, y.len())?;
            let transform = dft_finite(&samples, y)?;
            Ok((
                Payload::Json(json!({
                    "y": y,
                    "transform": transform.to_json(),
                })),
                true,
            ))
        }
        Command::Bessel { cases, tol } => {
            let report = bessel_identity_check(&parse_bessel_cases(cases)?, *tol)?;
            let pass = report.all_pass();
            Ok((Payload::Json(report.to_json()), pass))
        }
        Command::Quadinv { family, degree, s_max, panels, tol } => {
            let spec = family.build()?;
            let report = quadrature_inverse_check(&spec, *degree, *s_max, *panels, *tol)?;
            let pass = report.pass();
            Ok((Payload::Json(report.to_json()), pass))
        }
    }
}

fn run_gen(cmd: &GenCommand) -> anyhow::Result<(Payload, bool)> {
    match cmd {
        GenCommand::Appell { family, k } => {
            let spec = family.build()?;
            let labeled = appell_w_all(&spec, *k)?
                .into_iter()
                .enumerate()
                .map(|(i, w)| (format!("w_{i}"), w))
                .collect();
            Ok((Payload::Polys(labeled), true))
        }
        GenCommand::Quasimonomial { family, alpha, ladder } => {
            let alpha = parse_multi_index(alpha)?;
            let spec = family.build_with_n(alpha.len())?;
            let h = spec.h().clone();
            let ladder = match ladder {
                LadderArg::Forward => Ladder::Forward { h },
                LadderArg::Central => Ladder::Central { h },
            };
            let m = quasi_monomial(&ladder, spec.kappa(), &alpha)?;
            Ok((Payload::Poly(m), true))
        }
        GenCommand::Egf { family, k } => {
            let spec = family.build()?;
            Ok((Payload::Json(egf_truncate(&spec, *k)?.to_json()), true))
        }
        GenCommand::Falling { alpha, h } => {
            let alpha = parse_multi_index(alpha)?;
            let h = parse_rational(h)?;
            Ok((Payload::Poly(falling_factorial(&alpha, &h)?), true))
        }
        GenCommand::Hermite { beta } => {
            let beta = parse_multi_index(beta)?;
            Ok((Payload::Poly(hermite_polynomial(&beta)?), true))
        }
        GenCommand::Heat { alpha, h, t, coefficients } => {
            let alpha = parse_multi_index(alpha)?;
            let h = parse_rational(h)?;
            if *coefficients {
                let labeled = heat_t_coefficients(&alpha, &h)?
                    .into_iter()
                    .enumerate()
                    .map(|(m, c)| (format!("t^{m}"), c))
                    .collect();
                Ok((Payload::Polys(labeled), true))
            } else {
                let t = parse_rational(t)?;
                Ok((Payload::Poly(heat_propagate(&alpha, &h, &t)?), true))
            }
        }
        GenCommand::Levelpoints { k, h, n, bound } => {
            let h = parse_rational(h)?;
            Ok((Payload::Points(l1_level_points(*k, &h, *n, *bound)?), true))
        }
    }
}

fn run_verify(cmd: &VerifyCommand) -> anyhow::Result<(Payload, bool)> {
    match cmd {
        VerifyCommand::Relations { n, h, degree } => {
            let report = relations_report(*n, &parse_rational(h)?, *degree)?;
            let pass = report.all_pass();
            Ok((Payload::Json(report.to_json()), pass))
        }
        VerifyCommand::Appell { family, k, corrupt_mu } => {
            let spec = family.build()?;
            let mut egf = egf_truncate(&spec, *k)?;
            if let Some(bad) = corrupt_mu {
                if *bad > *k {
                    bail!("--corrupt-mu {bad} exceeds the truncation {k}");
                }
                egf.w[*bad] = egf.w[*bad].scale(&Rational::from_integer(2.into()));
            }
            let report = egf_verify(&egf)?;
            let pass = report.all_pass();
            Ok((Payload::Json(report.to_json()), pass))
        }
        VerifyCommand::Rodrigues { family, k } => {
            let report = rodrigues_verify(&family.build()?, *k)?;
            let pass = report.all_pass();
            Ok((Payload::Json(report.to_json()), pass))
        }
        VerifyCommand::Intertwine { family, degree } => {
            let spec = family.build()?;
            let check = intertwine_check(&spec, *degree)?;
            let pass = check.equal;
            Ok((
                Payload::Json(json!({
                    "family": spec.name(),
                    "degree": degree,
                    "equal": check.equal,
                    "witness": check.witness.map(|w| w.to_json()),
                })),
                pass,
            ))
        }
        VerifyCommand::Productrule { n, h, degree, samples, seed } => {
            let report = product_rule_check(*n, &parse_rational(h)?, *degree, *samples, *seed)?;
            let pass = report.all_pass();
            Ok((Payload::Json(report.to_json()), pass))
        }
    }
}

fn run_check(cmd: &CheckCommand) -> anyhow::Result<(Payload, bool)> {
    match cmd {
        CheckCommand::Discrepancies { n, h } => {
            let report = discrepancy_report(*n, &parse_rational(h)?)?;
            Ok((Payload::Json(report.to_json()), true))
        }
    }
}

fn poly_csv(rows: &mut String, label: Option<&str>, p: &CliffordPolynomial) {
    for (alpha, mv) in p.terms() {
        for (blade, coeff) in mv.terms() {
            if let Some(l) = label {
                rows.push_str(l);
                rows.push(',');
            }
            for a in alpha.entries() {
                rows.push_str(&a.to_string());
                rows.push(',');
            }
            rows.push_str(&blade.to_string());
            rows.push(',');
            rows.push_str(&appell::format_rational(coeff));
            rows.push('\n');
        }
    }
}

fn render(payload: &Payload, format: OutputFormat) -> anyhow::Result<String> {
    match (payload, format) {
        (Payload::Json(v), OutputFormat::Json) => Ok(serde_json::to_string_pretty(v)?),
        (Payload::Json(_), OutputFormat::Csv) => {
            bail!("csv output is not defined for this command; use --format json")
        }
        (Payload::Poly(p), OutputFormat::Json) => Ok(serde_json::to_string_pretty(&p.to_json())?),
        (Payload::Poly(p), OutputFormat::Csv) => {
            let mut out = String::new();
            header(&mut out, None, p.dim());
            poly_csv(&mut out, None, p);
            Ok(out)
        }
        (Payload::Polys(list), OutputFormat::Json) => {
            let v: Vec<Value> = list
                .iter()
                .map(|(label, p)| json!({ "label": label, "poly": p.to_json() }))
                .collect();
            Ok(serde_json::to_string_pretty(&Value::Array(v))?)
        }
        (Payload::Polys(list), OutputFormat::Csv) => {
            let mut out = String::new();
            let dim = list.first().map(|(_, p)| p.dim()).unwrap_or(0);
            header(&mut out, Some("label"), dim);
            for (label, p) in list {
                poly_csv(&mut out, Some(label), p);
            }
            Ok(out)
        }
        (Payload::Series { name, series }, OutputFormat::Json) => {
            Ok(serde_json::to_string_pretty(&json!({
                "name": name,
                "order": series.order(),
                "coeffs": series.coeffs().iter().map(appell::format_rational).collect::<Vec<_>>(),
            }))?)
        }
        (Payload::Series { series, .. }, OutputFormat::Csv) => {
            let mut out = String::from("k,coeff\n");
            for (k, c) in series.coeffs().iter().enumerate() {
                out.push_str(&format!("{k},{}\n", appell::format_rational(c)));
            }
            Ok(out)
        }
        (Payload::Points(points), OutputFormat::Json) => {
            let v: Vec<Value> = points
                .iter()
                .map(|p| {
                    json!({
                        "multiples": p.multiples(),
                        "coords": p.coords().iter().map(appell::format_rational).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(serde_json::to_string_pretty(&Value::Array(v))?)
        }
        (Payload::Points(points), OutputFormat::Csv) => {
            let mut out = String::new();
            let n = points.first().map(|p| p.dim()).unwrap_or(0);
            for j in 1..=n {
                out.push_str(&format!("m_{j},"));
            }
            for j in 1..=n {
                out.push_str(&format!("x_{j}"));
                out.push(if j == n { '\n' } else { ',' });
            }
            for p in points {
                for m in p.multiples() {
                    out.push_str(&format!("{m},"));
                }
                let coords = p.coords();
                for (i, c) in coords.iter().enumerate() {
                    out.push_str(&appell::format_rational(c));
                    out.push(if i + 1 == coords.len() { '\n' } else { ',' });
                }
            }
            Ok(out)
        }
    }
}

fn header(out: &mut String, label: Option<&str>, dim: usize) {
    if let Some(l) = label {
        out.push_str(l);
        out.push(',');
    }
    for j in 1..=dim {
        out.push_str(&format!("alpha_{j},"));
    }
    out.push_str("blade,coeff\n");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (payload, pass) = match run(&cli) {
        Ok(result) => result,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let rendered = match render(&payload, cli.format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.out {
        let mut text = rendered;
        if !text.ends_with('\n') {
            text.push('\n');
        }
        if let Err(e) = fs::write(path, text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        println!("{}", rendered.trim_end_matches('\n'));
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
