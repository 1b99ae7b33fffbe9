//! `cesaro`: Cesàro summation, zeta values, model spectra, counting
//! functions, symbol reversion and heat traces from the command line.

mod output;

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cesaro::counting::{
    counting_function, generalized_moments, riesz_counting, MomentLayout, Side,
};
use cesaro::heat::{cc_moments, chamseddine_connes_torus, heat_trace, mulholland_rows};
use cesaro::poly::RationalPolynomial;
use cesaro::reversion::{density_expansion, LaurentSeries};
use cesaro::spectra::Spectrum;
use cesaro::summability::{
    cesaro_limit, cesaro_mean, holder_mean, integer_comb, partial_sums, CesaroOrder, Ladder,
};
use cesaro::testfn::TestFunction;
use cesaro::zeta::{zeta, zeta_prime_zero, zeta_via_cesaro};
use cesaro::{par, Error, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Cell, Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "cesaro",
    version,
    about = "Cesàro summability and spectral asymptotics"
)]
struct Cli {
    /// Output format; JSON unless a command says otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for the parallel reductions.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cesàro, Hölder or Riesz limit of a series with periodic terms.
    Sum(SumArgs),
    /// ζ(−α) from Cesàro means, or ζ′(0).
    Zeta(ZetaArgs),
    /// Enumerate a model spectrum.
    Spectrum(SpectrumArgs),
    /// Counting function N(λ±) or its Riesz mean.
    Count(CountArgs),
    /// Exact generalized moments of a polynomially weighted comb.
    Moments(MomentsArgs),
    /// Lagrange–Bürmann coefficients and density expansion of a symbol.
    Revert(RevertArgs),
    /// Heat trace Σ m e^{−tλ}, optionally against its small-t expansion.
    Heat(HeatArgs),
    /// Spectral action Σ m φ(λ/Λ²) on the flat 4-torus.
    Cc(CcArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SumMethod {
    Cesaro,
    Holder,
    Riesz,
}

#[derive(Args, Debug)]
struct SumArgs {
    /// One period of the terms a₁, a₂, …, e.g. `1,-1` for Grandi's series.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pattern: Vec<f64>,
    #[arg(long, value_enum, default_value = "cesaro")]
    method: SumMethod,
    #[arg(long, default_value_t = 1)]
    order: u32,
    /// Number of terms for the Cesàro and Hölder means.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Largest cutoff of the Riesz ladder.
    #[arg(long, default_value_t = 1e5)]
    cutoff: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    /// Evaluate Σ n^α, i.e. ζ(−α).
    #[arg(long, allow_hyphen_values = true, required_unless_present = "prime")]
    alpha: Option<f64>,
    /// Evaluate ζ′(0) instead.
    #[arg(long)]
    prime: bool,
    #[arg(long, default_value_t = 3)]
    order: u32,
    #[arg(long, default_value_t = 1e5)]
    cutoff: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Torus,
    Sphere,
    Sphere2,
    Sphere3,
    Circle,
    Oscillator,
    File,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Dimension for tori and spheres.
    #[arg(long)]
    dim: Option<u32>,
    /// Enumeration bound: largest |k|² on tori, largest l on spheres,
    /// largest index otherwise.
    #[arg(long)]
    max: Option<u64>,
    /// Spectral shift for spheres (eigenvalues l(l+n−1) + shift).
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Spectrum file in `eigenvalue<TAB>multiplicity` form (model `file`).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    /// Riesz order k; 0 gives N(λ−) and N(λ+).
    #[arg(long, default_value_t = 0)]
    riesz: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MomentPreset {
    Sphere2,
    Sphere3,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    /// Weight and map of a model sphere.
    #[arg(long, value_enum, conflicts_with_all = ["weight", "map"])]
    preset: Option<MomentPreset>,
    /// Ascending coefficients of the weight polynomial, e.g. `1,2`.
    #[arg(long, allow_hyphen_values = true, requires = "map")]
    weight: Option<String>,
    /// Ascending coefficients of the map polynomial, e.g. `0,1,1`.
    #[arg(long, allow_hyphen_values = true, requires = "weight")]
    map: Option<String>,
    /// First index of the comb.
    #[arg(long, default_value_t = 1)]
    start: u64,
    /// Where the subtracted Heaviside switches on.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    heaviside: String,
    #[arg(long, default_value_t = 3)]
    j_max: u32,
}

#[derive(Args, Debug)]
struct RevertArgs {
    /// Symbol coefficients `p1,p0,p-1,…` of p(z) = p1 z + p0 + p-1/z + ….
    #[arg(long, allow_hyphen_values = true)]
    symbol: String,
    /// The listed coefficients are only the start of an infinite series.
    #[arg(long)]
    truncated: bool,
    #[arg(long)]
    dim: u32,
    /// Operator order d.
    #[arg(long, default_value_t = 1)]
    order: u32,
    #[arg(long, default_value_t = 3)]
    j_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Compare {
    Mulholland,
}

#[derive(Args, Debug)]
struct HeatArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    /// Compare with the small-t expansion (CSV by default).
    #[arg(long, value_enum)]
    compare: Option<Compare>,
    /// Number of expansion terms in the comparison.
    #[arg(long, default_value_t = 4)]
    terms: usize,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cutoff {
    Exp,
    Gauss,
}

#[derive(Args, Debug)]
struct CcArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    #[arg(long, value_enum, default_value = "exp")]
    phi: Cutoff,
}

enum Failure {
    Usage(String),
    NonConvergence(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Failure::NonConvergence(e.to_string()),
            Error::Domain(_)
            | Error::Parse(_)
            | Error::Ellipticity(_)
            | Error::Unsupported(_)
            | Error::Order { .. } => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(usage(format!(
            "--{name} must be a positive finite number, got {x}"
        )))
    }
}

fn run_sum(a: &SumArgs) -> Outcome {
    if a.pattern.iter().any(|x| !x.is_finite()) {
        return Err(usage("--pattern entries must be finite"));
    }
    let period = a.pattern.len();
    let k = CesaroOrder(a.order);
    let value = match a.method {
        SumMethod::Cesaro | SumMethod::Holder => {
            if a.n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let terms: Vec<f64> = (0..a.n).map(|i| a.pattern[i % period]).collect();
            let s = partial_sums(&terms);
            match a.method {
                SumMethod::Cesaro => cesaro_mean(&s, k, a.n)?,
                _ => holder_mean(&s, k, a.n)?,
            }
        }
        SumMethod::Riesz => {
            positive("cutoff", a.cutoff)?;
            positive("tol", a.tol)?;
            let pattern = a.pattern.clone();
            let comb = integer_comb(move |n| pattern[((n - 1) % period as u64) as usize]);
            cesaro_limit(&comb, |_| 1.0, k, &Ladder::ending_at(a.cutoff, a.tol))?.value
        }
    };
    let mut r = Report::new(vec!["method", "order", "value"]);
    let method = format!("{:?}", a.method).to_lowercase();
    r.push(vec![method.into(), a.order.into(), value.into()]);
    Ok(r)
}

fn run_zeta(a: &ZetaArgs) -> Outcome {
    positive("cutoff", a.cutoff)?;
    positive("tol", a.tol)?;
    if a.prime {
        let lim = zeta_prime_zero(a.cutoff, CesaroOrder(a.order), a.tol)?;
        let target = -0.5 * (2.0 * PI).ln();
        let mut r = Report::new(vec!["value", "target", "error", "spread"]);
        r.push(vec![
            lim.value.into(),
            target.into(),
            (lim.value - target).into(),
            lim.spread.into(),
        ]);
        return Ok(r);
    }
    let alpha = a.alpha.ok_or_else(|| usage("--alpha is required"))?;
    if !alpha.is_finite() {
        return Err(usage("--alpha must be finite"));
    }
    let lim = zeta_via_cesaro(alpha, CesaroOrder(a.order), a.cutoff, a.tol)?;
    let reference = zeta(-alpha).ok();
    let target: Cell = match &reference {
        Some(z) => match &z.exact {
            Some(s) => s.clone().into(),
            None => z.value.into(),
        },
        None => Cell::Missing,
    };
    let error: Cell = reference.map(|z| lim.value - z.value).into();
    let mut r = Report::new(vec![
        "alpha", "order", "cutoff", "value", "target", "error", "spread",
    ]);
    r.push(vec![
        alpha.into(),
        a.order.into(),
        a.cutoff.into(),
        lim.value.into(),
        target,
        error,
        lim.spread.into(),
    ]);
    Ok(r)
}

fn build_spectrum(m: &ModelArgs, default_max: u64) -> Result<Spectrum, Failure> {
    let max = m.max.unwrap_or(default_max);
    let dim = |fallback: Option<u32>| {
        m.dim
            .or(fallback)
            .ok_or_else(|| usage("--dim is required for this model"))
    };
    let s = match m.model {
        Model::Torus => Spectrum::torus(dim(None)?, max)?,
        Model::Sphere => Spectrum::sphere(dim(None)?, max, m.shift)?,
        Model::Sphere2 => Spectrum::sphere(2, max, m.shift)?,
        Model::Sphere3 => Spectrum::sphere(3, max, m.shift)?,
        Model::Circle => Spectrum::circle(max),
        Model::Oscillator => Spectrum::oscillator(max),
        Model::File => {
            let path = m
                .input
                .as_ref()
                .ok_or_else(|| usage("--input is required for model file"))?;
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Spectrum::from_tsv(path.display().to_string(), dim(Some(1))?, &text)?
        }
    };
    Ok(s)
}

fn run_spectrum(a: &SpectrumArgs) -> Outcome {
    let s = build_spectrum(&a.model, 25)?;
    let mut r = Report::new(vec!["eigenvalue", "multiplicity", "count"]);
    let mut n = 0u64;
    for l in s.levels() {
        n += l.multiplicity;
        r.push(vec![l.eigenvalue.into(), l.multiplicity.into(), n.into()]);
    }
    r.tsv = Some(s.to_tsv());
    Ok(r)
}

fn run_count(a: &CountArgs) -> Outcome {
    let top = a.lambda.iter().cloned().fold(0.0f64, f64::max);
    if a.lambda.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return Err(usage("--lambda values must be finite and non-negative"));
    }
    let default_max = match a.model.model {
        Model::Torus | Model::Circle | Model::Oscillator | Model::File => top.ceil() as u64 + 1,
        _ => top.sqrt().ceil() as u64 + 1,
    };
    let s = build_spectrum(&a.model, default_max)?;
    if a.riesz == 0 {
        let mut r = Report::new(vec!["lambda", "left", "right"]);
        for &lam in &a.lambda {
            let left = counting_function(&s, lam, Side::Left)?;
            let right = counting_function(&s, lam, Side::Right)?;
            r.push(vec![lam.into(), left.into(), right.into()]);
        }
        Ok(r)
    } else {
        let mut r = Report::new(vec!["lambda", "order", "riesz"]);
        for &lam in &a.lambda {
            positive("lambda", lam)?;
            let v = riesz_counting(&s, CesaroOrder(a.riesz), lam)?;
            r.push(vec![lam.into(), a.riesz.into(), v.into()]);
        }
        Ok(r)
    }
}

fn parse_rational(text: &str) -> Result<Rational, Failure> {
    Ok(cesaro::poly::parse_rational(text.trim())?)
}

fn run_moments(a: &MomentsArgs) -> Outcome {
    let (weight, map, layout) = match a.preset {
        Some(MomentPreset::Sphere2) => (
            RationalPolynomial::from_ints(&[1, 2]),
            RationalPolynomial::from_ints(&[0, 1, 1]),
            MomentLayout::default(),
        ),
        Some(MomentPreset::Sphere3) => {
            let w = RationalPolynomial::from_ints(&[1, 2, 1]);
            let layout = MomentLayout {
                start: 0,
                heaviside_at: parse_rational("-1")?,
            };
            (w.clone(), w, layout)
        }
        None => {
            let (w, m) = match (&a.weight, &a.map) {
                (Some(w), Some(m)) => (w, m),
                _ => return Err(usage("give --preset or both --weight and --map")),
            };
            (
                RationalPolynomial::parse(w)?,
                RationalPolynomial::parse(m)?,
                MomentLayout {
                    start: a.start,
                    heaviside_at: parse_rational(&a.heaviside)?,
                },
            )
        }
    };
    let mut r = Report::new(vec!["j", "moment", "value"]);
    for j in 0..=a.j_max {
        let m = generalized_moments(&weight, &map, j, &layout);
        let value = cesaro::scalar::to_f64(&m);
        r.push(vec![j.into(), m.to_string().into(), value.into()]);
    }
    Ok(r)
}

fn run_revert(a: &RevertArgs) -> Outcome {
    if a.dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    let p = LaurentSeries::parse_symbol(&a.symbol, !a.truncated)?;
    let e = density_expansion(&p, a.dim, a.order, a.j_max)?;
    let mut r = Report::new(vec!["j", "c", "c_value", "a", "exponent"]);
    for (j, ((c, aj), ex)) in e.c.iter().zip(&e.a).zip(&e.exponents).enumerate() {
        r.push(vec![
            (j as u32).into(),
            c.to_string().into(),
            c.to_f64().into(),
            (*aj).into(),
            ex.to_string().into(),
        ]);
    }
    Ok(r)
}

fn run_heat(a: &HeatArgs) -> Outcome {
    for &t in &a.t {
        positive("t", t)?;
    }
    positive("tol", a.tol)?;
    if let Some(Compare::Mulholland) = a.compare {
        if a.model.model != Model::Sphere2 || a.model.shift != 0.0 {
            return Err(usage(
                "--compare mulholland needs --model sphere2 without shift",
            ));
        }
        let mut r = Report::new(vec!["t", "exact", "expansion", "error"]);
        for row in mulholland_rows(&a.t, a.terms)? {
            r.push(vec![
                row.t.into(),
                row.exact.into(),
                row.expansion.into(),
                row.error.into(),
            ]);
        }
        return Ok(r);
    }
    let t_min = a.t.iter().cloned().fold(f64::INFINITY, f64::min);
    // Enough levels for e^{−tλ} to fall below the tolerance.
    let reach = (-a.tol.ln() + 40.0) / t_min;
    let default_max = match a.model.model {
        Model::Torus | Model::Circle | Model::Oscillator | Model::File => reach.ceil() as u64,
        _ => reach.sqrt().ceil() as u64 + 2,
    };
    let s = build_spectrum(&a.model, default_max)?;
    let mut r = Report::new(vec!["t", "value", "levels_used", "tail_bound"]);
    for &t in &a.t {
        let h = heat_trace(&s, t, a.tol)?;
        r.push(vec![
            t.into(),
            h.value.into(),
            (h.levels_used as u64).into(),
            h.tail_bound.into(),
        ]);
    }
    Ok(r)
}

fn run_cc(a: &CcArgs) -> Outcome {
    let phi = match a.phi {
        Cutoff::Exp => TestFunction::exp_decay(),
        Cutoff::Gauss => TestFunction::gaussian(),
    };
    let f0 = cc_moments(&phi)?[0];
    let mut r = Report::new(vec![
        "lambda",
        "numeric",
        "predicted",
        "normalized",
        "target",
    ]);
    for &lam in &a.lambda {
        positive("lambda", lam)?;
        let s = chamseddine_connes_torus(&phi, lam, 1)?;
        r.push(vec![
            lam.into(),
            s.numeric.into(),
            s.predicted.into(),
            s.normalized.into(),
            (PI * PI * f0).into(),
        ]);
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = par::set_threads(n) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let default_format = match &cli.command {
        Command::Heat(h) if h.compare.is_some() => Format::Csv,
        _ => Format::Json,
    };
    let result = match &cli.command {
        Command::Sum(a) => run_sum(a),
        Command::Zeta(a) => run_zeta(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Count(a) => run_count(a),
        Command::Moments(a) => run_moments(a),
        Command::Revert(a) => run_revert(a),
        Command::Heat(a) => run_heat(a),
        Command::Cc(a) => run_cc(a),
    };
    let rendered = result.and_then(|r| {
        r.render(cli.format.unwrap_or(default_format))
            .map_err(Failure::Usage)
    });
    match rendered {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NonConvergence(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
