//! From Cesàro expansions of spectral densities to small-t expansions of
//! `⟨f(λ), g(tλ)⟩`, numeric heat traces, the S³ partition function and the
//! Chamseddine–Connes spectral action on flat tori.
//!
//! An expansion that holds only in the Abel sense (such as
//! `sin λ · e^{√λ}`) has no term-by-term image here; that is why inputs carry
//! a Cesàro sense tag and why log terms appear only from the `λ^{−j}` channel.

use std::f64::consts::PI;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counting::{counting_expansion_sphere, CountingExpansion};
use crate::error::{Error, Result};
use crate::expansion::{AsymptoticExpansion, ExpansionRecord, Sense, Term, Variable};
use crate::fit::loglog_slope;
use crate::par::{self, Exec};
use crate::quad::{self, QuadOptions};
use crate::reversion::DensityExpansion;
use crate::scalar::{factorial, Rational, Scalar};
use crate::spectra::Spectrum;
use crate::summability::{fp_integral_power, pseudofunction_eval};
use crate::testfn::TestFunction;

/// `Σ c t^e (log t)^p` as `t → 0⁺`, ordered by increasing exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallTExpansion {
    expansion: AsymptoticExpansion,
}

impl SmallTExpansion {
    pub fn empty() -> Self {
        Self {
            expansion: AsymptoticExpansion::new(Variable::T, Sense::Ordinary),
        }
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        Self {
            expansion: AsymptoticExpansion::new(Variable::T, Sense::Ordinary)
                .with_terms(terms)
                .normalized(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.expansion.terms
    }

    pub fn len(&self) -> usize {
        self.expansion.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansion.is_empty()
    }

    pub fn has_log_terms(&self) -> bool {
        self.terms().iter().any(|t| t.log_power > 0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.expansion.eval(t)
    }

    /// Sum of the `n` leading terms.
    pub fn eval_truncated(&self, t: f64, n: usize) -> f64 {
        self.expansion.eval_truncated(t, n)
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self::from_terms(self.terms().iter().take(n).cloned().collect())
    }

    pub fn record(&self) -> ExpansionRecord {
        self.expansion.record(&[])
    }

    pub fn as_expansion(&self) -> &AsymptoticExpansion {
        &self.expansion
    }
}

/// A spectral density `f(λ)` in the form the bridge consumes:
/// power terms `c λ^α` (α not a negative integer), the `b_j λ^{−j}` channel,
/// and moments `μ_m = ⟨f − (power terms), λ^m⟩`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CesaroDensity {
    pub power_terms: Vec<(Scalar, Rational64)>,
    pub log_channel: Vec<(Scalar, u32)>,
    pub moments: Vec<(u32, Scalar)>,
    /// Moments are known for every `m` up to this order; `None` when all
    /// moments beyond the listed ones vanish.
    pub moments_known_through: Option<u32>,
}

impl CesaroDensity {
    fn push_power(&mut self, c: Scalar, alpha: Rational64) {
        if c.is_exact() && c.is_zero() {
            return;
        }
        if alpha.is_integer() && *alpha.numer() < 0 {
            self.log_channel.push((c, (-*alpha.numer()) as u32));
        } else {
            self.power_terms.push((c, alpha));
        }
    }

    /// `c λ^α → c λ^α · k` for every part; used by the linearity checks.
    pub fn scaled(&self, k: &Scalar) -> Self {
        Self {
            power_terms: self.power_terms.iter().map(|(c, a)| (c * k, *a)).collect(),
            log_channel: self.log_channel.iter().map(|(c, j)| (c * k, *j)).collect(),
            moments: self.moments.iter().map(|(m, c)| (*m, c * k)).collect(),
            moments_known_through: self.moments_known_through,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.power_terms.extend(other.power_terms.iter().cloned());
        out.log_channel.extend(other.log_channel.iter().cloned());
        out.moments.extend(other.moments.iter().cloned());
        out.moments_known_through = match (self.moments_known_through, other.moments_known_through)
        {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        out
    }
}

impl From<&CountingExpansion> for CesaroDensity {
    /// Differentiates the main terms of `N(λ)`: `c λ^β → cβ λ^{β−1}`; a
    /// constant `c` becomes the zeroth moment.
    fn from(e: &CountingExpansion) -> Self {
        let mut d = CesaroDensity::default();
        for t in &e.main_terms.terms {
            if t.coeff.is_exact() && t.coeff.is_zero() {
                continue;
            }
            if t.exponent.is_zero() {
                d.moments.push((0, t.coeff.clone()));
            } else {
                let beta = Scalar::Exact(Rational::new(
                    (*t.exponent.numer()).into(),
                    (*t.exponent.denom()).into(),
                ));
                d.push_power(&t.coeff * &beta, t.exponent - Rational64::one());
            }
        }
        for (i, mu) in e.moments.iter().enumerate() {
            d.moments.push((i as u32 + 1, Scalar::Exact(mu.clone())));
        }
        d.moments_known_through = if e.moments_complete {
            None
        } else {
            Some(e.moments.len() as u32)
        };
        d
    }
}

impl From<&DensityExpansion> for CesaroDensity {
    fn from(e: &DensityExpansion) -> Self {
        let mut d = CesaroDensity::default();
        for (a, alpha) in e.a.iter().zip(&e.exponents) {
            if *a != 0.0 {
                d.push_power(Scalar::Float(e.prefactor * a), *alpha);
            }
        }
        d.moments_known_through = Some(0);
        d
    }
}

/// `Fp∫₀^∞ λ^α g(λ) dλ`: closed form when the function carries one, else
/// quadrature with the finite-part subtraction.
pub fn fp_moment(g: &TestFunction, alpha: f64) -> Result<Scalar> {
    if let Some(v) = g.closed_power_moment(alpha) {
        return Ok(v);
    }
    Ok(Scalar::Float(
        fp_integral_power(alpha, g, QuadOptions::default())?.value,
    ))
}

fn derivative(g: &TestFunction, m: usize) -> Result<Scalar> {
    g.derivative_at_zero(m)
        .ok_or_else(|| Error::Capability(format!("g^({m})(0) is not available")))
}

/// Term-by-term image of `⟨f(λ), g(tλ)⟩` as `t → 0⁺`:
///
/// * `c λ^α → c t^{−α−1} Fp∫ λ^α g`
/// * `b λ^{−j} → b t^{j−1} (Fp∫ g/λ^j − g^{(j−1)}(0) log t/(j−1)!)`
/// * `μ_m → μ_m g^{(m)}(0) t^m/m!` for `m ≤ t_orders`
pub fn cesaro_to_small_t(
    f: &CesaroDensity,
    g: &TestFunction,
    t_orders: u32,
) -> Result<SmallTExpansion> {
    if !g.is_smooth() {
        return Err(Error::Domain(format!(
            "{} is not smooth; route characteristic functions through Riesz counting",
            g.name()
        )));
    }
    if let Some(known) = f.moments_known_through {
        if t_orders > known {
            return Err(Error::Order {
                required: t_orders as i64,
                available: known as i64,
            });
        }
    }
    let mut terms = Vec::new();
    for (c, alpha) in &f.power_terms {
        let a = *alpha.numer() as f64 / *alpha.denom() as f64;
        let fp = fp_moment(g, a)?;
        terms.push(Term::power(c * &fp, -*alpha - Rational64::one()));
    }
    for (b, j) in &f.log_channel {
        let j = *j;
        let e = Rational64::from_integer(j as i64 - 1);
        let pf = match g.closed_power_moment(-(j as f64)) {
            Some(v) => v,
            None => Scalar::Float(pseudofunction_eval(j, g)?),
        };
        terms.push(Term::power(b * &pf, e));
        let d = derivative(g, j as usize - 1)?;
        let log_coeff = -(b * &d) * Scalar::Exact(factorial(j - 1).recip());
        terms.push(Term {
            coeff: log_coeff,
            exponent: e,
            log_power: 1,
        });
    }
    for (m, mu) in &f.moments {
        if *m > t_orders {
            continue;
        }
        let d = derivative(g, *m as usize)?;
        let c = mu * &d * Scalar::Exact(factorial(*m).recip());
        terms.push(Term::power(c, Rational64::from_integer(*m as i64)));
    }
    Ok(SmallTExpansion::from_terms(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatTrace {
    pub t: f64,
    pub value: f64,
    pub levels_used: usize,
    pub tail_bound: f64,
}

/// `∫_Λ^∞ t e^{−tλ} B(λ) dλ`, which bounds `Σ_{λ_l > Λ} m_l e^{−tλ_l}` when
/// `N(λ) ≤ B(λ)`.
fn tail_bound(s: &Spectrum, t: f64, cut: f64) -> Option<f64> {
    let bound = s.counting_bound()?;
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-6,
        max_intervals: 2000,
    };
    quad::integrate_to_infinity(|lam| t * (-t * lam).exp() * bound.eval(lam), cut, opts)
        .ok()
        .map(|q| q.value + q.error)
}

/// `Σ m_l e^{−tλ_l}`, truncated once a rigorous tail bound from the
/// spectrum's counting bound is below `tol`.
pub fn heat_trace(s: &Spectrum, t: f64, tol: f64) -> Result<HeatTrace> {
    heat_trace_with(Exec::default(), s, t, tol)
}

pub fn heat_trace_with(exec: Exec, s: &Spectrum, t: f64, tol: f64) -> Result<HeatTrace> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let levels = s.levels();
    let sum_to = |end: usize| {
        par::sum_range(exec, 0..end, |i| {
            let l = levels[i];
            l.multiplicity as f64 * (-t * l.eigenvalue).exp()
        })
    };
    if s.counting_bound().is_none() {
        // Without a counting bound the enumeration itself must fade out.
        let value = sum_to(levels.len());
        let last = levels
            .last()
            .map(|l| l.multiplicity as f64 * (-t * l.eigenvalue).exp())
            .unwrap_or(0.0);
        if last > tol {
            return Err(Error::Range {
                requested: f64::INFINITY,
                horizon: s.horizon(),
            });
        }
        return Ok(HeatTrace {
            t,
            value,
            levels_used: levels.len(),
            tail_bound: last,
        });
    }
    let bound_at = |cut: f64| tail_bound(s, t, cut).unwrap_or(f64::INFINITY);
    if bound_at(s.horizon()) >= tol {
        let mut need = s.horizon().max(1.0);
        while bound_at(need) >= tol && need < 1e300 {
            need *= 2.0;
        }
        return Err(Error::Range {
            requested: need,
            horizon: s.horizon(),
        });
    }
    // Smallest prefix whose tail bound is below tol.
    let (mut lo, mut hi) = (0usize, levels.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let cut = if mid == 0 {
            f64::NEG_INFINITY
        } else {
            levels[mid - 1].eigenvalue
        };
        if cut.is_finite() && bound_at(cut) < tol {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let end = lo.max(1).min(levels.len());
    let cut = levels[end - 1].eigenvalue;
    Ok(HeatTrace {
        t,
        value: sum_to(end),
        levels_used: end,
        tail_bound: bound_at(cut),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S3Partition {
    pub t: f64,
    pub exact: f64,
    pub asymptote: f64,
    pub relative_difference: f64,
}

/// `K_{S³}(t) = e^t Σ (l+1)² e^{−t(l+1)²}` against `(√π/4) t^{−3/2} e^t`.
pub fn s3_partition_check(t: f64) -> Result<S3Partition> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("need 0 < t <= 1, got {t}")));
    }
    let l_max = ((800.0 / t).sqrt().ceil() as u64).max(16);
    let s = Spectrum::sphere(3, l_max, 1.0)?;
    let trace = heat_trace(&s, t, 1e-30)?;
    let core = PI.sqrt() / 4.0 * t.powf(-1.5);
    Ok(S3Partition {
        t,
        exact: t.exp() * trace.value,
        asymptote: t.exp() * core,
        relative_difference: ((trace.value - core) / core).abs(),
    })
}

/// Small-t expansion of the S² heat trace from the counting expansion with
/// `g = e^{−λ}`: `1/t + 1/3 + t/15 + 4t²/315`.
pub fn mulholland_expansion() -> Result<SmallTExpansion> {
    let e = counting_expansion_sphere(2)?;
    cesaro_to_small_t(&CesaroDensity::from(&e), &TestFunction::exp_decay(), 2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulhollandRow {
    pub t: f64,
    pub exact: f64,
    pub expansion: f64,
    pub error: f64,
}

pub fn mulholland_rows(ts: &[f64], n_terms: usize) -> Result<Vec<MulhollandRow>> {
    let expansion = mulholland_expansion()?;
    let t_min = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(t_min > 0.0) {
        return Err(Error::Domain("t values must be positive".into()));
    }
    let l_max = ((80.0 / t_min).sqrt().ceil() as u64).max(16);
    let s2 = Spectrum::sphere(2, l_max, 0.0)?;
    ts.iter()
        .map(|&t| {
            let exact = heat_trace(&s2, t, 1e-15)?.value;
            let approx = expansion.eval_truncated(t, n_terms);
            Ok(MulhollandRow {
                t,
                exact,
                expansion: approx,
                error: exact - approx,
            })
        })
        .collect()
}

/// Slope of `log|K_{S²}(t) − (first n_terms of the expansion)|` in `log t`.
pub fn mulholland_error_order(t_ladder: &[f64], n_terms: usize) -> Result<f64> {
    if t_ladder.len() < 3 {
        return Err(Error::Domain("need at least three t values".into()));
    }
    if t_ladder.iter().any(|&t| !(t > 0.0 && t <= 0.5)) {
        return Err(Error::Domain("t values must lie in (0, 0.5]".into()));
    }
    let rows = mulholland_rows(t_ladder, n_terms)?;
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    loglog_slope(t_ladder, &errors)
}

/// Heat-coefficient data for the spectral action of a 4-dimensional `D²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcGeometry {
    /// Rank of the bundle.
    pub rank: f64,
    /// `∫ b₂ dvol`.
    pub integrated_b2: f64,
}

impl Default for CcGeometry {
    fn default() -> Self {
        Self {
            rank: 1.0,
            integrated_b2: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralAction {
    pub lambda: f64,
    pub numeric: f64,
    pub predicted: f64,
    /// `numeric/Λ⁴`.
    pub normalized: f64,
    #[serde(skip)]
    pub expansion: SmallTExpansion,
}

/// `Σ m_l φ(λ_l/Λ²)` against the prediction from the density
/// `(rk E vol λ + ∫b₂)/(16π²)` mapped through [`cesaro_to_small_t`] at
/// `t = Λ^{−2}`.
pub fn chamseddine_connes(
    s: &Spectrum,
    phi: &TestFunction,
    lambda: f64,
    n_terms: usize,
    geometry: CcGeometry,
) -> Result<SpectralAction> {
    if s.dimension() != 4 {
        return Err(Error::Domain(format!(
            "the spectral action expansion is set up for dimension 4, got {}",
            s.dimension()
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!(
            "cutoff must be positive, got {lambda}"
        )));
    }
    let vol = s
        .volume()
        .ok_or_else(|| Error::Capability(format!("spectrum {} has no volume", s.name())))?;
    let l2 = lambda * lambda;
    let levels = s.levels();
    let numeric = par::sum_range(Exec::default(), 0..levels.len(), |i| {
        levels[i].multiplicity as f64 * phi.eval(levels[i].eigenvalue / l2)
    });
    let top = levels.partition_point(|l| l.eigenvalue < s.horizon() * 0.875);
    let boundary = par::sum_range(Exec::default(), top..levels.len(), |i| {
        (levels[i].multiplicity as f64 * phi.eval(levels[i].eigenvalue / l2)).abs()
    });
    if boundary > 1e-15 * numeric.abs().max(f64::MIN_POSITIVE) && boundary > 0.0 {
        return Err(Error::Truncation {
            radius: s.horizon().sqrt(),
            boundary,
        });
    }
    let norm = 16.0 * PI * PI;
    let mut density = CesaroDensity::default();
    density.push_power(
        Scalar::Float(geometry.rank * vol / norm),
        Rational64::from_integer(1),
    );
    if n_terms > 1 {
        density.push_power(
            Scalar::Float(geometry.integrated_b2 / norm),
            Rational64::from_integer(0),
        );
    }
    density.moments_known_through = Some(0);
    let expansion = cesaro_to_small_t(&density, phi, 0)?;
    let predicted = expansion.eval(1.0 / l2);
    Ok(SpectralAction {
        lambda,
        numeric,
        predicted,
        normalized: numeric / (l2 * l2),
        expansion,
    })
}

/// Spectral action on flat `T⁴`, enlarging the enumeration until the
/// outermost shells no longer contribute.
pub fn chamseddine_connes_torus(
    phi: &TestFunction,
    lambda: f64,
    n_terms: usize,
) -> Result<SpectralAction> {
    let mut q_max = (16.0 * lambda * lambda).ceil() as u64;
    loop {
        let s = Spectrum::torus(4, q_max)?;
        match chamseddine_connes(&s, phi, lambda, n_terms, CcGeometry::default()) {
            Err(Error::Truncation { .. }) if q_max < (1u64 << 26) => q_max *= 2,
            other => return other,
        }
    }
}

/// Spectral-action moments `f₀ = ∫ xφ`, `f₁ = ∫ φ`, `f₂ = φ(0)`, `f₃ = −φ′(0)`.
pub fn cc_moments(phi: &TestFunction) -> Result<[f64; 4]> {
    let f0 = fp_moment(phi, 1.0)?.to_f64();
    let f1 = fp_moment(phi, 0.0)?.to_f64();
    let f2 = phi.eval(0.0);
    let f3 = -derivative(phi, 1)?.to_f64();
    Ok([f0, f1, f2, f3])
}
