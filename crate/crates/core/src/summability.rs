//! Cesàro, Hölder and Riesz means of sequences and weighted Dirac combs,
//! Hadamard finite parts and pseudofunction pairings.
//!
//! A series `Σ aₙ` is handled as the comb `f = Σ aₙ δ(x − pₙ)`. The order-k
//! primitive of the comb supported on the left is
//! `f_k(x) = Σ_{pₙ ≤ x} (x − pₙ)^{k−1} aₙ / (k−1)!`, and a Cesàro evaluation
//! of order `k` at cutoff `X` reduces to the Riesz sum
//! `Σ_{pₙ ≤ X} (1 − pₙ/X)^k aₙ φ(pₙ)`.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Exec, KahanSum};
use crate::quad::{self, QuadOptions};
use crate::scalar::{binomial, factorial, to_f64, Rational};
use crate::testfn::TestFunction;

/// The order `k` of a `(C, k)` mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CesaroOrder(pub u32);

impl CesaroOrder {
    pub fn get(self) -> u32 {
        self.0
    }
}

impl From<u32> for CesaroOrder {
    fn from(k: u32) -> Self {
        CesaroOrder(k)
    }
}

/// A weighted Dirac comb `Σ aᵢ δ(x − pᵢ)` with strictly increasing support.
pub trait Comb: Sync {
    /// Number of atoms with `pᵢ ≤ x`. Atoms sitting exactly at `x` count.
    fn count_upto(&self, x: f64) -> usize;
    /// The `i`-th atom `(pᵢ, aᵢ)`, `i` counted from zero.
    fn atom(&self, i: usize) -> (f64, f64);
}

/// Materialized comb.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComb {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedComb {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Domain(format!(
                "{} support points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(
                "support points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points, weights })
    }

    pub fn single(point: f64, weight: f64) -> Self {
        Self {
            points: vec![point],
            weights: vec![weight],
        }
    }

    /// Samples `n ↦ (point(n), weight(n))` for `n = first, first+1, …` while
    /// `point(n) ≤ cutoff`.
    pub fn from_fn<P, W>(first: u64, cutoff: f64, point: P, weight: W) -> Result<Self>
    where
        P: Fn(u64) -> f64,
        W: Fn(u64) -> f64,
    {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut n = first;
        loop {
            let p = point(n);
            if p > cutoff {
                break;
            }
            points.push(p);
            weights.push(weight(n));
            n += 1;
        }
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Pointwise product with a function: the comb `Σ aᵢ φ(pᵢ) δ(x − pᵢ)`.
    pub fn times<F: Fn(f64) -> f64>(&self, phi: F) -> Self {
        Self {
            points: self.points.clone(),
            weights: self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(&p, &a)| a * phi(p))
                .collect(),
        }
    }
}

impl Comb for WeightedComb {
    fn count_upto(&self, x: f64) -> usize {
        self.points.partition_point(|&p| p <= x)
    }

    fn atom(&self, i: usize) -> (f64, f64) {
        (self.points[i], self.weights[i])
    }
}

/// Comb produced on demand from an increasing point map `n ↦ pₙ`,
/// `n ≥ first`. Cloning the generator (not an iterator) is how callers share
/// it between threads.
#[derive(Clone)]
pub struct LazyComb<P, W> {
    first: u64,
    point: P,
    weight: W,
}

impl<P, W> LazyComb<P, W>
where
    P: Fn(u64) -> f64 + Sync,
    W: Fn(u64) -> f64 + Sync,
{
    pub fn new(first: u64, point: P, weight: W) -> Self {
        Self {
            first,
            point,
            weight,
        }
    }

    pub fn materialize(&self, cutoff: f64) -> Result<WeightedComb> {
        WeightedComb::from_fn(self.first, cutoff, &self.point, &self.weight)
    }
}

impl<P, W> Comb for LazyComb<P, W>
where
    P: Fn(u64) -> f64 + Sync,
    W: Fn(u64) -> f64 + Sync,
{
    fn count_upto(&self, x: f64) -> usize {
        if (self.point)(self.first) > x {
            return 0;
        }
        // Exponential search for an upper bracket, then bisection.
        let mut hi = 1u64;
        while (self.point)(self.first + hi) <= x {
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if (self.point)(self.first + mid) <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + 1) as usize
    }

    fn atom(&self, i: usize) -> (f64, f64) {
        let n = self.first + i as u64;
        ((self.point)(n), (self.weight)(n))
    }
}

/// `Σ_{n≥1} aₙ δ(x − n)` with weights from a closure.
pub fn integer_comb<W>(weight: W) -> LazyComb<fn(u64) -> f64, W>
where
    W: Fn(u64) -> f64 + Sync,
{
    fn identity(n: u64) -> f64 {
        n as f64
    }
    LazyComb::new(1, identity as fn(u64) -> f64, weight)
}

fn check_sequence(a: &[f64], n: usize) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Domain("empty sequence".into()));
    }
    if n == 0 || n > a.len() {
        return Err(Error::Domain(format!(
            "index {n} outside 1..={} of the supplied sequence",
            a.len()
        )));
    }
    Ok(())
}

/// Hölder mean `H⁽ᵏ⁾ₙ`; `a[0]` is `a₁`.
pub fn holder_mean(a: &[f64], k: CesaroOrder, n: usize) -> Result<f64> {
    check_sequence(a, n)?;
    let mut h: Vec<f64> = a[..n].to_vec();
    for _ in 0..k.0 {
        let mut acc = KahanSum::new();
        for (i, x) in h.iter_mut().enumerate() {
            acc.add(*x);
            *x = acc.value() / (i + 1) as f64;
        }
    }
    Ok(h[n - 1])
}

/// Cesàro mean `k! A⁽ᵏ⁾ₙ / nᵏ` with `A⁽⁰⁾ = a` and `A⁽ʲ⁾ₙ = Σ_{m≤n} A⁽ʲ⁻¹⁾ₘ`.
pub fn cesaro_mean(a: &[f64], k: CesaroOrder, n: usize) -> Result<f64> {
    check_sequence(a, n)?;
    let mut s: Vec<f64> = a[..n].to_vec();
    for _ in 0..k.0 {
        let mut acc = KahanSum::new();
        for x in s.iter_mut() {
            acc.add(*x);
            *x = acc.value();
        }
    }
    let scale = to_f64(&factorial(k.0)) / (n as f64).powi(k.0 as i32);
    Ok(s[n - 1] * scale)
}

/// Partial sums `sₙ = a₁ + … + aₙ`.
pub fn partial_sums(a: &[f64]) -> Vec<f64> {
    let mut acc = KahanSum::new();
    a.iter()
        .map(|&x| {
            acc.add(x);
            acc.value()
        })
        .collect()
}

/// `Σ_{pₙ ≤ μ} (1 − pₙ/μ)^k aₙ`.
pub fn riesz_sum<C: Comb + ?Sized>(comb: &C, k: CesaroOrder, mu: f64) -> Result<f64> {
    riesz_sum_with(Exec::default(), comb, k, mu)
}

pub fn riesz_sum_with<C: Comb + ?Sized>(
    exec: Exec,
    comb: &C,
    k: CesaroOrder,
    mu: f64,
) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Domain(format!(
            "Riesz parameter must be positive, got {mu}"
        )));
    }
    let count = comb.count_upto(mu);
    let k = k.0 as i32;
    Ok(par::sum_range(exec, 0..count, |i| {
        let (p, a) = comb.atom(i);
        (1.0 - p / mu).powi(k) * a
    }))
}

/// Riesz typical mean `(1/μ) Σ_{pₙ ≤ μ} (1 − pₙ/μ)^{k−1} aₙ`, `k ≥ 1`.
pub fn riesz_mean<C: Comb + ?Sized>(comb: &C, k: CesaroOrder, mu: f64) -> Result<f64> {
    if k.0 == 0 {
        return Err(Error::Domain("Riesz mean needs order k >= 1".into()));
    }
    Ok(riesz_sum(comb, CesaroOrder(k.0 - 1), mu)? / mu)
}

/// Order-`k` primitive `f_k(x) = Σ_{pₙ ≤ x} (x − pₙ)^{k−1} aₙ / (k−1)!`.
pub fn riesz_primitive<C: Comb + ?Sized>(comb: &C, k: u32, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain(
            "the comb itself is not a function; need k >= 1".into(),
        ));
    }
    let count = comb.count_upto(x);
    let norm = to_f64(&factorial(k - 1));
    Ok(par::sum_range(Exec::default(), 0..count, |i| {
        let (p, a) = comb.atom(i);
        (x - p).powi(k as i32 - 1) * a
    }) / norm)
}

/// Comb with exact rational support and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactComb {
    points: Vec<Rational>,
    weights: Vec<Rational>,
}

impl ExactComb {
    pub fn new(points: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Domain("points and weights differ in length".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "support points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points, weights })
    }

    pub fn to_float(&self) -> WeightedComb {
        WeightedComb {
            points: self.points.iter().map(to_f64).collect(),
            weights: self.weights.iter().map(to_f64).collect(),
        }
    }
}

/// [`riesz_primitive`] in exact arithmetic.
pub fn riesz_primitive_exact(comb: &ExactComb, k: u32, x: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(Error::Domain(
            "the comb itself is not a function; need k >= 1".into(),
        ));
    }
    let mut acc = Rational::zero();
    for (p, a) in comb.points.iter().zip(&comb.weights) {
        if p > x {
            break;
        }
        acc += num_traits::pow((x - p).clone(), (k - 1) as usize) * a;
    }
    Ok(acc / factorial(k - 1))
}

/// `(C, k)` estimate of `⟨f, φ⟩` at cutoff `X`: `Σ_{pₙ ≤ X} (1 − pₙ/X)^k aₙ φ(pₙ)`.
pub fn cesaro_evaluation<C, F>(comb: &C, phi: F, k: CesaroOrder, x: f64) -> Result<f64>
where
    C: Comb + ?Sized,
    F: Fn(f64) -> f64 + Sync + Send,
{
    if k.0 == 0 {
        return Err(Error::Domain("Cesàro evaluation needs order k >= 1".into()));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("cutoff must be positive, got {x}")));
    }
    let count = comb.count_upto(x);
    let k = k.0 as i32;
    Ok(par::sum_range(Exec::default(), 0..count, |i| {
        let (p, a) = comb.atom(i);
        (1.0 - p / x).powi(k) * a * phi(p)
    }))
}

/// Geometric cutoff ladder `X₀, r·X₀, r²·X₀, …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ladder {
    pub start: f64,
    pub ratio: f64,
    pub max_steps: usize,
    pub tol: f64,
}

impl Ladder {
    pub fn new(start: f64, max_steps: usize, tol: f64) -> Self {
        Self {
            start,
            ratio: 2.0,
            max_steps,
            tol,
        }
    }

    /// Three rungs `X/4, X/2, X`.
    pub fn ending_at(x: f64, tol: f64) -> Self {
        Self::new(x / 4.0, 3, tol)
    }

    pub fn rungs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.max_steps).map(move |i| self.start * self.ratio.powi(i as i32))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CesaroLimit {
    pub value: f64,
    /// `(X, estimate)` for every rung evaluated.
    pub estimates: Vec<(f64, f64)>,
    /// Largest pairwise difference among the last three estimates.
    pub spread: f64,
}

/// Runs `estimate` along the ladder until the last three values pairwise
/// agree within `ladder.tol`.
pub fn stabilize<F>(ladder: &Ladder, mut estimate: F) -> Result<CesaroLimit>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut estimates = Vec::with_capacity(ladder.max_steps);
    for x in ladder.rungs() {
        estimates.push((x, estimate(x)?));
        if estimates.len() >= 3 {
            let tail = &estimates[estimates.len() - 3..];
            let spread = (tail[0].1 - tail[1].1)
                .abs()
                .max((tail[1].1 - tail[2].1).abs())
                .max((tail[0].1 - tail[2].1).abs());
            if spread < ladder.tol {
                return Ok(CesaroLimit {
                    value: tail[2].1,
                    estimates,
                    spread,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        tolerance: ladder.tol,
        estimates: estimates.into_iter().map(|(_, v)| v).collect(),
    })
}

/// Cesàro limit of `⟨f, φ⟩` with ladder-based convergence detection.
pub fn cesaro_limit<C, F>(comb: &C, phi: F, k: CesaroOrder, ladder: &Ladder) -> Result<CesaroLimit>
where
    C: Comb + ?Sized,
    F: Fn(f64) -> f64 + Sync + Send,
{
    stabilize(ladder, |x| cesaro_evaluation(comb, &phi, k, x))
}

/// Hadamard finite part, with the coefficient of the discarded logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinitePartValue {
    pub value: f64,
    pub dropped_log_coefficient: f64,
}

/// `Fp ∫₀^upper x^α dx`. For `α = −1` the value is `log(upper)` and the
/// dropped `log ε` coefficient is reported as 1.
pub fn hadamard_fp_power(alpha: f64, upper: f64) -> Result<FinitePartValue> {
    if !(upper > 0.0) {
        return Err(Error::Domain(format!(
            "upper limit must be positive, got {upper}"
        )));
    }
    if alpha == -1.0 {
        return Ok(FinitePartValue {
            value: upper.ln(),
            dropped_log_coefficient: 1.0,
        });
    }
    Ok(FinitePartValue {
        value: upper.powf(alpha + 1.0) / (alpha + 1.0),
        dropped_log_coefficient: 0.0,
    })
}

/// Exact `Fp ∫₀^upper x^α dx` when the result is rational: `upper = 1`, or
/// `α` an integer other than −1.
pub fn hadamard_fp_power_exact(alpha: &Rational, upper: &Rational) -> Result<Rational> {
    let s = alpha + Rational::one();
    if s.is_zero() {
        return Err(Error::Unsupported(
            "alpha = -1 gives log(upper), not a rational".into(),
        ));
    }
    if !upper.is_positive() {
        return Err(Error::Domain("upper limit must be positive".into()));
    }
    if upper.is_one() {
        return Ok(s.recip());
    }
    if s.is_integer() {
        let e = s
            .to_integer()
            .to_i32()
            .ok_or_else(|| Error::Domain("exponent too large".into()))?;
        return Ok(num_traits::pow::Pow::pow(upper, e) / s);
    }
    Err(Error::Unsupported(format!(
        "{upper}^({s}) is not rational in general"
    )))
}

/// `Fp ∫₀^X (1 − t/X)^k t^α dt`: the Riesz-smoothed primitive of the
/// continuous density `t^α H(t)`. Logarithms from `t^{-1}` pieces follow the
/// `Fp ∫₀^X dt/t = log X` convention.
pub fn fp_riesz_power_integral(alpha: f64, k: u32, x: f64) -> f64 {
    let hits_log = (0..=k).any(|i| alpha + i as f64 == -1.0);
    if !hits_log {
        // X^{α+1} B(α+1, k+1) = X^{α+1} k!/((α+1)(α+2)⋯(α+k+1)), free of cancellation.
        let mut beta = 1.0;
        for i in 0..=k {
            beta *= (i.max(1)) as f64 / (alpha + 1.0 + i as f64);
        }
        return x.powf(alpha + 1.0) * beta;
    }
    let mut acc = KahanSum::new();
    for i in 0..=k {
        let c = to_f64(&binomial(k as i64, i)) * if i % 2 == 0 { 1.0 } else { -1.0 };
        let fp = hadamard_fp_power(alpha + i as f64, x).expect("x > 0").value;
        acc.add(c * fp / x.powi(i as i32));
    }
    acc.value()
}

/// `Fp ∫₀^∞ x^α g(x) dx` by quadrature on `[0, 1]` (after subtracting enough
/// of the Taylor polynomial of `g` at 0) and on `[1, ∞)`.
///
/// The term whose primitive would be a logarithm is dropped; its coefficient
/// `g⁽ʲ⁻¹⁾(0)/(j−1)!` is returned for `α = −j`.
pub fn fp_integral_power(
    alpha: f64,
    g: &TestFunction,
    opts: QuadOptions,
) -> Result<FinitePartValue> {
    let taylor_terms = if alpha > -1.0 {
        0
    } else {
        (-alpha - 1.0).floor() as usize + 1
    };
    let mut taylor = Vec::with_capacity(taylor_terms);
    for m in 0..taylor_terms {
        let d = g.derivative_at_zero(m).ok_or_else(|| {
            Error::Capability(format!("g^({m})(0) is needed for Fp with exponent {alpha}"))
        })?;
        taylor.push(d.to_f64() / to_f64(&factorial(m as u32)));
    }
    let head_integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let mut r = g.eval(x);
        let mut xp = 1.0;
        for c in &taylor {
            r -= c * xp;
            xp *= x;
        }
        r * x.powf(alpha)
    };
    let head = quad::integrate(head_integrand, 0.0, 1.0, opts)?;
    let tail = quad::integrate_to_infinity(|x| x.powf(alpha) * g.eval(x), 1.0, opts)?;
    let mut value = head.value + tail.value;
    let mut dropped = 0.0;
    for (m, c) in taylor.iter().enumerate() {
        let s = alpha + m as f64 + 1.0;
        if s == 0.0 {
            dropped = *c;
        } else {
            value += c / s;
        }
    }
    Ok(FinitePartValue {
        value,
        dropped_log_coefficient: dropped,
    })
}

/// `⟨Pf(x^{−j} H(x)), g⟩`, the Hadamard finite part of `∫₀^∞ g(x)/x^j dx`.
pub fn pseudofunction_eval(j: u32, g: &TestFunction) -> Result<f64> {
    pseudofunction_eval_with(j, g, QuadOptions::default())
}

pub fn pseudofunction_eval_with(j: u32, g: &TestFunction, opts: QuadOptions) -> Result<f64> {
    if j == 0 {
        return Err(Error::Domain(
            "pseudofunction order j must be positive".into(),
        ));
    }
    Ok(fp_integral_power(-(j as f64), g, opts)?.value)
}

/// Coefficient of `δ^{(j−1)}(λ)` in
/// `Pf((σλ)^{−j} H(σλ)) − σ^{−j} Pf(λ^{−j} H(λ))`, namely
/// `(−1)^{j−1} log σ / ((j−1)! σ^j)`.
pub fn pf_scaling_defect(j: u32, sigma: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::Domain(
            "pseudofunction order j must be positive".into(),
        ));
    }
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!(
            "scale must be positive, got {sigma}"
        )));
    }
    let sign = if (j - 1).is_even() { 1.0 } else { -1.0 };
    Ok(sign * sigma.ln() / (to_f64(&factorial(j - 1)) * sigma.powi(j as i32)))
}
