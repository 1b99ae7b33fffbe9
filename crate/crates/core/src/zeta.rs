//! Riemann zeta values from Cesàro means of `Σ n^α − Fp∫ t^α`, exact values
//! at the non-positive integers, `ζ′(0)`, and sampling expansions of
//! `Σ g(nε)` and of lattice sums.

use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Exec, KahanSum};
use crate::quad::{self, QuadOptions};
use crate::scalar::{binomial, factorial, rat_int, to_f64, Rational};
use crate::summability::{fp_riesz_power_integral, stabilize, CesaroLimit, CesaroOrder, Ladder};
use crate::testfn::{gamma, TestFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    Cesaro,
    BernoulliClosedForm,
    ConvergentSum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaValue {
    pub argument: f64,
    pub value: f64,
    /// Present for non-positive integer arguments.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub method: ZetaMethod,
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `Bₙ` with `B₁ = −1/2`.
pub fn bernoulli(n: u32) -> Rational {
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= n as usize {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let m = table.len() as i64;
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += binomial(m + 1, j as u32) * b;
        }
        table.push(-acc / rat_int(m + 1));
    }
    table[n as usize].clone()
}

/// `ζ(−m) = (−1)^m B_{m+1}/(m+1)`.
pub fn zeta_neg_int(m: u32) -> Rational {
    let b = bernoulli(m + 1) / rat_int(m as i64 + 1);
    if m.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

pub fn zeta_neg_int_value(m: u32) -> ZetaValue {
    let q = zeta_neg_int(m);
    ZetaValue {
        argument: -(m as f64),
        value: to_f64(&q),
        exact: Some(q.to_string()),
        method: ZetaMethod::BernoulliClosedForm,
    }
}

/// `M_k(X) = Σ_{n≤X} (1 − n/X)^k n^α − Fp∫₀^X (1 − t/X)^k t^α dt`.
pub fn zeta_cesaro_estimate(alpha: f64, k: CesaroOrder, x: f64) -> Result<f64> {
    zeta_cesaro_estimate_with(Exec::default(), alpha, k, x)
}

pub fn zeta_cesaro_estimate_with(exec: Exec, alpha: f64, k: CesaroOrder, x: f64) -> Result<f64> {
    if alpha == -1.0 {
        return Err(Error::Domain("alpha = -1 is the pole of zeta".into()));
    }
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("cutoff must be at least 1, got {x}")));
    }
    let n_max = x.floor() as usize;
    let kk = k.0 as i32;
    let integer_alpha = alpha.fract() == 0.0 && alpha.abs() < 64.0;
    let sum = par::sum_range(exec, 1..n_max + 1, |n| {
        let nf = n as f64;
        let p = if integer_alpha {
            nf.powi(alpha as i32)
        } else {
            nf.powf(alpha)
        };
        (1.0 - nf / x).powi(kk) * p
    });
    Ok(sum - fp_riesz_power_integral(alpha, k.0, x))
}

/// `ζ(−α)` from the `(C, k)` limit of [`zeta_cesaro_estimate`] on the ladder
/// `X/4, X/2, X`.
pub fn zeta_via_cesaro(alpha: f64, k: CesaroOrder, x: f64, tol: f64) -> Result<CesaroLimit> {
    if !(x >= 100.0) {
        return Err(Error::Domain(format!(
            "cutoff must be at least 100, got {x}"
        )));
    }
    stabilize(&Ladder::ending_at(x, tol), |xi| {
        zeta_cesaro_estimate(alpha, k, xi)
    })
}

fn harmonic(n: u32) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// `−[Σ_{2≤n≤X} (1 − n/X)^k log n − Fp∫₀^X (1 − t/X)^k log t dt]`.
pub fn zeta_prime_zero_estimate(x: f64, k: CesaroOrder) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("cutoff must be at least 2, got {x}")));
    }
    let n_max = x.floor() as usize;
    let kk = k.0 as i32;
    let sum = par::sum_range(Exec::default(), 2..n_max + 1, |n| {
        let nf = n as f64;
        (1.0 - nf / x).powi(kk) * nf.ln()
    });
    let k1 = k.0 as f64 + 1.0;
    let integral = x * (x.ln() - harmonic(k.0 + 1)) / k1;
    Ok(-(sum - integral))
}

/// `ζ′(0)` by Cesàro means on the ladder `X/4, X/2, X`.
pub fn zeta_prime_zero(x: f64, k: CesaroOrder, tol: f64) -> Result<CesaroLimit> {
    if !(x >= 1000.0) {
        return Err(Error::Domain(format!(
            "cutoff must be at least 1000, got {x}"
        )));
    }
    stabilize(&Ladder::ending_at(x, tol), |xi| {
        zeta_prime_zero_estimate(xi, k)
    })
}

/// `ζ(s)` for `s > 1` by Euler–Maclaurin with ten explicit terms.
pub fn zeta_convergent(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!(
            "convergent series needs s > 1, got {s}"
        )));
    }
    let n = 20.0f64;
    let mut acc: KahanSum = (1..20).map(|i| (i as f64).powf(-s)).collect();
    acc.add(n.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * n.powf(-s));
    // B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = s;
    for j in 1..=6u32 {
        let b = to_f64(&(bernoulli(2 * j) / factorial(2 * j)));
        acc.add(b * rising * n.powf(-s - 2.0 * j as f64 + 1.0));
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
    }
    Ok(acc.value())
}

/// ζ at a real argument: exact at the non-positive integers, convergent
/// series for `s > 1`, Cesàro means elsewhere.
pub fn zeta(s: f64) -> Result<ZetaValue> {
    if s <= 0.0 && s.fract() == 0.0 && s > -1e6 {
        return Ok(zeta_neg_int_value((-s) as u32));
    }
    if s == 1.0 {
        return Err(Error::Domain("zeta has a pole at s = 1".into()));
    }
    if s > 1.0 {
        return Ok(ZetaValue {
            argument: s,
            value: zeta_convergent(s)?,
            exact: None,
            method: ZetaMethod::ConvergentSum,
        });
    }
    let alpha = -s;
    let k = CesaroOrder(alpha.max(0.0).ceil() as u32 + 2);
    let lim = zeta_via_cesaro(alpha, k, 1e5, 1e-4)?;
    Ok(ZetaValue {
        argument: s,
        value: lim.value,
        exact: None,
        method: ZetaMethod::Cesaro,
    })
}

fn integral_half_line(g: &TestFunction) -> Result<f64> {
    if let Some(v) = g.closed_power_moment(0.0) {
        return Ok(v.to_f64());
    }
    Ok(quad::integrate_to_infinity(|x| g.eval(x), 0.0, QuadOptions::default())?.value)
}

/// `(1/ε)∫₀^∞ g + Σ_{m=0}^{order} ζ(−m) g⁽ᵐ⁾(0) εᵐ/m!`.
pub fn sampling_expansion(g: &TestFunction, eps: f64, order: u32) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let mut acc = KahanSum::new();
    acc.add(integral_half_line(g)? / eps);
    for m in 0..=order {
        let z = zeta_neg_int(m);
        if z.is_zero() {
            continue;
        }
        let d = g
            .derivative_at_zero(m as usize)
            .ok_or_else(|| Error::Capability(format!("g^({m})(0) is not available")))?;
        acc.add(to_f64(&z) * d.to_f64() * eps.powi(m as i32) / to_f64(&factorial(m)));
    }
    Ok(acc.value())
}

const SUM_MAX_TERMS: usize = 1 << 28;

/// `Σ_{n≥1} g(nε)` summed directly until the tail is negligible.
pub fn sampling_sum(g: &TestFunction, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let mut acc = KahanSum::new();
    let mut quiet = 0usize;
    for n in 1..SUM_MAX_TERMS {
        let v = g.eval(n as f64 * eps);
        acc.add(v);
        if v.abs() <= 1e-18 * acc.value().abs() || v == 0.0 {
            quiet += 1;
            // Rapid decay is assumed: a long run of negligible terms ends the sum.
            if quiet >= 64 && n as f64 * eps > 1.0 {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        tolerance: 1e-18,
        estimates: vec![acc.value()],
    })
}

/// A function on `Rⁿ` in one of the shapes lattice sums can exploit.
#[derive(Clone, Debug)]
pub enum LatticeFunction {
    /// `g(x) = Π h(xᵢ)`; `h` is evaluated on the whole line.
    Separable(TestFunction),
    /// `g(x) = f(|x|²)`.
    Radial(TestFunction),
}

/// `Σ_{k∈Zⁿ} g(kε)`, truncated once further shells are below `10⁻¹⁷` of
/// the running sum.
pub fn lattice_sampling(g: &LatticeFunction, eps: f64, n: u32) -> Result<f64> {
    lattice_sampling_with(Exec::default(), g, eps, n)
}

pub fn lattice_sampling_with(exec: Exec, g: &LatticeFunction, eps: f64, n: u32) -> Result<f64> {
    if !(eps > 0.0) || n == 0 {
        return Err(Error::Domain("need eps > 0 and n >= 1".into()));
    }
    match g {
        LatticeFunction::Separable(h) => {
            let line = {
                let mut acc = KahanSum::new();
                acc.add(h.eval(0.0));
                let pos = signed_tail(|k| h.eval(k as f64 * eps) + h.eval(-(k as f64) * eps))?;
                acc.add(pos);
                acc.value()
            };
            Ok(line.powi(n as i32))
        }
        LatticeFunction::Radial(f) => {
            // Grow the shell range until the last block of shells is negligible.
            let mut q_max = ((8.0 / (eps * eps)).ceil() as usize).max(64);
            loop {
                let counts = crate::spectra::shell_counts(n, q_max as u64);
                let total = par::sum_range(exec, 0..q_max + 1, |q| {
                    let r = counts[q];
                    if r == 0 {
                        0.0
                    } else {
                        r as f64 * f.eval(q as f64 * eps * eps)
                    }
                });
                let lo = q_max - q_max / 8;
                let boundary = par::sum_range(exec, lo..q_max + 1, |q| {
                    counts[q] as f64 * f.eval(q as f64 * eps * eps).abs()
                });
                if boundary <= 1e-17 * total.abs() || boundary == 0.0 {
                    return Ok(total);
                }
                if q_max > 1 << 24 {
                    return Err(Error::Truncation {
                        radius: (q_max as f64).sqrt() * eps,
                        boundary,
                    });
                }
                q_max *= 2;
            }
        }
    }
}

fn signed_tail<F: Fn(u64) -> f64>(term: F) -> Result<f64> {
    let mut acc = KahanSum::new();
    let mut quiet = 0;
    for k in 1..SUM_MAX_TERMS as u64 {
        let v = term(k);
        acc.add(v);
        if v.abs() <= 1e-18 * acc.value().abs() || v == 0.0 {
            quiet += 1;
            if quiet >= 64 {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        tolerance: 1e-18,
        estimates: vec![acc.value()],
    })
}

/// `ε⁻ⁿ ∫_{Rⁿ} g`.
pub fn lattice_integral(g: &LatticeFunction, eps: f64, n: u32) -> Result<f64> {
    if !(eps > 0.0) || n == 0 {
        return Err(Error::Domain("need eps > 0 and n >= 1".into()));
    }
    let opts = QuadOptions::with_abs_tol(1e-14);
    let integral = match g {
        LatticeFunction::Separable(h) => {
            let line = quad::integrate_to_infinity(|x| h.eval(x) + h.eval(-x), 0.0, opts)?.value;
            line.powi(n as i32)
        }
        LatticeFunction::Radial(f) => {
            let area = 2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0);
            // r^{n−1} dr with r² = s: (1/2) s^{n/2−1} ds
            let half = n as f64 / 2.0 - 1.0;
            let radial = match f.closed_power_moment(half) {
                Some(v) => v.to_f64(),
                None => quad::integrate_to_infinity(|s| f.eval(s) * s.powf(half), 0.0, opts)?.value,
            };
            area * radial / 2.0
        }
    };
    Ok(integral / eps.powi(n as i32))
}
