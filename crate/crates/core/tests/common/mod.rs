//! Independent numerical oracles shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// `p(r) = Σ_k coeffs[k] r^{1−k}` and its derivative at complex `r`.
fn symbol_and_derivative(coeffs: &[f64], r: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate() {
        let e = 1 - k as i32;
        p += c * r.powi(e);
        if e != 0 {
            dp += c * e as f64 * r.powi(e - 1);
        }
    }
    (p, dp)
}

/// Taylor coefficients `c_0..=c_jmax` of `F(u) = r^{n−1}/p′(r) · u^{n−1}`,
/// where `p(r) = 1/u` on the branch `r ~ 1/(p₁u)`, by solving the symbol
/// equation with Newton's method on a circle `|u| = rho` and applying the
/// trapezoidal rule to Cauchy's integral.
pub fn reversion_oracle(coeffs: &[f64], n: u32, j_max: u32, rho: f64) -> Vec<f64> {
    const M: usize = 128;
    let mut acc = vec![Complex64::new(0.0, 0.0); j_max as usize + 1];
    for m in 0..M {
        let theta = 2.0 * PI * m as f64 / M as f64;
        let u = Complex64::from_polar(rho, theta);
        let lam = 1.0 / u;
        let mut r = (lam - coeffs.get(1).copied().unwrap_or(0.0)) / coeffs[0];
        for _ in 0..100 {
            let (p, dp) = symbol_and_derivative(coeffs, r);
            let step = (p - lam) / dp;
            r -= step;
            if step.norm() <= 1e-16 * r.norm() {
                break;
            }
        }
        let (_, dp) = symbol_and_derivative(coeffs, r);
        let f = r.powi(n as i32 - 1) / dp * u.powi(n as i32 - 1);
        for (j, a) in acc.iter_mut().enumerate() {
            *a += f * Complex64::from_polar(1.0, -(j as f64) * theta);
        }
    }
    acc.iter()
        .enumerate()
        .map(|(j, a)| a.re / M as f64 / rho.powi(j as i32))
        .collect()
}

/// `Σ_{k∈Z} e^{−(εk)²}` by Poisson summation on whichever side converges faster.
pub fn gaussian_theta(eps: f64) -> f64 {
    if eps < 1.0 {
        let s: f64 = (1..40)
            .map(|k| (-(PI * k as f64 / eps).powi(2)).exp())
            .sum();
        PI.sqrt() / eps * (1.0 + 2.0 * s)
    } else {
        1.0 + 2.0
            * (1..40)
                .map(|k| (-(eps * k as f64).powi(2)).exp())
                .sum::<f64>()
    }
}
