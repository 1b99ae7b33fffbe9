//! Smooth, rapidly decaying functions on `[0, ∞)` together with whatever is
//! known about them in closed form (derivatives at the origin, integrals).

use std::fmt;
use std::sync::Arc;

use crate::scalar::{factorial, rat_int, Scalar};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type DerivFn = Arc<dyn Fn(usize) -> Scalar + Send + Sync>;
type PowerMomentFn = Arc<dyn Fn(f64) -> Option<Scalar> + Send + Sync>;

#[derive(Clone)]
pub struct TestFunction {
    name: String,
    f: RealFn,
    derivatives: Option<DerivFn>,
    /// Closed-form `Fp ∫₀^∞ x^α g(x) dx` when known.
    power_moments: Option<PowerMomentFn>,
    smooth: bool,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("derivatives", &self.derivatives.is_some())
            .field("power_moments", &self.power_moments.is_some())
            .field("smooth", &self.smooth)
            .finish()
    }
}

impl TestFunction {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            f: Arc::new(f),
            derivatives: None,
            power_moments: None,
            smooth: true,
        }
    }

    pub fn with_derivatives<D>(mut self, d: D) -> Self
    where
        D: Fn(usize) -> Scalar + Send + Sync + 'static,
    {
        self.derivatives = Some(Arc::new(d));
        self
    }

    pub fn with_power_moments<M>(mut self, m: M) -> Self
    where
        M: Fn(f64) -> Option<Scalar> + Send + Sync + 'static,
    {
        self.power_moments = Some(Arc::new(m));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn has_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    /// `g⁽ᵐ⁾(0)`, if the function carries its derivatives.
    pub fn derivative_at_zero(&self, m: usize) -> Option<Scalar> {
        self.derivatives.as_ref().map(|d| d(m))
    }

    /// Closed-form `Fp ∫₀^∞ x^α g(x) dx`, if registered for this `α`.
    pub fn closed_power_moment(&self, alpha: f64) -> Option<Scalar> {
        self.power_moments.as_ref().and_then(|m| m(alpha))
    }

    /// `e^{-x}`: derivatives `(-1)^m`, `Fp ∫ x^α e^{-x} = Γ(α+1)` off the poles.
    pub fn exp_decay() -> Self {
        Self::new("exp(-x)", |x: f64| (-x).exp())
            .with_derivatives(|m| Scalar::from(if m % 2 == 0 { 1 } else { -1 }))
            .with_power_moments(|alpha| gamma_at(alpha + 1.0))
    }

    /// `e^{-x²}`: odd derivatives vanish, `g⁽²ᵏ⁾(0) = (-1)^k (2k)!/k!`.
    pub fn gaussian() -> Self {
        Self::new("exp(-x^2)", |x: f64| (-x * x).exp())
            .with_derivatives(|m| {
                if m % 2 == 1 {
                    Scalar::zero()
                } else {
                    let k = (m / 2) as u32;
                    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
                    Scalar::Exact(rat_int(sign) * factorial(2 * k) / factorial(k))
                }
            })
            .with_power_moments(|alpha| {
                // ∫ x^α e^{-x²} = Γ((α+1)/2)/2
                gamma_at((alpha + 1.0) / 2.0).map(|g| g * Scalar::Exact(crate::scalar::rat(1, 2)))
            })
    }

    /// The identically zero function.
    pub fn zero() -> Self {
        Self::new("0", |_| 0.0)
            .with_derivatives(|_| Scalar::zero())
            .with_power_moments(|_| Some(Scalar::zero()))
    }

    /// Indicator of `[0, cut]`; flagged as non-smooth.
    pub fn characteristic(cut: f64) -> Self {
        let mut g = Self::new(
            format!("chi[0,{cut}]"),
            move |x| if x <= cut { 1.0 } else { 0.0 },
        );
        g.smooth = false;
        g
    }
}

/// Γ(s) for `s` not a non-positive integer; exact when `s` is a positive integer.
pub fn gamma_at(s: f64) -> Option<Scalar> {
    if s <= 0.0 && s.fract() == 0.0 {
        return None;
    }
    if s > 0.0 && s.fract() == 0.0 && s <= 170.0 {
        return Some(Scalar::Exact(factorial(s as u32 - 1)));
    }
    Some(Scalar::Float(gamma(s)))
}

/// Lanczos approximation (g = 7, n = 9), reflected for `x < 1/2`.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + G + 0.5;
        let mut a = C[0];
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}
