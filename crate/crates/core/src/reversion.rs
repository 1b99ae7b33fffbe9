//! Lagrange–Bürmann coefficients of first-order radial symbols and the
//! spectral-density expansion they generate.
//!
//! A first-order symbol `p(z) = p₁z + p₀ + p₋₁/z + …` is stored as the
//! Laurent series `p(1/ζ) = p₁ζ⁻¹ + p₀ + p₋₁ζ + …`. The coefficient `c_j`
//! of `ζⁿ` in `p(1/ζ)^{j−n}` gives the density term
//! `Ω_n c_j λ^{(n−d−j)/d} / (d(2π)ⁿ)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{AsymptoticExpansion, Sense, Term, Variable};
use crate::scalar::{rat_int, to_f64, Rational, Scalar};
use crate::testfn::gamma;

/// Field operations needed for formal series.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_positive(&self) -> bool;
}

impl Coeff for Rational {
    fn from_i64(n: i64) -> Self {
        rat_int(n)
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl Coeff for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

/// `Σ_{i} cᵢ ζ^{leading_exponent + i}`, known exactly below `truncation`
/// (`None` means every further coefficient is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries<T = Rational> {
    leading_exponent: i64,
    coeffs: Vec<T>,
    truncation: Option<i64>,
}

impl<T: Coeff> LaurentSeries<T> {
    pub fn new(leading_exponent: i64, mut coeffs: Vec<T>, truncation: Option<i64>) -> Result<Self> {
        let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..zeros);
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "a Laurent series needs a nonzero coefficient".into(),
            ));
        }
        let leading_exponent = leading_exponent + zeros as i64;
        if let Some(t) = truncation {
            if t < leading_exponent + coeffs.len() as i64 {
                coeffs.truncate((t - leading_exponent).max(0) as usize);
                if coeffs.is_empty() {
                    return Err(Error::Domain("truncation removes every coefficient".into()));
                }
            }
        }
        Ok(Self {
            leading_exponent,
            coeffs,
            truncation,
        })
    }

    /// The symbol `p₁z + p₀ + p₋₁/z + …` from `[p₁, p₀, p₋₁, …]`. With
    /// `exact`, the listed terms are the whole symbol; otherwise the series
    /// is known only through the last listed coefficient.
    pub fn from_symbol(coeffs: Vec<T>, exact: bool) -> Result<Self> {
        match coeffs.first() {
            Some(p1) if p1.is_positive() => {}
            Some(p1) => return Err(Error::Ellipticity(p1.to_f64())),
            None => return Err(Error::Domain("empty symbol".into())),
        }
        let truncation = if exact {
            None
        } else {
            Some(coeffs.len() as i64 - 1)
        };
        Self::new(-1, coeffs, truncation)
    }

    pub fn leading_exponent(&self) -> i64 {
        self.leading_exponent
    }

    pub fn leading_coefficient(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    /// Coefficient of `ζ^e`.
    pub fn coeff(&self, e: i64) -> Result<T> {
        if let Some(t) = self.truncation {
            if e >= t {
                return Err(Error::Order {
                    required: e,
                    available: t - 1,
                });
            }
        }
        let i = e - self.leading_exponent;
        if i < 0 || i as usize >= self.coeffs.len() {
            return Ok(T::zero());
        }
        Ok(self.coeffs[i as usize].clone())
    }

    /// `self^m` for any integer `m`, through exponent `through` (inclusive).
    pub fn pow(&self, m: i64, through: i64) -> Result<Self> {
        if m == 0 {
            return Self::new(0, vec![T::one()], None);
        }
        let lead = self.leading_exponent * m;
        if through < lead {
            return Err(Error::Domain(format!(
                "power starts at exponent {lead}, above {through}"
            )));
        }
        let len = (through - lead + 1) as usize;
        // Normalized series a(ζ) = 1 + a₁ζ + … needs a₁..a_{len−1}.
        let a0 = self.coeffs[0].clone();
        let mut a = Vec::with_capacity(len);
        for i in 0..len {
            a.push(self.coeff(self.leading_exponent + i as i64)? / a0.clone());
        }
        // J.C.P. Miller: b_k = (1/k) Σ_{i=1}^{k} ((m+1)i − k) a_i b_{k−i}
        let mut b: Vec<T> = vec![T::one()];
        for k in 1..len {
            let mut acc = T::zero();
            for i in 1..=k {
                let w = T::from_i64((m + 1) * i as i64 - k as i64);
                acc = acc + w * a[i].clone() * b[k - i].clone();
            }
            b.push(acc / T::from_i64(k as i64));
        }
        let scale = pow_signed(&a0, m);
        let coeffs = b.into_iter().map(|x| x * scale.clone()).collect();
        Ok(Self {
            leading_exponent: lead,
            coeffs,
            truncation: Some(through + 1),
        })
    }

    pub fn to_f64(&self) -> LaurentSeries<f64> {
        LaurentSeries {
            leading_exponent: self.leading_exponent,
            coeffs: self.coeffs.iter().map(Coeff::to_f64).collect(),
            truncation: self.truncation,
        }
    }
}

fn pow_signed<T: Coeff>(x: &T, m: i64) -> T {
    let mut r = T::one();
    for _ in 0..m.unsigned_abs() {
        r = r * x.clone();
    }
    if m < 0 {
        T::one() / r
    } else {
        r
    }
}

impl LaurentSeries<Rational> {
    /// Parses `p1,p0,p-1,...` (rationals such as `1/2` allowed).
    pub fn parse_symbol(text: &str, exact: bool) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|s| crate::poly::parse_rational(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_symbol(coeffs, exact)
    }
}

/// Area `Ω_n = 2π^{n/2}/Γ(n/2)` of the unit sphere `S^{n−1} ⊂ Rⁿ`.
pub fn sphere_area(n: u32) -> Result<f64> {
    match n {
        0 => Err(Error::Domain("dimension must be at least 1".into())),
        1 => Ok(2.0),
        2 => Ok(2.0 * PI),
        3 => Ok(4.0 * PI),
        4 => Ok(2.0 * PI * PI),
        _ => Ok(2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)),
    }
}

/// `c_j`: the coefficient of `ζⁿ` in `p(1/ζ)^{j−n}`.
pub fn lagrange_burmann_cj<T: Coeff>(p: &LaurentSeries<T>, n: u32, j: u32) -> Result<T> {
    if p.leading_exponent() != -1 {
        return Err(Error::Domain(format!(
            "expected a first-order symbol (leading exponent -1 in 1/z), got {}",
            p.leading_exponent()
        )));
    }
    if !p.leading_coefficient().is_positive() {
        return Err(Error::Ellipticity(p.leading_coefficient().to_f64()));
    }
    let m = j as i64 - n as i64;
    let power = p.pow(m, n as i64)?;
    power.coeff(n as i64)
}

/// Density expansion `Σ_j a_j λ^{(n−d−j)/d} / (d(2π)ⁿ)` with `a_j = Ω_n c_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityExpansion {
    pub n: u32,
    pub d: u32,
    pub prefactor: f64,
    pub omega: f64,
    /// `c_j` (exact when the symbol is rational).
    pub c: Vec<Scalar>,
    /// `a_j = Ω_n c_j`.
    pub a: Vec<f64>,
    #[serde(serialize_with = "serialize_exponents")]
    pub exponents: Vec<Rational64>,
}

fn serialize_exponents<S: serde::Serializer>(
    e: &[Rational64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for x in e {
        seq.serialize_element(&(*x.numer() as f64 / *x.denom() as f64))?;
    }
    seq.end()
}

impl DensityExpansion {
    /// The density as an expansion in λ with coefficients `prefactor · a_j`.
    pub fn to_expansion(&self) -> AsymptoticExpansion {
        let terms = self
            .a
            .iter()
            .zip(&self.exponents)
            .map(|(a, e)| Term::power(Scalar::Float(self.prefactor * a), *e))
            .collect();
        AsymptoticExpansion::new(Variable::Lambda, Sense::Ordinary).with_terms(terms)
    }

    pub fn eval(&self, lam: f64) -> f64 {
        self.to_expansion().eval(lam)
    }
}

pub fn density_expansion<T: Coeff>(
    p: &LaurentSeries<T>,
    n: u32,
    d: u32,
    j_max: u32,
) -> Result<DensityExpansion>
where
    Scalar: From<T>,
{
    if d == 0 {
        return Err(Error::Domain("operator order must be at least 1".into()));
    }
    let omega = sphere_area(n)?;
    let mut c = Vec::new();
    let mut a = Vec::new();
    let mut exponents = Vec::new();
    for j in 0..=j_max {
        let cj = lagrange_burmann_cj(p, n, j)?;
        a.push(omega * cj.to_f64());
        c.push(Scalar::from(cj));
        exponents.push(Rational64::new(n as i64 - d as i64 - j as i64, d as i64));
    }
    Ok(DensityExpansion {
        n,
        d,
        prefactor: 1.0 / (d as f64 * (2.0 * PI).powi(n as i32)),
        omega,
        c,
        a,
        exponents,
    })
}

/// `q₂ = ½(σ(H²) − σ(H)²)`, `q₃ = ⅙(σ(H³) − 3σ(H²)σ(H) + 2σ(H)³)`.
pub fn q_coefficients(s1: f64, s2: f64, s3: f64) -> (f64, f64) {
    (
        0.5 * (s2 - s1 * s1),
        (s3 - 3.0 * s2 * s1 + 2.0 * s1 * s1 * s1) / 6.0,
    )
}

/// `a₂ = (n−2)Ω_n/2 · (R/6 − C)` for a Laplace-type operator, `n ≥ 3`.
pub fn a2_laplacian(n: u32, scalar_curvature: f64, potential: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "the closed form needs n >= 3; for n = {n} the coefficient is a moment"
        )));
    }
    Ok((n as f64 - 2.0) * sphere_area(n)? / 2.0 * (scalar_curvature / 6.0 - potential))
}

/// `b_{2k} = 2^k a_{2k} / (Ω_n (n−2)(n−4)⋯(n−2k))`.
pub fn b2k_relation(a2k: f64, n: u32, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let mut den = sphere_area(n)?;
    for m in 1..=k {
        let f = n as i64 - 2 * m as i64;
        if f == 0 {
            return Err(Error::Pole { m });
        }
        den *= f as f64;
    }
    Ok(2f64.powi(k as i32) * a2k / den)
}
