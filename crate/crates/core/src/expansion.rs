//! Finite asymptotic expansions `Σ c · x^e · (log x)^p` and their shared
//! JSON record.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::scalar::Scalar;

/// Direction of the asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    /// λ → ∞
    Lambda,
    /// t → 0⁺
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "order")]
pub enum Sense {
    Ordinary,
    /// Holds in the Cesàro sense; the order is recorded when known.
    Cesaro(Option<u32>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Scalar,
    pub exponent: Rational64,
    pub log_power: u32,
}

impl Term {
    pub fn power(coeff: impl Into<Scalar>, exponent: Rational64) -> Self {
        Self {
            coeff: coeff.into(),
            exponent,
            log_power: 0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        self.coeff.to_f64() * x.powf(e) * x.ln().powi(self.log_power as i32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticExpansion {
    pub variable: Variable,
    pub sense: Sense,
    pub terms: Vec<Term>,
}

impl AsymptoticExpansion {
    pub fn new(variable: Variable, sense: Sense) -> Self {
        Self {
            variable,
            sense,
            terms: Vec::new(),
        }
    }

    pub fn with_terms(mut self, terms: Vec<Term>) -> Self {
        self.terms = terms;
        self
    }

    pub fn push(&mut self, term: Term) {
        self.terms.push(term);
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the first `n` terms at `x`.
    pub fn eval_truncated(&self, x: f64, n: usize) -> f64 {
        self.terms.iter().take(n).map(|t| t.eval(x)).sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_truncated(x, self.terms.len())
    }

    /// Coefficient of `x^e (log x)^p`, if present.
    pub fn coeff(&self, exponent: Rational64, log_power: u32) -> Option<&Scalar> {
        self.terms
            .iter()
            .find(|t| t.exponent == exponent && t.log_power == log_power)
            .map(|t| &t.coeff)
    }

    /// Merges terms with equal exponent and log power, drops exact zeros and
    /// orders the terms by dominance (decreasing exponent for λ → ∞,
    /// increasing for t → 0⁺).
    pub fn normalized(&self) -> Self {
        let mut merged: Vec<Term> = Vec::new();
        for t in &self.terms {
            match merged
                .iter_mut()
                .find(|m| m.exponent == t.exponent && m.log_power == t.log_power)
            {
                Some(m) => m.coeff = &m.coeff + &t.coeff,
                None => merged.push(t.clone()),
            }
        }
        merged.retain(|t| !(t.coeff.is_exact() && t.coeff.is_zero()));
        match self.variable {
            Variable::Lambda => merged.sort_by(|a, b| {
                b.exponent
                    .cmp(&a.exponent)
                    .then(b.log_power.cmp(&a.log_power))
            }),
            Variable::T => merged.sort_by(|a, b| {
                a.exponent
                    .cmp(&b.exponent)
                    .then(b.log_power.cmp(&a.log_power))
            }),
        }
        Self {
            variable: self.variable,
            sense: self.sense,
            terms: merged,
        }
    }

    pub fn record(&self, moments: &[Scalar]) -> ExpansionRecord {
        ExpansionRecord {
            variable: self.variable,
            sense: self.sense,
            terms: self.terms.iter().map(TermRecord::from).collect(),
            moments: moments.iter().map(ValueRecord::from).collect(),
        }
    }
}

/// Serialized term: floating values for plotting plus exact strings when
/// the coefficient is rational.
#[derive(Debug, Clone, Serialize)]
pub struct TermRecord {
    pub coeff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_exact: Option<String>,
    pub exponent: f64,
    pub exponent_exact: String,
    pub logpow: u32,
}

impl From<&Term> for TermRecord {
    fn from(t: &Term) -> Self {
        Self {
            coeff: t.coeff.to_f64(),
            coeff_exact: t.coeff.exact_string(),
            exponent: t.exponent.to_f64().unwrap_or(f64::NAN),
            exponent_exact: t.exponent.to_string(),
            logpow: t.log_power,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueRecord {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl From<&Scalar> for ValueRecord {
    fn from(s: &Scalar) -> Self {
        Self {
            value: s.to_f64(),
            exact: s.exact_string(),
        }
    }
}

/// `{terms: [{coeff, exponent, logpow}], moments: [...], sense}`
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionRecord {
    pub variable: Variable,
    pub sense: Sense,
    pub terms: Vec<TermRecord>,
    pub moments: Vec<ValueRecord>,
}
