//! Multiprecision evaluation of the S³ heat trace, for relative differences
//! far below the double-precision floor.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

fn to_f64(x: &BigFloat, cc: &mut Consts) -> Result<f64> {
    let text = x
        .format(Radix::Dec, RM, cc)
        .map_err(|e| Error::Capability(format!("multiprecision formatting failed: {e:?}")))?;
    text.parse::<f64>()
        .map_err(|e| Error::Parse(format!("multiprecision value {text}: {e}")))
}

/// `|Σ_{m≥1} m² e^{−tm²} − (√π/4) t^{−3/2}| / ((√π/4) t^{−3/2})` at `bits`
/// bits of working precision.
pub fn s3_relative_difference(t: f64, bits: usize) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("need 0 < t <= 1, got {t}")));
    }
    if bits < 64 {
        return Err(Error::Domain(format!("need at least 64 bits, got {bits}")));
    }
    let mut cc = Consts::new().map_err(|e| Error::Capability(format!("{e:?}")))?;
    let p = bits + 32;
    let bt = BigFloat::from_f64(t, p);
    let m_max = ((0.7 * bits as f64 + 50.0) / t).sqrt().ceil() as u64 + 2;
    let mut sum = BigFloat::from_u64(0, p);
    for m in 1..=m_max {
        let m2 = BigFloat::from_u64(m * m, p);
        let e = bt.mul(&m2, p, RM).neg().exp(p, RM, &mut cc);
        sum = sum.add(&m2.mul(&e, p, RM), p, RM);
    }
    let pi = cc.pi(p, RM);
    let t3 = bt.powi(3, p, RM);
    let asymptote = pi
        .div(&t3, p, RM)
        .sqrt(p, RM)
        .div(&BigFloat::from_u64(4, p), p, RM);
    let rel = sum.sub(&asymptote, p, RM).div(&asymptote, p, RM).abs();
    to_f64(&rel, &mut cc)
}
