//! Model spectra: flat tori with girth 2π, round spheres, the circle, the
//! harmonic oscillator, and user-supplied spectra.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::summability::Comb;
use crate::testfn::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// `N(λ) ≤ scale · (offset + √max(λ − shift, 0))^power` for every `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingBound {
    pub scale: f64,
    pub offset: f64,
    pub power: f64,
    pub shift: f64,
}

impl CountingBound {
    pub fn eval(&self, lam: f64) -> f64 {
        self.scale * (self.offset + (lam - self.shift).max(0.0).sqrt()).powf(self.power)
    }
}

/// A discrete spectrum enumerated through `horizon`: every eigenvalue
/// `≤ horizon` is present with its multiplicity.
#[derive(Debug, Clone)]
pub struct Spectrum {
    name: String,
    dimension: u32,
    operator_order: u32,
    volume: Option<f64>,
    shift: f64,
    horizon: f64,
    levels: Arc<[Level]>,
    bound: Option<CountingBound>,
}

/// `r_n(q) = #{k ∈ Zⁿ : |k|² = q}` for `q = 0..=q_max`, by convolving the
/// one-dimensional counts `n` times.
pub fn shell_counts(n: u32, q_max: u64) -> Vec<u64> {
    let len = q_max as usize + 1;
    let squares: Vec<(usize, u64)> = (0..)
        .map(|m: usize| (m * m, if m == 0 { 1 } else { 2 }))
        .take_while(|&(s, _)| s < len)
        .collect();
    let mut r = vec![0u64; len];
    r[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; len];
        for (q, &c) in r.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(s, w) in &squares {
                if q + s >= len {
                    break;
                }
                next[q + s] += c * w;
            }
        }
        r = next;
    }
    r
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Volume of the unit sphere `Sⁿ ⊂ R^{n+1}`.
pub fn sphere_volume(n: u32) -> f64 {
    let m = n as f64 + 1.0;
    2.0 * PI.powf(m / 2.0) / gamma(m / 2.0)
}

/// Multiplicity `C(l+n, n) − C(l+n−2, n)` of the eigenvalue `l(l+n−1)` on `Sⁿ`.
pub fn sphere_multiplicity(n: u32, l: u64) -> u64 {
    let n = n as u64;
    let lower = if l >= 2 {
        binomial_u128(l + n - 2, n)
    } else {
        0
    };
    (binomial_u128(l + n, n) - lower) as u64
}

impl Spectrum {
    /// Flat torus `Tⁿ` with girths 2π: eigenvalues `q ≤ q_max` with
    /// multiplicity `r_n(q)`; absent shells are skipped.
    pub fn torus(n: u32, q_max: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("torus dimension must be at least 1".into()));
        }
        let counts = shell_counts(n, q_max);
        let levels: Vec<Level> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(q, &c)| Level {
                eigenvalue: q as f64,
                multiplicity: c,
            })
            .collect();
        Ok(Self {
            name: format!("torus{n}"),
            dimension: n,
            operator_order: 2,
            volume: Some((2.0 * PI).powi(n as i32)),
            shift: 0.0,
            horizon: q_max as f64,
            levels: levels.into(),
            bound: Some(CountingBound {
                scale: 2f64.powi(n as i32),
                offset: 0.5,
                power: n as f64,
                shift: 0.0,
            }),
        })
    }

    /// The circle of length 2π: eigenvalues `m²`, multiplicity 2 for `m ≥ 1`.
    pub fn circle(m_max: u64) -> Self {
        let mut s = Self::torus(1, m_max * m_max).expect("n = 1");
        s.name = "circle".into();
        s
    }

    /// Round `Sⁿ`: eigenvalues `l(l+n−1) + shift` for `l ≤ l_max`.
    pub fn sphere(n: u32, l_max: u64, shift: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("sphere dimension must be at least 2".into()));
        }
        let levels: Vec<Level> = (0..=l_max)
            .map(|l| Level {
                eigenvalue: (l * (l + n as u64 - 1)) as f64 + shift,
                multiplicity: sphere_multiplicity(n, l),
            })
            .collect();
        let horizon = levels.last().map(|l| l.eigenvalue).unwrap_or(shift);
        let name = if shift == 0.0 {
            format!("sphere{n}")
        } else {
            format!("sphere{n}+{shift}")
        };
        Ok(Self {
            name,
            dimension: n,
            operator_order: 2,
            volume: Some(sphere_volume(n)),
            shift,
            horizon,
            levels: levels.into(),
            // l² ≤ λ − shift and Σ_{i≤l} m_i ≤ 2(l+n)ⁿ
            bound: Some(CountingBound {
                scale: 2.0,
                offset: n as f64 + 1.0,
                power: n as f64,
                shift,
            }),
        })
    }

    /// Harmonic oscillator `−½d²/dx² + ½x²`: eigenvalues `l + 1/2`.
    pub fn oscillator(l_max: u64) -> Self {
        let levels: Vec<Level> = (0..=l_max)
            .map(|l| Level {
                eigenvalue: l as f64 + 0.5,
                multiplicity: 1,
            })
            .collect();
        Self {
            name: "oscillator".into(),
            dimension: 1,
            operator_order: 2,
            volume: None,
            shift: 0.0,
            horizon: l_max as f64 + 0.5,
            levels: levels.into(),
            bound: Some(CountingBound {
                scale: 1.0,
                offset: 1.0,
                power: 2.0,
                shift: 0.0,
            }),
        }
    }

    /// A spectrum from explicit levels. Repeated eigenvalues are merged;
    /// the horizon is the largest eigenvalue.
    pub fn custom(name: impl Into<String>, dimension: u32, levels: Vec<Level>) -> Result<Self> {
        let mut merged: Vec<Level> = Vec::with_capacity(levels.len());
        for lv in levels {
            if !lv.eigenvalue.is_finite() {
                return Err(Error::Domain("eigenvalues must be finite".into()));
            }
            if lv.multiplicity == 0 {
                return Err(Error::Domain(format!(
                    "zero multiplicity at {}",
                    lv.eigenvalue
                )));
            }
            match merged.last_mut() {
                Some(last) if last.eigenvalue == lv.eigenvalue => {
                    last.multiplicity += lv.multiplicity
                }
                Some(last) if last.eigenvalue > lv.eigenvalue => {
                    return Err(Error::Domain(format!(
                        "eigenvalues must be non-decreasing ({} after {})",
                        lv.eigenvalue, last.eigenvalue
                    )))
                }
                _ => merged.push(lv),
            }
        }
        let horizon = merged.last().map(|l| l.eigenvalue).unwrap_or(0.0);
        Ok(Self {
            name: name.into(),
            dimension,
            operator_order: 2,
            volume: None,
            shift: 0.0,
            horizon,
            levels: merged.into(),
            bound: None,
        })
    }

    /// Parses `eigenvalue<TAB>multiplicity` lines; blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_tsv(name: impl Into<String>, dimension: u32, text: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(e), Some(m), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!(
                    "line {}: expected eigenvalue<TAB>multiplicity",
                    i + 1
                )));
            };
            let eigenvalue: f64 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad eigenvalue {e:?}", i + 1)))?;
            let multiplicity: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad multiplicity {m:?}", i + 1)))?;
            levels.push(Level {
                eigenvalue,
                multiplicity,
            });
        }
        Self::custom(name, dimension, levels)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for lv in self.levels.iter() {
            let _ = writeln!(out, "{}\t{}", lv.eigenvalue, lv.multiplicity);
        }
        out
    }

    pub fn with_volume(mut self, volume: f64) -> Self {
        self.volume = Some(volume);
        self
    }

    pub fn with_operator_order(mut self, d: u32) -> Self {
        self.operator_order = d;
        self
    }

    pub fn with_counting_bound(mut self, bound: CountingBound) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn operator_order(&self) -> u32 {
        self.operator_order
    }

    pub fn volume(&self) -> Option<f64> {
        self.volume
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn counting_bound(&self) -> Option<CountingBound> {
        self.bound
    }

    pub fn check_within_horizon(&self, lam: f64) -> Result<()> {
        if lam > self.horizon {
            return Err(Error::Range {
                requested: lam,
                horizon: self.horizon,
            });
        }
        Ok(())
    }
}

impl Comb for Spectrum {
    fn count_upto(&self, x: f64) -> usize {
        self.levels.partition_point(|l| l.eigenvalue <= x)
    }

    fn atom(&self, i: usize) -> (f64, f64) {
        let l = self.levels[i];
        (l.eigenvalue, l.multiplicity as f64)
    }
}

/// Diagonal spectral density `1/(2π√λ)` of `−d²/dx²` on the line.
pub fn line_density(lam: f64) -> Result<f64> {
    if !(lam > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lam}")));
    }
    Ok(1.0 / (2.0 * PI * lam.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_counts(n: u32, q_max: u64) -> Vec<u64> {
        let r = (q_max as f64).sqrt() as i64;
        let mut counts = vec![0u64; q_max as usize + 1];
        let side = (2 * r + 1) as usize;
        let total = side.pow(n);
        for idx in 0..total {
            let mut rem = idx;
            let mut q = 0i64;
            for _ in 0..n {
                let k = (rem % side) as i64 - r;
                rem /= side;
                q += k * k;
            }
            if q as u64 <= q_max {
                counts[q as usize] += 1;
            }
        }
        counts
    }

    #[test]
    fn shell_counts_match_enumeration() {
        for n in 1..=4 {
            assert_eq!(shell_counts(n, 30), brute_force_counts(n, 30), "n = {n}");
        }
    }

    #[test]
    fn torus_two_table_endpoint() {
        let t2 = Spectrum::torus(2, 25).unwrap();
        let total: u64 = t2.levels().iter().map(|l| l.multiplicity).sum();
        assert_eq!(total, 81);
        assert!(t2.levels().iter().all(|l| l.eigenvalue != 3.0));
    }

    #[test]
    fn circle_levels() {
        let c = Spectrum::circle(4);
        let ls = c.levels();
        assert_eq!(
            ls[0],
            Level {
                eigenvalue: 0.0,
                multiplicity: 1
            }
        );
        assert_eq!(
            ls[1],
            Level {
                eigenvalue: 1.0,
                multiplicity: 2
            }
        );
        assert_eq!(
            ls[4],
            Level {
                eigenvalue: 16.0,
                multiplicity: 2
            }
        );
    }

    #[test]
    fn sphere_multiplicities() {
        for l in 0..=100 {
            assert_eq!(sphere_multiplicity(2, l), 2 * l + 1);
            assert_eq!(sphere_multiplicity(3, l), (l + 1) * (l + 1));
        }
        assert_eq!(sphere_multiplicity(4, 1), 5);
        let s3 = Spectrum::sphere(3, 5, 1.0).unwrap();
        for (l, lv) in s3.levels().iter().enumerate() {
            assert_eq!(lv.eigenvalue, ((l + 1) * (l + 1)) as f64);
        }
        let s2 = Spectrum::sphere(2, 40, 0.0).unwrap();
        let total: u64 = s2.levels().iter().map(|l| l.multiplicity).sum();
        assert_eq!(total, 41 * 41);
        assert!(Spectrum::sphere(1, 3, 0.0).is_err());
    }

    #[test]
    fn volumes() {
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn oscillator_levels() {
        let o = Spectrum::oscillator(10);
        let first: Vec<f64> = o.levels()[..3].iter().map(|l| l.eigenvalue).collect();
        assert_eq!(first, vec![0.5, 1.5, 2.5]);
    }

    #[test]
    fn counting_bounds_hold() {
        let spectra = [
            Spectrum::torus(2, 400).unwrap(),
            Spectrum::torus(4, 400).unwrap(),
            Spectrum::sphere(2, 30, 0.0).unwrap(),
            Spectrum::sphere(3, 30, 1.0).unwrap(),
            Spectrum::sphere(5, 20, 0.0).unwrap(),
            Spectrum::oscillator(500),
        ];
        for s in &spectra {
            let bound = s.counting_bound().unwrap();
            let mut n = 0u64;
            for lv in s.levels() {
                n += lv.multiplicity;
                assert!(
                    (n as f64) <= bound.eval(lv.eigenvalue),
                    "{} at {}",
                    s.name(),
                    lv.eigenvalue
                );
            }
        }
    }

    #[test]
    fn tsv_round_trip() {
        let s = Spectrum::sphere(2, 5, 0.0).unwrap();
        let text = s.to_tsv();
        assert!(text.starts_with("0\t1\n2\t3\n6\t5\n"));
        let back = Spectrum::from_tsv("s2", 2, &text).unwrap();
        assert_eq!(back.levels(), s.levels());
        assert!(Spectrum::from_tsv("x", 1, "1\t2\t3").is_err());
        assert!(Spectrum::from_tsv("x", 1, "2\t1\n1\t1").is_err());
        assert!(Spectrum::from_tsv("x", 1, "1\t0").is_err());
        let merged = Spectrum::from_tsv("x", 1, "# header\n1\t1\n1\t2\n\n4\t1\n").unwrap();
        assert_eq!(merged.levels().len(), 2);
        assert_eq!(merged.levels()[0].multiplicity, 3);
    }

    #[test]
    fn line_density_values() {
        assert!((line_density(1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert!((line_density(4.0).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert!(line_density(0.0).is_err());
        assert!(line_density(100.0).unwrap() < line_density(10.0).unwrap());
    }
}
