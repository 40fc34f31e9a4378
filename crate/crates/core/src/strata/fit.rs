//! Exact polynomial interpolation of point counts as functions of `q`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Default sample field sizes.
pub const DEFAULT_SAMPLES: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

/// The interpolating polynomial through all samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeFit {
    /// Coefficients, constant term first, trailing zeros removed.
    pub coefficients: Vec<Rational>,
    pub degree: usize,
    pub samples: usize,
    /// Set when dropping some sample changes the polynomial, so the counts
    /// are not certified to be polynomial of the reported degree.
    pub extra_roots: bool,
}

impl DegreeFit {
    pub fn eval(&self, x: i128) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * Rational::from_integer(x) + c)
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_integer())
    }

    /// Whether the fit is stable and of degree `d`.
    pub fn certifies_degree(&self, d: usize) -> bool {
        !self.extra_roots && self.degree == d
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            let coeff = if mono.is_empty() || !c.is_one() { c.to_string() } else { String::new() };
            parts.push(match (coeff.is_empty(), mono.is_empty()) {
                (true, _) => mono,
                (false, true) => coeff,
                (false, false) => format!("{coeff}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "degree": self.degree,
            "samples": self.samples,
            "extra_roots": self.extra_roots,
            "polynomial": self.render(),
        })
    }
}

fn interpolate(points: &[(i128, i128)]) -> Vec<Rational> {
    let n = points.len();
    let xs: Vec<Rational> = points.iter().map(|p| Rational::from_integer(p.0)).collect();
    let mut dd: Vec<Rational> = points.iter().map(|p| Rational::from_integer(p.1)).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut poly = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut next = vec![Rational::zero(); n];
        for (k, c) in poly.iter().enumerate() {
            if k + 1 < n {
                next[k + 1] += c;
            }
            next[k] -= c * xs[i];
        }
        next[0] += dd[i];
        poly = next;
    }
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    poly
}

/// The unique polynomial through `(q, count)` for all samples, its degree,
/// and the drop-one stability flag. Needs at least two samples.
pub fn degree_fit(counts: &BTreeMap<u32, u64>) -> Result<DegreeFit> {
    if counts.len() < 2 {
        return Err(Error::TooFewSamples { need: 2, got: counts.len() });
    }
    let points: Vec<(i128, i128)> = counts.iter().map(|(&q, &c)| (q as i128, c as i128)).collect();
    let coefficients = interpolate(&points);
    let degree = coefficients.len() - 1;
    let extra_roots = (0..points.len()).any(|skip| {
        let rest: Vec<(i128, i128)> = points.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| *p).collect();
        interpolate(&rest) != coefficients
    });
    Ok(DegreeFit { coefficients, degree, samples: points.len(), extra_roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: impl Fn(u64) -> u64) -> BTreeMap<u32, u64> {
        DEFAULT_SAMPLES.iter().map(|&q| (q, f(q as u64))).collect()
    }

    #[test]
    fn recovers_polynomials() {
        let fit = degree_fit(&samples(|q| q * q * q * (q + 1))).unwrap();
        assert!(fit.certifies_degree(4));
        assert_eq!(fit.eval(10), Rational::from_integer(11000));
        assert_eq!(fit.render(), "q^4 + q^3");
    }

    #[test]
    fn constant_counts_have_degree_zero() {
        let fit = degree_fit(&samples(|_| 1)).unwrap();
        assert!(fit.certifies_degree(0));
    }

    #[test]
    fn non_polynomial_counts_are_flagged() {
        let fit = degree_fit(&samples(|q| 1 << q)).unwrap();
        assert!(fit.extra_roots);
    }

    #[test]
    fn too_few_samples() {
        let one: BTreeMap<u32, u64> = [(2, 5)].into_iter().collect();
        assert!(matches!(degree_fit(&one), Err(Error::TooFewSamples { .. })));
    }
}
