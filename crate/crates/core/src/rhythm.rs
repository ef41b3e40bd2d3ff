//! Motivic rhythms: root arguments of an L-polynomial played as onsets.
//!
//! The zeros z_j of P(z) have arguments −α_j. Sorted into [−π, π] the α_j
//! form a palindrome (the functional equation pairs z with its conjugate),
//! and the onsets repeat with period 2π / log p.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zeta::LPolynomial;

/// Every numeric threshold used by root finding and rhythm extraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Stop when the largest Aberth correction falls below this.
    pub root_update: f64,
    /// Required |P(z)| / |P'(z)| at every returned root.
    pub residual: f64,
    /// |α_{2g+1−j} + α_j| bound.
    pub palindrome: f64,
    /// | |z_j| − p^{−1/2} | bound.
    pub modulus: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { root_update: 1e-13, residual: 1e-10, palindrome: 1e-9, modulus: 1e-9, max_iterations: 500 }
    }
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

/// All 2g complex roots by Aberth–Ehrlich iteration.
///
/// The polynomial is rescaled by z = w / √p so the roots lie on the unit
/// circle; the update threshold therefore acts as a relative precision.
/// Roots come back in no particular order.
pub fn find_roots(l: &LPolynomial, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let n = l.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = (l.p as f64).sqrt();
    let scaled: Vec<Complex64> =
        l.coeffs.iter().enumerate().map(|(i, &c)| Complex64::new(c as f64 / scale.powi(i as i32), 0.0)).collect();

    // perturbed circle; the offset keeps the start off the real axis
    let mut w: Vec<Complex64> =
        (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64 + 0.4)).collect();

    let mut converged = false;
    for _ in 0..tol.max_iterations {
        let mut max_update: f64 = 0.0;
        for i in 0..n {
            let (value, deriv) = horner_with_derivative(&scaled, w[i]);
            if value.norm() == 0.0 {
                continue;
            }
            let ratio = value / deriv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (w[i] - w[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                return Err(Error::NoConvergence(tol.max_iterations));
            }
            w[i] -= step;
            max_update = max_update.max(step.norm());
        }
        if max_update < tol.root_update {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(tol.max_iterations));
    }

    let coeffs: Vec<Complex64> = l.coeffs.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
    let roots: Vec<Complex64> = w.into_iter().map(|x| x / scale).collect();
    for (index, &z) in roots.iter().enumerate() {
        let (value, deriv) = horner_with_derivative(&coeffs, z);
        let residual = value.norm() / deriv.norm();
        if residual.is_nan() || residual >= tol.residual {
            return Err(Error::Residual { index, residual });
        }
    }
    Ok(roots)
}

/// Wraps an angle into (−π, π].
pub fn fold_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Sorted root arguments of one (curve, prime) pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhythmPattern {
    pub p: u64,
    pub g: usize,
    /// α_j ascending in (−π, π]
    pub alphas: Vec<f64>,
    /// 2π / log p
    pub period: f64,
    /// p^{−1/2}
    pub radius: f64,
}

impl RhythmPattern {
    /// Builds a pattern from raw alphas, sorting them and checking palindromy.
    pub fn from_alphas(p: u64, alphas: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let mut alphas: Vec<f64> = alphas.into_iter().map(fold_angle).collect();
        // stable sort keeps discovery order on ties
        alphas.sort_by(|a, b| a.total_cmp(b));
        let pattern = RhythmPattern {
            p,
            g: alphas.len() / 2,
            alphas,
            period: 2.0 * PI / (p as f64).ln(),
            radius: (p as f64).powf(-0.5),
        };
        let deviation = pattern.palindrome_deviation();
        if let Some((j, dev)) = deviation {
            if dev >= tol.palindrome {
                return Err(Error::NotPalindromic { j, deviation: dev });
            }
        }
        Ok(pattern)
    }

    /// Worst |α_{n+1−j} + α_j| (modulo 2π, so a pair of real roots at
    /// α = π counts as its own mirror), with the offending 1-based j.
    pub fn palindrome_deviation(&self) -> Option<(usize, f64)> {
        let n = self.alphas.len();
        (0..n / 2)
            .map(|j| (j + 1, fold_angle(self.alphas[j] + self.alphas[n - 1 - j]).abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// α_j = −arg(z_j), folded into (−π, π] so real negative roots land on +π.
pub fn arguments(p: u64, roots: &[Complex64], tol: &Tolerances) -> Result<RhythmPattern> {
    let alphas = roots.iter().map(|z| -z.arg()).collect();
    RhythmPattern::from_alphas(p, alphas, tol)
}

/// Convenience: roots then arguments.
pub fn rhythm_of(l: &LPolynomial, tol: &Tolerances) -> Result<RhythmPattern> {
    arguments(l.p, &find_roots(l, tol)?, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Onset {
    /// seconds
    pub time: f64,
    /// 0-based index into the sorted alphas
    pub index: usize,
    /// period number k
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnsetSchedule {
    pub onsets: Vec<Onset>,
    /// scaled period length in seconds
    pub period: f64,
}

/// Onset of (j, k) at tempo_scale · (α_j + π + 2πk) / log p.
pub fn onsets(rp: &RhythmPattern, n_periods: usize, tempo_scale: f64) -> OnsetSchedule {
    let unit = tempo_scale * rp.period / (2.0 * PI);
    let mut out = Vec::with_capacity(n_periods * rp.alphas.len());
    for k in 0..n_periods {
        for (index, &alpha) in rp.alphas.iter().enumerate() {
            out.push(Onset { time: unit * (alpha + PI + 2.0 * PI * k as f64), index, period: k });
        }
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.index.cmp(&b.index)));
    OnsetSchedule { onsets: out, period: tempo_scale * rp.period }
}
