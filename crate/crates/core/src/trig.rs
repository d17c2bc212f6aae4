//! Exact calculus of truncated Fourier series on the circle.
//!
//! A [`TrigPolynomial`] is `a0 + sum_k (a_k cos k phi + b_k sin k phi)`.
//! Differentiation, the half-turn shift `phi -> phi + pi` and products are
//! computed on coefficients, not by numerical approximation; products go
//! through the complex exponential basis so the degree bookkeeping is exact.

use serde::{Deserialize, Serialize};

use crate::rng::SplitMix64;

/// Truncated Fourier series with real coefficients.
///
/// Serializes as `{"a0": x, "cos": [...], "sin": [...]}` with the `k`-th
/// array entry holding the degree-`k+1` coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyJson", into = "TrigPolyJson")]
pub struct TrigPolynomial {
    a0: f64,
    /// `(a_k, b_k)` for `k = 1..=degree`.
    harmonics: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    #[serde(default)]
    a0: f64,
    #[serde(default)]
    cos: Vec<f64>,
    #[serde(default)]
    sin: Vec<f64>,
}

impl From<TrigPolynomial> for TrigPolyJson {
    fn from(p: TrigPolynomial) -> Self {
        Self {
            a0: p.a0,
            cos: p.harmonics.iter().map(|h| h.0).collect(),
            sin: p.harmonics.iter().map(|h| h.1).collect(),
        }
    }
}

impl TryFrom<TrigPolyJson> for TrigPolynomial {
    type Error = String;

    fn try_from(j: TrigPolyJson) -> Result<Self, String> {
        if !j.a0.is_finite() || j.cos.iter().chain(&j.sin).any(|c| !c.is_finite()) {
            return Err("trig polynomial coefficients must be finite".to_string());
        }
        let d = j.cos.len().max(j.sin.len());
        let harmonics = (0..d)
            .map(|k| {
                (j.cos.get(k).copied().unwrap_or(0.0), j.sin.get(k).copied().unwrap_or(0.0))
            })
            .collect();
        Ok(Self { a0: j.a0, harmonics }.trimmed())
    }
}

impl TrigPolynomial {
    pub fn new(a0: f64, harmonics: Vec<(f64, f64)>) -> Self {
        Self { a0, harmonics }.trimmed()
    }

    pub fn zero() -> Self {
        Self { a0: 0.0, harmonics: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self { a0: c, harmonics: Vec::new() }
    }

    /// `cos(k phi)`; `k = 0` gives the constant 1.
    pub fn cos(k: usize) -> Self {
        Self::harmonic(k, 1.0, 0.0)
    }

    /// `sin(k phi)`; `k = 0` gives the zero polynomial.
    pub fn sin(k: usize) -> Self {
        Self::harmonic(k, 0.0, 1.0)
    }

    fn harmonic(k: usize, a: f64, b: f64) -> Self {
        if k == 0 {
            return Self::constant(a);
        }
        let mut harmonics = vec![(0.0, 0.0); k];
        harmonics[k - 1] = (a, b);
        Self { a0: 0.0, harmonics }
    }

    /// Coefficients drawn uniformly from `[-1, 1]` through degree `degree`.
    pub fn random(rng: &mut SplitMix64, degree: usize) -> Self {
        let a0 = rng.uniform(-1.0, 1.0);
        let harmonics = (0..degree)
            .map(|_| (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect();
        Self { a0, harmonics }
    }

    fn trimmed(mut self) -> Self {
        while self.harmonics.last() == Some(&(0.0, 0.0)) {
            self.harmonics.pop();
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.harmonics.len()
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// `(a_k, b_k)`; zero for `k = 0` or `k` beyond the degree.
    pub fn harmonic_at(&self, k: usize) -> (f64, f64) {
        if k == 0 || k > self.harmonics.len() {
            (0.0, 0.0)
        } else {
            self.harmonics[k - 1]
        }
    }

    pub fn eval(&self, phi: f64) -> f64 {
        let mut acc = self.a0;
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let t = (k + 1) as f64 * phi;
            acc += a * t.cos() + b * t.sin();
        }
        acc
    }

    /// Exact derivative: `(a_k, b_k) -> (k b_k, -k a_k)`, constant drops.
    pub fn derivative(&self) -> Self {
        let harmonics = self
            .harmonics
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let k = (i + 1) as f64;
                (k * b, -k * a)
            })
            .collect();
        Self { a0: 0.0, harmonics }.trimmed()
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Composition with the half turn, `f(phi + pi)`: harmonic `k` picks up
    /// the exact factor `(-1)^k`.
    pub fn shift_half_turn(&self) -> Self {
        let harmonics = self
            .harmonics
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if i % 2 == 0 { (-a, -b) } else { (a, b) })
            .collect();
        Self { a0: self.a0, harmonics }
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.degree().max(other.degree());
        let harmonics = (1..=d)
            .map(|k| {
                let (a1, b1) = self.harmonic_at(k);
                let (a2, b2) = other.harmonic_at(k);
                (a1 + a2, b1 + b2)
            })
            .collect();
        Self { a0: self.a0 + other.a0, harmonics }.trimmed()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let harmonics = self.harmonics.iter().map(|&(a, b)| (c * a, c * b)).collect();
        Self { a0: c * self.a0, harmonics }.trimmed()
    }

    /// Product, computed by convolving complex exponential coefficients:
    /// `c_0 = a0`, `c_k = (a_k - i b_k)/2`, `c_{-k} = conj(c_k)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (df, dg) = (self.degree() as isize, other.degree() as isize);
        let d = (df + dg) as usize;
        let expo = |p: &Self, k: isize| -> (f64, f64) {
            if k == 0 {
                return (p.a0, 0.0);
            }
            let (a, b) = p.harmonic_at(k.unsigned_abs());
            if k > 0 {
                (a / 2.0, -b / 2.0)
            } else {
                (a / 2.0, b / 2.0)
            }
        };
        // Only the k >= 0 half is needed; the negative side is conjugate.
        let mut pos = vec![(0.0f64, 0.0f64); d + 1];
        for k in 0..=(d as isize) {
            let mut re = 0.0;
            let mut im = 0.0;
            for i in (-dg).max(k - df)..=dg.min(k + df) {
                let (xr, xi) = expo(self, k - i);
                let (yr, yi) = expo(other, i);
                re += xr * yr - xi * yi;
                im += xr * yi + xi * yr;
            }
            pos[k as usize] = (re, im);
        }
        let a0 = pos[0].0;
        let harmonics = pos[1..].iter().map(|&(re, im)| (2.0 * re, -2.0 * im)).collect();
        Self { a0, harmonics }.trimmed()
    }

    /// Euclidean norm of the coefficient vector; the scale used by the
    /// degeneracy heuristics in the analytic module.
    pub fn coeff_norm(&self) -> f64 {
        let mut s = self.a0 * self.a0;
        for &(a, b) in &self.harmonics {
            s += a * a + b * b;
        }
        s.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.a0 == 0.0 && self.harmonics.iter().all(|&(a, b)| a == 0.0 && b == 0.0)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("trig polynomial serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| e.to_string())
    }
}
