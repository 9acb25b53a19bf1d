//! Polynomials in an orthogonal-recurrence basis over an explicit domain.
//!
//! Coefficients are stored against Chebyshev polynomials of the first kind,
//! composed with the affine map from the domain onto `[-1, 1]`. Evaluation
//! uses Clenshaw's backward recurrence, which stays well conditioned up to the
//! degrees (~40) this crate needs; a monomial representation would lose
//! roughly `2^degree` in accuracy by cancellation.

use crate::{Error, Result};

/// The recurrence basis a [`Polynomial`]'s coefficients refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BasisKind {
    /// Chebyshev polynomials of the first kind on the mapped domain.
    Chebyshev,
}

/// Slack accepted when checking whether a point lies in the domain, relative
/// to the domain width. Absorbs roundoff from affine maps at the endpoints.
const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    domain: (f64, f64),
    basis: BasisKind,
}

impl Polynomial {
    /// Builds a polynomial from basis coefficients (constant term first).
    pub fn new(coeffs: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
        }
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("bad domain [{a}, {b}]")));
        }
        Ok(Self { coeffs, domain, basis: BasisKind::Chebyshev })
    }

    pub fn constant(value: f64, domain: (f64, f64)) -> Result<Self> {
        Self::new(vec![value], domain)
    }

    /// Interpolates `f` at `n` Chebyshev nodes of the domain. Exact (up to
    /// roundoff) whenever `f` is a polynomial of degree `< n`.
    pub fn interpolate(n: usize, domain: (f64, f64), mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("interpolation needs at least one node".into()));
        }
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("bad domain [{a}, {b}]")));
        }
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        // First-kind nodes u_m = cos(theta_m) and values there.
        let mut theta = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for m in 0..n {
            let th = std::f64::consts::PI * (2.0 * m as f64 + 1.0) / (2.0 * n as f64);
            let x = mid + half * th.cos();
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { x });
            }
            theta.push(th);
            values.push(v);
        }
        // Discrete orthogonality of cos(j*theta_m) over first-kind nodes.
        let mut coeffs = vec![0.0; n];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for m in 0..n {
                acc += values[m] * (j as f64 * theta[m]).cos();
            }
            *c = acc * if j == 0 { 1.0 } else { 2.0 } / n as f64;
        }
        Self::new(coeffs, domain)
    }

    /// Converts monomial coefficients (constant term first) to this basis.
    pub fn from_monomials(monomial: &[f64], domain: (f64, f64)) -> Result<Self> {
        if monomial.is_empty() {
            return Err(Error::InvalidArgument("empty monomial coefficient list".into()));
        }
        let horner = |x: f64| monomial.iter().rev().fold(0.0, |acc, c| acc * x + c);
        Self::interpolate(monomial.len(), domain, horner)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates by Clenshaw recurrence. Points outside the domain (beyond a
    /// tiny roundoff slack) are a domain error.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, b) = self.domain;
        let span = b - a;
        if !x.is_finite() || x < a - DOMAIN_SLACK * span || x > b + DOMAIN_SLACK * span {
            return Err(Error::Domain(format!("x = {x} outside [{a}, {b}]")));
        }
        let u = ((2.0 * x - a - b) / span).clamp(-1.0, 1.0);
        Ok(self.eval_mapped(u))
    }

    /// Clenshaw on the mapped variable `u` in `[-1, 1]`.
    fn eval_mapped(&self, u: f64) -> f64 {
        let mut d = 0.0;
        let mut dd = 0.0;
        let two_u = 2.0 * u;
        for &c in self.coeffs.iter().skip(1).rev() {
            let tmp = d;
            d = two_u * d - dd + c;
            dd = tmp;
        }
        u * d - dd + self.coeffs[0]
    }

    /// Derivative, as a polynomial on the same domain.
    pub fn derivative(&self) -> Polynomial {
        let n = self.coeffs.len();
        if n == 1 {
            return Polynomial { coeffs: vec![0.0], domain: self.domain, basis: self.basis };
        }
        // Standard Chebyshev derivative recurrence, then chain rule for the map.
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * self.coeffs[k];
        }
        d.truncate(n - 1);
        d[0] *= 0.5;
        let scale = 2.0 / (self.domain.1 - self.domain.0);
        for c in &mut d {
            *c *= scale;
        }
        Polynomial { coeffs: d, domain: self.domain, basis: self.basis }
    }

    /// Exact integral over the full domain: odd basis terms vanish, even term
    /// `j` contributes `2/(1-j^2)` on `[-1, 1]`.
    pub fn integral_over_domain(&self) -> f64 {
        let half = 0.5 * (self.domain.1 - self.domain.0);
        let mut acc = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j % 2 == 0 {
                acc += c * 2.0 / (1.0 - (j as f64) * (j as f64));
            }
        }
        acc * half
    }

    /// `scale * self + shift`, exact on coefficients.
    pub fn affine(&self, scale: f64, shift: f64) -> Polynomial {
        let mut coeffs: Vec<f64> = self.coeffs.iter().map(|c| c * scale).collect();
        coeffs[0] += shift;
        Polynomial { coeffs, domain: self.domain, basis: self.basis }
    }

    /// Coefficient-wise sum; the domains must match.
    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.domain != other.domain {
            return Err(Error::InvalidArgument("polynomial domains differ".into()));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Ok(Polynomial { coeffs, domain: self.domain, basis: self.basis })
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.affine(-1.0, 0.0))
    }
}
