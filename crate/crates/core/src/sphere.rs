//! Geometry of the unit sphere `S^n`: spherical coordinates, the multi-index
//! set addressing the hyperspherical-harmonic basis, normalization constants,
//! pointwise basis evaluation, and Laplace–Beltrami eigenvalues.
//!
//! Conventions: the surface measure is normalized to total mass 1 (every inner
//! product divides by the surface constant `Σ_n`), the basis is complex with
//! phase factor `e^{i k_{n-1} φ}`, and all θ-dependent factors use the absolute
//! value of the signed trailing index entry.

use crate::math;
use crate::special::LogVal;
use crate::{Complex64, Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Dimension `n ≥ 2` of the sphere `S^n ⊂ R^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SphereDim {
    n: usize,
}

impl SphereDim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("sphere dimension must be at least 2"));
        }
        Ok(Self { n })
    }

    /// The sphere dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The Gegenbauer order `λ = (n-1)/2` used interchangeably with `n`.
    pub fn lambda(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }

    /// Dimension of the ambient Euclidean space, `n + 1`.
    pub fn ambient(&self) -> usize {
        self.n + 1
    }

    /// Number of θ coordinates, `n - 1`.
    pub fn theta_axes(&self) -> usize {
        self.n - 1
    }
}

/// Surface constant `Σ_n = 2 π^{(n+1)/2} / Γ((n+1)/2)`, the unnormalized
/// total surface measure of `S^n`.
pub fn surface_constant(d: SphereDim) -> f64 {
    let half = (d.n as f64 + 1.0) / 2.0;
    2.0 * math::exp(half * math::ln(PI) - math::lgamma(half))
}

/// Index `(l; k_1, …, k_{n-1})` of one basis function `Y_l^k`.
///
/// Entries are non-increasing, `l = k_0 ≥ k_1 ≥ … ≥ k_{n-2} ≥ |k_{n-1}| ≥ 0`;
/// only the trailing entry may be negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    l: i64,
    k: Vec<i64>,
}

impl MultiIndex {
    pub fn new(l: i64, k: Vec<i64>) -> Self {
        Self { l, k }
    }

    /// The zonal index `(l; 0, …, 0)`.
    pub fn zonal(d: SphereDim, l: i64) -> Self {
        Self {
            l,
            k: vec![0; d.theta_axes()],
        }
    }

    /// Index with a single leading entry, `(l; k_1, 0, …, 0)`.
    pub fn with_leading(d: SphereDim, l: i64, k1: i64) -> Self {
        let mut k = vec![0; d.theta_axes()];
        k[0] = k1;
        Self { l, k }
    }

    pub fn degree(&self) -> i64 {
        self.l
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    /// Entry at position `pos` of the extended sequence `(k_0, …, k_{n-1})`
    /// with `k_0 = l`.
    pub fn entry(&self, pos: usize) -> i64 {
        if pos == 0 {
            self.l
        } else {
            self.k[pos - 1]
        }
    }

    pub fn entry_abs(&self, pos: usize) -> i64 {
        self.entry(pos).abs()
    }

    /// The signed trailing entry `k_{n-1}`.
    pub fn trailing(&self) -> i64 {
        *self.k.last().expect("multi-index has at least one entry")
    }

    /// Same index with the trailing entry negated (the conjugate basis index).
    pub fn trailing_negated(&self) -> Self {
        let mut k = self.k.clone();
        let last = k.len() - 1;
        k[last] = -k[last];
        Self { l: self.l, k }
    }

    /// Checks the non-increasing index constraints for dimension `d`.
    pub fn validate(&self, d: SphereDim) -> Result<()> {
        if self.k.len() != d.theta_axes() {
            return Err(Error::InvalidIndex("index length must be n-1"));
        }
        if self.l < 0 {
            return Err(Error::InvalidIndex("degree must be nonnegative"));
        }
        let m = self.k.len();
        for i in 0..m.saturating_sub(1) {
            let prev = if i == 0 { self.l } else { self.k[i - 1] };
            if self.k[i] < 0 || self.k[i] > prev {
                return Err(Error::InvalidIndex("entries must be non-increasing and nonnegative"));
            }
        }
        let before_last = if m >= 2 { self.k[m - 2] } else { self.l };
        if self.k[m - 1].abs() > before_last {
            return Err(Error::InvalidIndex("trailing entry exceeds its predecessor in magnitude"));
        }
        Ok(())
    }
}

/// Number of linearly independent harmonics of degree `l` on `S^n`:
/// `N = 2 (l+λ) (l+2λ-1)! / (l! (2λ)!)`.
pub fn harmonic_count(d: SphereDim, l: i64) -> Result<f64> {
    if l < 0 {
        return Err(Error::Domain("degree must be nonnegative"));
    }
    let lam = d.lambda();
    let lf = l as f64;
    Ok(math::exp(
        math::ln(2.0 * (lf + lam)) + math::lgamma(lf + 2.0 * lam)
            - math::lgamma(lf + 1.0)
            - math::lgamma(2.0 * lam + 1.0),
    ))
}

/// All multi-indices of degree `l` in ascending lexicographic order
/// (the same order in which a sorted coefficient map iterates them).
pub fn enumerate_indices(d: SphereDim, l: i64) -> Result<Vec<MultiIndex>> {
    if l < 0 {
        return Err(Error::Domain("degree must be nonnegative"));
    }
    let axes = d.theta_axes();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(axes);
    fn rec(l: i64, axes: usize, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<MultiIndex>) {
        if cur.len() == axes - 1 {
            for v in -bound..=bound {
                let mut k = cur.clone();
                k.push(v);
                out.push(MultiIndex::new(l, k));
            }
            return;
        }
        for v in 0..=bound {
            cur.push(v);
            rec(l, axes, v, cur, out);
            cur.pop();
        }
    }
    rec(l, axes, l, &mut cur, &mut out);
    Ok(out)
}

/// Eigenvalue of the Laplace–Beltrami operator on degree-`l` harmonics:
/// `Δ* Y = -l (l+2λ) Y`.
pub fn laplace_eigenvalue(d: SphereDim, l: i64) -> f64 {
    let lf = l as f64;
    -lf * (lf + 2.0 * d.lambda())
}

/// Log-space normalization constant `A_l^k` making `Y_l^k` unit-norm under the
/// normalized surface measure.
///
/// Axes past the last nonzero index entry contribute a telescoping product of
/// Γ ratios that collapses to a single `Γ((n-τ₀)/2 + 1)`; only the leading
/// axes are accumulated term by term.
pub(crate) fn normalization_log(d: SphereDim, idx: &MultiIndex) -> LogVal {
    let n = d.n;
    let mut ln = -math::lgamma((n as f64 + 1.0) / 2.0);
    let mut tau = 1usize;
    while tau <= n - 1 && idx.entry(tau - 1) != 0 {
        let a = idx.entry(tau - 1) as f64;
        let b = idx.entry_abs(tau) as f64;
        let q = (n - tau) as f64;
        ln += (q + 2.0 * b - 2.0) * math::ln(2.0) + math::lgamma(a - b + 1.0)
            + math::ln(q + 2.0 * a)
            + 2.0 * math::lgamma(q / 2.0 + b)
            - 0.5 * math::ln(PI)
            - math::lgamma(q + a + b);
        tau += 1;
    }
    if tau <= n - 1 {
        ln += math::lgamma((n - tau) as f64 / 2.0 + 1.0);
    }
    LogVal::new(1.0, 0.5 * ln)
}

/// Normalization constant `A_l^k` of the basis function `Y_l^k`.
pub fn normalization_constant(d: SphereDim, idx: &MultiIndex) -> Result<f64> {
    idx.validate(d)?;
    Ok(normalization_log(d, idx).value())
}

/// A point on `S^n` given by its angles, with cached trigonometric values and
/// Cartesian coordinates.
#[derive(Debug, Clone)]
pub struct SpherePoint {
    thetas: Vec<f64>,
    phi: f64,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    cartesian: Vec<f64>,
}

impl SpherePoint {
    /// Builds a point from angles `ϑ_1..ϑ_{n-1} ∈ [0, π]` and `φ` (wrapped
    /// into `[0, 2π)`).
    pub fn from_angles(d: SphereDim, thetas: &[f64], phi: f64) -> Result<Self> {
        if thetas.len() != d.theta_axes() {
            return Err(Error::Domain("expected n-1 polar angles"));
        }
        for &t in thetas {
            if !t.is_finite() || !(0.0..=PI).contains(&t) {
                return Err(Error::Domain("polar angles must lie in [0, π]"));
            }
        }
        if !phi.is_finite() {
            return Err(Error::Domain("azimuth must be finite"));
        }
        let phi = wrap_phi(phi);
        let cos_theta: Vec<f64> = thetas.iter().map(|&t| math::cos(t)).collect();
        let sin_theta: Vec<f64> = thetas.iter().map(|&t| math::sin(t)).collect();
        let cartesian = cartesian_from_trig(&cos_theta, &sin_theta, phi);
        Ok(Self {
            thetas: thetas.to_vec(),
            phi,
            cos_theta,
            sin_theta,
            cartesian,
        })
    }

    /// Recovers angles from a Cartesian unit vector in `R^{n+1}`.
    pub fn from_cartesian(d: SphereDim, x: &[f64]) -> Result<Self> {
        if x.len() != d.ambient() {
            return Err(Error::Domain("expected an (n+1)-vector"));
        }
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        if !norm_sq.is_finite() || math::abs(norm_sq - 1.0) > 1e-6 {
            return Err(Error::Domain("point must lie on the unit sphere"));
        }
        let scale = 1.0 / math::sqrt(norm_sq);
        let axes = d.theta_axes();
        let mut thetas = Vec::with_capacity(axes);
        let mut sin_prod = 1.0;
        for j in 0..axes {
            let theta = if sin_prod > 1e-300 {
                let c = (x[j] * scale / sin_prod).clamp(-1.0, 1.0);
                math::acos(c)
            } else {
                0.0
            };
            thetas.push(theta);
            sin_prod *= math::sin(theta);
        }
        let phi = math::atan2(x[d.n] * scale, x[d.n - 1] * scale);
        Self::from_angles(d, &thetas, phi)
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian coordinates in `R^{n+1}`, unit length.
    pub fn cartesian(&self) -> &[f64] {
        &self.cartesian
    }

    pub fn cos_theta(&self, axis: usize) -> f64 {
        self.cos_theta[axis - 1]
    }

    pub fn sin_theta(&self, axis: usize) -> f64 {
        self.sin_theta[axis - 1]
    }

    /// In-place update used by the quadrature tensor loop.
    pub(crate) fn set_theta(&mut self, axis: usize, theta: f64, cos: f64, sin: f64) {
        self.thetas[axis - 1] = theta;
        self.cos_theta[axis - 1] = cos;
        self.sin_theta[axis - 1] = sin;
    }

    pub(crate) fn set_phi(&mut self, phi: f64) {
        self.phi = phi;
    }

    pub(crate) fn refresh_cartesian(&mut self) {
        self.cartesian = cartesian_from_trig(&self.cos_theta, &self.sin_theta, self.phi);
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let w = phi - two_pi * libm::floor(phi / two_pi);
    if w >= two_pi {
        0.0
    } else {
        w
    }
}

fn cartesian_from_trig(cos_theta: &[f64], sin_theta: &[f64], phi: f64) -> Vec<f64> {
    let axes = cos_theta.len();
    let mut x = Vec::with_capacity(axes + 2);
    let mut sin_prod = 1.0;
    for j in 0..axes {
        x.push(sin_prod * cos_theta[j]);
        sin_prod *= sin_theta[j];
    }
    x.push(sin_prod * math::cos(phi));
    x.push(sin_prod * math::sin(phi));
    x
}

/// Pointwise value of the basis function `Y_l^k` at `p`:
/// `A_l^k ∏_τ C_{k_{τ-1}-k_τ}^{(n-τ)/2+k_τ}(cos ϑ_τ) sin^{k_τ} ϑ_τ · e^{i k_{n-1} φ}`,
/// with `|k_{n-1}|` in all θ-dependent factors and `0^0 = 1`.
pub fn eval_harmonic(d: SphereDim, idx: &MultiIndex, p: &SpherePoint) -> Result<Complex64> {
    idx.validate(d)?;
    let mut val = normalization_log(d, idx).value();
    for tau in 1..=d.theta_axes() {
        let a = idx.entry_abs(tau - 1);
        let b = idx.entry_abs(tau);
        let order = (d.n - tau) as f64 / 2.0 + b as f64;
        let params = crate::special::GegenbauerParams::new(order, a - b)?;
        val *= crate::special::gegenbauer_eval(params, p.cos_theta(tau))?;
        val *= math::powi(p.sin_theta(tau), b as i32);
    }
    let angle = idx.trailing() as f64 * p.phi();
    Ok(Complex64::new(val * math::cos(angle), val * math::sin(angle)))
}
