//! Gegenbauer polynomials, gamma-function helpers, and the closed-form
//! one-dimensional integrals that the spherical coupling integral factors into.
//!
//! All Γ-ratio closed forms are evaluated in log space and exponentiated once,
//! so they stay finite well past the range where the raw factorials overflow.

use crate::math;
use crate::{Error, Result};
use num_complex::Complex64;

/// Hard cap on Gegenbauer degrees to bound recurrence length.
pub const MAX_GEGENBAUER_DEGREE: i64 = 4096;

/// Order and degree of a Gegenbauer polynomial `C_l^λ`.
///
/// In spherical use the order is always the half-integer `λ = (n-τ)/2 + k_τ`,
/// but any real order above `-1/2` is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams {
    order: f64,
    degree: i64,
}

impl GegenbauerParams {
    pub fn new(order: f64, degree: i64) -> Result<Self> {
        if !order.is_finite() || order <= -0.5 {
            return Err(Error::Domain("Gegenbauer order must be finite and > -1/2"));
        }
        if degree < 0 {
            return Err(Error::Domain("Gegenbauer degree must be nonnegative"));
        }
        if degree > MAX_GEGENBAUER_DEGREE {
            return Err(Error::Domain("Gegenbauer degree exceeds the recurrence cap"));
        }
        Ok(Self { order, degree })
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }
}

/// Evaluates `C_l^λ(t)` by the three-term recurrence
/// `(l+1) C_{l+1} = 2(l+λ) t C_l - (l+2λ-1) C_{l-1}`, seeded with
/// `C_0 = 1`, `C_1 = 2λt`. Upward recursion is stable for `λ > 0`.
pub fn gegenbauer_eval(p: GegenbauerParams, t: f64) -> Result<f64> {
    if !t.is_finite() || math::abs(t) > 1.0 {
        return Err(Error::Domain("Gegenbauer argument must lie in [-1, 1]"));
    }
    let lambda = p.order;
    match p.degree {
        0 => return Ok(1.0),
        1 => return Ok(2.0 * lambda * t),
        _ => {}
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for j in 1..p.degree {
        let jf = j as f64;
        let next = (2.0 * (jf + lambda) * t * cur - (jf + 2.0 * lambda - 1.0) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `∫_{-1}^{1} C_{l1}^λ(t) C_{l2}^λ(t) (1-t²)^{λ-1/2} dt`.
///
/// Vanishes for distinct degrees; for `l1 = l2 = l` equals
/// `π Γ(l+2λ) / (2^{2λ-1} l! (l+λ) Γ(λ)²)`.
pub fn gegenbauer_l2_pairing(lambda: f64, l1: i64, l2: i64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::Domain("pairing requires order λ > 0"));
    }
    if l1 < 0 || l2 < 0 {
        return Err(Error::Domain("pairing degrees must be nonnegative"));
    }
    if l1 != l2 {
        return Ok(0.0);
    }
    let l = l1 as f64;
    let ln = math::ln(core::f64::consts::PI) + math::lgamma(l + 2.0 * lambda)
        - (2.0 * lambda - 1.0) * math::ln(2.0)
        - math::lgamma(l + 1.0)
        - math::ln(l + lambda)
        - 2.0 * math::lgamma(lambda);
    Ok(math::exp(ln))
}

/// A signed magnitude in log space: `value = sign * exp(ln_abs)`.
///
/// Closed-form products accumulate in this representation and exponentiate once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogVal {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogVal {
    pub const ZERO: LogVal = LogVal {
        sign: 0.0,
        ln_abs: 0.0,
    };

    pub fn new(sign: f64, ln_abs: f64) -> Self {
        Self { sign, ln_abs }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0
    }

    pub fn mul(&self, other: &LogVal) -> LogVal {
        if self.is_zero() || other.is_zero() {
            return LogVal::ZERO;
        }
        LogVal::new(self.sign * other.sign, self.ln_abs + other.ln_abs)
    }

    pub fn value(&self) -> f64 {
        self.sign * math::exp(self.ln_abs)
    }
}

/// Axis index and the four adjacent multi-index entries feeding one θ integral.
///
/// `k_outer`/`m_outer` are the entries at position `ι-1`, `k_inner`/`m_inner`
/// at position `ι`. Signed trailing entries are taken as absolute values
/// by the caller before constructing the arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaIntegralArgs {
    pub axis: usize,
    pub k_outer: i64,
    pub k_inner: i64,
    pub m_outer: i64,
    pub m_inner: i64,
}

impl ThetaIntegralArgs {
    pub fn new(axis: usize, k_outer: i64, k_inner: i64, m_outer: i64, m_inner: i64) -> Result<Self> {
        if axis == 0 {
            return Err(Error::Domain("θ axis index starts at 1"));
        }
        if k_inner < 0 || m_inner < 0 || k_outer < k_inner || m_outer < m_inner {
            return Err(Error::InvalidIndex("θ integral entries must be non-increasing and nonnegative"));
        }
        Ok(Self {
            axis,
            k_outer,
            k_inner,
            m_outer,
            m_inner,
        })
    }

    fn check_axis(&self, n: usize) -> Result<()> {
        if self.axis >= n {
            return Err(Error::Domain("θ axis index must be below the sphere dimension"));
        }
        Ok(())
    }
}

/// `C_{ϑ,1}(ι,a,b,a,b)` in log space: the diagonal Gegenbauer pairing at axis ι.
fn theta_plain_diag(n: usize, axis: usize, a: i64, b: i64) -> LogVal {
    let q = (n - axis) as f64;
    let (a, b) = (a as f64, b as f64);
    let ln = math::ln(core::f64::consts::PI) + math::lgamma(q + a + b)
        - (q + 2.0 * b - 1.0) * math::ln(2.0)
        - math::lgamma(a - b + 1.0)
        - math::ln(q / 2.0 + a)
        - 2.0 * math::lgamma(q / 2.0 + b);
    LogVal::new(1.0, ln)
}

/// `C_{ϑ,c}(ι,a,b,a+1,b)` in log space.
fn theta_cos_offdiag(n: usize, axis: usize, a: i64, b: i64) -> LogVal {
    let q = (n - axis) as f64;
    let (a, b) = (a as f64, b as f64);
    let ln = math::ln(core::f64::consts::PI) + math::lgamma(q + a + b + 1.0)
        - (q + 2.0 * b) * math::ln(2.0)
        - math::lgamma(a - b + 1.0)
        - math::ln(q / 2.0 + a)
        - math::ln(q / 2.0 + a + 1.0)
        - 2.0 * math::lgamma(q / 2.0 + b);
    LogVal::new(1.0, ln)
}

/// `C_{ϑ,s}(ι,a,b,a+1,b+1)` in log space (both offsets upward; positive value).
fn theta_sin_aligned(n: usize, axis: usize, a: i64, b: i64) -> LogVal {
    let q = (n - axis) as f64;
    let (a, b) = (a as f64, b as f64);
    let ln = math::ln(core::f64::consts::PI) + math::ln(q / 2.0 + b)
        + math::lgamma(q + a + b + 2.0)
        - (q + 2.0 * b + 1.0) * math::ln(2.0)
        - math::lgamma(a - b + 1.0)
        - math::ln(q / 2.0 + a)
        - math::ln(q / 2.0 + a + 1.0)
        - 2.0 * math::lgamma(q / 2.0 + b + 1.0);
    LogVal::new(1.0, ln)
}

/// `C_{ϑ,s}(ι,a,b+1,a+1,b)` in log space (opposed offsets; carries a minus sign).
fn theta_sin_opposed(n: usize, axis: usize, a: i64, b: i64) -> LogVal {
    if a - b - 1 < 0 {
        // (a-b-1)! pole: the pairing degree would be negative.
        return LogVal::ZERO;
    }
    let q = (n - axis) as f64;
    let (a, b) = (a as f64, b as f64);
    let ln = math::ln(core::f64::consts::PI) + math::ln(q / 2.0 + b)
        + math::lgamma(q + a + b + 1.0)
        - (q + 2.0 * b + 1.0) * math::ln(2.0)
        - math::lgamma(a - b)
        - math::ln(q / 2.0 + a)
        - math::ln(q / 2.0 + a + 1.0)
        - 2.0 * math::lgamma(q / 2.0 + b + 1.0);
    LogVal::new(-1.0, ln)
}

pub(crate) fn theta_integral_plain_log(n: usize, a: &ThetaIntegralArgs) -> Result<LogVal> {
    a.check_axis(n)?;
    if a.k_outer != a.m_outer || a.k_inner != a.m_inner {
        return Ok(LogVal::ZERO);
    }
    Ok(theta_plain_diag(n, a.axis, a.k_outer, a.k_inner))
}

pub(crate) fn theta_integral_cos_log(n: usize, a: &ThetaIntegralArgs) -> Result<LogVal> {
    a.check_axis(n)?;
    if a.k_inner != a.m_inner || (a.k_outer - a.m_outer).abs() != 1 {
        return Ok(LogVal::ZERO);
    }
    let lower = a.k_outer.min(a.m_outer);
    Ok(theta_cos_offdiag(n, a.axis, lower, a.k_inner))
}

pub(crate) fn theta_integral_sin_log(n: usize, a: &ThetaIntegralArgs) -> Result<LogVal> {
    a.check_axis(n)?;
    let d_outer = a.m_outer - a.k_outer;
    let d_inner = a.m_inner - a.k_inner;
    Ok(match (d_outer, d_inner) {
        (1, 1) => theta_sin_aligned(n, a.axis, a.k_outer, a.k_inner),
        (-1, -1) => theta_sin_aligned(n, a.axis, a.m_outer, a.m_inner),
        (1, -1) => theta_sin_opposed(n, a.axis, a.k_outer, a.m_inner),
        (-1, 1) => theta_sin_opposed(n, a.axis, a.m_outer, a.k_inner),
        _ => LogVal::ZERO,
    })
}

/// `C_{ϑ,1}`: θ integral of two Gegenbauer factors against the surface weight.
///
/// Nonzero only on the diagonal `(k_outer, k_inner) = (m_outer, m_inner)`,
/// where it reduces to the Gegenbauer pairing norm at axis `ι`.
pub fn theta_integral_1(n: usize, a: &ThetaIntegralArgs) -> Result<f64> {
    Ok(theta_integral_plain_log(n, a)?.value())
}

/// `C_{ϑ,c}`: the same integral with an extra `cos ϑ` factor.
///
/// Nonzero only for equal inner entries and outer entries differing by one;
/// symmetric under swapping the `k` and `m` entries.
pub fn theta_integral_c(n: usize, a: &ThetaIntegralArgs) -> Result<f64> {
    Ok(theta_integral_cos_log(n, a)?.value())
}

/// `C_{ϑ,s}`: the same integral with an extra `sin ϑ` factor.
///
/// Nonzero only when both the outer and the inner entries differ by one;
/// the value is negative when the two offsets point in opposite directions.
pub fn theta_integral_s(n: usize, a: &ThetaIntegralArgs) -> Result<f64> {
    Ok(theta_integral_sin_log(n, a)?.value())
}

/// Which trigonometric factor multiplies `e^{i d φ}` in the φ integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    /// `∫ e^{idφ} dφ`
    Plain,
    /// `∫ e^{idφ} cos φ dφ`
    Cos,
    /// `∫ e^{idφ} sin φ dφ`
    Sin,
}

/// Closed-form φ integrals over `[0, 2π)`; `d` is the frequency offset
/// `m_{n-1} - k_{n-1}`.
pub fn phi_integral(kind: PhiKind, d: i64) -> Complex64 {
    use core::f64::consts::PI;
    match kind {
        PhiKind::Plain => {
            if d == 0 {
                Complex64::new(2.0 * PI, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        PhiKind::Cos => {
            if d.abs() == 1 {
                Complex64::new(PI, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        PhiKind::Sin => {
            if d.abs() == 1 {
                Complex64::new(0.0, d as f64 * PI)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    }
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain("log_gamma requires x > 0"));
    }
    Ok(math::lgamma(x))
}

/// Binomial coefficient as `f64`: exact integer arithmetic while the
/// intermediate products fit in `u128`, log-gamma differences beyond.
/// Returns 0 for `k` outside `0..=n`.
pub fn binomial(n: i64, k: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain("binomial requires n >= 0"));
    }
    if k < 0 || k > n {
        return Ok(0.0);
    }
    let k = k.min(n - k);
    if n <= 120 {
        let mut acc: u128 = 1;
        let mut exact = true;
        for i in 1..=k {
            match acc.checked_mul((n - k + i) as u128) {
                Some(v) => acc = v / i as u128,
                None => {
                    exact = false;
                    break;
                }
            }
        }
        if exact {
            return Ok(acc as f64);
        }
    }
    Ok(math::exp(ln_binomial(n, k)))
}

/// `ln C(n, k)` for `0 <= k <= n` via log-gamma.
pub(crate) fn ln_binomial(n: i64, k: i64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    math::lgamma(n + 1.0) - math::lgamma(k + 1.0) - math::lgamma(n - k + 1.0)
}
