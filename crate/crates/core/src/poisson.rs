//! The directional Poisson wavelet case study: Fourier coefficients of the
//! second directional derivative `G` of the zonal Poisson wavelet at scale ρ,
//! exact series for its norm, gravity center and momentum variance, the
//! auxiliary sums `S_m^μ(ρ) = Σ binom(l+μ, l) l^m e^{-2ρl}` with their
//! four-term small-ρ asymptotics, the limiting uncertainty product, and the
//! ratio of that limit against the best zonal wavelet of the same family.
//!
//! Every specialized series here has an independent counterpart in
//! [`crate::uncertainty`]; the two routes agree to roundoff and that identity
//! is what the test suite leans on.

use crate::kahan::KahanSum;
use crate::math;
use crate::special::ln_binomial;
use crate::sphere::{normalization_log, surface_constant, MultiIndex, SphereDim};
use crate::uncertainty::{uncertainty_report, FourierExpansion, UncertaintyReport};
use crate::{Complex64, Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Half-integer order `λ = (n-1)/2` and scale `ρ > 0` of the wavelet family.
///
/// Exact series are valid for every `λ ≥ 1/2`; the small-ρ asymptotic forms
/// additionally require `λ ≥ 3/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletParams {
    lambda: f64,
    rho: f64,
}

impl WaveletParams {
    pub fn new(lambda: f64, rho: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.5 || (2.0 * lambda) != libm::round(2.0 * lambda) {
            return Err(Error::Domain("λ must be a half-integer ≥ 1/2"));
        }
        if !rho.is_finite() || rho <= 0.0 {
            return Err(Error::Domain("scale ρ must be positive"));
        }
        Ok(Self { lambda, rho })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Sphere dimension `n = 2λ + 1`.
    pub fn dim(&self) -> SphereDim {
        SphereDim::new((2.0 * self.lambda) as usize + 1).expect("λ ≥ 1/2 gives n ≥ 2")
    }
}

fn require_asymptotic_lambda(lambda: f64) -> Result<()> {
    if lambda < 1.5 {
        return Err(Error::Domain("asymptotics require λ ≥ 3/2"));
    }
    Ok(())
}

/// Truncated expansion `Σ c_i ρ^{p₀+i}` with an explicit order of error.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticPolynomial {
    /// Power of the leading retained term.
    pub leading_power: i32,
    /// Coefficients of successive integer powers starting at `leading_power`.
    pub coefficients: Vec<f64>,
    /// The expansion is accurate up to `O(ρ^error_order)`.
    pub error_order: i32,
}

impl AsymptoticPolynomial {
    fn new(leading_power: i32, coefficients: Vec<f64>, error_order: i32) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("asymptotic coefficient"));
        }
        if error_order <= leading_power + coefficients.len() as i32 - 1 {
            return Err(Error::Domain("error order must lie beyond the retained terms"));
        }
        Ok(Self {
            leading_power,
            coefficients,
            error_order,
        })
    }

    pub fn eval(&self, rho: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coefficients.iter().enumerate() {
            acc += c * math::powi(rho, self.leading_power + i as i32);
        }
        acc
    }
}

/// Coefficient `β_{l,k₁}` of the directional-derivative recursion,
/// `sqrt((k₁+1)(2λ+k₁-1)(l-k₁)(l+2λ+k₁) / ((2λ+2k₁-1)(2λ+2k₁+1)))`.
///
/// For `k₁ = 0` the factors `(2λ+k₁-1)` and `(2λ+2k₁-1)` cancel exactly,
/// which keeps the value finite at `λ = 1/2`.
pub fn beta(lambda: f64, l: i64, k1: i64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.5 {
        return Err(Error::Domain("β requires λ ≥ 1/2"));
    }
    if k1 < 0 || k1 > l {
        return Err(Error::Domain("β requires 0 ≤ k₁ ≤ l"));
    }
    let (lf, kf) = (l as f64, k1 as f64);
    let ratio = if k1 == 0 {
        1.0
    } else {
        (2.0 * lambda + kf - 1.0) / (2.0 * lambda + 2.0 * kf - 1.0)
    };
    Ok(math::sqrt(
        (kf + 1.0) * ratio * (lf - kf) * (lf + 2.0 * lambda + kf) / (2.0 * lambda + 2.0 * kf + 1.0),
    ))
}

/// Zonal coefficient `Ĝ_l^0` of `G` (real), for `l ≥ 1`.
fn g_zonal(w: &WaveletParams, l: i64) -> f64 {
    let lam = w.lambda;
    let lf = l as f64;
    let b0 = beta(lam, l, 0).expect("valid β arguments");
    b0 * b0 * (lf + lam) / lam * w.rho * lf * math::exp(-w.rho * lf)
        / (zonal_norm_constant(w.dim(), l) * surface_constant(w.dim()))
}

/// Tesseral coefficient `Ĝ_l^2` of `G` (real, attached to `k = (2,0,…,0)`),
/// for `l ≥ 2`; carries the corrected minus sign.
fn g_tesseral(w: &WaveletParams, l: i64) -> f64 {
    let lam = w.lambda;
    let lf = l as f64;
    let b0 = beta(lam, l, 0).expect("valid β arguments");
    let b1 = beta(lam, l, 1).expect("valid β arguments");
    -b0 * b1 * (lf + lam) / lam * w.rho * lf * math::exp(-w.rho * lf)
        / (zonal_norm_constant(w.dim(), l) * surface_constant(w.dim()))
}

fn zonal_norm_constant(d: SphereDim, l: i64) -> f64 {
    normalization_log(d, &MultiIndex::zonal(d, l)).value()
}

/// Sparse expansion of `G` truncated at degree `L`: zonal coefficients for
/// `l ≥ 1` and tesseral `k₁ = 2` coefficients for `l ≥ 2`.
///
/// Errors with [`Error::Convergence`] when the truncated tail is not
/// negligible (the degree-`L` coefficient still exceeds `1e-13` of the peak).
pub fn g_coefficients(w: &WaveletParams, max_degree: i64) -> Result<FourierExpansion> {
    if max_degree < 2 {
        return Err(Error::Domain("G expansion needs max degree ≥ 2"));
    }
    let d = w.dim();
    let mut f = FourierExpansion::new(d);
    let mut peak = 0.0f64;
    let mut last = 0.0f64;
    for l in 1..=max_degree {
        let g0 = g_zonal(w, l);
        peak = peak.max(math::abs(g0));
        last = math::abs(g0);
        f.set(MultiIndex::zonal(d, l), Complex64::new(g0, 0.0))?;
        if l >= 2 {
            let g2 = g_tesseral(w, l);
            peak = peak.max(math::abs(g2));
            last = last.max(math::abs(g2));
            f.set(MultiIndex::with_leading(d, l, 2), Complex64::new(g2, 0.0))?;
        }
    }
    if last > 1e-13 * peak {
        return Err(Error::Convergence(
            "truncation degree too small for the requested scale",
        ));
    }
    Ok(f)
}

/// Smallest truncation degree at which every exact series of `G` has a
/// negligible tail (coefficient weights fall 45 e-folds below their peak).
pub fn recommended_degree(w: &WaveletParams) -> i64 {
    series_degree_cap(2.0 * w.lambda + 16.0, w.rho)
}

fn series_degree_cap(weight_exponent: f64, rho: f64) -> i64 {
    let gauge = |l: f64| weight_exponent * math::ln(l) - 2.0 * rho * l;
    let l_peak = (weight_exponent / (2.0 * rho)).max(2.0);
    let target = gauge(l_peak) - 45.0;
    let mut l = l_peak;
    let cap = 5.0 * l_peak + 60.0 / rho + 1000.0;
    while gauge(l) > target && l < cap {
        l += (l_peak / 64.0).max(1.0);
    }
    libm::ceil(l) as i64
}

/// Exact partial sum of `S_m^μ(ρ) = Σ_{l≥0} binom(l+μ, l) l^m e^{-2ρl}` with
/// adaptive cutoff: the summand peaks near `l ≈ (μ+m)/(2ρ)` and terms are
/// accumulated until they fall below `1e-17` of the running sum.
pub fn s_sum_exact(mu: i64, m: i64, rho: f64) -> Result<f64> {
    if mu < 0 || m < 0 {
        return Err(Error::Domain("S sum requires μ, m ≥ 0"));
    }
    if !rho.is_finite() || rho <= 0.0 {
        return Err(Error::Domain("S sum requires ρ > 0"));
    }
    let l_peak = ((mu + m) as f64 / (2.0 * rho)).max(1.0);
    let cap = (5.0 * l_peak + 60.0 / rho + 1000.0) as i64;
    let mut acc = KahanSum::new();
    if m == 0 {
        acc.add(1.0);
    }
    let mut l = 1i64;
    loop {
        let lf = l as f64;
        let term = math::exp(ln_binomial(l + mu, l) + m as f64 * math::ln(lf) - 2.0 * rho * lf);
        acc.add(term);
        if lf > l_peak && term < 1e-17 * acc.value() {
            break;
        }
        if l >= cap {
            return Err(Error::Convergence("S sum cutoff cap reached"));
        }
        l += 1;
    }
    Ok(acc.value())
}

/// Four-term small-ρ expansion of `S_m^μ(ρ)`, valid for `μ ≥ 3`: leading
/// power `ρ^{-(μ+m+1)}` and error `O(ρ^{-μ-m+3})`.
pub fn s_sum_asymptotic(mu: i64, m: i64) -> Result<AsymptoticPolynomial> {
    if mu < 3 {
        return Err(Error::Domain("S sum asymptotics require μ ≥ 3"));
    }
    if m < 0 {
        return Err(Error::Domain("S sum requires m ≥ 0"));
    }
    let (mf, mm) = (mu as f64, m as f64);
    let fact_ratio = |top: f64, bottom: f64| math::exp(math::lgamma(top + 1.0) - math::lgamma(bottom + 1.0));
    let scale = math::exp(-(mf + mm + 2.0) * math::ln(2.0));
    let c0 = 2.0 * fact_ratio(mf + mm, mf) * scale;
    let c1 = 2.0 * (mf + 1.0) * fact_ratio(mf + mm - 1.0, mf - 1.0) * scale;
    let c2 = (mf + 2.0 / 3.0) * (mf + 1.0) * fact_ratio(mf + mm - 2.0, mf - 2.0) * scale;
    let c3 = mf * (mf + 1.0) * (mf + 1.0) / 3.0 * fact_ratio(mf + mm - 3.0, mf - 3.0) * scale;
    let p0 = -(mu + m + 1) as i32;
    // Coefficients are listed for ascending powers ρ^{p0}..ρ^{p0+3}.
    AsymptoticPolynomial::new(p0, vec![c0, c1, c2, c3], p0 + 4)
}

/// `Σ_{l=1}^{L} binom(l+2λ, l) · poly(l) · l^shift · e^{-2ρl}` with `poly`
/// given by coefficients of descending powers.
fn weighted_series(lambda: f64, rho: f64, max_degree: i64, poly: &[f64], shift: i32) -> f64 {
    let mu = 2.0 * lambda;
    let mut acc = KahanSum::new();
    for l in 1..=max_degree {
        let lf = l as f64;
        let mut p = 0.0;
        for c in poly {
            p = p * lf + c;
        }
        let base = math::exp(
            math::lgamma(lf + mu + 1.0) - math::lgamma(lf + 1.0) - math::lgamma(mu + 1.0)
                - 2.0 * rho * lf,
        );
        acc.add(base * p * math::powi(lf, shift));
    }
    acc.value()
}

fn norm_bracket(w: &WaveletParams, max_degree: i64) -> f64 {
    let lam = w.lambda;
    weighted_series(
        lam,
        w.rho,
        max_degree,
        &[3.0, 9.0 * lam, 2.0 * lam * (3.0 * lam - 2.0), -4.0 * lam * lam],
        3,
    )
}

/// Exact squared norm `‖G‖²` as a series truncated at `max_degree`:
/// the bracket `3S_6 + 9λS_5 + 2λ(3λ-2)S_4 - 4λ²S_3` over `μ = 2λ` times
/// `2ρ²/(Σ_n²(2λ+1)(2λ+3))`.
pub fn norm_sq_series(w: &WaveletParams, max_degree: i64) -> f64 {
    let lam = w.lambda;
    let sig = surface_constant(w.dim());
    2.0 * w.rho * w.rho / (sig * sig * (2.0 * lam + 1.0) * (2.0 * lam + 3.0))
        * norm_bracket(w, max_degree)
}

/// Four-term small-ρ expansion of `‖G‖²`: leading power `ρ^{-(2λ+5)}`,
/// error `O(ρ^{-(2λ+1)})`. Requires `λ ≥ 3/2`.
pub fn norm_sq_asymptotic(lambda: f64) -> Result<AsymptoticPolynomial> {
    require_asymptotic_lambda(lambda)?;
    let d = WaveletParams::new(lambda, 1.0)?.dim();
    let sig = surface_constant(d);
    let base = (lambda + 1.0) / (sig * sig);
    let two = |e: f64| math::exp(e * math::ln(2.0));
    let lam = lambda;
    let c0 = base * 3.0 * (lam + 2.0) * (lam + 3.0) * (2.0 * lam + 5.0) / two(2.0 * lam + 3.0);
    let c1 = base * 3.0 * lam * (lam + 2.0) * (lam + 2.0) * (2.0 * lam + 5.0) / two(2.0 * lam + 2.0);
    let c2 = base * lam * (lam + 2.0) * (2.0 * lam + 3.0) * (6.0 * lam * lam + 11.0 * lam - 3.0)
        / two(2.0 * lam + 3.0);
    let c3 = base
        * lam
        * lam
        * (lam + 1.0)
        * (2.0 * lam + 3.0)
        * (2.0 * lam * lam + 3.0 * lam - 3.0)
        / two(2.0 * lam + 2.0);
    let p0 = -(2.0 * lam + 5.0) as i32;
    AsymptoticPolynomial::new(p0, vec![c0, c1, c2, c3], p0 + 4)
}

/// Closed form of the zonal coupling component
/// `I₁(l, 0; l+1, 0) = A_l^0 A_{l+1}^0 λ² binom(l+2λ, l) / ((l+λ)(l+λ+1))`.
pub fn i1_zonal(lambda: f64, l: i64) -> Result<f64> {
    if lambda < 0.5 {
        return Err(Error::Domain("coupling closed form requires λ ≥ 1/2"));
    }
    if l < 0 {
        return Err(Error::Domain("degree must be nonnegative"));
    }
    let d = WaveletParams::new(lambda, 1.0)?.dim();
    let lf = l as f64;
    let ln = normalization_log(d, &MultiIndex::zonal(d, l)).ln_abs
        + normalization_log(d, &MultiIndex::zonal(d, l + 1)).ln_abs
        + 2.0 * math::ln(lambda)
        + ln_binomial(l + (2.0 * lambda) as i64, l)
        - math::ln(lf + lambda)
        - math::ln(lf + lambda + 1.0);
    Ok(math::exp(ln))
}

/// Closed form of the tesseral coupling component `I₁(l, 2; l+1, 2)`
/// (indices `(2,0,…,0)`), valid for `λ ≥ 1`; vanishes at `l < 2`.
pub fn i1_tesseral(lambda: f64, l: i64) -> Result<f64> {
    if lambda < 1.0 {
        return Err(Error::Domain("tesseral closed form requires λ ≥ 1 (n ≥ 3)"));
    }
    if l < 1 {
        return Err(Error::Domain("tesseral coupling needs l ≥ 1"));
    }
    if l == 1 {
        return Ok(0.0);
    }
    let d = WaveletParams::new(lambda, 1.0)?.dim();
    let lf = l as f64;
    let lam = lambda;
    let ln = normalization_log(d, &MultiIndex::with_leading(d, l, 2)).ln_abs
        + normalization_log(d, &MultiIndex::with_leading(d, l + 1, 2)).ln_abs
        + math::ln(lam)
        + 2.0 * math::ln(2.0 * lam - 1.0)
        + math::ln(2.0 * lam + 1.0)
        + ln_binomial(l + (2.0 * lambda) as i64 + 2, l)
        + math::ln(lf - 1.0)
        + math::ln(lf)
        - math::ln(8.0)
        - math::ln(lam + 1.0)
        - math::ln(2.0 * lam + 3.0)
        - math::ln(lf + lam)
        - math::ln(lf + lam + 1.0);
    Ok(math::exp(ln))
}

/// Exact gravity center of `G` via the specialized closed forms: twice the
/// zonal plus twice the tesseral product series over adjacent degrees,
/// normalized by `‖G‖²`. Directed along the first Cartesian axis.
///
/// Requires `λ ≥ 1`; the tesseral closed form has no `n = 2` counterpart.
pub fn gravity_center_g(w: &WaveletParams, max_degree: i64) -> Result<Vec<f64>> {
    if w.lambda < 1.0 {
        return Err(Error::Domain("specialized gravity series requires λ ≥ 1"));
    }
    if max_degree < 2 {
        return Err(Error::Domain("G expansion needs max degree ≥ 2"));
    }
    let mut num = KahanSum::new();
    for l in 1..max_degree {
        num.add(2.0 * g_zonal(w, l) * g_zonal(w, l + 1) * i1_zonal(w.lambda, l)?);
        if l >= 2 {
            num.add(2.0 * g_tesseral(w, l) * g_tesseral(w, l + 1) * i1_tesseral(w.lambda, l)?);
        }
    }
    let norm = norm_sq_series(w, max_degree);
    if !(norm.is_finite() && norm > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    let mut xi = vec![0.0; w.dim().ambient()];
    xi[0] = num.value() / norm;
    Ok(xi)
}

/// Small-ρ expansion of `var_S(G)`: `c₂ρ² + c₃ρ³ + O(ρ⁴)`. Requires `λ ≥ 3/2`.
pub fn var_s_g_asymptotic(lambda: f64) -> Result<AsymptoticPolynomial> {
    require_asymptotic_lambda(lambda)?;
    let lam = lambda;
    let c2 = (6.0 * lam * lam + 13.0 * lam + 9.0) / (3.0 * (lam + 3.0) * (2.0 * lam + 5.0));
    let c3 = -4.0 * lam * lam * (3.0 * lam + 5.0)
        / (3.0 * (lam + 2.0) * (lam + 3.0) * (lam + 3.0) * (2.0 * lam + 5.0));
    AsymptoticPolynomial::new(2, vec![c2, c3], 4)
}

/// Exact momentum variance of `G` as the ratio of two bracket series
/// (the `Σ_n` and ρ² prefactors cancel).
pub fn var_m_g(w: &WaveletParams, max_degree: i64) -> Result<f64> {
    if max_degree < 2 {
        return Err(Error::Domain("G expansion needs max degree ≥ 2"));
    }
    let lam = w.lambda;
    let num = weighted_series(
        lam,
        w.rho,
        max_degree,
        &[
            3.0,
            15.0 * lam,
            4.0 * lam * (6.0 * lam - 1.0),
            12.0 * lam * lam * (lam - 1.0),
            -8.0 * lam * lam * lam,
        ],
        4,
    );
    let den = norm_bracket(w, max_degree);
    if !(den.is_finite() && den > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    Ok(num / den)
}

/// Small-ρ expansion of `var_M(G)`: orders `ρ^{-2}, ρ^{-1}, 1, ρ`, error
/// `O(ρ²)`. Requires `λ ≥ 3/2`.
pub fn var_m_g_asymptotic(lambda: f64) -> Result<AsymptoticPolynomial> {
    require_asymptotic_lambda(lambda)?;
    let lam = lambda;
    let c0 = (lam + 4.0) * (2.0 * lam + 7.0) / 2.0;
    let c1 = lam * (2.0 * lam + 7.0) / (lam + 3.0);
    let c2 = -lam
        * (4.0 * math::powi(lam, 4) - 8.0 * math::powi(lam, 3) - 189.0 * lam * lam - 492.0 * lam
            - 351.0)
        / (6.0 * (lam + 3.0) * (lam + 3.0) * (2.0 * lam + 5.0));
    let c3 = 2.0
        * lam
        * lam
        * (2.0 * math::powi(lam, 4) - 2.0 * math::powi(lam, 3) - 87.0 * lam * lam - 246.0 * lam
            - 189.0)
        / (3.0 * (lam + 2.0) * math::powi(lam + 3.0, 3) * (2.0 * lam + 5.0));
    AsymptoticPolynomial::new(-2, vec![c0, c1, c2, c3], 2)
}

/// The limiting uncertainty product `lim_{ρ→0} U(G)`:
/// `sqrt((λ+4)(2λ+7)(6λ²+13λ+9) / (6(λ+3)(2λ+5)))`.
pub fn u_limit(lambda: f64) -> Result<f64> {
    require_asymptotic_lambda(lambda)?;
    let lam = lambda;
    Ok(math::sqrt(
        (lam + 4.0) * (2.0 * lam + 7.0) * (6.0 * lam * lam + 13.0 * lam + 9.0)
            / (6.0 * (lam + 3.0) * (2.0 * lam + 5.0)),
    ))
}

/// Two-term small-ρ expansion of `U(G)`: the limit plus a linear correction,
/// error `O(ρ²)`. Requires `λ ≥ 3/2`.
pub fn u_g_asymptotic(lambda: f64) -> Result<AsymptoticPolynomial> {
    let u0 = u_limit(lambda)?;
    let lam = lambda;
    let u1 = -lam * (9.0 * lam * lam + 5.0 * lam - 18.0) / ((lam + 2.0) * (lam + 3.0))
        * math::sqrt(
            (2.0 * lam + 7.0)
                / (6.0
                    * (lam + 3.0)
                    * (lam + 4.0)
                    * (2.0 * lam + 5.0)
                    * (6.0 * lam * lam + 13.0 * lam + 9.0)),
        );
    AsymptoticPolynomial::new(0, vec![u0, u1], 2)
}

/// Full uncertainty report of `G` through the generic series machinery
/// applied to [`g_coefficients`].
pub fn uncertainty_g(w: &WaveletParams, max_degree: i64) -> Result<UncertaintyReport> {
    uncertainty_report(&g_coefficients(w, max_degree)?)
}

/// Richardson extrapolation of `f(ρ) → f(0)` from samples on a geometric ρ
/// grid `(ρ_i, f(ρ_i))` listed with decreasing ρ, assuming an expansion in
/// integer powers of ρ.
pub fn richardson_limit(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Domain("Richardson extrapolation needs at least two samples"));
    }
    let ratio = samples[1].0 / samples[0].0;
    if !(ratio.is_finite() && ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Domain("ρ samples must decrease geometrically"));
    }
    for w in samples.windows(2) {
        if math::abs(w[1].0 / w[0].0 - ratio) > 1e-9 {
            return Err(Error::Domain("ρ samples must decrease geometrically"));
        }
    }
    let mut table: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mut level = 1i32;
    while table.len() > 1 {
        let r_k = math::powi(ratio, level);
        let mut next = Vec::with_capacity(table.len() - 1);
        for i in 0..table.len() - 1 {
            next.push((table[i + 1] - r_k * table[i]) / (1.0 - r_k));
        }
        table = next;
        level += 1;
    }
    Ok(table[0])
}

/// Default geometric ρ grid used for numerical ρ→0 limit extraction.
pub const DEFAULT_RHO_GRID: [f64; 5] = [0.16, 0.08, 0.04, 0.02, 0.01];

/// Zonal Poisson wavelet coefficient family `ĝ_l ∝ (ρl)^m e^{-ρl} (l+λ)/λ / A_l^0`
/// truncated at `max_degree`, normalized to unit peak coefficient (all
/// localization quantities are scale-invariant).
pub fn zonal_poisson_coefficients(
    lambda: f64,
    m: i64,
    rho: f64,
    max_degree: i64,
) -> Result<FourierExpansion> {
    if m < 1 {
        return Err(Error::Domain("zonal wavelet order m must be ≥ 1"));
    }
    let w = WaveletParams::new(lambda, rho)?;
    let d = w.dim();
    let mut lns = Vec::with_capacity(max_degree as usize);
    for l in 1..=max_degree {
        let lf = l as f64;
        let ln = m as f64 * math::ln(rho * lf) - rho * lf + math::ln((lf + lambda) / lambda)
            - normalization_log(d, &MultiIndex::zonal(d, l)).ln_abs;
        lns.push(ln);
    }
    let max_ln = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut f = FourierExpansion::new(d);
    for (i, ln) in lns.iter().enumerate() {
        let l = i as i64 + 1;
        f.set(
            MultiIndex::zonal(d, l),
            Complex64::new(math::exp(ln - max_ln), 0.0),
        )?;
    }
    Ok(f)
}

/// Numerically extrapolated `ρ→0` limit of the uncertainty product of the
/// zonal wavelet `g_ρ^m`, computed with the generic series machinery on each
/// grid point and Richardson extrapolation across the grid.
pub fn zonal_u_limit(lambda: f64, m: i64, rho_grid: &[f64]) -> Result<f64> {
    let mut samples = Vec::with_capacity(rho_grid.len());
    for &rho in rho_grid {
        let cap = series_degree_cap(2.0 * lambda + 2.0 * m as f64 + 10.0, rho);
        let f = zonal_poisson_coefficients(lambda, m, rho, cap)?;
        let report = uncertainty_report(&f)?;
        samples.push((rho, report.u));
    }
    richardson_limit(&samples)
}

/// One row of the limiting-ratio table.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioPoint {
    pub lambda: f64,
    /// Closed-form `lim_{ρ→0} U(G)`.
    pub u_limit: f64,
    /// Minimum over `m` of the numerically extrapolated zonal limits.
    pub zonal_min: f64,
    pub ratio: f64,
}

/// Ratio of the limiting uncertainty product of `G` to the best zonal
/// Poisson wavelet `g_ρ^m`, minimized over `m ∈ {1, …, ⌈λ⌉+2}`, for each λ.
///
/// The zonal side is a numerical reconstruction; the curve is meaningful
/// qualitatively (above 1, decreasing, tending to 1) rather than as exact
/// ordinates.
pub fn ratio_curve(lambdas: &[f64], rho_grid: &[f64]) -> Result<Vec<RatioPoint>> {
    let mut out = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if lambda < 2.0 {
            return Err(Error::Domain("ratio curve requires λ ≥ 2"));
        }
        let u_lim = u_limit(lambda)?;
        let m_max = libm::ceil(lambda) as i64 + 2;
        let mut zonal_min = f64::INFINITY;
        for m in 1..=m_max {
            let u = zonal_u_limit(lambda, m, rho_grid)?;
            if u < zonal_min {
                zonal_min = u;
            }
        }
        out.push(RatioPoint {
            lambda,
            u_limit: u_lim,
            zonal_min,
            ratio: u_lim / zonal_min,
        });
    }
    Ok(out)
}
