//! Series computation of the center of gravity, the space and momentum
//! variances, and the uncertainty product of a function on `S^n` from its
//! Fourier coefficients.
//!
//! The key structural fact: the coupling integral
//! `I(k̂, m̂) = ∫ x · conj(Y^k) Y^m dσ` vanishes unless the extended index
//! sequences are conjugate — entries differ by ±1 on a leading block
//! `ι < ν` and agree from `ν` on. For `ν < n` exactly the Cartesian
//! component `ν` survives; for `ν = n` the last two components survive.
//! Pair enumeration therefore walks the sparse coefficient support and probes
//! only candidate conjugates instead of all index pairs.

use crate::kahan::{KahanComplex, KahanSum};
use crate::math;
use crate::special::{
    phi_integral, theta_integral_cos_log, theta_integral_plain_log, theta_integral_sin_log,
    LogVal, PhiKind, ThetaIntegralArgs,
};
use crate::sphere::{laplace_eigenvalue, normalization_log, surface_constant, MultiIndex, SphereDim};
use crate::{Complex64, Error, Result};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Sparse Fourier expansion of a function on `S^n`: a map from multi-indices
/// to complex coefficients.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    dim: SphereDim,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl FourierExpansion {
    pub fn new(dim: SphereDim) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds an expansion from index/coefficient pairs, rejecting duplicates.
    pub fn from_pairs(
        dim: SphereDim,
        pairs: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut out = Self::new(dim);
        for (idx, c) in pairs {
            idx.validate(dim)?;
            if out.coeffs.insert(idx, c).is_some() {
                return Err(Error::InvalidIndex("duplicate index in coefficient list"));
            }
        }
        Ok(out)
    }

    /// Sets (or overwrites) one coefficient.
    pub fn set(&mut self, idx: MultiIndex, value: Complex64) -> Result<()> {
        idx.validate(self.dim)?;
        self.coeffs.insert(idx, value);
        Ok(())
    }

    pub fn dim(&self) -> SphereDim {
        self.dim
    }

    pub fn get(&self, idx: &MultiIndex) -> Complex64 {
        self.coeffs
            .get(idx)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_degree(&self) -> i64 {
        self.coeffs.keys().map(|i| i.degree()).max().unwrap_or(0)
    }

    /// Squared L² norm by Parseval: `Σ |F̂_l^k|²`.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = KahanSum::new();
        for c in self.coeffs.values() {
            acc.add(c.norm_sqr());
        }
        acc.value()
    }
}

/// An ordered conjugate index pair together with its conjugation depth `ν`:
/// entries differ by ±1 at positions `< ν` and agree at positions `≥ ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatePair {
    pub k: MultiIndex,
    pub m: MultiIndex,
    pub nu: usize,
}

/// Determines the conjugation depth `ν` of an index pair, if any: the entries
/// must differ by exactly one at every position below `ν` and agree from `ν`
/// on. Pairs without such structure have a vanishing coupling integral.
pub fn conjugation_depth(d: SphereDim, k: &MultiIndex, m: &MultiIndex) -> Option<usize> {
    let n = d.n();
    let mut nu = 0;
    while nu < n && (m.entry(nu) - k.entry(nu)).abs() == 1 {
        nu += 1;
    }
    if nu == 0 {
        return None;
    }
    for pos in nu..n {
        if m.entry(pos) != k.entry(pos) {
            return None;
        }
    }
    Some(nu)
}

/// Enumerates all ordered conjugate pairs with both members in the support
/// of `f`, in deterministic order.
///
/// The walk is support-driven: for each index, candidate conjugates are grown
/// entry by entry (±1 per position), pruning any prefix that no present index
/// extends, so the cost scales with the support instead of its square.
pub fn conjugate_pairs(f: &FourierExpansion) -> Vec<ConjugatePair> {
    let d = f.dim();
    let n = d.n();
    let mut out = Vec::new();
    for k_idx in f.coeffs.keys() {
        let mut prefix: Vec<i64> = Vec::with_capacity(n);
        descend(f, k_idx, &mut prefix, 0, n, &mut out);
    }
    out
}

fn descend(
    f: &FourierExpansion,
    k_idx: &MultiIndex,
    prefix: &mut Vec<i64>,
    pos: usize,
    n: usize,
    out: &mut Vec<ConjugatePair>,
) {
    if pos >= 1 {
        // Close here: remaining entries equal, conjugation depth ν = pos.
        let mut k_tail: Vec<i64> = prefix[1..].to_vec();
        for p in pos..n {
            k_tail.push(k_idx.entry(p));
        }
        let cand = MultiIndex::new(prefix[0], k_tail);
        if cand.validate(f.dim()).is_ok() && f.coeffs.contains_key(&cand) {
            out.push(ConjugatePair {
                k: k_idx.clone(),
                m: cand,
                nu: pos,
            });
        }
    }
    if pos == n {
        return;
    }
    for delta in [1i64, -1] {
        let v = k_idx.entry(pos) + delta;
        prefix.push(v);
        if prefix_admissible(prefix, pos, n) && support_has_prefix(f, prefix, n) {
            descend(f, k_idx, prefix, pos + 1, n, out);
        }
        prefix.pop();
    }
}

/// Can `prefix[..=pos]` begin a valid multi-index?
fn prefix_admissible(prefix: &[i64], pos: usize, n: usize) -> bool {
    let v = prefix[pos];
    if pos == 0 {
        return v >= 0;
    }
    if pos == n - 1 {
        // Trailing entry: only bounded in magnitude by its predecessor.
        v.abs() <= prefix[pos - 1]
    } else {
        v >= 0 && v <= prefix[pos - 1]
    }
}

/// Does any index in the support start with the given entry prefix?
fn support_has_prefix(f: &FourierExpansion, prefix: &[i64], n: usize) -> bool {
    let rest = n - prefix.len();
    let mut low = prefix[1..].to_vec();
    let mut high = low.clone();
    low.extend(core::iter::repeat(i64::MIN).take(rest));
    high.extend(core::iter::repeat(i64::MAX).take(rest));
    let low_key = MultiIndex::new(prefix[0], low);
    let high_key = MultiIndex::new(prefix[0], high);
    f.coeffs.range(low_key..=high_key).next().is_some()
}

/// The coupling integral `I(k̂, m̂) = ∫ x · conj(Y^k) Y^m dσ ∈ C^{n+1}`.
///
/// For a pair of depth `ν < n` only component `ν` is nonzero, a product of
/// sin-type θ integrals below the axis, one cos-type integral at the axis,
/// plain pairings above it, and the plain φ integral. For `ν = n` the last
/// two components survive with the cos/sin φ integrals instead.
pub fn coupling_integral(d: SphereDim, pair: &ConjugatePair) -> Result<Vec<Complex64>> {
    let n = d.n();
    pair.k.validate(d)?;
    pair.m.validate(d)?;
    match conjugation_depth(d, &pair.k, &pair.m) {
        Some(nu) if nu == pair.nu => {}
        _ => return Err(Error::NonConjugatePair),
    }
    let nu = pair.nu;
    let mut result = vec![Complex64::new(0.0, 0.0); d.ambient()];

    let mut prod = normalization_log(d, &pair.k).mul(&normalization_log(d, &pair.m));
    prod = prod.mul(&LogVal::new(1.0, -math::ln(surface_constant(d))));

    let args = |axis: usize| -> Result<ThetaIntegralArgs> {
        ThetaIntegralArgs::new(
            axis,
            pair.k.entry_abs(axis - 1),
            pair.k.entry_abs(axis),
            pair.m.entry_abs(axis - 1),
            pair.m.entry_abs(axis),
        )
    };

    if nu < n {
        for axis in 1..nu {
            prod = prod.mul(&theta_integral_sin_log(n, &args(axis)?)?);
        }
        prod = prod.mul(&theta_integral_cos_log(n, &args(nu)?)?);
        let mut axis = nu + 1;
        while axis <= n - 1 && !(pair.k.entry(axis - 1) == 0 && pair.k.entry_abs(axis) == 0) {
            prod = prod.mul(&theta_integral_plain_log(n, &args(axis)?)?);
            axis += 1;
        }
        if axis <= n - 1 {
            // All remaining entries are zero; the plain integrals telescope to
            // π^{Q/2} / Γ(Q/2 + 1) with Q the number of remaining axes.
            let q = (n - axis) as f64;
            prod = prod.mul(&LogVal::new(
                1.0,
                q / 2.0 * math::ln(PI) - math::lgamma(q / 2.0 + 1.0),
            ));
        }
        let phi = phi_integral(PhiKind::Plain, pair.m.trailing() - pair.k.trailing());
        result[nu - 1] = prod.value() * phi;
    } else {
        for axis in 1..n {
            prod = prod.mul(&theta_integral_sin_log(n, &args(axis)?)?);
        }
        let offset = pair.m.trailing() - pair.k.trailing();
        let base = prod.value();
        result[n - 1] = base * phi_integral(PhiKind::Cos, offset);
        result[n] = base * phi_integral(PhiKind::Sin, offset);
    }
    Ok(result)
}

fn checked_norm_sq(f: &FourierExpansion) -> Result<f64> {
    let norm_sq = f.norm_sq();
    if !(norm_sq.is_finite() && norm_sq > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    Ok(norm_sq)
}

/// Center of gravity `ξ_O(F) = Σ conj(F̂^k) F̂^m I(k̂, m̂) / ‖F‖²` over all
/// ordered conjugate pairs in the support. The result is real for any `F`.
pub fn gravity_center(f: &FourierExpansion) -> Result<Vec<f64>> {
    let norm_sq = checked_norm_sq(f)?;
    let d = f.dim();
    let mut acc = vec![KahanComplex::new(); d.ambient()];
    for pair in conjugate_pairs(f) {
        let weight = f.get(&pair.k).conj() * f.get(&pair.m);
        let coupling = coupling_integral(d, &pair)?;
        if pair.nu < d.n() {
            acc[pair.nu - 1].add(weight * coupling[pair.nu - 1]);
        } else {
            acc[d.n() - 1].add(weight * coupling[d.n() - 1]);
            acc[d.n()].add(weight * coupling[d.n()]);
        }
    }
    Ok(acc.iter().map(|a| a.value().re / norm_sq).collect())
}

/// Momentum variance `var_M(F) = Σ l(l+2λ) |F̂_l^k|² / ‖F‖²`.
pub fn momentum_variance(f: &FourierExpansion) -> Result<f64> {
    let norm_sq = checked_norm_sq(f)?;
    let d = f.dim();
    let mut acc = KahanSum::new();
    for (idx, c) in f.iter() {
        acc.add(-laplace_eigenvalue(d, idx.degree()) * c.norm_sqr());
    }
    Ok(acc.value() / norm_sq)
}

/// Localization summary for one function: gravity center, variances,
/// uncertainty product, and the `n/2` lower-bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    /// Center of gravity in `R^{n+1}`.
    pub xi_o: Vec<f64>,
    /// Euclidean norm of the gravity center, always in `[0, 1)` for
    /// functions supported on more than one degree.
    pub norm_xi: f64,
    /// Space variance `(1 - ‖ξ_O‖²) / ‖ξ_O‖²`.
    pub var_s: f64,
    /// Momentum variance `Σ l(l+2λ)|F̂|² / ‖F‖²`.
    pub var_m: f64,
    /// Uncertainty product `sqrt(var_S · var_M)`.
    pub u: f64,
    /// The lower bound `n/2`.
    pub bound: f64,
    /// Whether `U ≥ n/2` holds (up to 1e-12 slack).
    pub bound_ok: bool,
}

/// Computes the full uncertainty report of a coefficient expansion.
///
/// Errors with [`Error::ZeroNorm`] for the zero function and
/// [`Error::ZeroGravityCenter`] when `ξ_O = 0` (the space variance is
/// undefined there).
pub fn uncertainty_report(f: &FourierExpansion) -> Result<UncertaintyReport> {
    let xi_o = gravity_center(f)?;
    let norm_xi_sq: f64 = xi_o.iter().map(|v| v * v).sum();
    if norm_xi_sq < 1e-300 {
        return Err(Error::ZeroGravityCenter);
    }
    let var_s = (1.0 - norm_xi_sq) / norm_xi_sq;
    let var_m = momentum_variance(f)?;
    let u = math::sqrt(var_s * var_m);
    let bound = f.dim().n() as f64 / 2.0;
    Ok(UncertaintyReport {
        xi_o,
        norm_xi: math::sqrt(norm_xi_sq),
        var_s,
        var_m,
        u,
        bound,
        bound_ok: u >= bound - 1e-12,
    })
}
