//! Brute-force numerical integration over `S^n`, used as the independent
//! cross-check for every closed form and series in this crate.
//!
//! Each θ axis carries a Gauss–Jacobi rule for the weight `(1-t²)^{(n-ι-1)/2}`
//! (nodes and weights from a Golub–Welsch eigen decomposition of the Jacobi
//! matrix); the φ axis uses the equispaced trapezoid rule, which is spectrally
//! exact for trigonometric polynomials.

use crate::kahan::{KahanComplex, KahanSum};
use crate::math;
use crate::sphere::{SphereDim, SpherePoint};
use crate::{Complex64, Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Default cap on the total tensor-grid size.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

/// Gauss–Jacobi nodes and weights on `[-1, 1]` for the weight
/// `(1-t)^α (1+t)^β`, by Golub–Welsch.
pub fn gauss_jacobi(npts: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if npts == 0 {
        return Err(Error::Domain("quadrature rule needs at least one node"));
    }
    if !(alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0) {
        return Err(Error::Domain("Jacobi exponents must be finite and > -1"));
    }
    let mut diag = vec![0.0; npts];
    let mut offdiag = vec![0.0; npts];
    diag[0] = (beta - alpha) / (alpha + beta + 2.0);
    for k in 1..npts {
        let kf = k as f64;
        let denom = 2.0 * kf + alpha + beta;
        diag[k] = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
        offdiag[k - 1] = 2.0 / denom
            * math::sqrt(
                kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta)
                    / ((denom + 1.0) * (denom - 1.0)),
            );
    }
    let (mut nodes, first_components) = tridiagonal_eigen(diag, offdiag)?;
    // μ₀ = ∫ (1-t)^α (1+t)^β dt = 2^{α+β+1} B(α+1, β+1)
    let mu0 = math::exp(
        (alpha + beta + 1.0) * math::ln(2.0) + math::lgamma(alpha + 1.0) + math::lgamma(beta + 1.0)
            - math::lgamma(alpha + beta + 2.0),
    );
    let mut weights: Vec<f64> = first_components.iter().map(|v| mu0 * v * v).collect();
    if alpha == beta {
        // Enforce the exact symmetry of the rule; the eigenvalue iteration
        // leaves ~1 ulp of asymmetry that would spoil parity cancellations.
        let n = npts;
        for i in 0..n / 2 {
            let t = 0.5 * (nodes[i] - nodes[n - 1 - i]);
            nodes[i] = t;
            nodes[n - 1 - i] = -t;
            let w = 0.5 * (weights[i] + weights[n - 1 - i]);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
    }
    Ok((nodes, weights))
}

/// Eigenvalues of a symmetric tridiagonal matrix together with the first
/// component of each normalized eigenvector, by the implicit QL algorithm
/// with Wilkinson shifts. Results are sorted by eigenvalue.
fn tridiagonal_eigen(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    if n == 1 {
        return Ok((d, z));
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence("tridiagonal eigenvalue iteration"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let nodes = order.iter().map(|&i| d[i]).collect();
    let firsts = order.iter().map(|&i| z[i]).collect();
    Ok((nodes, firsts))
}

/// Tensor-product quadrature grid over `S^n` realizing the normalized surface
/// measure, exact (to roundoff) for products of harmonics with total degree
/// up to the exactness target plus one linear Cartesian factor.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    dim: SphereDim,
    exactness: usize,
    theta: Vec<Vec<f64>>,
    theta_cos: Vec<Vec<f64>>,
    theta_sin: Vec<Vec<f64>>,
    theta_w: Vec<Vec<f64>>,
    phi: Vec<f64>,
    phi_w: f64,
    measure_norm: f64,
    total_nodes: usize,
}

/// Builds a grid with polynomial exactness degree `D` under the default node cap.
pub fn build_grid(d: SphereDim, exactness: usize) -> Result<QuadratureGrid> {
    build_grid_with_cap(d, exactness, DEFAULT_NODE_CAP)
}

/// Builds a grid with an explicit cap on the total number of tensor nodes.
pub fn build_grid_with_cap(d: SphereDim, exactness: usize, cap: usize) -> Result<QuadratureGrid> {
    if exactness == 0 {
        return Err(Error::Domain("exactness degree must be at least 1"));
    }
    // One extra node beyond the Gauss requirement absorbs the degree-(D+1)
    // integrands arising from the Cartesian factor in ∫ x |F|².
    let n_theta = (exactness + 3) / 2 + 1;
    let n_phi = exactness + 2;
    let mut total: usize = n_phi;
    for _ in 0..d.theta_axes() {
        total = total
            .checked_mul(n_theta)
            .ok_or(Error::Resource("grid size overflows"))?;
        if total > cap {
            return Err(Error::Resource("grid exceeds the configured node cap"));
        }
    }
    let mut theta = Vec::with_capacity(d.theta_axes());
    let mut theta_cos = Vec::with_capacity(d.theta_axes());
    let mut theta_sin = Vec::with_capacity(d.theta_axes());
    let mut theta_w = Vec::with_capacity(d.theta_axes());
    for axis in 1..=d.theta_axes() {
        let alpha = (d.n() - axis - 1) as f64 / 2.0;
        let (t, w) = gauss_jacobi(n_theta, alpha, alpha)?;
        theta.push(t.iter().map(|&v| math::acos(v)).collect());
        theta_sin.push(t.iter().map(|&v| math::sqrt(1.0 - v * v)).collect());
        theta_cos.push(t);
        theta_w.push(w);
    }
    let phi: Vec<f64> = (0..n_phi).map(|i| 2.0 * PI * i as f64 / n_phi as f64).collect();
    let phi_w = 2.0 * PI / n_phi as f64;
    Ok(QuadratureGrid {
        dim: d,
        exactness,
        theta,
        theta_cos,
        theta_sin,
        theta_w,
        phi,
        phi_w,
        measure_norm: 1.0 / crate::sphere::surface_constant(d),
        total_nodes: total,
    })
}

impl QuadratureGrid {
    pub fn dim(&self) -> SphereDim {
        self.dim
    }

    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn node_count(&self) -> usize {
        self.total_nodes
    }

    /// Sum of all quadrature weights; equals 1 up to roundoff.
    pub fn total_weight(&self) -> f64 {
        let mut prod = self.phi_w * self.phi.len() as f64 * self.measure_norm;
        for w in &self.theta_w {
            let mut s = KahanSum::new();
            for &v in w {
                s.add(v);
            }
            prod *= s.value();
        }
        prod
    }

    /// Visits every tensor node with its weight under the normalized measure.
    pub fn for_each_node(&self, mut visit: impl FnMut(&SpherePoint, f64)) {
        let axes = self.dim.theta_axes();
        let mut idx = vec![0usize; axes];
        let mut point = SpherePoint::from_angles(
            self.dim,
            &self.theta.iter().map(|t| t[0]).collect::<Vec<_>>(),
            0.0,
        )
        .expect("grid nodes are valid angles");
        loop {
            for ax in 0..axes {
                let i = idx[ax];
                point.set_theta(ax + 1, self.theta[ax][i], self.theta_cos[ax][i], self.theta_sin[ax][i]);
            }
            let mut w_theta = self.measure_norm * self.phi_w;
            for ax in 0..axes {
                w_theta *= self.theta_w[ax][idx[ax]];
            }
            for &phi in &self.phi {
                point.set_phi(phi);
                point.refresh_cartesian();
                visit(&point, w_theta);
            }
            // odometer
            let mut ax = 0;
            loop {
                if ax == axes {
                    return;
                }
                idx[ax] += 1;
                if idx[ax] < self.theta[ax].len() {
                    break;
                }
                idx[ax] = 0;
                ax += 1;
            }
        }
    }

    /// Approximates `∫_{S^n} f dσ` over the normalized measure.
    pub fn integrate(&self, f: impl FnMut(&SpherePoint) -> Complex64) -> Result<Complex64> {
        let mut f = f;
        let mut acc = KahanComplex::new();
        let mut bad = false;
        self.for_each_node(|p, w| {
            let v = f(p);
            if !(v.re.is_finite() && v.im.is_finite()) {
                bad = true;
            }
            acc.add(w * v);
        });
        if bad {
            return Err(Error::NonFinite("integrand produced a non-finite value"));
        }
        Ok(acc.value())
    }
}

/// Direct-quadrature center of gravity `∫ x |f|² dσ / ∫ |f|² dσ`.
pub fn gravity_center_direct(
    grid: &QuadratureGrid,
    f: impl FnMut(&SpherePoint) -> Complex64,
) -> Result<Vec<f64>> {
    let mut f = f;
    let ambient = grid.dim().ambient();
    let mut moments = vec![KahanSum::new(); ambient];
    let mut norm = KahanSum::new();
    let mut bad = false;
    grid.for_each_node(|p, w| {
        let v = f(p);
        if !(v.re.is_finite() && v.im.is_finite()) {
            bad = true;
        }
        let density = w * v.norm_sqr();
        norm.add(density);
        for (j, m) in moments.iter_mut().enumerate() {
            m.add(density * p.cartesian()[j]);
        }
    });
    if bad {
        return Err(Error::NonFinite("integrand produced a non-finite value"));
    }
    let n = norm.value();
    if !(n.is_finite() && n > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    Ok(moments.iter().map(|m| m.value() / n).collect())
}

/// Direct-quadrature momentum variance `-∫ (Δ*f) conj(f) dσ / ∫ |f|² dσ`,
/// with the Laplace–Beltrami image supplied analytically by the caller.
pub fn momentum_direct(
    grid: &QuadratureGrid,
    f: impl FnMut(&SpherePoint) -> Complex64,
    lap_f: impl FnMut(&SpherePoint) -> Complex64,
) -> Result<f64> {
    let mut f = f;
    let mut lap_f = lap_f;
    let mut num = KahanComplex::new();
    let mut norm = KahanSum::new();
    let mut bad = false;
    grid.for_each_node(|p, w| {
        let v = f(p);
        let lv = lap_f(p);
        if !(v.re.is_finite() && v.im.is_finite() && lv.re.is_finite() && lv.im.is_finite()) {
            bad = true;
        }
        norm.add(w * v.norm_sqr());
        num.add(-w * lv * v.conj());
    });
    if bad {
        return Err(Error::NonFinite("integrand produced a non-finite value"));
    }
    let n = norm.value();
    if !(n.is_finite() && n > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    Ok(num.value().re / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{enumerate_indices, eval_harmonic, laplace_eigenvalue, MultiIndex};

    #[test]
    fn legendre_rule_matches_reference_nodes() {
        let (x, w) = gauss_jacobi(5, 0.0, 0.0).unwrap();
        let x_ref = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let w_ref = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert!((x[i] - x_ref[i]).abs() < 1e-14);
            assert!((w[i] - w_ref[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_jacobi_rule_matches_reference_nodes() {
        let (x, w) = gauss_jacobi(2, 1.0, 0.0).unwrap();
        assert!((x[0] - -0.689_897_948_556_635_7).abs() < 1e-14);
        assert!((x[1] - 0.289_897_948_556_635_64).abs() < 1e-14);
        assert!((w[0] - 1.272_165_526_975_908_7).abs() < 1e-14);
        assert!((w[1] - 0.727_834_473_024_091_3).abs() < 1e-14);
    }

    #[test]
    fn jacobi_rule_integrates_weight_moments() {
        // ∫ (1-t²)^{3/2} t² dt = π/16
        let (x, w) = gauss_jacobi(10, 1.5, 1.5).unwrap();
        let v: f64 = x.iter().zip(&w).map(|(t, w)| w * t * t).sum();
        assert!((v - PI / 16.0).abs() < 1e-14);
    }

    #[test]
    fn rule_rejects_bad_parameters() {
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi(4, -1.0, 0.0).is_err());
    }

    #[test]
    fn grid_total_weight_is_one() {
        for n in 2..=5usize {
            let d = SphereDim::new(n).unwrap();
            let g = build_grid(d, 20).unwrap();
            assert!((g.total_weight() - 1.0).abs() < 1e-13, "n={n}");
            let one = g.integrate(|_| Complex64::new(1.0, 0.0)).unwrap();
            assert!((one.re - 1.0).abs() < 1e-13 && one.im.abs() < 1e-15);
        }
    }

    #[test]
    fn grid_first_and_second_moments() {
        for n in 2..=4usize {
            let d = SphereDim::new(n).unwrap();
            let g = build_grid(d, 12).unwrap();
            for j in 0..d.ambient() {
                let m1 = g
                    .integrate(|p| Complex64::new(p.cartesian()[j], 0.0))
                    .unwrap();
                assert!(m1.norm() < 1e-13, "n={n} j={j}");
                let m2 = g
                    .integrate(|p| Complex64::new(p.cartesian()[j] * p.cartesian()[j], 0.0))
                    .unwrap();
                let expect = 1.0 / (n as f64 + 1.0);
                assert!((m2.re - expect).abs() < 1e-12, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn grid_node_cap() {
        let d = SphereDim::new(6).unwrap();
        assert!(matches!(
            build_grid_with_cap(d, 30, 1000),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn harmonics_have_unit_norm_on_grid() {
        for n in [2usize, 3] {
            let d = SphereDim::new(n).unwrap();
            let g = build_grid(d, 10).unwrap();
            for idx in enumerate_indices(d, 2).unwrap() {
                let v = g
                    .integrate(|p| {
                        let y = eval_harmonic(d, &idx, p).unwrap();
                        y * y.conj()
                    })
                    .unwrap();
                assert!((v.re - 1.0).abs() < 1e-10, "n={n} idx={idx:?}");
            }
        }
    }

    #[test]
    fn refining_the_grid_does_not_move_bandlimited_integrals() {
        let d = SphereDim::new(3).unwrap();
        let idx = MultiIndex::new(2, vec![1, 1]);
        let coarse = build_grid(d, 6).unwrap();
        let fine = build_grid(d, 13).unwrap();
        let f = |p: &SpherePoint| {
            let y = eval_harmonic(d, &idx, p).unwrap();
            y * y.conj()
        };
        let a = coarse.integrate(f).unwrap();
        let b = fine.integrate(f).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn direct_gravity_center_of_constant_is_zero() {
        let d = SphereDim::new(2).unwrap();
        let g = build_grid(d, 8).unwrap();
        let xi = gravity_center_direct(&g, |_| Complex64::new(1.0, 0.0)).unwrap();
        for v in xi {
            assert!(v.abs() < 1e-13);
        }
        let vm = momentum_direct(
            &g,
            |_| Complex64::new(1.0, 0.0),
            |_| Complex64::new(0.0, 0.0),
        )
        .unwrap();
        assert_eq!(vm, 0.0);
    }

    #[test]
    fn direct_quantities_for_linear_test_function() {
        // F = 1 + √3 x₁ on S²: ξ_O = (1/√3, 0, 0), var_M = 1.
        let d = SphereDim::new(2).unwrap();
        let g = build_grid(d, 8).unwrap();
        let f = |p: &SpherePoint| Complex64::new(1.0 + 3f64.sqrt() * p.cartesian()[0], 0.0);
        let xi = gravity_center_direct(&g, f).unwrap();
        assert!((xi[0] - 1.0 / 3f64.sqrt()).abs() < 1e-13);
        assert!(xi[1].abs() < 1e-13 && xi[2].abs() < 1e-13);
        let lap = |p: &SpherePoint| {
            Complex64::new(laplace_eigenvalue(d, 1) * 3f64.sqrt() * p.cartesian()[0], 0.0)
        };
        let vm = momentum_direct(&g, f, lap).unwrap();
        assert!((vm - 1.0).abs() < 1e-13);
    }

    #[test]
    fn single_harmonic_momentum_is_eigenvalue() {
        let d = SphereDim::new(3).unwrap();
        let g = build_grid(d, 10).unwrap();
        let idx = MultiIndex::new(3, vec![2, -1]);
        let f = |p: &SpherePoint| eval_harmonic(d, &idx, p).unwrap();
        let lam = laplace_eigenvalue(d, 3);
        let lap = |p: &SpherePoint| lam * eval_harmonic(d, &idx, p).unwrap();
        let vm = momentum_direct(&g, f, lap).unwrap();
        assert!((vm - 15.0).abs() < 1e-10);
    }

    #[test]
    fn zero_function_is_rejected() {
        let d = SphereDim::new(2).unwrap();
        let g = build_grid(d, 4).unwrap();
        assert!(matches!(
            gravity_center_direct(&g, |_| Complex64::new(0.0, 0.0)),
            Err(Error::ZeroNorm)
        ));
    }
}
