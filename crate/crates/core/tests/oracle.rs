//! Cross-checks of every closed form against brute-force quadrature: the
//! one-dimensional θ integrals, basis orthonormality, the structure of the
//! coupling integral, and the series quantities against their direct
//! integral definitions.

use hsuncert_core::quadrature::{
    build_grid, gauss_jacobi, gravity_center_direct, momentum_direct, QuadratureGrid,
};
use hsuncert_core::special::{
    gegenbauer_eval, gegenbauer_l2_pairing, theta_integral_1, theta_integral_c, theta_integral_s,
    GegenbauerParams, ThetaIntegralArgs,
};
use hsuncert_core::sphere::{
    enumerate_indices, eval_harmonic, laplace_eigenvalue, MultiIndex, SphereDim, SpherePoint,
};
use hsuncert_core::uncertainty::{
    conjugation_depth, coupling_integral, gravity_center, momentum_variance, uncertainty_report,
    ConjugatePair, FourierExpansion,
};
use hsuncert_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn geg(order: f64, degree: i64, t: f64) -> f64 {
    gegenbauer_eval(GegenbauerParams::new(order, degree).unwrap(), t).unwrap()
}

/// Direct Gauss–Jacobi quadrature of the defining θ integrand. The weight
/// exponent is matched to the rule so the remaining factor is polynomial.
fn theta_defining_quadrature(
    n: usize,
    a: &ThetaIntegralArgs,
    cos_factor: bool,
    extra_sin: bool,
) -> f64 {
    let q = (n - a.axis) as f64;
    let sin_power = (a.k_inner + a.m_inner) as f64 + q + if extra_sin { 1.0 } else { 0.0 };
    let alpha = (sin_power - 1.0) / 2.0;
    let (nodes, weights) = gauss_jacobi(40, alpha, alpha).unwrap();
    let ord_k = q / 2.0 + a.k_inner as f64;
    let ord_m = q / 2.0 + a.m_inner as f64;
    let deg_k = a.k_outer - a.k_inner;
    let deg_m = a.m_outer - a.m_inner;
    nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| {
            let mut f = geg(ord_k, deg_k, t) * geg(ord_m, deg_m, t);
            if cos_factor {
                f *= t;
            }
            w * f
        })
        .sum()
}

fn assert_close(label: &str, closed: f64, quad: f64, tol: f64) {
    let scale = closed.abs().max(quad.abs()).max(1.0);
    assert!(
        (closed - quad).abs() <= tol * scale,
        "{label}: closed {closed} vs quadrature {quad}"
    );
}

#[test]
fn gegenbauer_pairing_matches_quadrature() {
    for &lambda in &[0.5, 1.0, 1.5, 2.0, 3.0] {
        for l in 0..=6i64 {
            let closed = gegenbauer_l2_pairing(lambda, l, l).unwrap();
            let (nodes, weights) = gauss_jacobi(40, lambda - 0.5, lambda - 0.5).unwrap();
            let quad: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&t, &w)| w * geg(lambda, l, t) * geg(lambda, l, t))
                .sum();
            assert!(
                (closed - quad).abs() <= 1e-12 * closed.abs(),
                "λ={lambda} l={l}: {closed} vs {quad}"
            );
        }
    }
}

/// Every θ closed form equals quadrature of its defining integrand over the
/// argument families covered by the underlying Gegenbauer pairing lemmas.
#[test]
fn theta_closed_forms_match_quadrature() {
    for n in 2..=6usize {
        let d = n;
        for axis in 1..n {
            for b in 0..=4i64 {
                for a in b..=6 {
                    // plain: diagonal plus same-inner orthogonality zeros
                    for c in b..=6 {
                        let args = ThetaIntegralArgs::new(axis, a, b, c, b).unwrap();
                        let closed = theta_integral_1(d, &args).unwrap();
                        let quad = theta_defining_quadrature(n, &args, false, false);
                        assert_close(&format!("C1 n={n} ι={axis} ({a},{b},{c},{b})"), closed, quad, 1e-12);
                    }
                    // cos-weighted: ±1 outer offsets plus lemma zeros
                    for c in b..=6 {
                        let args = ThetaIntegralArgs::new(axis, a, b, c, b).unwrap();
                        let closed = theta_integral_c(d, &args).unwrap();
                        let quad = theta_defining_quadrature(n, &args, true, false);
                        assert_close(&format!("Cc n={n} ι={axis} ({a},{b},{c},{b})"), closed, quad, 1e-12);
                    }
                    // sin-weighted with inner offset +1: a-c ∈ {±1} or lemma zero
                    for c in (b + 1)..=6 {
                        let args = ThetaIntegralArgs::new(axis, a, b, c, b + 1).unwrap();
                        let closed = theta_integral_s(d, &args).unwrap();
                        let quad = theta_defining_quadrature(n, &args, false, true);
                        assert_close(
                            &format!("Cs n={n} ι={axis} ({a},{b},{c},{})", b + 1),
                            closed,
                            quad,
                            1e-12,
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn gram_matrix_is_identity() {
    for n in [2usize, 3, 4] {
        let dim = SphereDim::new(n).unwrap();
        let max_l = 4i64;
        let grid = build_grid(dim, 2 * max_l as usize + 2).unwrap();
        let mut basis: Vec<MultiIndex> = Vec::new();
        for l in 0..=max_l {
            basis.extend(enumerate_indices(dim, l).unwrap());
        }
        // tabulate all basis values per node, then accumulate the Gram matrix
        let m = basis.len();
        let mut gram = vec![Complex64::new(0.0, 0.0); m * m];
        let mut values = vec![Complex64::new(0.0, 0.0); m];
        grid.for_each_node(|p, w| {
            for (i, idx) in basis.iter().enumerate() {
                values[i] = eval_harmonic(dim, idx, p).unwrap();
            }
            for i in 0..m {
                for j in i..m {
                    gram[i * m + j] += w * values[i].conj() * values[j];
                }
            }
        });
        for i in 0..m {
            for j in i..m {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = gram[i * m + j];
                assert!(
                    (got - Complex64::new(expect, 0.0)).norm() < 1e-9,
                    "n={n} ({:?},{:?}): {got}",
                    basis[i],
                    basis[j]
                );
            }
        }
    }
}

/// Variational eigenvalue check on S²: the quadrature of |∇Y|² with
/// finite-difference tangential gradients equals l(l+2λ)‖Y‖².
#[test]
fn gradient_norm_matches_eigenvalue_on_s2() {
    let dim = SphereDim::new(2).unwrap();
    let h = 1e-5;
    for l in 1..=3i64 {
        for idx in enumerate_indices(dim, l).unwrap() {
            let grid = build_grid(dim, 2 * l as usize + 4).unwrap();
            let grad_sq = grid
                .integrate(|p| {
                    let th = p.thetas()[0];
                    let ph = p.phi();
                    let at = |t: f64, f: f64| {
                        let q = SpherePoint::from_angles(dim, &[t], f).unwrap();
                        eval_harmonic(dim, &idx, &q).unwrap()
                    };
                    let dth = (at(th + h, ph) - at(th - h, ph)) / (2.0 * h);
                    let dph = (at(th, ph + h) - at(th, ph - h)) / (2.0 * h);
                    let s = th.sin();
                    Complex64::new(dth.norm_sqr() + dph.norm_sqr() / (s * s), 0.0)
                })
                .unwrap();
            let expect = (l as f64) * (l as f64 + 2.0 * dim.lambda());
            assert!(
                (grad_sq.re - expect).abs() < 1e-6 * expect.max(1.0),
                "l={l} idx={idx:?}: {} vs {expect}",
                grad_sq.re
            );
        }
    }
}

fn random_index(rng: &mut ChaCha8Rng, d: SphereDim, max_l: i64) -> MultiIndex {
    let l = rng.gen_range(0..=max_l);
    let axes = d.theta_axes();
    let mut k = Vec::with_capacity(axes);
    let mut bound = l;
    for pos in 0..axes {
        if pos + 1 == axes {
            k.push(rng.gen_range(-bound..=bound));
        } else {
            let v = rng.gen_range(0..=bound);
            k.push(v);
            bound = v;
        }
    }
    MultiIndex::new(l, k)
}

fn quadrature_coupling(grid: &QuadratureGrid, d: SphereDim, k: &MultiIndex, m: &MultiIndex) -> Vec<Complex64> {
    let ambient = d.ambient();
    let mut acc = vec![Complex64::new(0.0, 0.0); ambient];
    grid.for_each_node(|p, w| {
        let f = eval_harmonic(d, k, p).unwrap().conj() * eval_harmonic(d, m, p).unwrap();
        for (j, a) in acc.iter_mut().enumerate() {
            *a += w * f * p.cartesian()[j];
        }
    });
    acc
}

/// Index pairs violating the conjugate structure have vanishing coupling
/// integrals in every component; conforming pairs light up exactly the
/// predicted components, with values matching the closed-form product.
#[test]
fn coupling_structure_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for n in [2usize, 3] {
        let d = SphereDim::new(n).unwrap();
        let grid = build_grid(d, 10).unwrap();
        // violating pairs
        let mut checked = 0;
        while checked < 30 {
            let k = random_index(&mut rng, d, 4);
            let m = random_index(&mut rng, d, 4);
            if conjugation_depth(d, &k, &m).is_some() {
                continue;
            }
            let quad = quadrature_coupling(&grid, d, &k, &m);
            for (j, v) in quad.iter().enumerate() {
                assert!(
                    v.norm() < 1e-10,
                    "violating pair n={n} {k:?} {m:?} component {j}: {v}"
                );
            }
            checked += 1;
        }
        // conforming pairs
        let mut checked = 0;
        while checked < 30 {
            let k = random_index(&mut rng, d, 4);
            let nu = rng.gen_range(1..=n);
            let mut entries: Vec<i64> = (0..n).map(|p| k.entry(p)).collect();
            for e in entries.iter_mut().take(nu) {
                *e += if rng.gen_bool(0.5) { 1 } else { -1 };
            }
            let m = MultiIndex::new(entries[0], entries[1..].to_vec());
            if m.validate(d).is_err() || conjugation_depth(d, &k, &m) != Some(nu) {
                continue;
            }
            let pair = ConjugatePair { k: k.clone(), m: m.clone(), nu };
            let closed = coupling_integral(d, &pair).unwrap();
            let quad = quadrature_coupling(&grid, d, &k, &m);
            for j in 0..d.ambient() {
                let predicted = if nu < n { j == nu - 1 } else { j >= n - 1 };
                if predicted {
                    assert!(
                        closed[j].norm() > 1e-10,
                        "predicted component is zero: n={n} ν={nu} {k:?} {m:?}"
                    );
                    assert!(
                        (closed[j] - quad[j]).norm() <= 1e-9 * closed[j].norm().max(1.0),
                        "n={n} ν={nu} comp {j}: closed {} vs quad {}",
                        closed[j],
                        quad[j]
                    );
                } else {
                    assert!(closed[j].norm() == 0.0);
                    assert!(quad[j].norm() < 1e-10, "n={n} ν={nu} comp {j}: {}", quad[j]);
                }
            }
            checked += 1;
        }
    }
}

fn random_bandlimited(rng: &mut ChaCha8Rng, d: SphereDim, max_l: i64) -> FourierExpansion {
    let mut f = FourierExpansion::new(d);
    for l in 0..=max_l {
        for idx in enumerate_indices(d, l).unwrap() {
            // complex standard normal via Box-Muller
            let u: f64 = rng.gen_range(1e-12..1.0);
            let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u.ln()).sqrt();
            f.set(idx, Complex64::new(r * v.cos(), r * v.sin())).unwrap();
        }
    }
    f
}

fn eval_expansion(f: &FourierExpansion, p: &SpherePoint) -> Complex64 {
    let d = f.dim();
    f.iter()
        .map(|(idx, c)| c * eval_harmonic(d, idx, p).unwrap())
        .sum()
}

fn eval_laplacian(f: &FourierExpansion, p: &SpherePoint) -> Complex64 {
    let d = f.dim();
    f.iter()
        .map(|(idx, c)| laplace_eigenvalue(d, idx.degree()) * c * eval_harmonic(d, idx, p).unwrap())
        .sum()
}

/// Series gravity center and momentum variance agree with direct quadrature
/// on random bandlimited functions.
#[test]
fn series_match_direct_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for n in [2usize, 3] {
        let d = SphereDim::new(n).unwrap();
        for _ in 0..10 {
            let max_l = rng.gen_range(1..=5);
            let f = random_bandlimited(&mut rng, d, max_l);
            let grid = build_grid(d, 2 * max_l as usize + 2).unwrap();
            let xi_series = gravity_center(&f).unwrap();
            let xi_direct = gravity_center_direct(&grid, |p| eval_expansion(&f, p)).unwrap();
            for (a, b) in xi_series.iter().zip(&xi_direct) {
                assert!((a - b).abs() < 1e-9, "n={n}: {a} vs {b}");
            }
            let vm_series = momentum_variance(&f).unwrap();
            let vm_direct = momentum_direct(
                &grid,
                |p| eval_expansion(&f, p),
                |p| eval_laplacian(&f, p),
            )
            .unwrap();
            assert!(
                (vm_series - vm_direct).abs() < 1e-9 * vm_series.max(1.0),
                "n={n}: {vm_series} vs {vm_direct}"
            );
        }
    }
}

/// The uncertainty bound U ≥ n/2 holds on random test functions, and the
/// gravity center of any multi-degree function stays strictly inside the ball.
#[test]
fn uncertainty_bound_on_random_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for n in [2usize, 3, 4] {
        let d = SphereDim::new(n).unwrap();
        let mut count = 0;
        while count < 15 {
            let f = random_bandlimited(&mut rng, d, rng.gen_range(1..=3));
            let report = match uncertainty_report(&f) {
                Ok(r) => r,
                Err(_) => continue,
            };
            assert!(report.norm_xi < 1.0, "n={n}: ‖ξ‖ = {}", report.norm_xi);
            assert!(
                report.u >= n as f64 / 2.0 - 1e-12,
                "n={n}: U = {} < {}",
                report.u,
                n as f64 / 2.0
            );
            assert!(report.bound_ok);
            count += 1;
        }
    }
}
