//! Randomized verification of the gauge algebra: norm preservation at first
//! order over a thousand contexts, the quadratic scaling of the full norm
//! excess, agreement of the two commutator routes, the first-order
//! covariance of the field strength, and the lattice current's convergence
//! to its analytic values.

use confdyn_core::fields::{
    normalize_u, Antisym4, GaugeGenerator, OmegaProfile, VectorFieldU,
};
use confdyn_core::gauge::{matter_current, GaugeContext, WaveSample};
use confdyn_core::numerics;
use confdyn_core::tensor::{minkowski_mat, Metric4, MetricField, SpacetimePoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

fn random_antisym(rng: &mut ChaCha8Rng, scale: f64) -> Antisym4 {
    Antisym4::from_upper(core::array::from_fn(|_| rng.random_range(-scale..scale)))
}

fn random_metric_field(rng: &mut ChaCha8Rng) -> MetricField {
    let mut g = minkowski_mat();
    for i in 0..4 {
        g[i][i] += rng.random_range(-0.1..0.1);
        for j in i + 1..4 {
            let bump = rng.random_range(-0.1..0.1);
            g[i][j] = bump;
            g[j][i] = bump;
        }
    }
    Metric4::new(g).expect("perturbed metric stays Lorentzian");
    MetricField::custom(move |_| g)
}

fn random_timelike_seed(rng: &mut ChaCha8Rng) -> [f64; 4] {
    [
        -1.0 - rng.random_range(0.0..0.5),
        rng.random_range(-0.3..0.3),
        rng.random_range(-0.3..0.3),
        rng.random_range(-0.3..0.3),
    ]
}

fn random_generator(rng: &mut ChaCha8Rng) -> GaugeGenerator {
    GaugeGenerator::new(
        OmegaProfile::Poly {
            c0: random_antisym(rng, 0.5),
            c1: random_antisym(rng, 0.5),
            c2: random_antisym(rng, 0.5),
        },
        core::array::from_fn(|_| rng.random_range(-1.0..1.0)),
        rng.random_range(0.2..0.8),
    )
}

fn random_point(rng: &mut ChaCha8Rng) -> SpacetimePoint {
    SpacetimePoint::new(core::array::from_fn(|_| rng.random_range(-2.0..2.0)))
}

#[test]
fn norm_preserved_at_first_order_over_random_contexts() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let mut checked = 0usize;
    while checked < 1000 {
        let metric = random_metric_field(&mut rng);
        let u = VectorFieldU::ConstantNormalized {
            v: random_timelike_seed(&mut rng),
        };
        let gen = random_generator(&mut rng);
        let ctx = GaugeContext::new(&metric, &u, gen);
        let x = random_point(&mut rng);
        let pt = match ctx.at(&x) {
            Ok(pt) => pt,
            Err(_) => continue, // b drew parallel to U
        };
        let scale = pt
            .omega
            .frobenius()
            .max(pt.omega1.frobenius())
            .max(f64::MIN_POSITIVE);
        let residual = ctx.norm_preservation_residual(&x).unwrap();
        assert!(
            residual <= 1e-12 * scale,
            "first-order norm residual {residual} at generator scale {scale}"
        );
        checked += 1;
    }
}

#[test]
fn full_norm_excess_scales_quadratically() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let lambdas = [1e-2, 1e-3, 1e-4];
    let mut measured = 0usize;
    while measured < 20 {
        let metric = random_metric_field(&mut rng);
        let u = VectorFieldU::ConstantNormalized {
            v: random_timelike_seed(&mut rng),
        };
        let gen = random_generator(&mut rng);
        let ctx = GaugeContext::new(&metric, &u, gen);
        let x = random_point(&mut rng);
        if ctx.at(&x).is_err() {
            continue;
        }
        let excesses: Vec<f64> = lambdas
            .iter()
            .map(|&l| ctx.scaled(l).norm_excess_after_transform(&x).unwrap().abs())
            .collect();
        if excesses.iter().any(|&e| e < 1e-13) {
            continue; // transformation too weak to measure against roundoff
        }
        let exponent =
            (excesses[0] / excesses[2]).ln() / (lambdas[0] / lambdas[2]).ln();
        assert!(
            (exponent - 2.0).abs() <= 0.1,
            "norm-excess scaling exponent {exponent}"
        );
        measured += 1;
    }
}

#[test]
fn commutator_routes_agree_over_random_contexts() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCAFE);
    let mut checked = 0usize;
    while checked < 200 {
        let metric = random_metric_field(&mut rng);
        let u = VectorFieldU::ConstantNormalized {
            v: random_timelike_seed(&mut rng),
        };
        let gen = random_generator(&mut rng);
        let ctx = GaugeContext::new(&metric, &u, gen);
        let x = random_point(&mut rng);
        if ctx.at(&x).is_err() {
            continue;
        }
        let direct = ctx.commutator_coefficient(&x).unwrap();
        let assembled = ctx.commutator_assembled(&x).unwrap();
        let mut worst = 0.0_f64;
        for mu in 0..4 {
            for nu in 0..4 {
                worst = worst.max((direct.get(mu, nu) - assembled.get(mu, nu)).abs());
            }
        }
        assert!(worst <= 1e-13, "commutator route mismatch {worst}");
        checked += 1;
    }
}

#[test]
fn projection_vector_is_orthogonal_to_u() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDADA);
    let mut checked = 0usize;
    while checked < 1000 {
        let metric = random_metric_field(&mut rng);
        let u_field = VectorFieldU::ConstantNormalized {
            v: random_timelike_seed(&mut rng),
        };
        let gen = random_generator(&mut rng);
        let ctx = GaugeContext::new(&metric, &u_field, gen);
        let x = random_point(&mut rng);
        let pt = match ctx.at(&x) {
            Ok(pt) => pt,
            Err(_) => continue,
        };
        let ku = pt.k_co[0] * pt.u_contra[0]
            + pt.k_co[1] * pt.u_contra[1]
            + pt.k_co[2] * pt.u_contra[2]
            + pt.k_co[3] * pt.u_contra[3];
        assert!(ku.abs() <= 1e-13, "k.U = {ku}");
        checked += 1;
    }
}

/// First-order covariance of the field strength under the gauge motion.
///
/// The base field is a boost profile and the projection seed is chosen
/// orthogonal to the boost plane, which makes k exactly constant; the scaled
/// transformation then shifts the field strength by a first-order piece that
/// must match the commutator-with-the-generator form
/// 2 eps (dU^al/dx^nu omega_{al mu} - dU^al/dx^mu omega_{al nu}).
#[test]
fn field_strength_change_matches_first_order_form() {
    let metric = MetricField::Minkowski;
    let a = [0.0, 0.3, 0.12, 0.0];
    let u = VectorFieldU::Rapidity { a, axis: 1 };
    let eps = 0.5;
    let b = [0.0, 0.0, 0.0, 1.0]; // orthogonal to the boost plane: k = b exactly
    let gen = GaugeGenerator::new(
        OmegaProfile::Poly {
            c0: Antisym4::from_upper([0.3, -0.1, 0.2, 0.15, -0.25, 0.05]),
            c1: Antisym4::from_upper([-0.2, 0.15, 0.1, 0.0, 0.3, -0.05]),
            c2: Antisym4::zero(),
        },
        b,
        eps,
    );
    let ctx = GaugeContext::new(&metric, &u, gen);
    let x = SpacetimePoint::new([0.4, 0.2, -0.3, 0.5]);

    // base field strength: the curl of the untransformed field
    let base_ctx = GaugeContext::new(
        &metric,
        &u,
        GaugeGenerator::new(OmegaProfile::constant(Antisym4::zero()), b, eps),
    );
    let f_base = base_ctx.field_strength(&x).unwrap();

    // assembled first-order change
    let pt = ctx.at(&x).unwrap();
    let du = u.deriv(&metric, &x).unwrap();
    let g = metric.eval(&x).unwrap();
    let ginv = g.upper_mat();
    let mut du_up = [[0.0; 4]; 4]; // dU^al/dx^nu
    for al in 0..4 {
        for nu in 0..4 {
            let mut acc = 0.0;
            for be in 0..4 {
                acc += ginv[al][be] * du[be][nu];
            }
            du_up[al][nu] = acc;
        }
    }
    let om = pt.omega.mat();
    let mut assembled = [[0.0_f64; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = 0.0;
            for al in 0..4 {
                acc += du_up[al][nu] * om[al][mu] - du_up[al][mu] * om[al][nu];
            }
            assembled[mu][nu] = 2.0 * eps * acc;
        }
    }

    let fd = 5e-5;
    let mut norms = Vec::new();
    for lambda in [1e-1, 1e-2] {
        let scaled = ctx.scaled(lambda);
        // curl of the transformed field by central differences
        let uprime = |p: &SpacetimePoint| scaled.transform_u(p).unwrap().0;
        let mut change = [[0.0_f64; 4]; 4];
        let mut norm = 0.0_f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let dmu = |p: &SpacetimePoint| uprime(p)[mu];
                let dnu = |p: &SpacetimePoint| uprime(p)[nu];
                let curl = (dmu(&x.shifted(nu, fd)) - dmu(&x.shifted(nu, -fd))) / (2.0 * fd)
                    - (dnu(&x.shifted(mu, fd)) - dnu(&x.shifted(mu, -fd))) / (2.0 * fd);
                let comm = -2.0 * eps * scaled.commutator_coefficient(&x).unwrap().get(mu, nu);
                change[mu][nu] = curl + comm - f_base.f.get(mu, nu);
                norm = norm.max(change[mu][nu].abs());
            }
        }
        norms.push(norm);
        // the per-lambda change matches lambda times the assembled form
        for mu in 0..4 {
            for nu in 0..4 {
                let err = (change[mu][nu] - lambda * assembled[mu][nu]).abs();
                assert!(
                    err <= 1e-6 * lambda + 1e-10,
                    "first-order mismatch {err} at lambda {lambda}"
                );
            }
        }
    }
    // the change itself is first order in the generator
    let exponent = (norms[0] / norms[1]).ln() / (10.0_f64).ln();
    assert!(
        (exponent - 1.0).abs() <= 0.05,
        "field-strength change scaling exponent {exponent}"
    );
}

#[test]
fn plane_wave_current_converges_at_second_order() {
    let metric = MetricField::Minkowski;
    let u = VectorFieldU::ConstantNormalized {
        v: [-1.0, 0.0, 0.0, 0.0],
    };
    let eps = 0.4;
    let m_mass = 1.3;
    let gen = GaugJ();
    fn GaugJ() -> GaugeGenerator {
        GaugeGenerator::new(
            OmegaProfile::constant(Antisym4::zero()),
            [0.0, 1.0, 0.0, 0.0],
            0.4,
        )
    }
    let ctx = GaugeContext::new(&metric, &u, gen);
    let q = [0.7, -0.5, 0.4, 0.3];

    let error_at = |n: usize, h: f64| -> [f64; 4] {
        let mut w = WaveSample::uniform(n, h, m_mass);
        w.fill_plane_wave(q);
        let site = [n / 2; 4];
        let j = matter_current(&ctx, &w, site).unwrap();
        let uval = ctx.u.eval(ctx.metric, &w.point(site)).unwrap();
        let mut err = [0.0; 4];
        for mu in 0..4 {
            let exact = eps / m_mass * (q[mu] - eps * uval[mu]);
            err[mu] = (j[mu] - exact).abs();
        }
        err
    };

    let e1 = error_at(16, 0.05);
    let e2 = error_at(16, 0.025);
    for mu in 0..4 {
        assert!(e1[mu] <= 1e-3, "coarse-grid current error {}", e1[mu]);
        let order = (e1[mu] / e2[mu]).log2();
        assert!(order >= 1.9, "current convergence order {order} on axis {mu}");
    }
}

#[test]
fn real_wave_current_converges_to_the_vector_term() {
    let metric = MetricField::Minkowski;
    let u = VectorFieldU::ConstantNormalized {
        v: [-1.0, 0.1, 0.0, 0.0],
    };
    let eps = 0.4;
    let m_mass = 2.0;
    let gen = GaugeGenerator::new(
        OmegaProfile::constant(Antisym4::zero()),
        [0.0, 1.0, 0.0, 0.0],
        eps,
    );
    let ctx = GaugeContext::new(&metric, &u, gen);

    // real envelope: the current reduces to -(eps^2/M) U |psi|^2 nearly
    // exactly (phase-free), so the grid error is pure roundoff
    let error_at = |h: f64| -> f64 {
        let mut w = WaveSample::uniform(12, h, m_mass);
        w.fill_gaussian([0.0; 4], 0.4, [0.0; 4]);
        let site = [6, 5, 6, 7];
        let j = matter_current(&ctx, &w, site).unwrap();
        let uval = ctx.u.eval(ctx.metric, &w.point(site)).unwrap();
        let psi2 = w.psi_at(site).norm_sqr();
        let mut worst = 0.0_f64;
        for mu in 0..4 {
            let exact = -eps * eps / m_mass * uval[mu] * psi2;
            worst = worst.max((j[mu] - exact).abs());
        }
        worst
    };
    assert!(error_at(0.05) <= 1e-12);
    assert!(error_at(0.025) <= 1e-12);
}

#[test]
fn transformed_velocity_series_agrees_with_series_stencils() {
    // consistency of the shared numerics used by the suites
    let series: Vec<f64> = (0..64).map(|j| (0.1 * j as f64).sin()).collect();
    let d = numerics::series_deriv4(&series, 0.1).unwrap();
    for (offset, val) in d.iter().enumerate() {
        let t = 0.1 * (offset + 2) as f64;
        assert!((val - t.cos()).abs() < 2e-6);
    }
    let u = normalize_u(&Metric4::minkowski(), &[-2.0, 0.5, 0.0, 0.0]).unwrap();
    let g = Metric4::minkowski();
    assert!((g.dot_co(&u, &u) + 1.0).abs() < 1e-15);
}
