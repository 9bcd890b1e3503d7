//! Coincidence identity of the 5D lift: the bilinear contraction with the
//! solved fifth momentum must reproduce the direct Hamiltonian to full
//! relative precision on both branches, the solved root must satisfy its
//! quadratic, and the minus branch must approach its degenerate-g55 value
//! linearly.

use confdyn_core::fields::normalize_u;
use confdyn_core::kk::{
    bs_metric, kk_contract, kk_hamiltonian_direct, p5_quadratic_residual, solve_p5, Branch,
    FiveMetric, FiveMomentum,
};
use confdyn_core::tensor::{minkowski_mat, Metric4};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

const N_DRAWS: usize = 10_000;
const REL_TOL: f64 = 1e-12;

/// Symmetric bounded perturbation of Minkowski; the bump size keeps every
/// Gershgorin disc on its own side of zero, so the signature never flips.
fn random_metric(rng: &mut ChaCha8Rng) -> Metric4 {
    let mut g = minkowski_mat();
    for i in 0..4 {
        g[i][i] += rng.random_range(-0.1..0.1);
        for j in i + 1..4 {
            let bump = rng.random_range(-0.1..0.1);
            g[i][j] = bump;
            g[j][i] = bump;
        }
    }
    Metric4::new(g).expect("perturbed metric stays Lorentzian")
}

fn random_unit_timelike(rng: &mut ChaCha8Rng, g: &Metric4) -> [f64; 4] {
    let v = [
        -1.0 - rng.random_range(0.0..0.5),
        rng.random_range(-0.3..0.3),
        rng.random_range(-0.3..0.3),
        rng.random_range(-0.3..0.3),
    ];
    normalize_u(g, &v).expect("seed vector is timelike")
}

struct Draw {
    g: Metric4,
    u_contra: [f64; 4],
    p: [f64; 4],
    phi: f64,
    g55: f64,
    m: f64,
}

fn random_draw(rng: &mut ChaCha8Rng) -> Draw {
    let g = random_metric(rng);
    let u_co = random_unit_timelike(rng, &g);
    Draw {
        u_contra: g.raise(&u_co),
        g,
        p: core::array::from_fn(|_| rng.random_range(-1.0..1.0)),
        phi: rng.random_range(-0.5..0.5),
        g55: rng.random_range(-0.4..0.4),
        m: rng.random_range(0.5..2.0),
    }
}

#[test]
fn contraction_coincides_with_direct_over_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut discriminant_violations = 0usize;
    let mut cancellation_skips = 0usize;
    let mut checked = 0usize;
    let mut worst_rel = 0.0_f64;
    let mut worst_quad = 0.0_f64;

    while checked < N_DRAWS {
        let d = random_draw(&mut rng);
        let disc = 1.0 - 2.0 * d.g55 * (2.0 * d.phi).sinh();
        if disc < 0.0 {
            discriminant_violations += 1;
            continue;
        }
        let direct = kk_hamiltonian_direct(&d.g, &d.u_contra, d.phi, &d.p, d.m).unwrap();
        let fm = FiveMetric::from_base(&d.g, &d.u_contra, d.phi, d.g55).unwrap();
        // reject draws where the identity is checked against a value that is
        // itself a near-total cancellation; the comparison scale collapses
        let term_scale = fm.hat_g.dot_co(&d.p, &d.p).abs() / (2.0 * d.m) + direct.abs();
        if direct.abs() < 1e-2 * term_scale {
            cancellation_skips += 1;
            continue;
        }
        for branch in [Branch::Minus, Branch::Plus] {
            // The plus branch scales as 1/g55: near zero its contraction
            // cancels catastrophically between huge terms, so the identity
            // can only be checked at full precision away from the pole (the
            // minus branch, which alone has a finite limit there, is swept
            // over the whole range).
            if branch == Branch::Plus && d.g55.abs() < 0.1 {
                continue;
            }
            let p5 = match solve_p5(&d.u_contra, &d.p, d.phi, d.g55, branch) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let lifted = kk_contract(&fm, &FiveMomentum { p: d.p, p5 }, d.m);
            worst_rel = worst_rel.max((lifted - direct).abs() / direct.abs());
            let up = d.p[0] * d.u_contra[0]
                + d.p[1] * d.u_contra[1]
                + d.p[2] * d.u_contra[2]
                + d.p[3] * d.u_contra[3];
            let quad_scale = (2.0 * up * p5).abs().max(1.0);
            worst_quad = worst_quad.max(
                p5_quadratic_residual(&d.u_contra, &d.p, d.phi, d.g55, p5).abs() / quad_scale,
            );
        }
        checked += 1;
    }

    assert!(checked == N_DRAWS);
    assert!(
        worst_rel <= REL_TOL,
        "worst relative coincidence error {worst_rel} over {checked} draws \
         ({discriminant_violations} discriminant rejections, {cancellation_skips} cancellation skips)"
    );
    assert!(worst_quad <= REL_TOL, "worst quadratic residual {worst_quad}");
}

#[test]
fn minus_branch_error_is_linear_in_g55_for_the_frozen_root() {
    // Freeze the g55 = 0 root and sweep g55 downward: the coincidence error
    // must shrink linearly, with slope p5^2 / 2m.
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for _ in 0..20 {
        let d = random_draw(&mut rng);
        let p5_frozen = solve_p5(&d.u_contra, &d.p, d.phi, 0.0, Branch::Minus).unwrap();
        if p5_frozen.abs() < 1e-3 {
            continue; // no signal to measure
        }
        let direct = kk_hamiltonian_direct(&d.g, &d.u_contra, d.phi, &d.p, d.m).unwrap();
        let mut errs = [0.0_f64; 3];
        for (slot, g55) in errs.iter_mut().zip([1e-3, 1e-4, 1e-5]) {
            let fm = FiveMetric::from_base(&d.g, &d.u_contra, d.phi, g55).unwrap();
            *slot = (kk_contract(&fm, &FiveMomentum { p: d.p, p5: p5_frozen }, d.m) - direct)
                .abs();
        }
        let slope = p5_frozen * p5_frozen / (2.0 * d.m);
        for (err, g55) in errs.iter().zip([1e-3, 1e-4, 1e-5]) {
            let predicted = slope * g55;
            assert!(
                (err - predicted).abs() <= 1e-6 * predicted.max(1e-18) + 1e-15,
                "error {err} at g55 = {g55} is not linear (predicted {predicted})"
            );
        }
        // decade ratios confirm first-order vanishing
        assert!((errs[0] / errs[1] - 10.0).abs() < 0.1);
        assert!((errs[1] / errs[2] - 10.0).abs() < 0.1);
    }
}

#[test]
fn lifted_block_matches_the_conformally_weighted_metric() {
    // the 4-block of the lift with exponent phi equals the dual factor
    // e^{-2 phi} applied to the base metric
    let mut rng = ChaCha8Rng::seed_from_u64(0xFEED);
    for _ in 0..50 {
        let d = random_draw(&mut rng);
        let fm = FiveMetric::from_base(&d.g, &d.u_contra, d.phi, d.g55).unwrap();
        let scale = (-2.0 * d.phi).exp();
        for mu in 0..4 {
            for nu in 0..4 {
                let expect = scale * d.g.upper_mat()[mu][nu];
                let got = fm.hat_g.upper_mat()[mu][nu];
                assert!((got - expect).abs() <= 1e-14 * expect.abs().max(1.0));
            }
        }
        // and the full unit-vector metric contracts U to -e^{2 phi}
        let gt = bs_metric(&d.g, &d.u_contra, d.phi).unwrap();
        let u_co = d.g.lower(&d.u_contra);
        let contraction = gt.dot_co(&u_co, &u_co);
        let expect = -(2.0 * d.phi).exp();
        assert!((contraction - expect).abs() <= 1e-10 * expect.abs());
    }
}
