//! Five-dimensional block-metric lift of the vector-scalar Hamiltonian: the
//! conformally weighted unit-vector metric, its direct Hamiltonian, the
//! fifth momentum component solving the coincidence condition, and the 5D
//! bilinear contraction that must reproduce the direct value.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tensor::{dot4, Mat4, Metric4, DIM};

/// Tolerance on |U.U + 1| accepted by the lift operations.
pub const U_NORM_GUARD: f64 = 1e-8;

/// Which root of the fifth-momentum quadratic to take. Only `Minus` has a
/// finite g55 -> 0 limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// The 5x5 block metric: the conformally scaled 4-block, the contravariant
/// unit vector filling the off-diagonal row/column, and the scalar g55.
#[derive(Clone, Copy, Debug)]
pub struct FiveMetric {
    pub hat_g: Metric4,
    pub u_contra: [f64; 4],
    pub g55: f64,
}

impl FiveMetric {
    /// Assemble the lift from a base metric, a contravariant unit timelike
    /// vector, the conformal exponent and the constant g55. The 4-block is
    /// e^{-2 phi} g^{mu nu}.
    pub fn from_base(g: &Metric4, u_contra: &[f64; 4], phi_conf: f64, g55: f64) -> Result<Self> {
        check_unit_norm(g, u_contra)?;
        Ok(Self {
            hat_g: g.conformal_rescale((-2.0 * phi_conf).exp()),
            u_contra: *u_contra,
            g55,
        })
    }
}

/// Covariant 4-momentum paired with the fifth component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiveMomentum {
    pub p: [f64; 4],
    pub p5: f64,
}

fn check_unit_norm(g: &Metric4, u_contra: &[f64; 4]) -> Result<()> {
    let excess = g.dot_contra(u_contra, u_contra) + 1.0;
    if excess.abs() > U_NORM_GUARD {
        return Err(Error::NormViolation { excess });
    }
    Ok(())
}

/// The conformally weighted unit-vector metric
///
///   gt^{mu nu} = e^{-2 phi} g^{mu nu} + (e^{-2 phi} - e^{2 phi}) U^mu U^nu,
///
/// grouped so that phi = 0 returns the base metric exactly. Requires
/// U.U = -1 within 1e-8.
pub fn bs_metric(g: &Metric4, u_contra: &[f64; 4], phi_conf: f64) -> Result<Metric4> {
    check_unit_norm(g, u_contra)?;
    let en = (-2.0 * phi_conf).exp();
    let ep = (2.0 * phi_conf).exp();
    let diff = en - ep;
    let base = g.upper_mat();
    let mut upper: Mat4 = [[0.0; 4]; 4];
    for mu in 0..DIM {
        for nu in mu..DIM {
            let v = en * base[mu][nu] + diff * u_contra[mu] * u_contra[nu];
            upper[mu][nu] = v;
            upper[nu][mu] = v;
        }
    }
    Metric4::from_contravariant(upper)
}

/// Direct form of the lifted Hamiltonian:
///
///   (1/2m) [ e^{-2 phi} g^{mu nu} p_mu p_nu - 2 sinh(2 phi) (U.p)^2 ].
pub fn kk_hamiltonian_direct(
    g: &Metric4,
    u_contra: &[f64; 4],
    phi_conf: f64,
    p: &[f64; 4],
    m: f64,
) -> Result<f64> {
    check_unit_norm(g, u_contra)?;
    let quad = g.dot_co(p, p);
    let up = dot4(u_contra, p);
    let val = (-2.0 * phi_conf).exp() * quad - 2.0 * (2.0 * phi_conf).sinh() * up * up;
    Ok(val / (2.0 * m))
}

/// Fifth momentum making the 5D contraction coincide with the direct
/// Hamiltonian: the roots of
///
///   g55 p5^2 + 2 (U.p) p5 + 2 sinh(2 phi) (U.p)^2 = 0.
///
/// The minus branch is evaluated in the cancellation-free form
/// -(U.p) 2 sinh(2 phi) / (1 + sqrt(disc)), well defined down to g55 = 0;
/// the plus branch diverges there and is rejected.
pub fn solve_p5(
    u_contra: &[f64; 4],
    p: &[f64; 4],
    phi_conf: f64,
    g55: f64,
    branch: Branch,
) -> Result<f64> {
    let up = dot4(u_contra, p);
    let s = (2.0 * phi_conf).sinh();
    let disc = 1.0 - 2.0 * g55 * s;
    if disc < 0.0 {
        return Err(Error::ComplexRoot { disc });
    }
    match branch {
        Branch::Minus => Ok(-up * 2.0 * s / (1.0 + disc.sqrt())),
        Branch::Plus => {
            if g55 == 0.0 {
                return Err(Error::DivergentBranch);
            }
            Ok(-up / g55 * (1.0 + disc.sqrt()))
        }
    }
}

/// Residual of the quadratic the fifth momentum must satisfy; zero (to
/// roundoff) for any valid [`solve_p5`] output.
pub fn p5_quadratic_residual(u_contra: &[f64; 4], p: &[f64; 4], phi_conf: f64, g55: f64, p5: f64) -> f64 {
    let up = dot4(u_contra, p);
    let s = (2.0 * phi_conf).sinh();
    g55 * p5 * p5 + 2.0 * up * p5 + 2.0 * s * up * up
}

/// The 5D bilinear contraction
///
///   (1/2m) [ hat g^{mu nu} p_mu p_nu + 2 p5 (U.p) + p5^2 g55 ].
pub fn kk_contract(fm: &FiveMetric, pm: &FiveMomentum, m: f64) -> f64 {
    let quad = fm.hat_g.dot_co(&pm.p, &pm.p);
    let up = dot4(&fm.u_contra, &pm.p);
    (quad + 2.0 * pm.p5 * up + pm.p5 * pm.p5 * fm.g55) / (2.0 * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn minkowski_rest_frame() -> (Metric4, [f64; 4]) {
        (Metric4::minkowski(), [1.0, 0.0, 0.0, 0.0])
    }

    #[test]
    fn bs_metric_reduces_to_base_at_zero_exponent() {
        let (g, u) = minkowski_rest_frame();
        let gt = bs_metric(&g, &u, 0.0).unwrap();
        assert_eq!(gt.upper_mat(), g.upper_mat());
    }

    #[test]
    fn bs_metric_worked_components() {
        // e^{2 phi} = 2: time-time component -2, spatial diagonal 1/2
        let (g, u) = minkowski_rest_frame();
        let phi = 0.5 * (2.0_f64).ln();
        let gt = bs_metric(&g, &u, phi).unwrap();
        assert_abs_diff_eq!(gt.upper_mat()[0][0], -2.0, epsilon = 1e-14);
        for i in 1..4 {
            assert_abs_diff_eq!(gt.upper_mat()[i][i], 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn bs_metric_contraction_with_u_is_minus_exp() {
        let (g, u) = minkowski_rest_frame();
        let phi = 0.3;
        let gt = bs_metric(&g, &u, phi).unwrap();
        let u_co = g.lower(&u);
        let contraction = gt.dot_co(&u_co, &u_co);
        assert_relative_eq!(contraction, -(2.0 * phi).exp(), max_relative = 1e-13);
    }

    #[test]
    fn bs_metric_rejects_denormalized_u() {
        let g = Metric4::minkowski();
        let err = bs_metric(&g, &[1.1, 0.0, 0.0, 0.0], 0.2).unwrap_err();
        assert!(matches!(err, Error::NormViolation { .. }));
    }

    #[test]
    fn direct_hamiltonian_reduces_at_zero_exponent() {
        let (g, u) = minkowski_rest_frame();
        let p = [-0.9, 0.2, -0.3, 0.1];
        let direct = kk_hamiltonian_direct(&g, &u, 0.0, &p, 1.0).unwrap();
        assert_abs_diff_eq!(direct, g.dot_co(&p, &p) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn direct_hamiltonian_worked_value() {
        // e^{2 phi} = 2, U.p = -1, g pp = -1: (1/2)(0.5 (-1) - 2 (3/4) 1) = -1
        let (g, u) = minkowski_rest_frame();
        let phi = 0.5 * (2.0_f64).ln();
        let p = [-1.0, 0.0, 0.0, 0.0];
        let direct = kk_hamiltonian_direct(&g, &u, phi, &p, 1.0).unwrap();
        assert_abs_diff_eq!(direct, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn direct_equals_bs_contraction() {
        let (g, u) = minkowski_rest_frame();
        let phi = -0.27;
        let p = [-1.1, 0.35, 0.2, -0.4];
        let direct = kk_hamiltonian_direct(&g, &u, phi, &p, 1.3).unwrap();
        let gt = bs_metric(&g, &u, phi).unwrap();
        let via_metric = gt.dot_co(&p, &p) / 2.6;
        assert_relative_eq!(direct, via_metric, max_relative = 1e-13);
    }

    #[test]
    fn p5_vanishes_on_minus_branch_at_zero_exponent() {
        let u = [1.0, 0.0, 0.0, 0.0];
        let p = [-0.8, 0.1, 0.0, 0.2];
        for g55 in [-0.3, 0.0, 0.2] {
            assert_eq!(solve_p5(&u, &p, 0.0, g55, Branch::Minus).unwrap(), 0.0);
        }
    }

    #[test]
    fn p5_worked_value_and_quadratic_root() {
        // sinh(2 phi) = 1, U.p = 2, g55 = 0.1: -20 (1 - sqrt(0.8))
        let u = [1.0, 0.0, 0.0, 0.0];
        let p = [2.0, 0.0, 0.0, 0.0];
        let phi = 0.5 * (1.0_f64).asinh();
        let p5 = solve_p5(&u, &p, phi, 0.1, Branch::Minus).unwrap();
        assert_abs_diff_eq!(p5, -20.0 * (1.0 - 0.8_f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(p5, -2.111_456, epsilon = 1e-6);
        assert_abs_diff_eq!(
            p5_quadratic_residual(&u, &p, phi, 0.1, p5),
            0.0,
            epsilon = 1e-12
        );
        // plus branch must satisfy the same quadratic
        let p5p = solve_p5(&u, &p, phi, 0.1, Branch::Plus).unwrap();
        assert_abs_diff_eq!(
            p5_quadratic_residual(&u, &p, phi, 0.1, p5p),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn p5_minus_branch_limit_at_degenerate_g55() {
        // sinh(2 phi) = 1, U.p = 2: the g55 = 0 value is -(U.p) sinh(2 phi)
        let u = [1.0, 0.0, 0.0, 0.0];
        let p = [2.0, 0.0, 0.0, 0.0];
        let phi = 0.5 * (1.0_f64).asinh();
        let p5 = solve_p5(&u, &p, phi, 0.0, Branch::Minus).unwrap();
        assert_abs_diff_eq!(p5, -2.0, epsilon = 1e-14);
    }

    #[test]
    fn plus_branch_rejected_at_zero_g55() {
        let u = [1.0, 0.0, 0.0, 0.0];
        let p = [2.0, 0.0, 0.0, 0.0];
        let err = solve_p5(&u, &p, 0.4, 0.0, Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::DivergentBranch));
    }

    #[test]
    fn negative_discriminant_is_a_complex_root() {
        let u = [1.0, 0.0, 0.0, 0.0];
        let p = [2.0, 0.0, 0.0, 0.0];
        // 2 g55 sinh(2 phi) > 1
        let err = solve_p5(&u, &p, 1.5, 0.4, Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::ComplexRoot { .. }));
    }

    #[test]
    fn contraction_reduces_when_p5_vanishes() {
        let (g, u) = minkowski_rest_frame();
        let phi = 0.2;
        let fm = FiveMetric::from_base(&g, &u, phi, 0.15).unwrap();
        let p = [-1.0, 0.1, -0.2, 0.3];
        let pm = FiveMomentum { p, p5: 0.0 };
        let expect = fm.hat_g.dot_co(&p, &p) / 2.0;
        assert_abs_diff_eq!(kk_contract(&fm, &pm, 1.0), expect, epsilon = 1e-15);
    }

    #[test]
    fn contraction_coincides_with_direct_on_both_branches() {
        let (g, u) = minkowski_rest_frame();
        let phi = 0.21;
        let g55 = 0.3;
        let m = 1.7;
        let p = [-1.2, 0.4, -0.1, 0.25];
        let fm = FiveMetric::from_base(&g, &u, phi, g55).unwrap();
        let direct = kk_hamiltonian_direct(&g, &u, phi, &p, m).unwrap();
        for branch in [Branch::Minus, Branch::Plus] {
            let p5 = solve_p5(&u, &p, phi, g55, branch).unwrap();
            let via_lift = kk_contract(&fm, &FiveMomentum { p, p5 }, m);
            assert_relative_eq!(via_lift, direct, max_relative = 1e-12);
        }
    }
}
