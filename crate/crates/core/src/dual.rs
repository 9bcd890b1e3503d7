//! The conformal pairing between the scalar-potential Hamiltonian and the
//! purely metric one: the dual metric F g^{mu nu}, the orbit-wise map onto
//! dual coordinates, derivatives restricted to the constraint hypersurface,
//! and the z-variable embedding that recasts the dual flow as a geometric
//! one.
//!
//! The dual coordinates y exist only along orbits (the constraint
//! F(x) = phi(y) fixes the factor, not a global chart), so every quantity
//! here is evaluated by pulling back to the x-samples of an integrated
//! trajectory.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{conformal_factor, ScalarField};
use crate::numerics;
use crate::orbit::{PhaseState, Trajectory, TrajectorySample};
use crate::tensor::{christoffel, Metric4, MetricField, SpacetimePoint, DIM};

/// A base metric and scalar field paired through the conformal factor
/// F = k/(k - Phi) at the frozen shell value k.
pub struct DualPair<'a> {
    pub metric: &'a MetricField,
    pub phi: &'a ScalarField,
    pub k: f64,
    pub delta_sing: Option<f64>,
}

/// z-embedding sample: the auxiliary covariant variable and its tau rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddedState {
    pub z: [f64; 4],
    pub zdot: [f64; 4],
}

impl<'a> DualPair<'a> {
    pub fn new(metric: &'a MetricField, phi: &'a ScalarField, k: f64) -> Self {
        Self {
            metric,
            phi,
            k,
            delta_sing: None,
        }
    }

    /// F(x) = k / (k - Phi(x)).
    pub fn factor(&self, x: &SpacetimePoint) -> Result<f64> {
        conformal_factor(self.k, self.phi, x, self.delta_sing)
    }

    /// F(x), additionally required positive as on evaluated orbits.
    fn positive_factor(&self, x: &SpacetimePoint) -> Result<f64> {
        let f = self.factor(x)?;
        if f <= 0.0 {
            let gap = (self.k - self.phi.value(x)).abs();
            return Err(Error::DualSingularity { gap, guard: f64::NAN });
        }
        Ok(f)
    }

    /// Covariant gradient dF/dx^mu = F^2 dPhi/dx^mu / k.
    pub fn factor_gradient(&self, x: &SpacetimePoint) -> Result<[f64; 4]> {
        let f = self.factor(x)?;
        let grad_phi = self.phi.gradient(x);
        let c = f * f / self.k;
        Ok([
            c * grad_phi[0],
            c * grad_phi[1],
            c * grad_phi[2],
            c * grad_phi[3],
        ])
    }

    /// The dual metric at a point of the orbit: contravariant components
    /// scaled by F, covariant ones by 1/F.
    pub fn dual_metric(&self, x: &SpacetimePoint) -> Result<Metric4> {
        let f = self.positive_factor(x)?;
        Ok(self.metric.eval(x)?.conformal_rescale(f))
    }

    /// Derivative restricted to the constraint hypersurface:
    /// F(x)^{-1} df/dx^mu, with the gradient taken by 4th-order central
    /// finite differences.
    pub fn restricted_derivative(
        &self,
        f: &dyn Fn(&SpacetimePoint) -> f64,
        x: &SpacetimePoint,
    ) -> Result<[f64; 4]> {
        let factor = self.factor(x)?;
        let h = numerics::fd_step(x.norm_inf());
        let mut out = [0.0; 4];
        for (mu, slot) in out.iter_mut().enumerate() {
            let d = numerics::stencil4(
                f(&x.shifted(mu, -2.0 * h)),
                f(&x.shifted(mu, -h)),
                f(&x.shifted(mu, h)),
                f(&x.shifted(mu, 2.0 * h)),
                h,
            );
            *slot = d / factor;
        }
        Ok(out)
    }

    /// Worst relative antisymmetry of the restricted second derivative of F,
    /// obtained by applying the restricted derivative twice with finite
    /// differences. A bona fide derivative on the hypersurface makes this
    /// vanish; the finite-difference noise floor is what gets measured.
    ///
    /// The step is deliberately coarser than for first derivatives (nested
    /// differencing amplifies roundoff by 1/h^2) and frozen once at the
    /// expansion point so inner and outer stencils sample one lattice.
    pub fn restricted_second_antisymmetry(&self, x: &SpacetimePoint) -> Result<f64> {
        let h = 1e-3 * (1.0 + x.norm_inf());
        // inner restricted derivative, same step at every shifted point
        let inner = |p: &SpacetimePoint, nu: usize| -> Result<f64> {
            let factor = self.factor(p)?;
            let d = numerics::stencil4(
                self.factor(&p.shifted(nu, -2.0 * h))?,
                self.factor(&p.shifted(nu, -h))?,
                self.factor(&p.shifted(nu, h))?,
                self.factor(&p.shifted(nu, 2.0 * h))?,
                h,
            );
            Ok(d / factor)
        };
        let factor = self.factor(x)?;
        let mut second = [[0.0_f64; 4]; 4];
        for mu in 0..DIM {
            for nu in 0..DIM {
                let d = numerics::stencil4(
                    inner(&x.shifted(mu, -2.0 * h), nu)?,
                    inner(&x.shifted(mu, -h), nu)?,
                    inner(&x.shifted(mu, h), nu)?,
                    inner(&x.shifted(mu, 2.0 * h), nu)?,
                    h,
                );
                second[mu][nu] = d / factor;
            }
        }
        let mut anti = 0.0_f64;
        let mut scale = 0.0_f64;
        for mu in 0..DIM {
            for nu in 0..DIM {
                scale = scale.max(second[mu][nu].abs());
                if nu > mu {
                    anti = anti.max((second[mu][nu] - second[nu][mu]).abs());
                }
            }
        }
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(anti / scale)
    }

    /// Contravariant x-velocities recovered from the stored samples.
    fn velocities(&self, traj: &Trajectory) -> Result<Vec<[f64; 4]>> {
        crate::orbit::trajectory_velocities(self.metric, traj)
    }

    /// Map an orbit of the scalar-potential dynamics onto dual coordinates
    /// by integrating dy^mu/dtau = F(x(tau)) dx^mu/dtau with y(0) = x(0);
    /// momenta are carried over unchanged.
    pub fn map_orbit_to_dual(&self, traj: &Trajectory) -> Result<Trajectory> {
        let dt = traj.uniform_spacing()?;
        let n = traj.len();
        if n < 4 {
            return Err(Error::TooFewSamples { n, need: 4 });
        }
        let xdots = self.velocities(traj)?;
        let mut ydots = Vec::with_capacity(n);
        let mut interval_rate = Vec::with_capacity(n);
        for (sample, xdot) in traj.samples.iter().zip(&xdots) {
            let x = &sample.state.x;
            let f = self.positive_factor(x)?;
            let mut yd = *xdot;
            for c in yd.iter_mut() {
                *c *= f;
            }
            ydots.push(yd);
            // dual interval rate: hat g_{mu nu} ydot^mu ydot^nu = F g xdot xdot
            let g = self.metric.eval(x)?;
            let q = f * g.dot_contra(xdot, xdot);
            interval_rate.push(q.abs().sqrt());
        }
        let displacement = numerics::cumulative_integral_vec(&ydots, dt)?;
        let arc = numerics::cumulative_integral(&interval_rate, dt)?;
        let sign = (2.0 * traj.k / traj.m).signum();
        let y0 = traj.samples[0].state.x.x;

        let mut samples = Vec::with_capacity(n);
        for (j, sample) in traj.samples.iter().enumerate() {
            let mut y = y0;
            for mu in 0..DIM {
                y[mu] += displacement[j][mu];
            }
            // K restated through the dual metric at the pulled-back point
            let f = self.positive_factor(&sample.state.x)?;
            let g = self.metric.eval(&sample.state.x)?;
            let k_value = f * g.dot_co(&sample.state.p, &sample.state.p) / (2.0 * traj.m);
            samples.push(TrajectorySample {
                state: PhaseState::new(y, sample.state.p, sample.state.tau),
                k_value,
                ds2_accum: sign * arc[j] * arc[j],
            });
        }
        Ok(Trajectory {
            samples,
            k: traj.k,
            m: traj.m,
            spacing: traj.spacing,
        })
    }

    /// Connection of the dual metric at a pulled-back orbit point, built with
    /// restricted derivatives:
    /// F^{-1} Gamma^mu_{la si} - (1/2F^2)[dF_la d^mu_si + dF_si d^mu_la
    /// - g^{mu nu} dF_nu g_{la si}].
    pub fn dual_connection(&self, x: &SpacetimePoint) -> Result<[[[f64; 4]; 4]; 4]> {
        let f = self.positive_factor(x)?;
        let df = self.factor_gradient(x)?;
        let conn = christoffel(self.metric, x)?;
        let m = self.metric.eval(x)?;
        let g = m.lower_mat();
        let df_up = m.raise(&df);
        let inv_f = 1.0 / f;
        let c2 = 0.5 * inv_f * inv_f;
        let mut out = [[[0.0; 4]; 4]; 4];
        for mu in 0..DIM {
            for la in 0..DIM {
                for si in 0..DIM {
                    let mut v = inv_f * conn.gamma[mu][la][si];
                    let mut corr = 0.0;
                    if mu == si {
                        corr += df[la];
                    }
                    if mu == la {
                        corr += df[si];
                    }
                    corr -= df_up[mu] * g[la][si];
                    v -= c2 * corr;
                    out[mu][la][si] = v;
                }
            }
        }
        Ok(out)
    }

    /// Geodesic residual of the mapped orbit in the dual geometry:
    /// yddot^mu + hat Gamma^mu_{la si} ydot^la ydot^si, with ydot recovered
    /// pointwise from the carried-over momenta and yddot from 4th-order
    /// differences. Small values certify the mapped orbit as a geodesic of
    /// the dual metric.
    pub fn dual_geodesic_residual(
        &self,
        xtraj: &Trajectory,
        ytraj: &Trajectory,
    ) -> Result<Vec<[f64; 4]>> {
        let dt = xtraj.uniform_spacing()?;
        if xtraj.len() != ytraj.len() {
            return Err(Error::NonUniformSamples);
        }
        if xtraj.len() < 5 {
            return Err(Error::TooFewSamples {
                n: xtraj.len(),
                need: 5,
            });
        }
        // ydot^mu = hat g^{mu nu} p_nu / m = F g^{mu nu} p_nu / m
        let mut ydots = Vec::with_capacity(xtraj.len());
        for (xs, ys) in xtraj.samples.iter().zip(&ytraj.samples) {
            let f = self.positive_factor(&xs.state.x)?;
            let g = self.metric.eval(&xs.state.x)?;
            let mut yd = g.raise(&ys.state.p);
            for c in yd.iter_mut() {
                *c *= f / ytraj.m;
            }
            ydots.push(yd);
        }
        let yddots = numerics::series_deriv4_vec(&ydots, dt)?;
        let mut out = Vec::with_capacity(yddots.len());
        for (offset, ydd) in yddots.iter().enumerate() {
            let j = offset + 2;
            let x = &xtraj.samples[j].state.x;
            let conn = self.dual_connection(x)?;
            let v = &ydots[j];
            let mut res = *ydd;
            for mu in 0..DIM {
                let mut acc = 0.0;
                for la in 0..DIM {
                    for si in 0..DIM {
                        acc += conn[mu][la][si] * v[la] * v[si];
                    }
                }
                res[mu] += acc;
            }
            out.push(res);
        }
        Ok(out)
    }

    /// The dual Hamiltonian (1/2m) hat g^{mu nu} p_mu p_nu evaluated on the
    /// mapped orbit; equals the frozen k on the shell.
    pub fn dual_hamiltonian_value(&self, sample: &TrajectorySample, m: f64) -> Result<f64> {
        let x = &sample.state.x;
        let f = self.positive_factor(x)?;
        let g = self.metric.eval(x)?;
        Ok(f * g.dot_co(&sample.state.p, &sample.state.p) / (2.0 * m))
    }

    /// The z-embedding of an orbit: zdot_mu = g_{mu nu} xdot^nu pointwise,
    /// z by quadrature from z(0) = 0.
    pub fn z_embed(&self, traj: &Trajectory) -> Result<Vec<EmbeddedState>> {
        let dt = traj.uniform_spacing()?;
        if traj.len() < 4 {
            return Err(Error::TooFewSamples {
                n: traj.len(),
                need: 4,
            });
        }
        let xdots = self.velocities(traj)?;
        let mut zdots = Vec::with_capacity(traj.len());
        for (sample, xdot) in traj.samples.iter().zip(&xdots) {
            let g = self.metric.eval(&sample.state.x)?;
            zdots.push(g.lower(xdot));
        }
        let zs = numerics::cumulative_integral_vec(&zdots, dt)?;
        Ok(zs
            .into_iter()
            .zip(zdots)
            .map(|(z, zdot)| EmbeddedState { z, zdot })
            .collect())
    }

    /// Right-hand side of the embedded geometric flow at one orbit sample,
    /// split into its metric and potential terms:
    ///
    /// zddot_nu = -1/2 g_{nu la} (dg^{rho ga}/dz_la) zdot_rho zdot_ga
    ///            -1/2 F^{-1} g_{nu la} (dF/dz_la) g^{rho ga} zdot_rho zdot_ga
    ///
    /// with d/dz_la = g^{la al} d/dx^al on the constraint hypersurface.
    pub fn z_rhs_split(&self, sample: &TrajectorySample, m: f64) -> Result<([f64; 4], [f64; 4])> {
        let x = &sample.state.x;
        let metric = self.metric.eval(x)?;
        let g = metric.lower_mat();
        let ginv = metric.upper_mat();
        let dinv = self.metric.deriv(x)?;
        let f = self.positive_factor(x)?;
        let df = self.factor_gradient(x)?;

        // zdot = p/m on the orbit
        let mut zdot = sample.state.p;
        for c in zdot.iter_mut() {
            *c /= m;
        }

        // dg^{rho ga}/dz_la = g^{la al} d_al g^{rho ga}
        let mut dz_inv = [[[0.0; 4]; 4]; 4];
        for la in 0..DIM {
            for rho in 0..DIM {
                for ga in 0..DIM {
                    let mut acc = 0.0;
                    for al in 0..DIM {
                        acc += ginv[la][al] * dinv[al][rho][ga];
                    }
                    dz_inv[la][rho][ga] = acc;
                }
            }
        }
        // dF/dz_la = g^{la al} dF/dx^al
        let df_z = metric.raise(&df);
        // g^{rho ga} zdot_rho zdot_ga
        let quad = metric.dot_co(&zdot, &zdot);

        let mut metric_term = [0.0; 4];
        let mut potential_term = [0.0; 4];
        for nu in 0..DIM {
            let mut acc_m = 0.0;
            let mut acc_p = 0.0;
            for la in 0..DIM {
                let mut inner = 0.0;
                for rho in 0..DIM {
                    for ga in 0..DIM {
                        inner += dz_inv[la][rho][ga] * zdot[rho] * zdot[ga];
                    }
                }
                acc_m += g[nu][la] * inner;
                acc_p += g[nu][la] * df_z[la];
            }
            metric_term[nu] = -0.5 * acc_m;
            potential_term[nu] = -0.5 / f * acc_p * quad;
        }
        Ok((metric_term, potential_term))
    }

    /// Pointwise consistency of the embedding chain with the direct
    /// equations of motion: the x-acceleration reconstructed from the
    /// z-flow,
    ///
    /// xddot^rho = (d_si g^{rho nu}) xdot^si zdot_nu + g^{rho nu} zddot_nu,
    ///
    /// minus the directly evaluated geodesic-plus-gradient-force right-hand
    /// side. This is an algebraic identity at every sample, independent of
    /// integration error; values at roundoff certify the reconstruction.
    pub fn reconstructed_force_residual(&self, traj: &Trajectory) -> Result<Vec<[f64; 4]>> {
        let m = traj.m;
        let mut out = Vec::with_capacity(traj.len());
        for sample in &traj.samples {
            let x = &sample.state.x;
            let metric = self.metric.eval(x)?;
            let ginv = metric.upper_mat();
            let dinv = self.metric.deriv(x)?;
            let conn = christoffel(self.metric, x)?;
            let grad_phi = self.phi.gradient(x);

            let mut xdot = metric.raise(&sample.state.p);
            for c in xdot.iter_mut() {
                *c /= m;
            }
            let mut zdot = sample.state.p;
            for c in zdot.iter_mut() {
                *c /= m;
            }

            let (zr_metric, zr_potential) = self.z_rhs_split(sample, m)?;

            let force = metric.raise(&grad_phi);
            let mut res = [0.0; 4];
            for rho in 0..DIM {
                // reconstructed from the z-chain
                let mut rec = 0.0;
                for nu in 0..DIM {
                    let mut dg = 0.0;
                    for si in 0..DIM {
                        dg += dinv[si][rho][nu] * xdot[si];
                    }
                    rec += dg * zdot[nu] + ginv[rho][nu] * (zr_metric[nu] + zr_potential[nu]);
                }
                // direct right-hand side
                let mut direct = -force[rho] / m;
                for mu in 0..DIM {
                    for nu in 0..DIM {
                        direct -= conn.gamma[rho][mu][nu] * xdot[mu] * xdot[nu];
                    }
                }
                res[rho] = rec - direct;
            }
            out.push(res);
        }
        Ok(out)
    }
}
