//! Hamiltonian evaluation, Hamilton's equations in the invariant world time
//! tau, numerical orbit integration, and the geodesic / interval diagnostics
//! that certify integrated paths.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{conformal_factor, ScalarField, VectorFieldU, DELTA_SING_REL};
use crate::numerics;
use crate::tensor::{christoffel, MetricField, SpacetimePoint, DIM};

/// A point of phase space: event coordinates, covariant momentum, world time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseState {
    pub x: SpacetimePoint,
    /// Covariant momentum p_mu.
    pub p: [f64; 4],
    pub tau: f64,
}

impl PhaseState {
    pub fn new(x: [f64; 4], p: [f64; 4], tau: f64) -> Self {
        Self {
            x: SpacetimePoint::new(x),
            p,
            tau,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.p.iter().all(|c| c.is_finite()) && self.tau.is_finite()
    }
}

/// The generator of the flow. Four kinds are supported:
///
/// * `Metric` — K = (1/2m) g^{mu nu} p_mu p_nu (pure geodesic flow);
/// * `MetricScalar` — the same plus an additive world scalar Phi(x);
/// * `GaugeScalar` — K = (1/2m) g^{mu nu} (p - eps U)_mu (p - eps U)_nu + Phi;
/// * `ConformalGauge` — K = (1/2m) F(x) g^{mu nu} (p - eps U)_mu (p - eps U)_nu
///   with the conformal factor F = k/(k - Phi) built from a frozen shell
///   value `k` (set `u = None` for the plain conformal metric Hamiltonian
///   without a vector field).
pub enum Hamiltonian<'a> {
    Metric {
        m: f64,
        metric: &'a MetricField,
    },
    MetricScalar {
        m: f64,
        metric: &'a MetricField,
        phi: &'a ScalarField,
    },
    GaugeScalar {
        m: f64,
        metric: &'a MetricField,
        phi: &'a ScalarField,
        u: &'a VectorFieldU,
        eps: f64,
    },
    ConformalGauge {
        m: f64,
        metric: &'a MetricField,
        phi: &'a ScalarField,
        u: Option<&'a VectorFieldU>,
        eps: f64,
        k: f64,
        delta_sing: Option<f64>,
    },
}

impl<'a> Hamiltonian<'a> {
    pub fn mass(&self) -> f64 {
        match self {
            Hamiltonian::Metric { m, .. }
            | Hamiltonian::MetricScalar { m, .. }
            | Hamiltonian::GaugeScalar { m, .. }
            | Hamiltonian::ConformalGauge { m, .. } => *m,
        }
    }

    pub fn metric(&self) -> &'a MetricField {
        match self {
            Hamiltonian::Metric { metric, .. }
            | Hamiltonian::MetricScalar { metric, .. }
            | Hamiltonian::GaugeScalar { metric, .. }
            | Hamiltonian::ConformalGauge { metric, .. } => metric,
        }
    }

    pub fn scalar(&self) -> Option<&'a ScalarField> {
        match self {
            Hamiltonian::Metric { .. } => None,
            Hamiltonian::MetricScalar { phi, .. }
            | Hamiltonian::GaugeScalar { phi, .. }
            | Hamiltonian::ConformalGauge { phi, .. } => Some(phi),
        }
    }

    /// True for the pure metric kind, the only one the interval law applies to.
    pub fn is_pure_metric(&self) -> bool {
        matches!(self, Hamiltonian::Metric { .. })
    }

    /// Kinetic momentum pi = p - eps U at `x` (pi = p when no vector field).
    fn kinetic_momentum(&self, s: &PhaseState) -> Result<[f64; 4]> {
        let (u, eps) = match self {
            Hamiltonian::GaugeScalar { u, eps, metric, .. } => (u.eval(metric, &s.x)?, *eps),
            Hamiltonian::ConformalGauge {
                u: Some(u),
                eps,
                metric,
                ..
            } if *eps != 0.0 => (u.eval(metric, &s.x)?, *eps),
            _ => return Ok(s.p),
        };
        let mut pi = s.p;
        for mu in 0..DIM {
            pi[mu] -= eps * u[mu];
        }
        Ok(pi)
    }

    /// K evaluated at a phase-space point.
    pub fn value(&self, s: &PhaseState) -> Result<f64> {
        let g = self.metric().eval(&s.x)?;
        let pi = self.kinetic_momentum(s)?;
        let quad = g.dot_co(&pi, &pi);
        match self {
            Hamiltonian::Metric { m, .. } => Ok(quad / (2.0 * m)),
            Hamiltonian::MetricScalar { m, phi, .. } | Hamiltonian::GaugeScalar { m, phi, .. } => {
                Ok(quad / (2.0 * m) + phi.value(&s.x))
            }
            Hamiltonian::ConformalGauge {
                m,
                phi,
                k,
                delta_sing,
                ..
            } => {
                let f = conformal_factor(*k, phi, &s.x, *delta_sing)?;
                Ok(f * quad / (2.0 * m))
            }
        }
    }

    /// Hamilton's equations: (dx^mu/dtau, dp_mu/dtau) = (dK/dp_mu, -dK/dx^mu),
    /// assembled from the analytic field derivatives.
    pub fn rhs(&self, s: &PhaseState) -> Result<([f64; 4], [f64; 4])> {
        let metric = self.metric();
        let g = metric.eval(&s.x)?;
        let dinv = metric.deriv(&s.x)?;
        let m = self.mass();
        let pi = self.kinetic_momentum(s)?;
        let pi_up = g.raise(&pi);

        // d/dx^mu of (1/2m) g^{la ga} pi_la pi_ga, metric part
        let mut grad_quad = [0.0; 4];
        for mu in 0..DIM {
            let mut acc = 0.0;
            for la in 0..DIM {
                for ga in 0..DIM {
                    acc += dinv[mu][la][ga] * pi[la] * pi[ga];
                }
            }
            grad_quad[mu] = acc / (2.0 * m);
        }

        // gauge term: -(eps/m) g^{la ga} dU_la/dx^mu pi_ga = -(eps/m) dU_la/dx^mu pi^la
        let mut grad_gauge = [0.0; 4];
        let ueps = match self {
            Hamiltonian::GaugeScalar { u, eps, .. } => Some((*u, *eps)),
            Hamiltonian::ConformalGauge { u: Some(u), eps, .. } if *eps != 0.0 => Some((*u, *eps)),
            _ => None,
        };
        if let Some((u, eps)) = ueps {
            let du = u.deriv(metric, &s.x)?;
            for mu in 0..DIM {
                let mut acc = 0.0;
                for la in 0..DIM {
                    acc += du[la][mu] * pi_up[la];
                }
                grad_gauge[mu] = -(eps / m) * acc;
            }
        }

        match self {
            Hamiltonian::Metric { .. } => {
                let mut xdot = pi_up;
                for c in xdot.iter_mut() {
                    *c /= m;
                }
                let mut pdot = [0.0; 4];
                for mu in 0..DIM {
                    pdot[mu] = -grad_quad[mu];
                }
                Ok((xdot, pdot))
            }
            Hamiltonian::MetricScalar { phi, .. } | Hamiltonian::GaugeScalar { phi, .. } => {
                let grad_phi = phi.gradient(&s.x);
                let mut xdot = pi_up;
                for c in xdot.iter_mut() {
                    *c /= m;
                }
                let mut pdot = [0.0; 4];
                for mu in 0..DIM {
                    pdot[mu] = -(grad_quad[mu] + grad_gauge[mu] + grad_phi[mu]);
                }
                Ok((xdot, pdot))
            }
            Hamiltonian::ConformalGauge { m, phi, k, delta_sing, .. } => {
                let f = conformal_factor(*k, phi, &s.x, *delta_sing)?;
                let grad_phi = phi.gradient(&s.x);
                let quad = crate::tensor::dot4(&pi_up, &pi);
                let mut xdot = pi_up;
                for c in xdot.iter_mut() {
                    *c *= f / m;
                }
                let mut pdot = [0.0; 4];
                for mu in 0..DIM {
                    // dF/dx^mu = F^2 dPhi/dx^mu / k
                    let df = f * f * grad_phi[mu] / k;
                    pdot[mu] = -(f * (grad_quad[mu] + grad_gauge[mu]) + df * quad / (2.0 * m));
                }
                Ok((xdot, pdot))
            }
        }
    }
}

impl core::fmt::Debug for Hamiltonian<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let label = match self {
            Hamiltonian::Metric { .. } => "Metric",
            Hamiltonian::MetricScalar { .. } => "MetricScalar",
            Hamiltonian::GaugeScalar { .. } => "GaugeScalar",
            Hamiltonian::ConformalGauge { .. } => "ConformalGauge",
        };
        write!(f, "Hamiltonian::{label} {{ m: {} }}", self.mass())
    }
}

/// One recorded trajectory point with its conservation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub state: PhaseState,
    /// K evaluated at this sample.
    pub k_value: f64,
    /// Signed square of the accumulated interval: sign(g xdot xdot) *
    /// (integral of sqrt|g xdot xdot| dtau)^2.
    pub ds2_accum: f64,
}

/// Integrated orbit with frozen shell value and sampling metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// k = K(s0), frozen at the start of the run.
    pub k: f64,
    /// Particle mass of the generating Hamiltonian.
    pub m: f64,
    /// Sample spacing in tau for uniform (fixed-step) runs, `None` for
    /// adaptive runs.
    pub spacing: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample spacing, or an error for adaptive trajectories.
    pub fn uniform_spacing(&self) -> Result<f64> {
        self.spacing.ok_or(Error::NonUniformSamples)
    }

    /// Worst relative drift of K away from the frozen shell value.
    pub fn max_k_drift(&self) -> f64 {
        let scale = self.k.abs().max(f64::MIN_POSITIVE);
        self.samples
            .iter()
            .fold(0.0_f64, |acc, s| acc.max((s.k_value - self.k).abs()))
            / scale
    }

    pub fn positions(&self) -> Vec<[f64; 4]> {
        self.samples.iter().map(|s| s.state.x.x).collect()
    }

    pub fn momenta(&self) -> Vec<[f64; 4]> {
        self.samples.iter().map(|s| s.state.p).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rk45,
}

/// Integration controls. `h` is the fixed RK4 step or the initial RK45 step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOpts {
    pub method: Method,
    pub h: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub h_min: f64,
    /// Record every n-th step (RK4 only; adaptive runs record each accepted
    /// step).
    pub sample_every: usize,
    /// Abort with `DualSingularity` when Phi(x) reaches the shell value k
    /// along the path. Always enforced for the `ConformalGauge` kind, whose
    /// equations of motion contain F; for the additive-scalar kinds the
    /// dynamics stay regular there and the guard only matters when the orbit
    /// feeds the dual map.
    pub monitor_shell: bool,
}

impl Default for IntegratorOpts {
    fn default() -> Self {
        Self {
            method: Method::Rk4,
            h: 1e-3,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            h_min: 1e-12,
            sample_every: 1,
            monitor_shell: true,
        }
    }
}

// ODE state layout: [x0..x3, p0..p3, arc]
type StateVec = [f64; 9];

fn pack(s: &PhaseState, arc: f64) -> StateVec {
    [
        s.x.x[0], s.x.x[1], s.x.x[2], s.x.x[3], s.p[0], s.p[1], s.p[2], s.p[3], arc,
    ]
}

fn unpack(y: &StateVec, tau: f64) -> (PhaseState, f64) {
    (
        PhaseState::new([y[0], y[1], y[2], y[3]], [y[4], y[5], y[6], y[7]], tau),
        y[8],
    )
}

fn axpy(y: &StateVec, c: f64, d: &StateVec) -> StateVec {
    let mut out = *y;
    for i in 0..9 {
        out[i] += c * d[i];
    }
    out
}

struct Flow<'h, 'a> {
    ham: &'h Hamiltonian<'a>,
}

impl Flow<'_, '_> {
    fn eval(&self, y: &StateVec, tau: f64) -> Result<StateVec> {
        let (state, _) = unpack(y, tau);
        let (xdot, pdot) = self.ham.rhs(&state)?;
        let g = self.ham.metric().eval(&state.x)?;
        let q = g.dot_contra(&xdot, &xdot);
        Ok([
            xdot[0],
            xdot[1],
            xdot[2],
            xdot[3],
            pdot[0],
            pdot[1],
            pdot[2],
            pdot[3],
            q.abs().sqrt(),
        ])
    }

    fn rk4_step(&self, y: &StateVec, tau: f64, h: f64) -> Result<StateVec> {
        let k1 = self.eval(y, tau)?;
        let k2 = self.eval(&axpy(y, 0.5 * h, &k1), tau + 0.5 * h)?;
        let k3 = self.eval(&axpy(y, 0.5 * h, &k2), tau + 0.5 * h)?;
        let k4 = self.eval(&axpy(y, h, &k3), tau + h)?;
        let mut out = *y;
        for i in 0..9 {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(out)
    }

    /// One Fehlberg 4(5) attempt: returns the 5th-order update and the error
    /// ratio against atol/rtol (<= 1 means accept).
    fn rkf45_step(
        &self,
        y: &StateVec,
        tau: f64,
        h: f64,
        atol: f64,
        rtol: f64,
    ) -> Result<(StateVec, f64)> {
        let k1 = self.eval(y, tau)?;
        let y2 = axpy(y, h * 0.25, &k1);
        let k2 = self.eval(&y2, tau + 0.25 * h)?;
        let mut y3 = *y;
        for i in 0..9 {
            y3[i] += h * (3.0 / 32.0 * k1[i] + 9.0 / 32.0 * k2[i]);
        }
        let k3 = self.eval(&y3, tau + 3.0 / 8.0 * h)?;
        let mut y4 = *y;
        for i in 0..9 {
            y4[i] += h
                * (1932.0 / 2197.0 * k1[i] - 7200.0 / 2197.0 * k2[i] + 7296.0 / 2197.0 * k3[i]);
        }
        let k4 = self.eval(&y4, tau + 12.0 / 13.0 * h)?;
        let mut y5 = *y;
        for i in 0..9 {
            y5[i] += h
                * (439.0 / 216.0 * k1[i] - 8.0 * k2[i] + 3680.0 / 513.0 * k3[i]
                    - 845.0 / 4104.0 * k4[i]);
        }
        let k5 = self.eval(&y5, tau + h)?;
        let mut y6 = *y;
        for i in 0..9 {
            y6[i] += h
                * (-8.0 / 27.0 * k1[i] + 2.0 * k2[i] - 3544.0 / 2565.0 * k3[i]
                    + 1859.0 / 4104.0 * k4[i]
                    - 11.0 / 40.0 * k5[i]);
        }
        let k6 = self.eval(&y6, tau + 0.5 * h)?;

        let mut out = *y;
        let mut ratio = 0.0_f64;
        for i in 0..9 {
            let hi = h
                * (16.0 / 135.0 * k1[i] + 6656.0 / 12825.0 * k3[i] + 28561.0 / 56430.0 * k4[i]
                    - 9.0 / 50.0 * k5[i]
                    + 2.0 / 55.0 * k6[i]);
            let lo = h
                * (25.0 / 216.0 * k1[i] + 1408.0 / 2565.0 * k3[i] + 2197.0 / 4104.0 * k4[i]
                    - 0.2 * k5[i]);
            out[i] += hi;
            let tol = atol + rtol * y[i].abs().max(out[i].abs());
            ratio = ratio.max((hi - lo).abs() / tol);
        }
        Ok((out, ratio))
    }
}

/// Guard that aborts a run when Phi(x) reaches the frozen shell value k,
/// where the conformal factor F = k/(k - Phi) blows up.
struct ShellMonitor<'a> {
    phi: &'a ScalarField,
    k: f64,
    guard: f64,
    sign0: f64,
}

impl<'a> ShellMonitor<'a> {
    fn new(ham: &Hamiltonian<'a>, k: f64, x0: &SpacetimePoint) -> Option<Self> {
        let phi = ham.scalar()?;
        let k_shell = match ham {
            Hamiltonian::ConformalGauge { k, .. } => *k,
            _ => k,
        };
        let guard = match ham {
            Hamiltonian::ConformalGauge { delta_sing, .. } => {
                delta_sing.unwrap_or(DELTA_SING_REL * k_shell.abs())
            }
            _ => DELTA_SING_REL * k_shell.abs(),
        };
        let gap0 = k_shell - phi.value(x0);
        Some(Self {
            phi,
            k: k_shell,
            guard,
            sign0: gap0.signum(),
        })
    }

    fn check(&self, x: &SpacetimePoint) -> Result<()> {
        let gap = self.k - self.phi.value(x);
        if gap.abs() <= self.guard || gap.signum() != self.sign0 {
            return Err(Error::DualSingularity {
                gap: gap.abs(),
                guard: self.guard,
            });
        }
        Ok(())
    }
}

/// Integrate an orbit from `s0` to `tau_end`, recording K and the interval
/// accumulator at each retained sample.
///
/// The run aborts with [`Error::Aborted`] carrying the failing world time
/// when the conformal factor becomes singular along the path, when a state
/// component stops being finite, or (RK45) when the controller cannot meet
/// the tolerance above `h_min`.
pub fn integrate_orbit(
    ham: &Hamiltonian,
    s0: &PhaseState,
    tau_end: f64,
    opts: &IntegratorOpts,
) -> Result<Trajectory> {
    assert!(tau_end > s0.tau, "tau_end must exceed the initial tau");
    assert!(opts.h > 0.0 && opts.sample_every > 0);

    let k = ham.value(s0)?;
    let m = ham.mass();
    let monitor = if opts.monitor_shell || matches!(ham, Hamiltonian::ConformalGauge { .. }) {
        ShellMonitor::new(ham, k, &s0.x)
    } else {
        None
    };
    if let Some(mon) = &monitor {
        mon.check(&s0.x).map_err(|e| Error::aborted_at(s0.tau, e))?;
    }

    // sign of g xdot xdot at the start fixes the branch of the signed s^2
    let (xdot0, _) = ham.rhs(s0)?;
    let g0 = ham.metric().eval(&s0.x)?;
    let interval_sign = g0.dot_contra(&xdot0, &xdot0).signum();

    let flow = Flow { ham };
    let mut samples = Vec::new();
    let push_sample = |samples: &mut Vec<TrajectorySample>, state: PhaseState, arc: f64| {
        let k_value = ham.value(&state)?;
        samples.push(TrajectorySample {
            state,
            k_value,
            ds2_accum: interval_sign * arc * arc,
        });
        Ok::<(), Error>(())
    };

    match opts.method {
        Method::Rk4 => {
            let span = tau_end - s0.tau;
            let n_steps = (span / opts.h).round().max(1.0) as usize;
            let h = span / n_steps as f64;
            let mut y = pack(s0, 0.0);
            push_sample(&mut samples, *s0, 0.0)?;
            for j in 0..n_steps {
                let tau = s0.tau + j as f64 * h;
                y = flow
                    .rk4_step(&y, tau, h)
                    .map_err(|e| Error::aborted_at(tau, e))?;
                let tau_next = s0.tau + (j + 1) as f64 * h;
                let (state, arc) = unpack(&y, tau_next);
                if !state.is_finite() {
                    return Err(Error::aborted_at(
                        tau_next,
                        Error::StepFailure {
                            tau: tau_next,
                            h_min: opts.h_min,
                        },
                    ));
                }
                if let Some(mon) = &monitor {
                    mon.check(&state.x)
                        .map_err(|e| Error::aborted_at(tau_next, e))?;
                }
                if (j + 1) % opts.sample_every == 0 || j + 1 == n_steps {
                    push_sample(&mut samples, state, arc)
                        .map_err(|e| Error::aborted_at(tau_next, e))?;
                }
            }
            // a trailing partial stride would break uniform spacing
            let spacing = if opts.sample_every == 1 || n_steps.is_multiple_of(opts.sample_every) {
                Some(h * opts.sample_every as f64)
            } else {
                None
            };
            Ok(Trajectory {
                samples,
                k,
                m,
                spacing,
            })
        }
        Method::Rk45 => {
            let mut y = pack(s0, 0.0);
            let mut tau = s0.tau;
            let mut h = opts.h.min(tau_end - s0.tau);
            push_sample(&mut samples, *s0, 0.0)?;
            while tau < tau_end - 1e-14 * (1.0 + tau_end.abs()) {
                if h < opts.h_min {
                    return Err(Error::aborted_at(
                        tau,
                        Error::StepFailure {
                            tau,
                            h_min: opts.h_min,
                        },
                    ));
                }
                let h_try = h.min(tau_end - tau);
                let (y_next, ratio) = flow
                    .rkf45_step(&y, tau, h_try, opts.abs_tol, opts.rel_tol)
                    .map_err(|e| Error::aborted_at(tau, e))?;
                if ratio <= 1.0 {
                    tau += h_try;
                    y = y_next;
                    let (state, arc) = unpack(&y, tau);
                    if !state.is_finite() {
                        return Err(Error::aborted_at(
                            tau,
                            Error::StepFailure {
                                tau,
                                h_min: opts.h_min,
                            },
                        ));
                    }
                    if let Some(mon) = &monitor {
                        mon.check(&state.x).map_err(|e| Error::aborted_at(tau, e))?;
                    }
                    push_sample(&mut samples, state, arc)
                        .map_err(|e| Error::aborted_at(tau, e))?;
                }
                let factor = if ratio > 0.0 { 0.9 * ratio.powf(-0.2) } else { 5.0 };
                h = h_try * factor.clamp(0.2, 5.0);
            }
            Ok(Trajectory {
                samples,
                k,
                m,
                spacing: None,
            })
        }
    }
}

/// Contravariant velocities dx^mu/dtau = g^{mu nu} p_nu / m recovered from
/// the stored samples (no RHS re-evaluation; valid for the metric and
/// metric+scalar kinds, whose canonical and kinetic momenta coincide).
pub fn trajectory_velocities(metric: &MetricField, traj: &Trajectory) -> Result<Vec<[f64; 4]>> {
    traj.samples
        .iter()
        .map(|s| {
            let g = metric.eval(&s.state.x)?;
            let mut v = g.raise(&s.state.p);
            for c in v.iter_mut() {
                *c /= traj.m;
            }
            Ok(v)
        })
        .collect()
}

/// Geodesic residual xddot^rho + Gamma^rho_{mu nu} xdot^mu xdot^nu per
/// interior sample (margin 2), with xddot from 4th-order central differences
/// of the recovered velocities. Zero along geodesics of `metric`; along
/// scalar-potential orbits it reproduces the gradient force term.
pub fn geodesic_residual(metric: &MetricField, traj: &Trajectory) -> Result<Vec<[f64; 4]>> {
    let dt = traj.uniform_spacing()?;
    if traj.len() < 5 {
        return Err(Error::TooFewSamples {
            n: traj.len(),
            need: 5,
        });
    }
    let xdots = trajectory_velocities(metric, traj)?;
    let xddots = numerics::series_deriv4_vec(&xdots, dt)?;
    let mut out = Vec::with_capacity(xddots.len());
    for (offset, xddot) in xddots.iter().enumerate() {
        let j = offset + 2;
        let conn = christoffel(metric, &traj.samples[j].state.x)?;
        let v = &xdots[j];
        let mut res = *xddot;
        for rho in 0..DIM {
            let mut acc = 0.0;
            for mu in 0..DIM {
                for nu in 0..DIM {
                    acc += conn.gamma[rho][mu][nu] * v[mu] * v[nu];
                }
            }
            res[rho] += acc;
        }
        out.push(res);
    }
    Ok(out)
}

/// Worst relative violation of the interval law s^2 = (2k/m) tau^2 along a
/// pure-metric orbit. Errors with [`Error::WrongKind`] for Hamiltonians
/// carrying potential terms, for which the law does not hold.
pub fn interval_check(ham: &Hamiltonian, traj: &Trajectory) -> Result<f64> {
    if !ham.is_pure_metric() {
        return Err(Error::WrongKind);
    }
    let tau0 = traj
        .samples
        .first()
        .ok_or(Error::TooFewSamples { n: 0, need: 1 })?
        .state
        .tau;
    let rate = 2.0 * traj.k / traj.m;
    let mut worst = 0.0_f64;
    for s in &traj.samples {
        let dtau = s.state.tau - tau0;
        let expect = rate * dtau * dtau;
        let denom = expect.abs().max(f64::MIN_POSITIVE);
        worst = worst.max((s.ds2_accum - expect).abs() / denom);
    }
    Ok(worst)
}
