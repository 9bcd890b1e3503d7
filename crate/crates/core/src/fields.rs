//! World fields: the scalar potential Phi, the conformal factor
//! F = k / (k - Phi), unit timelike vector fields U with U.U = -1, and the
//! antisymmetric generator data (omega(s), b) of the infinitesimal gauge
//! transformations.

use alloc::boxed::Box;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics;
use crate::tensor::{dot4, Mat4, Metric4, MetricField, SpacetimePoint, DIM};

/// Default relative guard on |k - Phi| before the conformal factor is
/// declared singular.
pub const DELTA_SING_REL: f64 = 1e-8;
/// Tolerance on |U.U + 1| enforced when evaluating a [`VectorFieldU`].
pub const U_NORM_TOL: f64 = 1e-10;
/// Relative threshold below which k = U (U.b) + b counts as degenerate.
pub const K_DEGENERATE_REL: f64 = 1e-12;

type ScalarFn = dyn Fn(&SpacetimePoint) -> f64 + Send + Sync;
type GradFn = dyn Fn(&SpacetimePoint) -> [f64; 4] + Send + Sync;
type VectorFn = dyn Fn(&SpacetimePoint) -> [f64; 4] + Send + Sync;

/// The world scalar field Phi(x), with its covariant gradient.
pub enum ScalarField {
    Zero,
    Constant { c: f64 },
    /// Phi = a_mu x^mu
    Linear { a: [f64; 4] },
    /// Softened radial well Phi = alpha / sqrt(|x_spatial|^2 + r0^2), static.
    Radial { alpha: f64, r0: f64 },
    /// User profile; gradient falls back to 4th-order finite differences
    /// when no closed form is supplied.
    Custom {
        val: Box<ScalarFn>,
        grad: Option<Box<GradFn>>,
    },
}

impl ScalarField {
    pub fn custom(val: impl Fn(&SpacetimePoint) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField::Custom {
            val: Box::new(val),
            grad: None,
        }
    }

    pub fn value(&self, x: &SpacetimePoint) -> f64 {
        match self {
            ScalarField::Zero => 0.0,
            ScalarField::Constant { c } => *c,
            ScalarField::Linear { a } => dot4(a, &x.x),
            ScalarField::Radial { alpha, r0 } => {
                let r2 = x.x[1] * x.x[1] + x.x[2] * x.x[2] + x.x[3] * x.x[3];
                alpha / (r2 + r0 * r0).sqrt()
            }
            ScalarField::Custom { val, .. } => val(x),
        }
    }

    /// Covariant gradient d Phi / d x^mu.
    pub fn gradient(&self, x: &SpacetimePoint) -> [f64; 4] {
        match self {
            ScalarField::Zero | ScalarField::Constant { .. } => [0.0; 4],
            ScalarField::Linear { a } => *a,
            ScalarField::Radial { alpha, r0 } => {
                let r2 = x.x[1] * x.x[1] + x.x[2] * x.x[2] + x.x[3] * x.x[3];
                let den = (r2 + r0 * r0).powf(1.5);
                [
                    0.0,
                    -alpha * x.x[1] / den,
                    -alpha * x.x[2] / den,
                    -alpha * x.x[3] / den,
                ]
            }
            ScalarField::Custom { val, grad } => {
                if let Some(g) = grad {
                    return g(x);
                }
                let h = numerics::fd_step(x.norm_inf());
                let mut out = [0.0; 4];
                for (mu, slot) in out.iter_mut().enumerate() {
                    *slot = numerics::stencil4(
                        val(&x.shifted(mu, -2.0 * h)),
                        val(&x.shifted(mu, -h)),
                        val(&x.shifted(mu, h)),
                        val(&x.shifted(mu, 2.0 * h)),
                        h,
                    );
                }
                out
            }
        }
    }
}

impl core::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ScalarField::Zero => write!(f, "ScalarField::Zero"),
            ScalarField::Constant { c } => write!(f, "ScalarField::Constant {{ c: {c} }}"),
            ScalarField::Linear { a } => write!(f, "ScalarField::Linear {{ a: {a:?} }}"),
            ScalarField::Radial { alpha, r0 } => {
                write!(f, "ScalarField::Radial {{ alpha: {alpha}, r0: {r0} }}")
            }
            ScalarField::Custom { .. } => write!(f, "ScalarField::Custom {{ .. }}"),
        }
    }
}

/// F(x) = k / (k - Phi(x)), the conformal factor tying the scalar-potential
/// description to the purely metric one on the shell K = k.
///
/// Fails with [`Error::DualSingularity`] when |k - Phi| falls inside the
/// guard `delta_sing` (default `1e-8 |k|`), where the correspondence breaks
/// down.
pub fn conformal_factor(
    k: f64,
    phi: &ScalarField,
    x: &SpacetimePoint,
    delta_sing: Option<f64>,
) -> Result<f64> {
    let guard = delta_sing.unwrap_or(DELTA_SING_REL * k.abs());
    let gap = k - phi.value(x);
    if gap.abs() <= guard {
        return Err(Error::DualSingularity {
            gap: gap.abs(),
            guard,
        });
    }
    Ok(k / gap)
}

/// k_mu = U_mu (U.b) + b_mu, the projection vector orthogonal to U by
/// construction: k.U = (U.b)(U.U + 1) = 0 on the unit hyperboloid.
///
/// Fails with [`Error::DegenerateK`] when b is parallel to U and the result
/// collapses to zero.
pub fn k_vector(g: &Metric4, u_co: &[f64; 4], b_co: &[f64; 4]) -> Result<[f64; 4]> {
    let u_contra = g.raise(u_co);
    let ub = dot4(&u_contra, b_co);
    let mut k = [0.0; 4];
    for mu in 0..DIM {
        k[mu] = u_co[mu] * ub + b_co[mu];
    }
    let knorm = dot4(&k, &k).sqrt();
    let bnorm = dot4(b_co, b_co).sqrt();
    if knorm < K_DEGENERATE_REL * bnorm {
        return Err(Error::DegenerateK { knorm, bnorm });
    }
    Ok(k)
}

/// Rescale a timelike covariant vector onto the unit hyperboloid
/// U = v / sqrt(-v.v), so that g^{mu nu} U_mu U_nu = -1.
pub fn normalize_u(g: &Metric4, v_co: &[f64; 4]) -> Result<[f64; 4]> {
    let norm = g.dot_co(v_co, v_co);
    if norm >= 0.0 {
        return Err(Error::NotTimelike { norm });
    }
    let scale = 1.0 / (-norm).sqrt();
    Ok([
        v_co[0] * scale,
        v_co[1] * scale,
        v_co[2] * scale,
        v_co[3] * scale,
    ])
}

/// The Bekenstein-Sanders-type vector field U_mu(x), kept on the unit
/// hyperboloid U.U = -1 at every evaluated point.
pub enum VectorFieldU {
    /// A fixed covariant direction renormalized pointwise under the metric.
    ConstantNormalized { v: [f64; 4] },
    /// Boost profile U = (-cosh chi, ..., sinh chi, ...) with rapidity
    /// chi = a_mu x^mu along spatial axis `axis`. Exactly unit timelike
    /// under the Minkowski metric.
    Rapidity { a: [f64; 4], axis: usize },
    /// User profile; must satisfy the normalization to 1e-10 on its own.
    Custom { u: Box<VectorFn> },
}

impl VectorFieldU {
    /// U_mu at `x`, validated against the unit-norm invariant.
    pub fn eval(&self, metric: &MetricField, x: &SpacetimePoint) -> Result<[f64; 4]> {
        let g = metric.eval(x)?;
        let u = match self {
            VectorFieldU::ConstantNormalized { v } => normalize_u(&g, v)?,
            VectorFieldU::Rapidity { a, axis } => {
                let s = dot4(a, &x.x);
                let mut u = [0.0; 4];
                u[0] = -s.cosh();
                u[*axis] = s.sinh();
                u
            }
            VectorFieldU::Custom { u } => u(x),
        };
        let excess = g.dot_co(&u, &u) + 1.0;
        if excess.abs() > U_NORM_TOL {
            return Err(Error::NormViolation { excess });
        }
        Ok(u)
    }

    /// Derivatives `out[mu][nu]` = d U_mu / d x^nu.
    pub fn deriv(&self, metric: &MetricField, x: &SpacetimePoint) -> Result<[[f64; 4]; 4]> {
        match self {
            VectorFieldU::ConstantNormalized { v } => {
                // U = v Q^{-1/2}, Q = -g^{ab} v_a v_b
                let g = metric.eval(x)?;
                let dinv = metric.deriv(x)?;
                let q = -g.dot_co(v, v);
                if q <= 0.0 {
                    return Err(Error::NotTimelike { norm: -q });
                }
                let qm32 = q.powf(-1.5);
                let mut out = [[0.0; 4]; 4];
                for nu in 0..DIM {
                    let mut dq = 0.0;
                    for a in 0..DIM {
                        for b in 0..DIM {
                            dq -= dinv[nu][a][b] * v[a] * v[b];
                        }
                    }
                    for mu in 0..DIM {
                        out[mu][nu] = -0.5 * v[mu] * qm32 * dq;
                    }
                }
                Ok(out)
            }
            VectorFieldU::Rapidity { a, axis } => {
                let s = dot4(a, &x.x);
                let mut dds = [0.0; 4]; // dU_mu/ds
                dds[0] = -s.sinh();
                dds[*axis] = s.cosh();
                let mut out = [[0.0; 4]; 4];
                for mu in 0..DIM {
                    for nu in 0..DIM {
                        out[mu][nu] = dds[mu] * a[nu];
                    }
                }
                Ok(out)
            }
            VectorFieldU::Custom { u } => {
                let h = numerics::fd_step(x.norm_inf());
                let mut out = [[0.0; 4]; 4];
                for nu in 0..DIM {
                    let um2 = u(&x.shifted(nu, -2.0 * h));
                    let um1 = u(&x.shifted(nu, -h));
                    let up1 = u(&x.shifted(nu, h));
                    let up2 = u(&x.shifted(nu, 2.0 * h));
                    for mu in 0..DIM {
                        out[mu][nu] = numerics::stencil4(um2[mu], um1[mu], up1[mu], up2[mu], h);
                    }
                }
                Ok(out)
            }
        }
    }
}

impl core::fmt::Debug for VectorFieldU {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VectorFieldU::ConstantNormalized { v } => {
                write!(f, "VectorFieldU::ConstantNormalized {{ v: {v:?} }}")
            }
            VectorFieldU::Rapidity { a, axis } => {
                write!(f, "VectorFieldU::Rapidity {{ a: {a:?}, axis: {axis} }}")
            }
            VectorFieldU::Custom { .. } => write!(f, "VectorFieldU::Custom {{ .. }}"),
        }
    }
}

/// Exactly antisymmetric 4x4 matrix, stored as a full component array whose
/// lower triangle mirrors the upper with flipped sign.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Antisym4 {
    m: Mat4,
}

impl Antisym4 {
    pub fn zero() -> Self {
        Self { m: [[0.0; 4]; 4] }
    }

    /// Build from the six upper-triangle components in the order
    /// (01, 02, 03, 12, 13, 23).
    pub fn from_upper(u: [f64; 6]) -> Self {
        let mut m = [[0.0; 4]; 4];
        let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (&(i, j), &v) in idx.iter().zip(u.iter()) {
            m[i][j] = v;
            m[j][i] = -v;
        }
        Self { m }
    }

    pub fn mat(&self) -> &Mat4 {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut m = self.m;
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v *= c;
            }
        }
        Self { m }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.m;
        for i in 0..DIM {
            for j in 0..DIM {
                m[i][j] += other.m[i][j];
            }
        }
        Self { m }
    }

    pub fn frobenius(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        numerics::max_abs16(&self.m)
    }
}

/// Profile of the antisymmetric generator coefficient omega(s), a matrix
/// function of the single scalar s = k.x, with its first two derivatives in
/// closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum OmegaProfile {
    /// omega(s) = c0 + s c1 + s^2/2 c2
    Poly {
        c0: Antisym4,
        c1: Antisym4,
        c2: Antisym4,
    },
    /// omega(s) = sin(freq s) amp
    Harmonic { amp: Antisym4, freq: f64 },
}

impl OmegaProfile {
    pub fn constant(c0: Antisym4) -> Self {
        OmegaProfile::Poly {
            c0,
            c1: Antisym4::zero(),
            c2: Antisym4::zero(),
        }
    }

    pub fn linear(c1: Antisym4) -> Self {
        OmegaProfile::Poly {
            c0: Antisym4::zero(),
            c1,
            c2: Antisym4::zero(),
        }
    }

    pub fn value(&self, s: f64) -> Antisym4 {
        match self {
            OmegaProfile::Poly { c0, c1, c2 } => {
                c0.add(&c1.scaled(s)).add(&c2.scaled(0.5 * s * s))
            }
            OmegaProfile::Harmonic { amp, freq } => amp.scaled((freq * s).sin()),
        }
    }

    /// omega'(s)
    pub fn deriv1(&self, s: f64) -> Antisym4 {
        match self {
            OmegaProfile::Poly { c1, c2, .. } => c1.add(&c2.scaled(s)),
            OmegaProfile::Harmonic { amp, freq } => amp.scaled(freq * (freq * s).cos()),
        }
    }

    /// omega''(s)
    pub fn deriv2(&self, s: f64) -> Antisym4 {
        match self {
            OmegaProfile::Poly { c2, .. } => *c2,
            OmegaProfile::Harmonic { amp, freq } => {
                amp.scaled(-freq * freq * (freq * s).sin())
            }
        }
    }

    /// Uniform rescale omega -> lambda omega (scales all derivatives too).
    pub fn scaled(&self, lambda: f64) -> Self {
        match self {
            OmegaProfile::Poly { c0, c1, c2 } => OmegaProfile::Poly {
                c0: c0.scaled(lambda),
                c1: c1.scaled(lambda),
                c2: c2.scaled(lambda),
            },
            OmegaProfile::Harmonic { amp, freq } => OmegaProfile::Harmonic {
                amp: amp.scaled(lambda),
                freq: *freq,
            },
        }
    }
}

/// Full generator data of the infinitesimal gauge transformation: the
/// coefficient omega(s) with its derivatives, the projection seed b (nonzero,
/// not parallel to U), and the coupling epsilon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeGenerator {
    pub omega: OmegaProfile,
    pub b: [f64; 4],
    pub eps: f64,
}

impl GaugeGenerator {
    pub fn new(omega: OmegaProfile, b: [f64; 4], eps: f64) -> Self {
        Self { omega, b, eps }
    }

    /// Copy with omega -> lambda omega.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            omega: self.omega.scaled(lambda),
            b: self.b,
            eps: self.eps,
        }
    }
}
