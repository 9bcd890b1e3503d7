//! Fixed-dimension tensor arithmetic over spacetime: metrics with signature
//! (-,+,+,+), inverses, index raising/lowering, connection coefficients, and
//! a uniform derivative contract for position-dependent metric fields.

use alloc::boxed::Box;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics;

/// Spacetime dimension. Everything in this crate is hardwired to 4.
pub const DIM: usize = 4;

/// Symmetric tolerance accepted when constructing a [`Metric4`].
pub const SYM_TOL: f64 = 1e-14;
/// Tolerance on `g * inv(g) - I` accepted when constructing a [`Metric4`].
pub const INV_TOL: f64 = 1e-12;
/// Relative determinant threshold below which a metric counts as singular.
pub const DET_REL_TOL: f64 = 1e-12;

/// Plain 4x4 matrix of components.
pub type Mat4 = [[f64; 4]; 4];
/// Rank-3 component array; by convention the first index is the derivative
/// direction, e.g. `d[mu][la][ga]` = d g^{la ga} / d x^mu.
pub type Rank3 = [[[f64; 4]; 4]; 4];

/// Event coordinates x^mu (geometric units, c = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimePoint {
    pub x: [f64; 4],
}

impl SpacetimePoint {
    pub fn new(x: [f64; 4]) -> Self {
        Self { x }
    }

    /// Largest absolute coordinate, used to scale finite-difference steps.
    pub fn norm_inf(&self) -> f64 {
        numerics::max_abs4(&self.x)
    }

    /// Copy shifted by `delta` along coordinate axis `mu`.
    pub fn shifted(&self, mu: usize, delta: f64) -> Self {
        let mut x = self.x;
        x[mu] += delta;
        Self { x }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|c| c.is_finite())
    }
}

impl From<[f64; 4]> for SpacetimePoint {
    fn from(x: [f64; 4]) -> Self {
        Self { x }
    }
}

/// The Minkowski components diag(-1, 1, 1, 1).
pub fn minkowski_mat() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    m[0][0] = -1.0;
    m[1][1] = 1.0;
    m[2][2] = 1.0;
    m[3][3] = 1.0;
    m
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, bk) in b.iter().enumerate() {
                acc += a[i][k] * bk[j];
            }
            *cell = acc;
        }
    }
    out
}

pub fn mat_vec(a: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2] + a[i][3] * v[3];
    }
    out
}

pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn max_asymmetry(m: &Mat4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for j in i + 1..DIM {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst
}

/// Force exact symmetry by mirroring the upper triangle.
fn symmetrize(m: &mut Mat4) {
    for i in 0..DIM {
        for j in i + 1..DIM {
            m[j][i] = m[i][j];
        }
    }
}

/// Invert a symmetric, nonsingular 4x4 matrix by Gauss-Jordan elimination
/// with partial pivoting. The result is exactly symmetric (mirrored upper
/// triangle). Fails with [`Error::SingularMetric`] when |det| falls below
/// `DET_REL_TOL * scale^4`, `scale` being the largest input entry.
pub fn invert_metric(g: &Mat4) -> Result<Mat4> {
    let asym = max_asymmetry(g);
    if asym > SYM_TOL {
        return Err(Error::NotSymmetric { asym });
    }
    let scale = numerics::max_abs16(g).max(f64::MIN_POSITIVE);
    let threshold = DET_REL_TOL * scale.powi(4);

    // augmented [g | I]
    let mut a = [[0.0_f64; 8]; 4];
    for i in 0..DIM {
        a[i][..4].copy_from_slice(&g[i]);
        a[i][4 + i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..DIM {
        let mut piv = col;
        for row in col + 1..DIM {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        if p.abs() < f64::MIN_POSITIVE {
            return Err(Error::SingularMetric { det: 0.0, threshold });
        }
        let inv_p = 1.0 / p;
        for k in 0..8 {
            a[col][k] *= inv_p;
        }
        for row in 0..DIM {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor != 0.0 {
                for k in 0..8 {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    if det.abs() < threshold {
        return Err(Error::SingularMetric {
            det: det.abs(),
            threshold,
        });
    }
    let mut inv = [[0.0; 4]; 4];
    for i in 0..DIM {
        inv[i].copy_from_slice(&a[i][4..]);
    }
    symmetrize(&mut inv);
    Ok(inv)
}

/// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues(m: &Mat4) -> [f64; 4] {
    let mut a = *m;
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..DIM {
            for j in i + 1..DIM {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..DIM - 1 {
            for q in p + 1..DIM {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..DIM {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..DIM {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    [a[0][0], a[1][1], a[2][2], a[3][3]]
}

fn check_lorentzian(g: &Mat4) -> Result<()> {
    let scale = numerics::max_abs16(g).max(f64::MIN_POSITIVE);
    let eig = sym_eigenvalues(g);
    let mut neg = 0;
    let mut pos = 0;
    for &e in &eig {
        if e < -1e-12 * scale {
            neg += 1;
        } else if e > 1e-12 * scale {
            pos += 1;
        }
    }
    if neg != 1 || pos != 3 {
        return Err(Error::WrongSignature { neg, pos });
    }
    Ok(())
}

/// Pointwise metric value: the covariant components g_{mu nu} together with
/// the contravariant inverse g^{mu nu}, both stored exactly symmetric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric4 {
    g: Mat4,
    inv: Mat4,
}

impl Metric4 {
    /// Validated construction from covariant components: checks symmetry
    /// (1e-14 absolute), invertibility, the inverse residual (1e-12) and the
    /// (-,+,+,+) eigenvalue signature.
    pub fn new(g: Mat4) -> Result<Self> {
        let inv = invert_metric(&g)?;
        check_lorentzian(&g)?;
        let m = Self { g, inv };
        let res = m.inverse_residual();
        if res > INV_TOL {
            return Err(Error::SingularMetric {
                det: res,
                threshold: INV_TOL,
            });
        }
        Ok(m)
    }

    /// Validated construction from contravariant components g^{mu nu}.
    pub fn from_contravariant(inv: Mat4) -> Result<Self> {
        let g = invert_metric(&inv)?;
        check_lorentzian(&g)?;
        Ok(Self { g, inv })
    }

    /// Trusted construction for analytic built-ins supplying both closed
    /// forms. Callers guarantee symmetry, mutual inversion and signature.
    pub(crate) fn from_parts_unchecked(g: Mat4, inv: Mat4) -> Self {
        Self { g, inv }
    }

    pub fn minkowski() -> Self {
        Self {
            g: minkowski_mat(),
            inv: minkowski_mat(),
        }
    }

    /// Covariant components g_{mu nu}.
    pub fn lower_mat(&self) -> &Mat4 {
        &self.g
    }

    /// Contravariant components g^{mu nu}.
    pub fn upper_mat(&self) -> &Mat4 {
        &self.inv
    }

    /// v^mu = g^{mu nu} v_nu
    pub fn raise(&self, v_co: &[f64; 4]) -> [f64; 4] {
        mat_vec(&self.inv, v_co)
    }

    /// v_mu = g_{mu nu} v^nu
    pub fn lower(&self, v_contra: &[f64; 4]) -> [f64; 4] {
        mat_vec(&self.g, v_contra)
    }

    /// g^{mu nu} a_mu b_nu for covariant vectors.
    pub fn dot_co(&self, a: &[f64; 4], b: &[f64; 4]) -> f64 {
        dot4(&self.raise(a), b)
    }

    /// g_{mu nu} a^mu b^nu for contravariant vectors.
    pub fn dot_contra(&self, a: &[f64; 4], b: &[f64; 4]) -> f64 {
        dot4(&self.lower(a), b)
    }

    /// max |(g * inv)[i][j] - delta_ij|
    pub fn inverse_residual(&self) -> f64 {
        let prod = mat_mul(&self.g, &self.inv);
        let mut worst = 0.0_f64;
        for (i, row) in prod.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((c - target).abs());
            }
        }
        worst
    }

    /// Conformal rescale: returns the metric with contravariant components
    /// `factor * g^{mu nu}` (covariant components divided by `factor`).
    pub fn conformal_rescale(&self, factor: f64) -> Self {
        let mut g = self.g;
        let mut inv = self.inv;
        let inv_factor = 1.0 / factor;
        for i in 0..DIM {
            for j in 0..DIM {
                g[i][j] *= inv_factor;
                inv[i][j] *= factor;
            }
        }
        Self { g, inv }
    }
}

/// v^mu = g^{mu nu} v_nu
pub fn raise_index(metric: &Metric4, v_co: &[f64; 4]) -> [f64; 4] {
    metric.raise(v_co)
}

/// v_mu = g_{mu nu} v^nu
pub fn lower_index(metric: &Metric4, v_contra: &[f64; 4]) -> [f64; 4] {
    metric.lower(v_contra)
}

/// Connection coefficients Gamma^rho_{mu nu}, exactly symmetric in the lower
/// index pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    /// gamma[rho][mu][nu]
    pub gamma: Rank3,
}

/// Conformal exponent psi(x) for the conformally flat built-in e^{2 psi} eta.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConformalPsi {
    /// psi = a_mu x^mu
    Linear { a: [f64; 4] },
    /// psi = amp * exp(-|x_spatial|^2 / (2 sigma^2)), static.
    Gaussian { amp: f64, sigma: f64 },
}

impl ConformalPsi {
    pub fn value(&self, x: &SpacetimePoint) -> f64 {
        match self {
            ConformalPsi::Linear { a } => dot4(a, &x.x),
            ConformalPsi::Gaussian { amp, sigma } => {
                let r2 = x.x[1] * x.x[1] + x.x[2] * x.x[2] + x.x[3] * x.x[3];
                amp * (-r2 / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    pub fn gradient(&self, x: &SpacetimePoint) -> [f64; 4] {
        match self {
            ConformalPsi::Linear { a } => *a,
            ConformalPsi::Gaussian { amp: _, sigma } => {
                let val = self.value(x);
                let s2 = sigma * sigma;
                [
                    0.0,
                    -val * x.x[1] / s2,
                    -val * x.x[2] / s2,
                    -val * x.x[3] / s2,
                ]
            }
        }
    }
}

type MetricFn = dyn Fn(&SpacetimePoint) -> Mat4 + Send + Sync;

/// A position-dependent metric with first derivatives.
///
/// Built-in members supply closed-form derivatives of the contravariant
/// components; `Custom` metrics fall back to 4th-order central finite
/// differences with step `1e-5 * (1 + |x|)`.
pub enum MetricField {
    /// Flat diag(-1,+1,+1,+1).
    Minkowski,
    /// Static spherically symmetric metric in isotropic coordinates:
    /// g_00 = -((1 - M/2r)/(1 + M/2r))^2, g_ii = (1 + M/2r)^4. Valid for
    /// r > M/2.
    Isotropic { mass: f64 },
    /// Conformally flat e^{2 psi(x)} eta.
    ConformalFlat { psi: ConformalPsi },
    /// User-supplied covariant components; derivatives by finite differences.
    Custom {
        eval: Box<MetricFn>,
        /// Override for the finite-difference base step (default 1e-5).
        fd_step: Option<f64>,
    },
}

impl core::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MetricField::Minkowski => write!(f, "MetricField::Minkowski"),
            MetricField::Isotropic { mass } => {
                write!(f, "MetricField::Isotropic {{ mass: {mass} }}")
            }
            MetricField::ConformalFlat { psi } => {
                write!(f, "MetricField::ConformalFlat {{ psi: {psi:?} }}")
            }
            MetricField::Custom { .. } => write!(f, "MetricField::Custom {{ .. }}"),
        }
    }
}

struct IsotropicTerms {
    a: f64,
    b: f64,
    r: f64,
}

impl MetricField {
    pub fn custom(eval: impl Fn(&SpacetimePoint) -> Mat4 + Send + Sync + 'static) -> Self {
        MetricField::Custom {
            eval: Box::new(eval),
            fd_step: None,
        }
    }

    fn isotropic_terms(mass: f64, x: &SpacetimePoint) -> Result<IsotropicTerms> {
        let r = (x.x[1] * x.x[1] + x.x[2] * x.x[2] + x.x[3] * x.x[3]).sqrt();
        let a = 1.0 - mass / (2.0 * r);
        let b = 1.0 + mass / (2.0 * r);
        if r.is_nan() || r <= 0.5 * mass || a.abs() < 1e-12 {
            return Err(Error::SingularMetric {
                det: 0.0,
                threshold: DET_REL_TOL,
            });
        }
        Ok(IsotropicTerms { a, b, r })
    }

    /// Metric value at `x`.
    pub fn eval(&self, x: &SpacetimePoint) -> Result<Metric4> {
        match self {
            MetricField::Minkowski => Ok(Metric4::minkowski()),
            MetricField::Isotropic { mass } => {
                let IsotropicTerms { a, b, .. } = Self::isotropic_terms(*mass, x)?;
                let mut g = [[0.0; 4]; 4];
                let mut inv = [[0.0; 4]; 4];
                let ratio = a / b;
                g[0][0] = -(ratio * ratio);
                inv[0][0] = 1.0 / g[0][0];
                let b4 = b.powi(4);
                for i in 1..DIM {
                    g[i][i] = b4;
                    inv[i][i] = 1.0 / b4;
                }
                Ok(Metric4::from_parts_unchecked(g, inv))
            }
            MetricField::ConformalFlat { psi } => {
                let e2 = (2.0 * psi.value(x)).exp();
                let mut g = minkowski_mat();
                let mut inv = minkowski_mat();
                for i in 0..DIM {
                    g[i][i] *= e2;
                    inv[i][i] /= e2;
                }
                Ok(Metric4::from_parts_unchecked(g, inv))
            }
            MetricField::Custom { eval, .. } => Metric4::new(eval(x)),
        }
    }

    /// Derivatives of the contravariant components: `out[mu][la][ga]` =
    /// d g^{la ga} / d x^mu. Exactly symmetric in (la, ga).
    pub fn deriv(&self, x: &SpacetimePoint) -> Result<Rank3> {
        match self {
            MetricField::Minkowski => Ok([[[0.0; 4]; 4]; 4]),
            MetricField::Isotropic { mass } => {
                let IsotropicTerms { a, b, r } = Self::isotropic_terms(*mass, x)?;
                let r3 = r.powi(3);
                let d00 = 2.0 * mass * b / (a.powi(3) * r3);
                let dii = 2.0 * mass / (b.powi(5) * r3);
                let mut out = [[[0.0; 4]; 4]; 4];
                for mu in 1..DIM {
                    out[mu][0][0] = d00 * x.x[mu];
                    for i in 1..DIM {
                        out[mu][i][i] = dii * x.x[mu];
                    }
                }
                Ok(out)
            }
            MetricField::ConformalFlat { psi } => {
                let e2neg = (-2.0 * psi.value(x)).exp();
                let grad = psi.gradient(x);
                let eta = minkowski_mat();
                let mut out = [[[0.0; 4]; 4]; 4];
                for mu in 0..DIM {
                    let factor = -2.0 * grad[mu] * e2neg;
                    for la in 0..DIM {
                        out[mu][la][la] = factor * eta[la][la];
                    }
                }
                Ok(out)
            }
            MetricField::Custom { fd_step, .. } => {
                let h = fd_step.unwrap_or(numerics::FD_STEP_BASE) * (1.0 + x.norm_inf());
                let mut out = [[[0.0; 4]; 4]; 4];
                for mu in 0..DIM {
                    let gm2 = *self.eval(&x.shifted(mu, -2.0 * h))?.upper_mat();
                    let gm1 = *self.eval(&x.shifted(mu, -h))?.upper_mat();
                    let gp1 = *self.eval(&x.shifted(mu, h))?.upper_mat();
                    let gp2 = *self.eval(&x.shifted(mu, 2.0 * h))?.upper_mat();
                    for la in 0..DIM {
                        for ga in la..DIM {
                            let d = numerics::stencil4(
                                gm2[la][ga],
                                gm1[la][ga],
                                gp1[la][ga],
                                gp2[la][ga],
                                h,
                            );
                            out[mu][la][ga] = d;
                            out[mu][ga][la] = d;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Derivatives of the covariant components via the inverse identity
    /// d g_{ab} = -(g . d g^{-1} . g)_{ab}, stored exactly symmetric.
    pub fn deriv_covariant(&self, x: &SpacetimePoint) -> Result<Rank3> {
        let m = self.eval(x)?;
        let dinv = self.deriv(x)?;
        let g = m.lower_mat();
        let mut out = [[[0.0; 4]; 4]; 4];
        for mu in 0..DIM {
            let tmp = mat_mul(g, &dinv[mu]);
            let full = mat_mul(&tmp, g);
            for a in 0..DIM {
                for b in a..DIM {
                    let v = -full[a][b];
                    out[mu][a][b] = v;
                    out[mu][b][a] = v;
                }
            }
        }
        Ok(out)
    }
}

/// Gamma^rho_{mu nu} = 1/2 g^{rho la} (d_nu g_{la mu} + d_mu g_{la nu} - d_la g_{mu nu})
///
/// Built from the field's derivative contract; exactly symmetric in (mu, nu).
pub fn christoffel(metric: &MetricField, x: &SpacetimePoint) -> Result<ConnectionCoefficients> {
    let m = metric.eval(x)?;
    let dcov = metric.deriv_covariant(x)?;
    let ginv = m.upper_mat();
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for rho in 0..DIM {
        for mu in 0..DIM {
            for nu in mu..DIM {
                let mut acc = 0.0;
                for la in 0..DIM {
                    acc += ginv[rho][la]
                        * (dcov[nu][la][mu] + dcov[mu][la][nu] - dcov[la][mu][nu]);
                }
                let v = 0.5 * acc;
                gamma[rho][mu][nu] = v;
                gamma[rho][nu][mu] = v;
            }
        }
    }
    Ok(ConnectionCoefficients { gamma })
}
