//! Small finite-difference and quadrature kernels shared by the physics
//! modules and by verification oracles.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default relative step used by fallback finite differences: h = BASE * (1 + |x|).
pub const FD_STEP_BASE: f64 = 1e-5;

/// Step scaled to the magnitude of the expansion point.
pub fn fd_step(scale: f64) -> f64 {
    FD_STEP_BASE * (1.0 + scale)
}

/// 4th-order central stencil (f(t-2h) - 8 f(t-h) + 8 f(t+h) - f(t+2h)) / 12h
/// from the four sampled values, with the symmetric pairs differenced first
/// so a constant input yields exactly zero.
#[inline]
pub fn stencil4(fm2: f64, fm1: f64, fp1: f64, fp2: f64, h: f64) -> f64 {
    ((fm2 - fp2) + 8.0 * (fp1 - fm1)) / (12.0 * h)
}

/// 4th-order central first derivative of a scalar function of one variable.
pub fn deriv4<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> f64 {
    stencil4(f(t - 2.0 * h), f(t - h), f(t + h), f(t + 2.0 * h), h)
}

/// Same stencil for fallible functions.
pub fn try_deriv4<F: Fn(f64) -> Result<f64>>(f: F, t: f64, h: f64) -> Result<f64> {
    Ok(stencil4(
        f(t - 2.0 * h)?,
        f(t - h)?,
        f(t + h)?,
        f(t + 2.0 * h)?,
        h,
    ))
}

/// 4th-order central first derivative of a uniformly sampled series.
///
/// Returns one value per interior sample (margin of 2 on each side), so the
/// output aligns with `values[2 .. n-2]`. Needs at least 5 samples.
pub fn series_deriv4(values: &[f64], h: f64) -> Result<Vec<f64>> {
    if values.len() < 5 {
        return Err(Error::TooFewSamples {
            n: values.len(),
            need: 5,
        });
    }
    Ok((2..values.len() - 2)
        .map(|j| stencil4(values[j - 2], values[j - 1], values[j + 1], values[j + 2], h))
        .collect())
}

/// Component-wise [`series_deriv4`] for a series of 4-vectors.
pub fn series_deriv4_vec(values: &[[f64; 4]], h: f64) -> Result<Vec<[f64; 4]>> {
    if values.len() < 5 {
        return Err(Error::TooFewSamples {
            n: values.len(),
            need: 5,
        });
    }
    Ok((2..values.len() - 2)
        .map(|j| {
            let mut d = [0.0; 4];
            for (c, out) in d.iter_mut().enumerate() {
                *out = stencil4(
                    values[j - 2][c],
                    values[j - 1][c],
                    values[j + 1][c],
                    values[j + 2][c],
                    h,
                );
            }
            d
        })
        .collect())
}

/// Cumulative integral of a uniformly sampled integrand, 4th-order accurate.
///
/// Interior intervals use the closed 4-point Newton-Cotes form
/// `h/24 (-f[j-2] + 13 f[j-1] + 13 f[j] - f[j+1])`; the first and last
/// interval use the one-sided Adams-Moulton form of the same order. Output
/// has the same length as the input, with `out[0] = 0`.
pub fn cumulative_integral(f: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = f.len();
    if n < 4 {
        return Err(Error::TooFewSamples { n, need: 4 });
    }
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    for j in 1..n {
        let seg = if j == 1 {
            h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        } else if j == n - 1 {
            h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4])
        } else {
            h / 24.0 * (-f[j - 2] + 13.0 * f[j - 1] + 13.0 * f[j] - f[j + 1])
        };
        out.push(out[j - 1] + seg);
    }
    Ok(out)
}

/// Component-wise [`cumulative_integral`] for 4-vector integrands.
pub fn cumulative_integral_vec(f: &[[f64; 4]], h: f64) -> Result<Vec<[f64; 4]>> {
    let n = f.len();
    if n < 4 {
        return Err(Error::TooFewSamples { n, need: 4 });
    }
    let mut per_axis = [const { Vec::new() }; 4];
    for (c, axis) in per_axis.iter_mut().enumerate() {
        let series: Vec<f64> = f.iter().map(|v| v[c]).collect();
        *axis = cumulative_integral(&series, h)?;
    }
    Ok((0..n)
        .map(|j| [per_axis[0][j], per_axis[1][j], per_axis[2][j], per_axis[3][j]])
        .collect())
}

/// Largest absolute component of a 4-vector.
pub fn max_abs4(v: &[f64; 4]) -> f64 {
    v.iter().fold(0.0_f64, |m, &c| m.max(c.abs()))
}

/// Largest absolute entry of a 4x4 matrix.
pub fn max_abs16(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().flatten().fold(0.0_f64, |acc, &c| acc.max(c.abs()))
}
