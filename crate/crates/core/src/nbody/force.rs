use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Below this fraction of sigma the pair force magnitude is held constant.
pub const CLAMP_FRACTION: f64 = 0.5;

/// Radial force magnitude at separation `r`; positive is repulsive.
fn lj_magnitude(r: f64, epsilon: f64, sigma: f64) -> f64 {
    let r = r.max(CLAMP_FRACTION * sigma);
    let s6 = (sigma / r).powi(6);
    24.0 * epsilon * (2.0 * s6 * s6 - s6) / r
}

/// Truncated Lennard-Jones force on a particle sitting at offset `delta`
/// from its neighbor.
pub fn lj_force(delta: Vec2, epsilon: f64, sigma: f64, r_cut: f64) -> Result<Vec2> {
    let r2 = delta.norm_sq();
    if r2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(lj_force_r2(delta, r2, epsilon, sigma, r_cut))
}

#[inline]
pub(crate) fn lj_force_r2(delta: Vec2, r2: f64, epsilon: f64, sigma: f64, r_cut: f64) -> Vec2 {
    if r2 >= r_cut * r_cut {
        return Vec2::ZERO;
    }
    let r = r2.sqrt();
    delta * (lj_magnitude(r, epsilon, sigma) / r)
}

/// Unshifted Lennard-Jones pair energy, zero beyond the cut-off.
pub fn lj_potential(r: f64, epsilon: f64, sigma: f64, r_cut: f64) -> f64 {
    if r >= r_cut {
        return 0.0;
    }
    let s6 = (sigma / r).powi(6);
    4.0 * epsilon * (s6 * s6 - s6)
}
