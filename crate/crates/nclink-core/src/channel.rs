//! Large-scale and small-scale channel models.
//!
//! The link budget follows a log-distance path-loss model with log-normal
//! shadowing, valid from a reference distance `d0` outward; small-scale
//! fading is i.i.d. Rayleigh, quasi-static over one transmission block. All
//! internal math is in watts and linear gains; dB only appears at the
//! interfaces that are naturally logarithmic.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::mat::Mat;
use crate::rng::{BlockStreams, StreamRng, StreamRole};
use crate::Result;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.38e-23;
/// Propagation speed used for the carrier wavelength, m/s.
pub const PROPAGATION_SPEED: f64 = 3.0e8;

/// Radio-level constants of the deployment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Path-loss reference distance `d0`, m.
    pub reference_distance_m: f64,
    /// Path-loss exponent.
    pub path_loss_exponent: f64,
    /// Shadowing standard deviation, dB.
    pub shadowing_std_db: f64,
    /// Receiver bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// Receiver noise figure, dB.
    pub noise_figure_db: f64,
    /// Reference temperature, K.
    pub temperature_k: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            carrier_hz: 3.0e9,
            reference_distance_m: 100.0,
            path_loss_exponent: 3.71,
            shadowing_std_db: 3.16,
            bandwidth_hz: 2.0e7,
            noise_figure_db: 6.0,
            temperature_k: 290.0,
        }
    }
}

impl RadioParams {
    pub fn wavelength_m(&self) -> f64 {
        PROPAGATION_SPEED / self.carrier_hz
    }

    /// Receiver noise power `k0 T0 10^(F0/10) B` in watts.
    pub fn noise_power_w(&self) -> f64 {
        BOLTZMANN
            * self.temperature_k
            * 10.0_f64.powf(self.noise_figure_db / 10.0)
            * self.bandwidth_hz
    }
}

/// Large-scale gain in dB at `distance_m` with shadowing term `psi_db`:
/// `20 log10(lambda / 4 pi d0) - 10 gamma log10(dist / d0) - psi`.
pub fn path_loss_db(distance_m: f64, params: &RadioParams, psi_db: f64) -> Result<f64> {
    if !(distance_m >= params.reference_distance_m) {
        return Err(Error::OutOfModelRange("distance below the path-loss reference distance"));
    }
    let lambda = params.wavelength_m();
    let reference =
        20.0 * (lambda / (4.0 * core::f64::consts::PI * params.reference_distance_m)).log10();
    Ok(reference
        - 10.0 * params.path_loss_exponent * (distance_m / params.reference_distance_m).log10()
        - psi_db)
}

/// Where users sit relative to the base station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusPolicy {
    /// Every user at the same fixed distance (meters).
    FixedDistance(f64),
    /// Users placed area-uniformly in the annulus between the model's
    /// reference distance and `radius_m`.
    UniformDisk { radius_m: f64 },
}

/// Draws the per-user large-scale gains `beta_k` (linear) for one block.
///
/// Placement and shadowing randomness come from their dedicated streams of
/// `streams`, so schemes sharing a `(seed, block)` see identical gains.
pub fn draw_large_scale(
    users: usize,
    policy: RadiusPolicy,
    params: &RadioParams,
    streams: &BlockStreams,
) -> Result<Vec<f64>> {
    if users == 0 {
        return Err(Error::InvalidArgument("user count must be positive"));
    }
    let d0 = params.reference_distance_m;
    let mut placement = streams.stream(StreamRole::Placement);
    let mut shadowing = streams.stream(StreamRole::Shadowing);
    let mut betas = Vec::with_capacity(users);
    for _ in 0..users {
        let dist = match policy {
            RadiusPolicy::FixedDistance(d) => d,
            RadiusPolicy::UniformDisk { radius_m } => {
                if radius_m < d0 {
                    return Err(Error::OutOfModelRange("cell radius below reference distance"));
                }
                // Area-uniform over the annulus [d0, R].
                let u = placement.next_f64();
                (d0 * d0 + u * (radius_m * radius_m - d0 * d0)).sqrt()
            }
        };
        let psi = params.shadowing_std_db * shadowing.next_gaussian();
        let pl = path_loss_db(dist, params, psi)?;
        betas.push(10.0_f64.powf(pl / 10.0));
    }
    Ok(betas)
}

/// One block's channel: fading matrix plus large-scale gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `M x K` small-scale fading, i.i.d. unit-variance circular Gaussian.
    pub gains: Mat,
    /// Per-user large-scale gains `beta_k` (linear).
    pub betas: Vec<f64>,
}

impl ChannelRealization {
    /// Draws the fading for `antennas` receive antennas.
    pub fn draw(antennas: usize, betas: Vec<f64>, rng: &mut StreamRng) -> Self {
        let users = betas.len();
        let gains = Mat::from_fn(antennas, users, |_, _| rng.next_cscg(1.0));
        ChannelRealization { gains, betas }
    }
}

/// Propagates a `K x T` block: `Y = G D^(1/2) X + noise`, noise entries
/// i.i.d. circular complex Gaussian with variance `sigma2` per entry.
pub fn apply_channel(
    x: &Mat,
    chan: &ChannelRealization,
    sigma2: f64,
    noise: &mut StreamRng,
) -> Result<Mat> {
    if x.rows() != chan.betas.len() || chan.gains.cols() != x.rows() {
        return Err(Error::DimensionMismatch("users in block and channel must agree"));
    }
    if !(sigma2 >= 0.0) || !sigma2.is_finite() {
        return Err(Error::InvalidArgument("noise power must be nonnegative and finite"));
    }
    let sqrt_betas: Vec<f64> = chan.betas.iter().map(|b| b.sqrt()).collect();
    let mut y = chan.gains.mul(&x.scale_rows(&sqrt_betas));
    if sigma2 > 0.0 {
        for m in 0..y.rows() {
            for t in 0..y.cols() {
                let v = y.get(m, t);
                y.set(m, t, v + noise.next_cscg(sigma2));
            }
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::BlockStreams;
    use num_complex::Complex64;

    #[test]
    fn path_loss_matches_reference_values() {
        let p = RadioParams::default();
        assert!((p.wavelength_m() - 0.1).abs() < 1e-12);
        let at_ref = path_loss_db(100.0, &p, 0.0).unwrap();
        assert!((at_ref - -81.98420).abs() < 5e-4, "got {at_ref}");
        let at_km = path_loss_db(1000.0, &p, 0.0).unwrap();
        assert!((at_km - (at_ref - 37.1)).abs() < 1e-9, "got {at_km}");
        assert!(matches!(
            path_loss_db(50.0, &p, 0.0),
            Err(Error::OutOfModelRange(_))
        ));
        // Shadowing enters with a minus sign.
        let shadowed = path_loss_db(100.0, &p, 2.0).unwrap();
        assert!((shadowed - (at_ref - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn noise_power_matches_link_budget() {
        let p = RadioParams::default();
        assert!((p.noise_power_w() - 3.1864497931101924e-13).abs() < 1e-25);
        let floor = RadioParams { noise_figure_db: 0.0, ..p };
        assert!((floor.noise_power_w() - 8.004e-14).abs() < 5e-17);
        let wide = RadioParams { bandwidth_hz: 4.0e7, ..p };
        assert!((wide.noise_power_w() - 2.0 * p.noise_power_w()).abs() < 1e-26);
    }

    #[test]
    fn fixed_distance_without_shadowing_gives_constant_beta() {
        let params = RadioParams { shadowing_std_db: 0.0, ..RadioParams::default() };
        let streams = BlockStreams::new(5, 0);
        let betas =
            draw_large_scale(3, RadiusPolicy::FixedDistance(100.0), &params, &streams).unwrap();
        for b in betas {
            assert!((b - 6.33257397e-9).abs() < 1e-15, "got {b}");
        }
    }

    #[test]
    fn noise_free_deterministic_channel() {
        let mut ones = Mat::zeros(4, 1);
        for m in 0..4 {
            ones.set(m, 0, Complex64::new(1.0, 0.0));
        }
        let chan = ChannelRealization { gains: ones, betas: alloc::vec![1.0] };
        let x = Mat::from_fn(1, 2, |_, _| Complex64::new(1.0, 0.0));
        let mut noise = BlockStreams::new(0, 0).stream(StreamRole::Noise);
        let y = apply_channel(&x, &chan, 0.0, &mut noise).unwrap();
        for m in 0..4 {
            for t in 0..2 {
                assert_eq!(y.get(m, t), Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn apply_channel_rejects_mismatched_dimensions() {
        let chan = ChannelRealization {
            gains: Mat::zeros(4, 2),
            betas: alloc::vec![1.0, 1.0],
        };
        let x = Mat::zeros(3, 2);
        assert!(matches!(
            apply_channel(&x, &chan, 0.0, &mut BlockStreams::new(0, 0).stream(StreamRole::Noise)),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
