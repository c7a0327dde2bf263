//! Comparison schemes: MED on-off energy signaling and trained ZF.
//!
//! The MED baseline sends one slot of on-off amplitude signaling per user,
//! with on-energies chosen as powers of two so the receive-energy levels
//! form a uniform grid whose spacing (the minimum Euclidean distance between
//! levels) is maximized under the per-user power budgets. Antipodal signaling
//! buys nothing for an energy detector, so "two-level" here means on-off.
//!
//! The trained ZF baseline spends `K` slots on orthogonal pilots, estimates
//! the composite channel by least squares, then zero-forces one 64-QAM data
//! slot per user.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::design::UserProfile;
use crate::error::Error;
use crate::mat::{solve_hermitian, solve_hermitian_multi, Mat};
use crate::udcg::BitWord;
use crate::Result;

/// On-off energy design for one-slot multiuser signaling.
#[derive(Debug, Clone, PartialEq)]
pub struct MedDesign {
    /// Uniform receive-energy level spacing.
    pub level_spacing: f64,
    /// The `2^K` receive-energy levels `{0, delta, ..., (2^K - 1) delta}`.
    pub levels: Vec<f64>,
    /// Per-user transmit amplitude when on (off is zero).
    pub on_amplitudes: Vec<f64>,
}

fn validate_sorted_profiles(profiles: &[UserProfile]) -> Result<()> {
    if profiles.is_empty() {
        return Err(Error::InvalidArgument("at least one user profile required"));
    }
    for pr in profiles {
        let ok = pr.power > 0.0 && pr.power.is_finite() && pr.beta > 0.0 && pr.beta.is_finite();
        if !ok {
            return Err(Error::InvalidArgument("user power and gain must be positive"));
        }
    }
    if profiles.windows(2).any(|w| w[0].budget() > w[1].budget()) {
        return Err(Error::InvalidArgument("profiles must be sorted by budget (see sort_users)"));
    }
    Ok(())
}

/// Chooses on-energies `beta_k A_k^2 = 2^k * delta` (0-based `k`) with the
/// level spacing maximized under the duty-cycled average power constraint
/// `A_k^2 / 2 <= P_k`, i.e. `delta = min_k 2 P_k beta_k / 2^k`.
pub fn med_design(profiles: &[UserProfile]) -> Result<MedDesign> {
    validate_sorted_profiles(profiles)?;
    let users = profiles.len();
    if users > 16 {
        return Err(Error::UnsupportedSize("too many users for energy-level enumeration"));
    }
    let delta = profiles
        .iter()
        .enumerate()
        .map(|(k, pr)| 2.0 * pr.budget() / (k as f64).exp2())
        .fold(f64::INFINITY, f64::min);
    let levels: Vec<f64> = (0..1usize << users).map(|m_| m_ as f64 * delta).collect();
    let on_amplitudes: Vec<f64> = profiles
        .iter()
        .enumerate()
        .map(|(k, pr)| ((k as f64).exp2() * delta / pr.beta).sqrt())
        .collect();
    Ok(MedDesign { level_spacing: delta, levels, on_amplitudes })
}

impl MedDesign {
    pub fn users(&self) -> usize {
        self.on_amplitudes.len()
    }

    /// The `K x 1` transmit column for a word of one bit per user
    /// (bit set = on).
    pub fn tx_column(&self, word: &BitWord) -> Result<Mat> {
        if word.len() != self.users() {
            return Err(Error::DimensionMismatch("one bit per user expected"));
        }
        let mut x = Mat::zeros(self.users(), 1);
        for (k, &bit) in word.bits().iter().enumerate() {
            if bit {
                x.set(k, 0, Complex64::new(self.on_amplitudes[k], 0.0));
            }
        }
        Ok(x)
    }
}

/// Energy detection: quantizes `|y|^2 / M - sigma2` to the nearest level
/// (ties round down) and unpacks the level index into per-user bits.
pub fn med_detect(y: &[Complex64], design: &MedDesign, sigma2: f64) -> BitWord {
    let m = y.len().max(1) as f64;
    let t = y.iter().map(|v| v.norm_sqr()).sum::<f64>() / m - sigma2;
    let top = (design.levels.len() - 1) as f64;
    let index = (t / design.level_spacing - 0.5).ceil().clamp(0.0, top) as usize;
    BitWord::from_index(index, design.users())
}

/// 3-bit Gray code of each PAM index, and its inverse.
const GRAY3: [u8; 8] = [0, 1, 3, 2, 6, 7, 5, 4];
const GRAY3_INV: [u8; 8] = [0, 1, 3, 2, 7, 6, 4, 5];

/// Unit-average-energy 64-QAM point for a 6-bit label (high 3 bits real
/// axis, low 3 bits imaginary axis, Gray-coded per axis).
pub fn qam64_point(label: u8) -> Complex64 {
    let scale = 1.0 / 42.0_f64.sqrt();
    let axis = |g: u8| (2.0 * GRAY3_INV[g as usize] as f64 - 7.0) * scale;
    Complex64::new(axis((label >> 3) & 7), axis(label & 7))
}

/// Nearest-point 64-QAM slicer, inverse of [`qam64_point`].
pub fn qam64_slice(z: Complex64) -> u8 {
    let scale = 42.0_f64.sqrt();
    let axis = |v: f64| {
        let idx = ((v * scale + 7.0) / 2.0).round().clamp(0.0, 7.0) as usize;
        GRAY3[idx]
    };
    axis(z.re) << 3 | axis(z.im)
}

/// Pilot matrix and block layout of the trained ZF baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct ZfBaselineConfig {
    /// `K x K` pilot slots: scaled-DFT rows, user `k` at power `P_k` every
    /// slot, mutually orthogonal across users.
    pub pilots: Mat,
    /// Pilot slots plus one data slot.
    pub block_len: usize,
}

impl ZfBaselineConfig {
    pub fn new(profiles: &[UserProfile]) -> Result<Self> {
        validate_sorted_profiles(profiles)?;
        let users = profiles.len();
        let pilots = Mat::from_fn(users, users, |k, t| {
            let phase = -2.0 * core::f64::consts::PI * (k * t) as f64 / users as f64;
            Complex64::from_polar(profiles[k].power.sqrt(), phase)
        });
        Ok(ZfBaselineConfig { pilots, block_len: users + 1 })
    }

    pub fn users(&self) -> usize {
        self.pilots.rows()
    }

    /// The `K x (K + 1)` transmit block: pilots followed by one 64-QAM data
    /// symbol per user at full power.
    pub fn tx_block(&self, labels: &[u8], profiles: &[UserProfile]) -> Result<Mat> {
        let users = self.users();
        if labels.len() != users || profiles.len() != users {
            return Err(Error::DimensionMismatch("one label and profile per user expected"));
        }
        let mut x = Mat::zeros(users, self.block_len);
        for k in 0..users {
            for t in 0..users {
                x.set(k, t, self.pilots.get(k, t));
            }
            x.set(k, users, qam64_point(labels[k]) * profiles[k].power.sqrt());
        }
        Ok(x)
    }
}

/// LS channel estimation over the pilot slots, then ZF equalization and
/// per-user 64-QAM slicing of the data slot. Returns one 6-bit label per
/// user.
pub fn zf_train_detect(
    y: &Mat,
    cfg: &ZfBaselineConfig,
    profiles: &[UserProfile],
) -> Result<Vec<u8>> {
    let users = cfg.users();
    if profiles.len() != users {
        return Err(Error::DimensionMismatch("one profile per user expected"));
    }
    if y.cols() != cfg.block_len || y.rows() < users {
        return Err(Error::DimensionMismatch("received block must be M x (K + 1) with M >= K"));
    }
    let antennas = y.rows();
    let y_pilot = Mat::from_fn(antennas, users, |m_, t| y.get(m_, t));
    let y_data = y.col(users);

    // H_hat = Y_p X_p^H (X_p X_p^H)^{-1}; computed as
    // H_hat^H = (X_p X_p^H)^{-1} (Y_p X_p^H)^H since the pilot Gram is
    // Hermitian (diagonal, in fact, for the DFT pilots).
    let pilot_gram = cfg.pilots.mul(&cfg.pilots.hermitian());
    let cross = y_pilot.mul(&cfg.pilots.hermitian());
    let h_hat_h = solve_hermitian_multi(&pilot_gram, &cross.hermitian())
        .ok_or(Error::DetectionFailure("pilot Gram is singular"))?;

    // x_hat = (H^H H)^{-1} H^H y_data.
    let equalizer_gram = h_hat_h.mul(&h_hat_h.hermitian());
    let matched = h_hat_h.mul_vec(&y_data);
    let x_hat = solve_hermitian(&equalizer_gram, &matched)
        .ok_or(Error::DetectionFailure("estimated channel is rank deficient"))?;

    Ok((0..users)
        .map(|k| qam64_slice(x_hat[k] / profiles[k].power.sqrt()))
        .collect())
}
