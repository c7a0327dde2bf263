//! Codeword assembly, noncoherent detection, and KL distances.
//!
//! Each two-slot codeword sends a known reference symbol in slot 1 and the
//! information symbol in slot 2, both scaled by `1/sqrt(beta_k)` so the
//! large-scale fading cancels at the receiver. The received block then has a
//! codeword-independent per-antenna covariance except for the single complex
//! cross term `c`, the transmitted sum symbol, and the ML detector reduces
//! to a search over the sum constellation driven by three O(M) reductions.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::design::{DesignSolution, GramStats, UserProfile};
use crate::error::Error;
use crate::mat::{cholesky, forward_substitute, Mat};
use crate::udcg::{BitWord, SubConstellationSet};
use crate::Result;

/// Relative slack allowed when checking the per-user power constraints;
/// absorbs rounding in the closed-form design where the binding user sits
/// exactly on the boundary.
const POWER_TOL: f64 = 1e-9;

/// One transmitted two-slot block.
#[derive(Debug, Clone, PartialEq)]
pub struct TxBlock {
    /// `K x 2` transmit symbols; column 0 is the reference slot.
    pub symbols: Mat,
    /// The information word the block encodes.
    pub word: BitWord,
}

/// One received two-slot block.
#[derive(Debug, Clone, PartialEq)]
pub struct RxBlock {
    pub slot1: Vec<Complex64>,
    pub slot2: Vec<Complex64>,
}

impl RxBlock {
    /// Splits an `M x 2` received matrix into its slots.
    pub fn from_mat(y: &Mat) -> Result<RxBlock> {
        if y.cols() != 2 {
            return Err(Error::DimensionMismatch("two received slots expected"));
        }
        Ok(RxBlock { slot1: y.col(0), slot2: y.col(1) })
    }

    pub fn antennas(&self) -> usize {
        self.slot1.len()
    }
}

/// Builds the transmit block for `word` under a feasible design.
///
/// Sorted user `k` compensates its own large-scale gain: the reference slot
/// carries `1/sqrt(p_j beta_k)` and the data slot
/// `sqrt(p_j) s_j / sqrt(beta_k)`, with `j` the user's assigned
/// sub-constellation and `s_j` its mapped symbol.
pub fn assemble_codeword(
    word: &BitWord,
    design: &DesignSolution,
    profiles: &[UserProfile],
    set: &SubConstellationSet,
) -> Result<TxBlock> {
    let users = design.users();
    if profiles.len() != users || set.users() != users {
        return Err(Error::DimensionMismatch("design, profiles, and set must agree on users"));
    }
    if (set.min_distance() - design.min_distance).abs() > 1e-12 * design.min_distance {
        return Err(Error::InvalidArgument("constellation scale does not match the design"));
    }
    for (k, &(s1, s2)) in design.slot_powers(profiles).iter().enumerate() {
        if s1 > profiles[k].power * (1.0 + POWER_TOL) || s2 > profiles[k].power * (1.0 + POWER_TOL)
        {
            return Err(Error::InvalidArgument("design violates a user power budget"));
        }
    }
    let symbols = set.map_bits(word)?;
    let mut x = Mat::zeros(users, 2);
    for k in 0..users {
        let j = design.assignment[k];
        let p = design.powers[j];
        let scale = 1.0 / profiles[k].beta.sqrt();
        x.set(k, 0, Complex64::new(scale / p.sqrt(), 0.0));
        x.set(k, 1, symbols[j] * (p.sqrt() * scale));
    }
    Ok(TxBlock { symbols: x, word: word.clone() })
}

/// Two-slot noncoherent ML detection over the sum constellation.
///
/// Minimizes
/// `[a |y2|^2 + b |y1|^2 - 2 Re(c y2^H y1)] / (ab - |c|^2) + M ln(ab - |c|^2)`
/// over candidate sum points `c`, where `a`, `b` are the codeword-independent
/// Gram constants of the design. Ties (measure zero under noise) resolve to
/// the lowest constellation index.
pub fn detect_ncml(
    rx: &RxBlock,
    design: &DesignSolution,
    set: &SubConstellationSet,
    sigma2: f64,
) -> Result<(Complex64, BitWord)> {
    let antennas = rx.antennas();
    if antennas == 0 || rx.slot2.len() != antennas {
        return Err(Error::DimensionMismatch("received slots must be nonempty and equal length"));
    }
    if set.users() != design.users() {
        return Err(Error::DimensionMismatch("design and set must agree on users"));
    }
    let (a, b) = design.gram_ab(sigma2);
    let m = antennas as f64;
    let norm1: f64 = rx.slot1.iter().map(|y| y.norm_sqr()).sum();
    let norm2: f64 = rx.slot2.iter().map(|y| y.norm_sqr()).sum();
    // r = y2^H y1; the candidate term needs Re(c * r).
    let r: Complex64 = rx.slot2.iter().zip(&rx.slot1).map(|(y2, y1)| y2.conj() * y1).sum();

    let mut best_index = 0usize;
    let mut best_obj = f64::INFINITY;
    for (index, &c) in set.sum_points().iter().enumerate() {
        let den = a * b - c.norm_sqr();
        if den <= 0.0 {
            return Err(Error::InternalConsistency("candidate Gram is not positive definite"));
        }
        let cross = c.re * r.re - c.im * r.im;
        let obj = (a * norm2 + b * norm1 - 2.0 * cross) / den + m * den.ln();
        if obj < best_obj {
            best_obj = obj;
            best_index = index;
        }
    }
    Ok((set.sum_points()[best_index], BitWord::from_index(best_index, 2 * set.users())))
}

/// General `T`-slot noncoherent ML detection over an explicit codebook.
///
/// Per candidate `X` the per-antenna covariance is
/// `A = X^H D X + sigma2 I_T`; the decision metric
/// `sum_m z_m^H A^{-1} z_m + M ln det A` (with `z_m` the conjugated m-th
/// receive row) is evaluated through a `T x T` Cholesky factor instead of
/// materializing the `MT x MT` block-diagonal covariance.
pub fn detect_ncml_general(
    y: &Mat,
    codebook: &[Mat],
    betas: &[f64],
    sigma2: f64,
) -> Result<usize> {
    if codebook.is_empty() {
        return Err(Error::InvalidArgument("codebook must be nonempty"));
    }
    let slots = y.cols();
    let users = betas.len();
    if slots == 0 || y.rows() == 0 {
        return Err(Error::DimensionMismatch("received block must be nonempty"));
    }
    for x in codebook {
        if x.rows() != users || x.cols() != slots {
            return Err(Error::DimensionMismatch("codeword dimensions must match channel"));
        }
    }
    // Conjugated receive rows, shared across candidates.
    let rows: Vec<Vec<Complex64>> = (0..y.rows())
        .map(|m_| (0..slots).map(|t| y.get(m_, t).conj()).collect())
        .collect();
    let m = y.rows() as f64;

    let mut best_index = 0usize;
    let mut best_obj = f64::INFINITY;
    for (index, x) in codebook.iter().enumerate() {
        let mut gram = Mat::zeros(slots, slots);
        for t1 in 0..slots {
            for t2 in 0..slots {
                let mut v: Complex64 = (0..users)
                    .map(|k| x.get(k, t1).conj() * x.get(k, t2) * betas[k])
                    .sum();
                if t1 == t2 {
                    v += sigma2;
                }
                gram.set(t1, t2, v);
            }
        }
        let l = cholesky(&gram)
            .ok_or(Error::InternalConsistency("candidate Gram is not positive definite"))?;
        let logdet: f64 = (0..slots).map(|t| 2.0 * l.get(t, t).re.ln()).sum();
        let quad: f64 = rows
            .iter()
            .map(|z| forward_substitute(&l, z).iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum();
        let obj = quad + m * logdet;
        if obj < best_obj {
            best_obj = obj;
            best_index = index;
        }
    }
    Ok(best_index)
}

/// KL distance between two received-block laws, per receive antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlPair {
    /// Single-antenna KL distance.
    pub value: f64,
}

impl KlPair {
    /// The `M`-antenna distance is exactly `M` times the per-antenna one.
    pub fn value_m(&self, antennas: usize) -> f64 {
        antennas as f64 * self.value
    }
}

/// KL distance between the zero-mean Gaussian laws with 2x2 covariances
/// given by `g` (true) and `gt` (hypothesized), evaluated in closed form:
/// `tr(R Rt^{-1}) - ln det(R Rt^{-1}) - 2`.
///
/// The expression is arranged so that identical Grams give exactly zero.
pub fn kl_from_gram(g: &GramStats, gt: &GramStats) -> f64 {
    let det = g.a * g.b - g.c.norm_sqr();
    let det_t = gt.a * gt.b - gt.c.norm_sqr();
    let trace_num = g.a * gt.b + gt.a * g.b - 2.0 * (g.c.re * gt.c.re + g.c.im * gt.c.im);
    trace_num / det_t - (det / det_t).ln() - 2.0
}

/// KL distance between the received laws of two arbitrary `K x 2` blocks.
pub fn kl_distance(x: &Mat, x_tilde: &Mat, betas: &[f64], sigma2: f64) -> Result<KlPair> {
    let g = GramStats::of_block(x, betas, sigma2)?;
    let gt = GramStats::of_block(x_tilde, betas, sigma2)?;
    if g.a * g.b - g.c.norm_sqr() <= 0.0 || gt.a * gt.b - gt.c.norm_sqr() <= 0.0 {
        return Err(Error::InternalConsistency("degenerate Gram matrix"));
    }
    Ok(KlPair { value: kl_from_gram(&g, &gt) })
}

/// Exhaustive minimum KL distance over distinct codeword pairs of the
/// designed codebook, with the minimizing `(c, c_tilde)` sum points.
///
/// Because `a` and `b` are codeword-independent here, only the cross terms
/// vary; the scan is over ordered pairs of sum points.
pub fn min_kl_over_codebook(
    design: &DesignSolution,
    sigma2: f64,
) -> Result<(f64, (Complex64, Complex64))> {
    if design.users() > 6 {
        return Err(Error::UnsupportedSize("codebook enumeration supports at most 6 users"));
    }
    let set = SubConstellationSet::new(design.users(), design.min_distance)?;
    let (a, b) = design.gram_ab(sigma2);
    let points = set.sum_points();
    let mut best = f64::INFINITY;
    let mut best_pair = (points[0], points[0]);
    for (i, &c) in points.iter().enumerate() {
        let g = GramStats { a, b, c };
        for (j, &ct) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let value = kl_from_gram(&g, &GramStats { a, b, c: ct });
            if value < best {
                best = value;
                best_pair = (c, ct);
            }
        }
    }
    Ok((best, best_pair))
}
