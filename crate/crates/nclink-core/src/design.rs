//! Max-min KL power and scale design.
//!
//! With users sorted so their power budgets `P_k * beta_k` are nondecreasing,
//! the minimum KL distance between received-signal laws is maximized by
//! assigning sub-constellation `k` to sorted user `k` (identity assignment),
//! scaling the sum constellation to
//!
//! ```text
//! d = min_k P_k beta_k / sqrt(E_k)
//! ```
//!
//! and setting the relative power of sub-constellation `k` to
//! `p_k = 1 / (sqrt(E_k) * d)`. [`optimal_design`] evaluates that closed
//! form; [`grid_search_design`] is a brute-force reference that searches the
//! feasible box of every assignment and exists to keep the closed form
//! honest in tests.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::udcg::energy_coefficient;
use crate::Result;

/// One user's link budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserProfile {
    /// Transmit power budget in watts.
    pub power: f64,
    /// Large-scale channel gain (linear, dimensionless).
    pub beta: f64,
}

impl UserProfile {
    pub fn new(power: f64, beta: f64) -> Self {
        UserProfile { power, beta }
    }

    /// Received power budget `P * beta`, the quantity users are ranked by.
    pub fn budget(&self) -> f64 {
        self.power * self.beta
    }
}

/// Indices that sort `profiles` by budget, nondecreasing and stable.
pub fn sort_users(profiles: &[UserProfile]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by(|&i, &j| profiles[i].budget().total_cmp(&profiles[j].budget()));
    order
}

/// A complete transmission design for sorted users.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSolution {
    /// Minimum distance `d` of the sum constellation (amplitude units).
    pub min_distance: f64,
    /// Relative power `p_j` of sub-constellation `j` (0-based).
    pub powers: Vec<f64>,
    /// `assignment[k]` is the sub-constellation of sorted user `k`.
    pub assignment: Vec<usize>,
    /// Per-sub-constellation energy coefficients `E_j`.
    pub energies: Vec<f64>,
}

impl DesignSolution {
    pub fn users(&self) -> usize {
        self.powers.len()
    }

    /// The constants of the received 2x2 Gram matrix:
    /// `a = sum 1/p_j + sigma2`, `b = sum p_j E_j d^2 + sigma2`.
    /// Both are codeword-independent for this constant-modulus codebook.
    pub fn gram_ab(&self, sigma2: f64) -> (f64, f64) {
        let d2 = self.min_distance * self.min_distance;
        let a: f64 = self.powers.iter().map(|p| 1.0 / p).sum::<f64>() + sigma2;
        let b: f64 = self
            .powers
            .iter()
            .zip(&self.energies)
            .map(|(p, e)| p * e * d2)
            .sum::<f64>()
            + sigma2;
        (a, b)
    }

    /// The max-min-KL surrogate objective
    /// `(sum 1/p_j + sigma2) * (sum p_j E_j + sigma2 / d^2)`; lower is
    /// better, and its noiseless floor is `(sum sqrt(E_j))^2`.
    pub fn objective(&self, sigma2: f64) -> f64 {
        let d2 = self.min_distance * self.min_distance;
        let lhs: f64 = self.powers.iter().map(|p| 1.0 / p).sum::<f64>() + sigma2;
        let rhs: f64 =
            self.powers.iter().zip(&self.energies).map(|(p, e)| p * e).sum::<f64>() + sigma2 / d2;
        lhs * rhs
    }

    /// Per-user slot powers `(|x_{k,1}|^2, |x_{k,2}|^2)` implied by the
    /// design for sorted profiles; used for reporting and feasibility tests.
    pub fn slot_powers(&self, profiles: &[UserProfile]) -> Vec<(f64, f64)> {
        let d2 = self.min_distance * self.min_distance;
        self.assignment
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let p = self.powers[j];
                (1.0 / (p * profiles[k].beta), p * self.energies[j] * d2 / profiles[k].beta)
            })
            .collect()
    }
}

fn validate_profiles(profiles: &[UserProfile]) -> Result<()> {
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

fn validate_sigma2(sigma2: f64) -> Result<()> {
    if sigma2 >= 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("noise power must be nonnegative and finite"))
    }
}

/// Closed-form optimal design for sorted profiles.
///
/// The optimizing `d`, `p` do not depend on `sigma2` (the noise term is
/// fixed once `d` is maximized); the argument is validated and kept so this
/// function and [`grid_search_design`] are drop-in interchangeable.
pub fn optimal_design(profiles: &[UserProfile], sigma2: f64) -> Result<DesignSolution> {
    validate_profiles(profiles)?;
    validate_sigma2(sigma2)?;
    let users = profiles.len();
    let energies: Vec<f64> = (0..users).map(energy_coefficient).collect();
    let mut d = f64::INFINITY;
    for (pr, e) in profiles.iter().zip(&energies) {
        let cand = pr.budget() / e.sqrt();
        if cand < d {
            d = cand;
        }
    }
    let powers: Vec<f64> = energies.iter().map(|e| 1.0 / (e.sqrt() * d)).collect();
    Ok(DesignSolution {
        min_distance: d,
        powers,
        assignment: (0..users).collect(),
        energies,
    })
}

/// All permutations of `0..n` in lexicographic order.
fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Brute-force reference for [`optimal_design`].
///
/// For every user-to-sub-constellation assignment, `d` is set to its maximum
/// feasible value, each `p_j` ranges over a logarithmic grid spanning its
/// feasible interval (the objective is smooth and the closed-form optimum is
/// the geometric midpoint, so log spacing covers the dynamic range), and the
/// objective of [`DesignSolution::objective`] is minimized exhaustively.
/// Assignments are scanned in lexicographic order with strict-improvement
/// updates, so ties resolve to the earliest (identity first).
pub fn grid_search_design(
    profiles: &[UserProfile],
    sigma2: f64,
    grid_resolution: usize,
) -> Result<DesignSolution> {
    validate_profiles(profiles)?;
    validate_sigma2(sigma2)?;
    let users = profiles.len();
    if users > 3 {
        return Err(Error::UnsupportedSize("grid search supports at most 3 users"));
    }
    if grid_resolution < 2 {
        return Err(Error::InvalidArgument("grid resolution must be at least 2"));
    }
    let energies: Vec<f64> = (0..users).map(energy_coefficient).collect();
    let budgets: Vec<f64> = profiles.iter().map(UserProfile::budget).collect();

    let mut best: Option<(f64, DesignSolution)> = None;
    for assignment in lex_permutations(users) {
        // user(j): the user assigned sub-constellation j.
        let mut user_of = vec![0usize; users];
        for (k, &j) in assignment.iter().enumerate() {
            user_of[j] = k;
        }
        let d2 = (0..users)
            .map(|j| {
                let w = budgets[user_of[j]];
                w * w / energies[j]
            })
            .fold(f64::INFINITY, f64::min);
        let d = d2.sqrt();

        // Feasible interval and log grid for each p_j; at the binding user
        // the interval degenerates to a point.
        let grids: Vec<Vec<f64>> = (0..users)
            .map(|j| {
                let lo = 1.0 / budgets[user_of[j]];
                let hi = budgets[user_of[j]] / (energies[j] * d2);
                let ratio = hi / lo;
                (0..grid_resolution)
                    .map(|i| lo * ratio.powf(i as f64 / (grid_resolution - 1) as f64))
                    .collect()
            })
            .collect();
        // Per-dimension partial objective terms: (1/p, p*E).
        let terms: Vec<Vec<(f64, f64)>> = grids
            .iter()
            .enumerate()
            .map(|(j, g)| g.iter().map(|&p| (1.0 / p, p * energies[j])).collect())
            .collect();

        let mut best_local = (f64::INFINITY, vec![0usize; users]);
        search_grid(&terms, 0, 0.0, 0.0, sigma2, sigma2 / d2, &mut vec![0; users], &mut best_local);

        let powers: Vec<f64> = best_local.1.iter().enumerate().map(|(j, &i)| grids[j][i]).collect();
        let candidate = DesignSolution {
            min_distance: d,
            powers,
            assignment,
            energies: energies.clone(),
        };
        let obj = best_local.0;
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, candidate));
        }
    }
    Ok(best.expect("at least one assignment scanned").1)
}

fn search_grid(
    terms: &[Vec<(f64, f64)>],
    level: usize,
    sum_inv: f64,
    sum_pe: f64,
    sigma2: f64,
    noise_over_d2: f64,
    index: &mut Vec<usize>,
    best: &mut (f64, Vec<usize>),
) {
    if level == terms.len() - 1 {
        for (i, &(inv, pe)) in terms[level].iter().enumerate() {
            let obj = (sum_inv + inv + sigma2) * (sum_pe + pe + noise_over_d2);
            if obj < best.0 {
                index[level] = i;
                best.0 = obj;
                best.1.clone_from(index);
            }
        }
        return;
    }
    for (i, &(inv, pe)) in terms[level].iter().enumerate() {
        index[level] = i;
        search_grid(terms, level + 1, sum_inv + inv, sum_pe + pe, sigma2, noise_over_d2, index, best);
    }
}

/// Argmax over permutations of `min_k a_k / b_{perm(k)}`, scanned in
/// lexicographic order with strict improvement, so ties resolve to the
/// lexicographically smallest permutation. For `a`, `b` both sorted
/// nondecreasing the result is the identity.
pub fn assignment_order_check(a_seq: &[f64], b_seq: &[f64]) -> Result<Vec<usize>> {
    if a_seq.len() != b_seq.len() || a_seq.is_empty() {
        return Err(Error::DimensionMismatch("sequences must be nonempty and equal length"));
    }
    if a_seq.len() > 8 {
        return Err(Error::UnsupportedSize("permutation scan supports at most 8 elements"));
    }
    if a_seq.iter().chain(b_seq).any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument("sequences must be positive"));
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_perm = Vec::new();
    for perm in lex_permutations(a_seq.len()) {
        let value = perm
            .iter()
            .enumerate()
            .map(|(k, &j)| a_seq[k] / b_seq[j])
            .fold(f64::INFINITY, f64::min);
        if value > best_value {
            best_value = value;
            best_perm = perm;
        }
    }
    Ok(best_perm)
}

/// The Gram-matrix entries of one received two-slot block distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramStats {
    /// Reference-slot energy `sum beta_k |x_{k,1}|^2 + sigma2`.
    pub a: f64,
    /// Data-slot energy `sum beta_k |x_{k,2}|^2 + sigma2`.
    pub b: f64,
    /// Cross term `sum beta_k conj(x_{k,1}) x_{k,2}`.
    pub c: Complex64,
}

impl GramStats {
    /// Gram entries of an arbitrary `K x 2` block through gains `betas`.
    pub fn of_block(x: &crate::mat::Mat, betas: &[f64], sigma2: f64) -> Result<GramStats> {
        if x.cols() != 2 {
            return Err(Error::DimensionMismatch("two-slot block expected"));
        }
        if x.rows() != betas.len() {
            return Err(Error::DimensionMismatch("one gain per user expected"));
        }
        let mut a = sigma2;
        let mut b = sigma2;
        let mut c = Complex64::new(0.0, 0.0);
        for k in 0..x.rows() {
            let x1 = x.get(k, 0);
            let x2 = x.get(k, 1);
            a += betas[k] * x1.norm_sqr();
            b += betas[k] * x2.norm_sqr();
            c += betas[k] * x1.conj() * x2;
        }
        Ok(GramStats { a, b, c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sort_users_is_stable_and_orders_budgets() {
        let profiles = [UserProfile::new(1.0, 2.0), UserProfile::new(1.0, 1.0)];
        assert_eq!(sort_users(&profiles), vec![1, 0]);
        let ties = [UserProfile::new(1.0, 1.0), UserProfile::new(1.0, 1.0)];
        assert_eq!(sort_users(&ties), vec![0, 1]);
    }

    #[test]
    fn closed_form_matches_two_user_example() {
        let profiles = [UserProfile::new(1.0, 1.0), UserProfile::new(1.0, 2.0)];
        let sol = optimal_design(&profiles, 0.1).unwrap();
        assert!((sol.min_distance - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((sol.powers[0] - 1.0).abs() < 1e-12);
        assert!((sol.powers[1] - 0.5).abs() < 1e-12);
        assert_eq!(sol.assignment, vec![0, 1]);
    }

    #[test]
    fn closed_form_single_user() {
        let sol = optimal_design(&[UserProfile::new(1.0, 1.0)], 0.0).unwrap();
        assert!((sol.min_distance - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((sol.powers[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_halves_agree_at_optimum() {
        let profiles = [UserProfile::new(0.3, 2.0), UserProfile::new(2.0, 1.5)];
        let sol = optimal_design(&profiles, 0.05).unwrap();
        let (a, b) = sol.gram_ab(0.05);
        assert!((a - b).abs() <= 1e-12 * a.abs());
        let expect = sol.min_distance
            * sol.energies.iter().map(|e| e.sqrt()).sum::<f64>()
            + 0.05;
        assert!((a - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn rejects_unsorted_or_nonpositive_profiles() {
        let unsorted = [UserProfile::new(1.0, 2.0), UserProfile::new(1.0, 1.0)];
        assert!(matches!(optimal_design(&unsorted, 0.1), Err(Error::InvalidArgument(_))));
        let bad = [UserProfile::new(-1.0, 1.0)];
        assert!(matches!(optimal_design(&bad, 0.1), Err(Error::InvalidArgument(_))));
        assert!(matches!(optimal_design(&[], 0.1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn grid_search_guards_size_and_resolution() {
        let profiles: Vec<UserProfile> = (0..4).map(|k| UserProfile::new(1.0, k as f64 + 1.0)).collect();
        assert!(matches!(
            grid_search_design(&profiles, 0.1, 10),
            Err(Error::UnsupportedSize(_))
        ));
        assert!(matches!(
            grid_search_design(&profiles[..2], 0.1, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn assignment_check_matches_examples() {
        assert_eq!(assignment_order_check(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), vec![0, 1]);
        assert_eq!(assignment_order_check(&[1.0, 4.0], &[1.0, 2.0]).unwrap(), vec![0, 1]);
        assert!(assignment_order_check(&[1.0], &[1.0, 2.0]).is_err());
        assert!(assignment_order_check(&[1.0, -1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn slot_powers_meet_budgets_with_binding_equality() {
        let profiles = [UserProfile::new(1.0, 1.0), UserProfile::new(1.0, 2.0)];
        let sol = optimal_design(&profiles, 0.0).unwrap();
        let slots = sol.slot_powers(&profiles);
        for (k, &(s1, s2)) in slots.iter().enumerate() {
            assert!(s1 <= profiles[k].power * (1.0 + 1e-12));
            assert!(s2 <= profiles[k].power * (1.0 + 1e-12));
            // Both slots carry the same power under p = 1/(sqrt(E) d).
            assert!((s1 - s2).abs() < 1e-12);
        }
        // Both users are binding in this profile (equal budget-to-sqrt(E) ratios).
        assert!((slots[0].0 - 1.0).abs() < 1e-12);
        assert!((slots[1].0 - 1.0).abs() < 1e-12);
    }
}
