//! Human-readable design reports and the pairwise KL table.

use std::fmt;

use nclink_core::design::{optimal_design, sort_users, DesignSolution, UserProfile};
use nclink_core::channel::RadioParams;
use nclink_core::modem::{kl_distance, min_kl_over_codebook};
use nclink_core::udcg::{BitWord, SubConstellationSet};
use nclink_core::Complex64;

use crate::config::format_f64;
use crate::profile::ProfileEntry;

#[derive(Debug)]
pub enum ReportError {
    Core(nclink_core::Error),
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportError::Core(e) => write!(f, "report error: {e}"),
        }
    }
}

impl std::error::Error for ReportError {}

impl From<nclink_core::Error> for ReportError {
    fn from(e: nclink_core::Error) -> Self {
        ReportError::Core(e)
    }
}

/// Six decimals for human-scale magnitudes, scientific for the rest. Watt
/// scale link budgets land around 1e-14, where fixed decimals are useless.
fn fmt_g(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-3..1e7).contains(&a) {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

fn fmt_c(v: Complex64) -> String {
    format!("{}{}{}i", fmt_g(v.re), if v.im < 0.0 { "-" } else { "+" }, fmt_g(v.im.abs()))
}

fn sorted_profiles(entries: &[ProfileEntry]) -> (Vec<usize>, Vec<UserProfile>) {
    let profiles: Vec<UserProfile> = entries.iter().map(|e| e.to_user_profile()).collect();
    let order = sort_users(&profiles);
    let sorted = order.iter().map(|&i| profiles[i]).collect();
    (order, sorted)
}

/// Renders the full design for a profile file: the sorted user table with the
/// input-order mapping, the distance and power solution, and the minimum-KL
/// pair certifying the codebook's hardest hypothesis test.
pub fn design_report(
    entries: &[ProfileEntry],
    radio: &RadioParams,
) -> Result<String, ReportError> {
    let sigma2 = radio.noise_power_w();
    let (order, sorted) = sorted_profiles(entries);
    let design = optimal_design(&sorted, sigma2)?;
    let slots = design.slot_powers(&sorted);
    let (a, b) = design.gram_ab(sigma2);

    let mut out = String::new();
    out.push_str(&format!(
        "design report: {} users, noise power {} W\n",
        sorted.len(),
        fmt_g(sigma2)
    ));
    out.push_str("users sorted by received budget P*beta, weakest first:\n");
    out.push_str(
        "rank  input   P_dBm  beta_dB        budget_W  subset               p         slot1_W         slot2_W\n",
    );
    for (k, (&input, profile)) in order.iter().zip(&sorted).enumerate() {
        let j = design.assignment[k];
        out.push_str(&format!(
            "{:>4}  {:>5}  {:>6.1}  {:>7.2}  {:>14}  {:>6}  {:>14}  {:>14}  {:>14}\n",
            k + 1,
            input + 1,
            entries[input].p_dbm,
            entries[input].beta_db,
            fmt_g(profile.budget()),
            j + 1,
            fmt_g(design.powers[j]),
            fmt_g(slots[k].0),
            fmt_g(slots[k].1),
        ));
    }
    out.push_str(&format!("min distance d: {}\n", fmt_g(design.min_distance)));
    out.push_str(&format!(
        "p: ({})\n",
        design.powers.iter().map(|&p| fmt_g(p)).collect::<Vec<_>>().join(", ")
    ));
    out.push_str(&format!("gram diagonal a = b: {}\n", fmt_g(a.max(b))));
    out.push_str(&format!("objective: {}\n", fmt_g(design.objective(sigma2))));
    match min_kl_over_codebook(&design, sigma2) {
        Ok((kl, (s, st))) => {
            out.push_str(&format!(
                "min KL per antenna: {} between sum symbols {} and {}\n",
                fmt_g(kl),
                fmt_c(s),
                fmt_c(st),
            ));
        }
        Err(nclink_core::Error::UnsupportedSize(_)) => {
            out.push_str("min KL per antenna: skipped (codebook too large to enumerate)\n");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

/// Pairwise KL table over the whole codebook as CSV, one row per ordered
/// pair of distinct codewords, full-precision values.
pub fn kl_table(entries: &[ProfileEntry], radio: &RadioParams) -> Result<String, ReportError> {
    let sigma2 = radio.noise_power_w();
    let (_, sorted) = sorted_profiles(entries);
    let design = optimal_design(&sorted, sigma2)?;
    if design.users() > 6 {
        return Err(ReportError::Core(nclink_core::Error::UnsupportedSize(
            "KL table enumeration supports at most 6 users",
        )));
    }
    let set = SubConstellationSet::new(design.users(), design.min_distance)?;
    let betas: Vec<f64> = sorted.iter().map(|p| p.beta).collect();
    let words = 1usize << (2 * design.users());
    let blocks: Vec<_> = (0..words)
        .map(|i| {
            let word = BitWord::from_index(i, 2 * design.users());
            nclink_core::modem::assemble_codeword(&word, &design, &sorted, &set)
        })
        .collect::<nclink_core::Result<_>>()?;

    let mut out = String::from("index,index_alt,kl_per_antenna\n");
    for (i, x) in blocks.iter().enumerate() {
        for (j, xt) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            let kl = kl_distance(&x.symbols, &xt.symbols, &betas, sigma2)?;
            out.push_str(&format!("{i},{j},{}\n", format_f64(kl.value)));
        }
    }
    Ok(out)
}

/// The design used by `kl_table` and `design_report`, exposed so callers can
/// reuse it (the CLI prints the report and the table from one solve).
pub fn solve_for_entries(
    entries: &[ProfileEntry],
    radio: &RadioParams,
) -> Result<DesignSolution, ReportError> {
    let sigma2 = radio.noise_power_w();
    let (_, sorted) = sorted_profiles(entries);
    Ok(optimal_design(&sorted, sigma2)?)
}
