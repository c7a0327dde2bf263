//! BER result records and binomial confidence intervals.

use crate::config::{format_f64, Placement, Scheme, SimConfig};

/// Two-sided 95% normal quantile used for Wilson intervals.
pub const Z_95: f64 = 1.959963984540054;

/// Wilson score interval for `errors` successes in `total` Bernoulli trials.
/// Degenerate inputs (`total == 0`) collapse to [0, 1].
pub fn wilson_interval(errors: u64, total: u64, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// One (scheme, M) point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scheme: Scheme,
    pub users: usize,
    pub antennas: usize,
    pub placement: Placement,
    /// Simulated blocks.
    pub trials: u64,
    /// Total information bits across all trials.
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
    pub bits_per_slot_per_user: f64,
}

impl BerRecord {
    pub fn new(cfg: &SimConfig, antennas: usize, trials: u64, bits: u64, bit_errors: u64) -> Self {
        let ber = if bits == 0 { 0.0 } else { bit_errors as f64 / bits as f64 };
        let (wilson_lo, wilson_hi) = wilson_interval(bit_errors, bits, Z_95);
        BerRecord {
            scheme: cfg.scheme,
            users: cfg.users,
            antennas,
            placement: cfg.placement,
            trials,
            bits,
            bit_errors,
            ber,
            wilson_lo,
            wilson_hi,
            seed: cfg.seed,
            bits_per_slot_per_user: cfg.scheme.bits_per_slot_per_user(cfg.users),
        }
    }

    pub fn csv_header() -> &'static str {
        "scheme,users,m,placement,meters,trials,bits,bit_errors,ber,wilson_lo,wilson_hi,seed,bits_per_slot_per_user"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme.name(),
            self.users,
            self.antennas,
            self.placement.kind(),
            format_f64(self.placement.meters()),
            self.trials,
            self.bits,
            self.bit_errors,
            format_f64(self.ber),
            format_f64(self.wilson_lo),
            format_f64(self.wilson_hi),
            self.seed,
            format_f64(self.bits_per_slot_per_user),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_matches_reference_values() {
        let (lo, hi) = wilson_interval(10, 1000, Z_95);
        assert!((lo - 0.005440754445529249).abs() < 1e-15);
        assert!((hi - 0.018309468870314774).abs() < 1e-15);
        let (lo, hi) = wilson_interval(0, 1000, Z_95);
        assert!(lo >= 0.0 && lo < 1e-12);
        assert!((hi - 0.0038267584855551234).abs() < 1e-15);
        let (lo, hi) = wilson_interval(200, 40_000, Z_95);
        assert!((lo - 0.0043547167782399055).abs() < 1e-15);
        assert!((hi - 0.0057403501976754446).abs() < 1e-15);
        assert_eq!(wilson_interval(0, 0, Z_95), (0.0, 1.0));
    }

    #[test]
    fn record_math_and_csv_shape() {
        let cfg = SimConfig::default();
        let rec = BerRecord::new(&cfg, 64, 1000, 4000, 100);
        assert_eq!(rec.ber, 0.025);
        assert!(rec.wilson_lo < rec.ber && rec.ber < rec.wilson_hi);
        let row = rec.csv_row();
        assert_eq!(row.split(',').count(), BerRecord::csv_header().split(',').count());
        assert!(row.starts_with("proposed,2,64,disk,1000,"));
    }
}
