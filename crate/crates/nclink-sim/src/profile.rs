//! User profile files: one user per line, `P_dBm beta_dB`.
//!
//! The dB domain exists only here; everything downstream works in watts and
//! linear gains.

use std::fmt;

use nclink_core::design::UserProfile;

/// One parsed profile line, still in its file units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEntry {
    pub p_dbm: f64,
    pub beta_db: f64,
}

impl ProfileEntry {
    pub fn power_w(&self) -> f64 {
        10.0_f64.powf((self.p_dbm - 30.0) / 10.0)
    }

    pub fn beta_linear(&self) -> f64 {
        10.0_f64.powf(self.beta_db / 10.0)
    }

    pub fn to_user_profile(&self) -> UserProfile {
        UserProfile::new(self.power_w(), self.beta_linear())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "profile error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ProfileError {}

/// Parses a profile file's text; `#` starts a comment.
pub fn parse_profiles(text: &str) -> Result<Vec<ProfileEntry>, ProfileError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ProfileError {
                line: line_no,
                message: format!("expected two columns (P_dBm beta_dB), found {}", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| {
            s.parse::<f64>().map_err(|_| ProfileError {
                line: line_no,
                message: format!("cannot parse {what} `{s}`"),
            })
        };
        let p_dbm = parse(fields[0], "P_dBm")?;
        let beta_db = parse(fields[1], "beta_dB")?;
        if !p_dbm.is_finite() || !beta_db.is_finite() {
            return Err(ProfileError { line: line_no, message: "values must be finite".into() });
        }
        entries.push(ProfileEntry { p_dbm, beta_db });
    }
    if entries.is_empty() {
        return Err(ProfileError { line: 0, message: "no users in profile".into() });
    }
    Ok(entries)
}
