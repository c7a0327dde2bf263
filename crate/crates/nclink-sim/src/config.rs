//! Sweep configuration and its key-value file format.
//!
//! A config file is plain `key = value` lines; `#` starts a comment. The
//! manifest written next to every result set uses the same format, so a run
//! can be replayed by feeding its manifest back through `--config`.

use std::fmt;

use nclink_core::channel::RadioParams;
use nclink_core::udcg::MAX_USERS;

/// Which transmission scheme a sweep simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Two-slot noncoherent scheme with the closed-form design.
    Proposed,
    /// One-slot on-off energy signaling baseline.
    Med,
    /// Pilot-trained ZF baseline (K pilot slots + one 64-QAM data slot).
    ZfTrain,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Proposed => "proposed",
            Scheme::Med => "med",
            Scheme::ZfTrain => "zf-train",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        match s {
            "proposed" => Some(Scheme::Proposed),
            "med" => Some(Scheme::Med),
            "zf-train" => Some(Scheme::ZfTrain),
            _ => None,
        }
    }

    /// Information bits carried by one simulated block of `users` users.
    pub fn bits_per_block(self, users: usize) -> u64 {
        match self {
            Scheme::Proposed => 2 * users as u64,
            Scheme::Med => users as u64,
            Scheme::ZfTrain => 6 * users as u64,
        }
    }

    /// Slots occupied by one block.
    pub fn slots_per_block(self, users: usize) -> u64 {
        match self {
            Scheme::Proposed => 2,
            Scheme::Med => 1,
            Scheme::ZfTrain => users as u64 + 1,
        }
    }

    /// Spectral-efficiency bookkeeping for the output records.
    pub fn bits_per_slot_per_user(self, users: usize) -> f64 {
        self.bits_per_block(users) as f64 / (self.slots_per_block(users) * users as u64) as f64
    }
}

/// User placement geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// Area-uniform in the annulus between the reference distance and
    /// `radius_m`.
    Disk { radius_m: f64 },
    /// All users at one fixed distance.
    Fixed { distance_m: f64 },
}

impl Placement {
    pub fn kind(&self) -> &'static str {
        match self {
            Placement::Disk { .. } => "disk",
            Placement::Fixed { .. } => "fixed",
        }
    }

    /// The radius (disk) or distance (fixed) in meters.
    pub fn meters(&self) -> f64 {
        match *self {
            Placement::Disk { radius_m } => radius_m,
            Placement::Fixed { distance_m } => distance_m,
        }
    }
}

/// Full description of one BER sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub users: usize,
    pub m_list: Vec<usize>,
    pub placement: Placement,
    /// Per-user power budgets in dBm; a single entry broadcasts to all users.
    pub p_dbm: Vec<f64>,
    pub radio: RadioParams,
    /// Hard cap on simulated blocks per (scheme, M) point.
    pub trials: u64,
    /// Early-stop threshold on accumulated bit errors.
    pub error_target: u64,
    pub seed: u64,
    /// Worker threads; 0 picks the runtime default. Results never depend on
    /// this.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scheme: Scheme::Proposed,
            users: 2,
            m_list: vec![16, 32, 64, 128],
            placement: Placement::Disk { radius_m: 1000.0 },
            p_dbm: vec![25.0],
            radio: RadioParams::default(),
            trials: 1_000_000,
            error_target: 200,
            seed: 1,
            workers: 0,
        }
    }
}

/// A configuration problem, with file position when it came from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn plain(message: impl Into<String>) -> Self {
        ConfigError { line: None, key: None, message: message.into() }
    }

    fn keyed(key: &str, message: impl Into<String>) -> Self {
        ConfigError { line: None, key: Some(key.to_string()), message: message.into() }
    }

    fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, " (key `{key}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::keyed(key, format!("cannot parse `{value}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value.split(',').map(|part| parse_num(key, part)).collect()
}

impl SimConfig {
    /// Applies one `key = value` assignment.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "scheme" => {
                self.scheme = Scheme::parse(value)
                    .ok_or_else(|| ConfigError::keyed(key, format!("unknown scheme `{value}`")))?;
            }
            "users" => self.users = parse_num(key, value)?,
            "m_list" => self.m_list = parse_list(key, value)?,
            "radius_m" => self.placement = Placement::Disk { radius_m: parse_num(key, value)? },
            "distance_m" => {
                self.placement = Placement::Fixed { distance_m: parse_num(key, value)? }
            }
            "p_dbm" => self.p_dbm = parse_list(key, value)?,
            "trials" => self.trials = parse_num(key, value)?,
            "error_target" => self.error_target = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "workers" => self.workers = parse_num(key, value)?,
            "carrier_hz" => self.radio.carrier_hz = parse_num(key, value)?,
            "reference_distance_m" => self.radio.reference_distance_m = parse_num(key, value)?,
            "path_loss_exponent" => self.radio.path_loss_exponent = parse_num(key, value)?,
            "shadowing_std_db" => self.radio.shadowing_std_db = parse_num(key, value)?,
            "bandwidth_hz" => self.radio.bandwidth_hz = parse_num(key, value)?,
            "noise_figure_db" => self.radio.noise_figure_db = parse_num(key, value)?,
            "temperature_k" => self.radio.temperature_k = parse_num(key, value)?,
            _ => return Err(ConfigError::keyed(key, "unknown key")),
        }
        Ok(())
    }

    /// Parses a config file's text on top of the defaults.
    pub fn from_text(text: &str) -> Result<SimConfig, ConfigError> {
        let mut cfg = SimConfig::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    /// Applies a config file's assignments on top of `self`.
    pub fn merge_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::plain("expected `key = value`").at_line(line_no))?;
            self.apply_kv(key.trim(), value.trim()).map_err(|e| e.at_line(line_no))?;
        }
        Ok(())
    }

    /// Per-user power budgets in watts, broadcasting a scalar entry.
    pub fn powers_w(&self) -> Vec<f64> {
        let dbm = if self.p_dbm.len() == 1 {
            vec![self.p_dbm[0]; self.users]
        } else {
            self.p_dbm.clone()
        };
        dbm.iter().map(|&p| 10.0_f64.powf((p - 30.0) / 10.0)).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.users == 0 {
            return Err(ConfigError::keyed("users", "must be at least 1"));
        }
        let user_cap = match self.scheme {
            Scheme::Proposed => MAX_USERS,
            Scheme::Med => 16,
            Scheme::ZfTrain => 64,
        };
        if self.users > user_cap {
            return Err(ConfigError::keyed(
                "users",
                format!("at most {user_cap} users supported for scheme {}", self.scheme.name()),
            ));
        }
        if self.m_list.is_empty() {
            return Err(ConfigError::keyed("m_list", "at least one antenna count required"));
        }
        if self.m_list.iter().any(|&m| m == 0) {
            return Err(ConfigError::keyed("m_list", "antenna counts must be positive"));
        }
        if self.scheme == Scheme::ZfTrain && self.m_list.iter().any(|&m| m < self.users) {
            return Err(ConfigError::keyed(
                "m_list",
                "the ZF baseline needs at least as many antennas as users",
            ));
        }
        if self.trials == 0 {
            return Err(ConfigError::keyed("trials", "trial cap must be at least 1"));
        }
        if self.error_target == 0 {
            return Err(ConfigError::keyed("error_target", "error target must be at least 1"));
        }
        if !(self.p_dbm.len() == 1 || self.p_dbm.len() == self.users) {
            return Err(ConfigError::keyed(
                "p_dbm",
                "give one shared budget or exactly one per user",
            ));
        }
        if self.p_dbm.iter().any(|p| !p.is_finite()) {
            return Err(ConfigError::keyed("p_dbm", "budgets must be finite"));
        }
        let meters = self.placement.meters();
        if !meters.is_finite() || meters < self.radio.reference_distance_m {
            return Err(ConfigError::keyed(
                match self.placement {
                    Placement::Disk { .. } => "radius_m",
                    Placement::Fixed { .. } => "distance_m",
                },
                "must be at least the path-loss reference distance",
            ));
        }
        let radio_fields = [
            ("carrier_hz", self.radio.carrier_hz),
            ("reference_distance_m", self.radio.reference_distance_m),
            ("path_loss_exponent", self.radio.path_loss_exponent),
            ("bandwidth_hz", self.radio.bandwidth_hz),
            ("temperature_k", self.radio.temperature_k),
        ];
        for (key, v) in radio_fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ConfigError::keyed(key, "must be positive and finite"));
            }
        }
        if !(self.radio.shadowing_std_db >= 0.0) || !self.radio.shadowing_std_db.is_finite() {
            return Err(ConfigError::keyed("shadowing_std_db", "must be nonnegative and finite"));
        }
        if !self.radio.noise_figure_db.is_finite() {
            return Err(ConfigError::keyed("noise_figure_db", "must be finite"));
        }
        Ok(())
    }

    /// The fully resolved configuration in the config-file format; parsing
    /// this back reproduces `self` exactly.
    pub fn manifest_text(&self) -> String {
        let mut out = String::from("# resolved run configuration; replayable via --config\n");
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("scheme", self.scheme.name().to_string());
        push("users", self.users.to_string());
        push(
            "m_list",
            self.m_list.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
        );
        match self.placement {
            Placement::Disk { radius_m } => push("radius_m", format_f64(radius_m)),
            Placement::Fixed { distance_m } => push("distance_m", format_f64(distance_m)),
        }
        push(
            "p_dbm",
            self.p_dbm.iter().map(|p| format_f64(*p)).collect::<Vec<_>>().join(","),
        );
        push("trials", self.trials.to_string());
        push("error_target", self.error_target.to_string());
        push("seed", self.seed.to_string());
        push("workers", self.workers.to_string());
        push("carrier_hz", format_f64(self.radio.carrier_hz));
        push("reference_distance_m", format_f64(self.radio.reference_distance_m));
        push("path_loss_exponent", format_f64(self.radio.path_loss_exponent));
        push("shadowing_std_db", format_f64(self.radio.shadowing_std_db));
        push("bandwidth_hz", format_f64(self.radio.bandwidth_hz));
        push("noise_figure_db", format_f64(self.radio.noise_figure_db));
        push("temperature_k", format_f64(self.radio.temperature_k));
        out
    }
}

/// Shortest representation that parses back to the same f64.
pub fn format_f64(v: f64) -> String {
    format!("{v}")
}
