//! Scenario configuration shared by the simulator and the analytical models.

use thiserror::Error;

/// Receiver operating mode.
///
/// In `Hybrid` mode both RF chains run analog beamforming over the full band,
/// so every resource block carries the same spectral efficiency. In
/// `Heterogeneous` mode one chain stays analog over the full band while the
/// second is repurposed for digital beamforming on a per-user sub-band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Hybrid,
    Heterogeneous,
}

impl Mode {
    /// Short token used in CSV output and CLI flags.
    pub fn token(&self) -> &'static str {
        match self {
            Mode::Hybrid => "hybrid",
            Mode::Heterogeneous => "het",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hybrid" => Ok(Mode::Hybrid),
            "het" | "heterogeneous" => Ok(Mode::Heterogeneous),
            other => Err(format!("unknown mode '{other}' (expected hybrid or het)")),
        }
    }
}

/// All scenario parameters for a run.
///
/// Resource blocks are normalized to 1 Hz x 1 s, so a spectral efficiency in
/// bit/s/Hz is also the number of bits an RB carries. Rates are bits per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Number of resource blocks R.
    pub num_rbs: usize,
    /// Number of receive antennas N.
    pub num_antennas: usize,
    /// Spectral efficiency of the analog chain, C_A.
    pub se_analog: f64,
    /// Spectral efficiency of the digital chain, C_D.
    pub se_digital: f64,
    /// Spectral efficiency in hybrid mode, C_H.
    pub se_hybrid: f64,
    /// Mean traffic per user per slot (bits), Lambda.
    pub traffic_rate: f64,
    /// Per-user buffer capacity in bits.
    pub buffer_capacity: f64,
    /// EWMA averaging factor gamma, in (0, 1).
    pub ewma_gamma: f64,
    /// Total slots simulated per run.
    pub num_slots: usize,
    /// Leading slots excluded from the reported metrics.
    pub warmup_slots: usize,
    /// Base seed for all random streams of a run.
    pub seed: u64,
    /// Operating mode.
    pub mode: Mode,
}

/// Rejected configurations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("spectral efficiencies must satisfy analog <= hybrid <= digital, got {analog} / {hybrid} / {digital}")]
    SpectralEfficiencyOrder {
        analog: f64,
        hybrid: f64,
        digital: f64,
    },
    #[error("need num_rbs >= num_antennas >= 1, got R={num_rbs}, N={num_antennas}")]
    DimensionOrder { num_rbs: usize, num_antennas: usize },
    #[error("warmup_slots ({warmup_slots}) must be smaller than num_slots ({num_slots})")]
    WarmupTooLong {
        warmup_slots: usize,
        num_slots: usize,
    },
    #[error("ewma_gamma must lie strictly inside (0, 1), got {0}")]
    GammaOutOfRange(f64),
    #[error("traffic_rate must be >= 0, got {0}")]
    NegativeTrafficRate(f64),
    #[error("buffer_capacity must be >= 0, got {0}")]
    NegativeBufferCapacity(f64),
    #[error("a simulation needs at least one user")]
    NoUsers,
}

impl SystemConfig {
    /// Checks every construction invariant, returning the first violation.
    /// NaN fails whichever check it appears in.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let se_ordered = self.se_analog.is_finite()
            && self.se_hybrid.is_finite()
            && self.se_digital.is_finite()
            && self.se_analog <= self.se_hybrid
            && self.se_hybrid <= self.se_digital;
        if !se_ordered {
            return Err(ConfigError::SpectralEfficiencyOrder {
                analog: self.se_analog,
                hybrid: self.se_hybrid,
                digital: self.se_digital,
            });
        }
        if self.num_antennas < 1 || self.num_rbs < self.num_antennas {
            return Err(ConfigError::DimensionOrder {
                num_rbs: self.num_rbs,
                num_antennas: self.num_antennas,
            });
        }
        if self.warmup_slots >= self.num_slots {
            return Err(ConfigError::WarmupTooLong {
                warmup_slots: self.warmup_slots,
                num_slots: self.num_slots,
            });
        }
        let gamma_inside = self.ewma_gamma > 0.0 && self.ewma_gamma < 1.0;
        if !gamma_inside {
            return Err(ConfigError::GammaOutOfRange(self.ewma_gamma));
        }
        let rate_ok = self.traffic_rate >= 0.0 && self.traffic_rate.is_finite();
        if !rate_ok {
            return Err(ConfigError::NegativeTrafficRate(self.traffic_rate));
        }
        let buffer_ok = self.buffer_capacity >= 0.0;
        if !buffer_ok {
            return Err(ConfigError::NegativeBufferCapacity(self.buffer_capacity));
        }
        Ok(())
    }

    /// Same configuration with a different mode.
    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

impl Default for SystemConfig {
    /// The reference scenario: 640 RBs, 32 antennas, SEs 1 / 1.5 / 4,
    /// 1000-bit buffers, 2000 slots with 200 of warmup.
    fn default() -> Self {
        SystemConfig {
            num_rbs: 640,
            num_antennas: 32,
            se_analog: 1.0,
            se_digital: 4.0,
            se_hybrid: 1.5,
            traffic_rate: 500.0,
            buffer_capacity: 1000.0,
            ewma_gamma: 0.9,
            num_slots: 2000,
            warmup_slots: 200,
            seed: 0,
            mode: Mode::Hybrid,
        }
    }
}
