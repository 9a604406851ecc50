use crate::error::{Error, Result};

/// Antenna counts and per-hop average SNRs (linear).
///
/// Noise variance is normalised to one, so the average SNR of a hop equals its
/// squared path gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    n_s: u32,
    n_r: u32,
    snr_sr: f64,
    snr_rd: f64,
}

impl SystemConfig {
    pub fn new(n_s: u32, n_r: u32, snr_sr: f64, snr_rd: f64) -> Result<Self> {
        if n_s < 2 || n_r < 2 {
            return Err(Error::InvalidConfig(format!(
                "antenna counts must be at least 2, got n_s={n_s}, n_r={n_r}"
            )));
        }
        for (name, v) in [("snr_sr", snr_sr), ("snr_rd", snr_rd)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            n_s,
            n_r,
            snr_sr,
            snr_rd,
        })
    }

    /// Same as [`SystemConfig::new`] with SNRs in dB.
    pub fn from_db(n_s: u32, n_r: u32, snr_sr_db: f64, snr_rd_db: f64) -> Result<Self> {
        Self::new(n_s, n_r, db_to_linear(snr_sr_db), db_to_linear(snr_rd_db))
    }

    pub fn n_s(&self) -> u32 {
        self.n_s
    }
    pub fn n_r(&self) -> u32 {
        self.n_r
    }
    pub fn snr_sr(&self) -> f64 {
        self.snr_sr
    }
    pub fn snr_rd(&self) -> f64 {
        self.snr_rd
    }

    /// `(n_s + n_r)/2 - 1`
    pub fn alpha(&self) -> f64 {
        0.5 * (self.n_s + self.n_r) as f64 - 1.0
    }

    /// `n_r - n_s`
    pub fn nu(&self) -> i32 {
        self.n_r as i32 - self.n_s as i32
    }

    /// Balance parameter `snr_rd / snr_sr`.
    pub fn beta(&self) -> f64 {
        self.snr_rd / self.snr_sr
    }

    pub fn with_snr_rd(&self, snr_rd: f64) -> Result<Self> {
        Self::new(self.n_s, self.n_r, self.snr_sr, snr_rd)
    }

    pub fn with_snr_sr(&self, snr_sr: f64) -> Result<Self> {
        Self::new(self.n_s, self.n_r, snr_sr, self.snr_rd)
    }
}

/// Outer (`k`) and inner (`l`) truncation orders of the outage and capacity
/// series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub k: usize,
    pub l: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { k: 50, l: 5 }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_parameters() {
        let c = SystemConfig::new(4, 2, 1.0, 10.0).unwrap();
        assert_eq!(c.alpha(), 2.0);
        assert_eq!(c.nu(), -2);
        assert_eq!(c.beta(), 10.0);
        let c = c.with_snr_rd(2.0).unwrap();
        assert_eq!(c.beta(), 2.0);
    }

    #[test]
    fn rejects_invalid() {
        assert!(SystemConfig::new(1, 2, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 1, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 2, 0.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 2, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn db_round_trip() {
        assert_eq!(db_to_linear(10.0), 10.0);
        assert!((linear_to_db(db_to_linear(-7.3)) + 7.3).abs() < 1e-12);
        assert_eq!(Truncation::default(), Truncation { k: 50, l: 5 });
    }
}
