use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

/// Trial plan for a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    trials: u64,
    seed: u64,
    batch_size: u64,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64, batch_size: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if batch_size == 0 || batch_size > trials {
            return Err(Error::InvalidConfig(format!(
                "batch size must lie in 1..={trials}, got {batch_size}"
            )));
        }
        Ok(Self {
            trials,
            seed,
            batch_size,
        })
    }

    /// `trials` draws in batches of at most 65536.
    pub fn with_trials(trials: u64, seed: u64) -> Result<Self> {
        Self::new(trials, seed, trials.clamp(1, 1 << 16))
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn batch_size(&self) -> u64 {
        self.batch_size
    }

    pub fn batches(&self) -> u64 {
        self.trials.div_ceil(self.batch_size)
    }

    /// Number of trials in batch `index`.
    pub fn batch_len(&self, index: u64) -> u64 {
        let start = index * self.batch_size;
        self.batch_size.min(self.trials - start)
    }
}

/// Mergeable `(count, sum, sum of squares)` record.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Point estimate with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub value: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub trials_used: u64,
}

impl EstimateWithCI {
    pub fn new(value: f64, std_error: f64, trials_used: u64) -> Self {
        Self {
            value,
            std_error,
            ci95_low: value - Z95 * std_error,
            ci95_high: value + Z95 * std_error,
            trials_used,
        }
    }

    /// Mean of indicator samples with the binomial standard error.
    pub fn from_indicator(m: &Moments) -> Self {
        let n = m.count as f64;
        let p = m.sum / n;
        Self::new(p, (p * (1.0 - p) / n).sqrt(), m.count)
    }

    /// Sample mean with its standard error.
    pub fn from_mean(m: &Moments) -> Self {
        Self::new(m.mean(), m.std_error(), m.count)
    }
}
