use crate::circle::WrappedTurn;

/// A rotation-number estimate in turns, together with the iteration count,
/// the Monte Carlo standard error across replicas (0 for deterministic runs)
/// and the a-priori truncation bound 1/n of the finite-n average.
#[derive(Debug, Clone, Copy)]
pub struct RotationEstimate {
    pub value: WrappedTurn,
    pub n: u64,
    pub stderr: f64,
    pub truncation_bound: f64,
    /// Unwrapped mean rate the estimate was built from. `value` is its
    /// mod-1 representative; keeping the raw rate lets callers aggregate
    /// estimates without wrap artifacts near ±1/2.
    pub raw_rate: f64,
}

impl RotationEstimate {
    pub fn from_rate(rate: f64, n: u64) -> Self {
        RotationEstimate {
            value: WrappedTurn::wrap_unchecked(rate),
            n,
            stderr: 0.0,
            truncation_bound: if n == 0 { f64::INFINITY } else { 1.0 / n as f64 },
            raw_rate: rate,
        }
    }

    /// Aggregate independent replica rates: mean, and stderr = s/sqrt(R).
    pub fn from_replica_rates(rates: &[f64], n: u64) -> Self {
        assert!(!rates.is_empty());
        let r = rates.len() as f64;
        let mean = rates.iter().sum::<f64>() / r;
        let stderr = if rates.len() > 1 {
            let var = rates.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (r - 1.0);
            (var / r).sqrt()
        } else {
            0.0
        };
        RotationEstimate { stderr, ..Self::from_rate(mean, n) }
    }
}

/// Compensated (Kahan) accumulator. Displacement sums run to 1e8 terms;
/// naive summation loses the 1e-9 accuracy the oracles assert.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum
    }
}
