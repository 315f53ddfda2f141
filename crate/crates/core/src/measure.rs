/// Weighted histogram on the circle, used as an occupation-measure estimate
/// of invariant measures. Bins partition one period starting at `origin`
/// (0 for [0,1), -1/2 for the symmetric interval (-1/2,1/2]).
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    counts: Vec<f64>,
    total: f64,
    origin: f64,
}

impl EmpiricalMeasure {
    pub fn new(bins: usize) -> Self {
        Self::with_origin(bins, 0.0)
    }

    /// Histogram over (origin, origin+1], e.g. origin = -0.5 for the
    /// symmetric representative interval.
    pub fn with_origin(bins: usize, origin: f64) -> Self {
        assert!(bins > 0);
        EmpiricalMeasure { counts: vec![0.0; bins], total: 0.0, origin }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn samples(&self) -> f64 {
        self.total
    }

    /// Bins are left-open right-closed, matching the (-1/2, 1/2]
    /// representative convention: the right endpoint origin+1 lands in the
    /// last bin.
    #[inline]
    pub fn bin_of(&self, turn: f64) -> usize {
        let b = self.counts.len();
        let rel = turn - self.origin;
        let frac = rel - rel.floor();
        if frac <= 0.0 {
            return b - 1;
        }
        let idx = (frac * b as f64).ceil() as usize;
        idx.saturating_sub(1).min(b - 1)
    }

    #[inline]
    pub fn record(&mut self, turn: f64) {
        self.record_weighted(turn, 1.0);
    }

    #[inline]
    pub fn record_weighted(&mut self, turn: f64, w: f64) {
        let idx = self.bin_of(turn);
        self.counts[idx] += w;
        self.total += w;
    }

    pub fn merge(&mut self, other: &EmpiricalMeasure) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    /// Normalized bin masses (sum exactly renormalized to 1).
    pub fn masses(&self) -> Vec<f64> {
        if self.total == 0.0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts.iter().map(|c| c / self.total).collect()
    }

    pub fn raw_counts(&self) -> &[f64] {
        &self.counts
    }

    /// Left edge of bin i, in turns.
    pub fn bin_left(&self, i: usize) -> f64 {
        self.origin + i as f64 / self.counts.len() as f64
    }

    pub fn bin_width(&self) -> f64 {
        1.0 / self.counts.len() as f64
    }

    /// sup_b |mass_b - 1/B|, the uniformity defect used by the acceptance
    /// checks on rotation-invariant chains.
    pub fn sup_uniform_deviation(&self) -> f64 {
        let b = self.counts.len() as f64;
        self.masses()
            .iter()
            .map(|m| (m - 1.0 / b).abs())
            .fold(0.0, f64::max)
    }

    /// Pearson chi-square statistic against the uniform law (B-1 dof when
    /// the samples are independent draws).
    pub fn chi2_uniform(&self) -> f64 {
        let expected = self.total / self.counts.len() as f64;
        if expected == 0.0 {
            return 0.0;
        }
        self.counts
            .iter()
            .map(|c| {
                let d = c - expected;
                d * d / expected
            })
            .sum()
    }

    /// Integrate a function of the circle coordinate against the measure,
    /// evaluating at bin centers. Bias is O(1/B) for Lipschitz integrands.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let w = self.bin_width();
        self.masses()
            .iter()
            .enumerate()
            .map(|(i, m)| m * f(self.bin_left(i) + 0.5 * w))
            .sum()
    }

    /// Quotient by the antipodal map: bin i and bin i + B/2 are identified,
    /// giving a measure on the projective line (B must be even).
    pub fn fold_antipodal(&self) -> EmpiricalMeasure {
        let b = self.counts.len();
        assert!(b % 2 == 0, "antipodal quotient needs an even bin count");
        let mut out = EmpiricalMeasure::with_origin(b / 2, self.origin);
        for i in 0..b / 2 {
            out.counts[i] = self.counts[i] + self.counts[i + b / 2];
        }
        out.total = self.total;
        out
    }

    /// Cumulative masses at the right edge of each bin.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.masses()
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect()
    }
}
