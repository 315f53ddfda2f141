//! Rotation numbers of compositions of stationary random circle
//! homeomorphisms: the direct lift-composition estimator, the pointwise
//! ordered-orbit estimator, and the ergodic occupation-measure formula.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circle::{frac1, ordered_lifted_orbit, orbit_rotation_number, wrap1, CircleHomeo, Lift};
use crate::error::{CoreError, Result};
use crate::estimate::{KahanSum, RotationEstimate};
use crate::measure::EmpiricalMeasure;
use crate::noise::{counter_key, seeded_stream};

/// Stationary source of random homeomorphisms: f_n = f(theta^{n-1} omega).
/// Resetting with the same seed reproduces the identical sequence, the
/// testable surrogate of stationarity.
pub trait HomeoSampler: Send {
    fn reset(&mut self, seed: u64);
    fn next_homeo(&mut self) -> CircleHomeo;
}

/// The angular displacement beta(s) = F(x) - x of a normalized lift, always
/// in (-3/2, 3/2).
#[derive(Debug, Clone, Copy)]
pub struct BetaDisplacement {
    value: f64,
}

impl BetaDisplacement {
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// beta evaluated at a circle point (any real representative).
pub fn beta_displacement(f: &CircleHomeo, s: f64) -> BetaDisplacement {
    let value = f.lift().displacement(s);
    debug_assert!(value.abs() < 1.5);
    BetaDisplacement { value }
}

/// i.i.d. draws from a finite list of homeomorphisms with probabilities.
#[derive(Clone)]
pub struct IidHomeos {
    items: Vec<CircleHomeo>,
    cumulative: Vec<f64>,
    rng: ChaCha8Rng,
}

impl IidHomeos {
    pub fn new(items: Vec<(CircleHomeo, f64)>, seed: u64) -> Result<IidHomeos> {
        if items.is_empty() {
            return Err(CoreError::Empty("homeomorphism list"));
        }
        let total: f64 = items.iter().map(|(_, w)| *w).sum();
        if !(total > 0.0) || items.iter().any(|(_, w)| *w < 0.0) {
            return Err(CoreError::InvalidParameter(
                "sampling weights must be nonnegative with positive sum".into(),
            ));
        }
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(items.len());
        let homeos = items
            .into_iter()
            .map(|(h, w)| {
                acc += w / total;
                cumulative.push(acc);
                h
            })
            .collect();
        Ok(IidHomeos { items: homeos, cumulative, rng: seeded_stream(seed, 0) })
    }

    /// Uniform draws over the list.
    pub fn uniform(items: Vec<CircleHomeo>, seed: u64) -> Result<IidHomeos> {
        Self::new(items.into_iter().map(|h| (h, 1.0)).collect(), seed)
    }
}

impl HomeoSampler for IidHomeos {
    fn reset(&mut self, seed: u64) {
        self.rng = seeded_stream(seed, 0);
    }

    fn next_homeo(&mut self) -> CircleHomeo {
        let u: f64 = self.rng.random();
        let idx = self
            .cumulative
            .iter()
            .position(|&c| u <= c)
            .unwrap_or(self.items.len() - 1);
        self.items[idx].clone()
    }
}

/// Deterministic periodic cycle f_1, ..., f_k, f_1, ...
#[derive(Clone)]
pub struct PeriodicCycle {
    items: Vec<CircleHomeo>,
    idx: usize,
}

impl PeriodicCycle {
    pub fn new(items: Vec<CircleHomeo>) -> Result<PeriodicCycle> {
        if items.is_empty() {
            return Err(CoreError::Empty("cycle"));
        }
        Ok(PeriodicCycle { items, idx: 0 })
    }
}

impl HomeoSampler for PeriodicCycle {
    fn reset(&mut self, _seed: u64) {
        self.idx = 0;
    }

    fn next_homeo(&mut self) -> CircleHomeo {
        let h = self.items[self.idx].clone();
        self.idx = (self.idx + 1) % self.items.len();
        h
    }
}

/// Ergodic non-i.i.d. driver: the state moves on the circle by a fixed
/// irrational step and `emit` turns the state into a homeomorphism.
#[derive(Clone)]
pub struct RotationDriver {
    state: f64,
    step: f64,
    emit: Arc<dyn Fn(f64) -> CircleHomeo + Send + Sync>,
}

impl RotationDriver {
    pub fn new<F>(step: f64, seed: u64, emit: F) -> RotationDriver
    where
        F: Fn(f64) -> CircleHomeo + Send + Sync + 'static,
    {
        let mut d = RotationDriver { state: 0.0, step, emit: Arc::new(emit) };
        d.reset(seed);
        d
    }

    /// Golden-ratio step, the canonical ergodic choice.
    pub fn golden<F>(seed: u64, emit: F) -> RotationDriver
    where
        F: Fn(f64) -> CircleHomeo + Send + Sync + 'static,
    {
        RotationDriver::new(0.618_033_988_749_894_9, seed, emit)
    }
}

impl HomeoSampler for RotationDriver {
    fn reset(&mut self, seed: u64) {
        // random ergodic starting point derived from the seed
        self.state = frac1(counter_key(&[seed, 0x0D211]) as f64 / u64::MAX as f64);
    }

    fn next_homeo(&mut self) -> CircleHomeo {
        let h = (self.emit)(self.state);
        self.state = frac1(self.state + self.step);
        h
    }
}

/// First-approach estimator: evaluates the composed lift incrementally via
/// the telescoping identity F~_n(x) = x + sum_i beta_1(Theta^{i-1}(omega, p))
/// instead of nesting function compositions.
pub fn compose_rotation_number<S: HomeoSampler + ?Sized>(
    sampler: &mut S,
    n: u64,
    x0: f64,
) -> RotationEstimate {
    assert!(n >= 1);
    let mut pos = frac1(x0);
    let mut acc = KahanSum::new();
    for _ in 0..n {
        let f = sampler.next_homeo();
        let d = f.lift().displacement(pos);
        acc.add(d);
        pos = frac1(pos + d);
    }
    RotationEstimate::from_rate(acc.total() / n as f64, n)
}

/// Second-approach estimator via the ordered lifted orbit of p.
pub fn pointwise_rotation<S: HomeoSampler + ?Sized>(
    sampler: &mut S,
    n: u64,
    p: f64,
) -> Result<RotationEstimate> {
    assert!(n >= 1);
    let mut s = wrap1(p);
    let mut images = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let f = sampler.next_homeo();
        s = f.apply(s);
        images.push(s);
    }
    let orbit = ordered_lifted_orbit(&images, p);
    orbit_rotation_number(&orbit)
}

/// Run the skew product, accumulating the occupation measure of the circle
/// coordinate while averaging the displacements (the Birkhoff average).
/// Replicas are independent seeds run in parallel with a deterministic
/// merge; the measure is returned so the ergodic integral formula can be
/// cross-evaluated against the estimate.
pub fn ergodic_rotation_via_occupation<S>(
    sampler: &S,
    n: u64,
    replicas: u32,
    seed: u64,
    x0: f64,
    bins: usize,
) -> (RotationEstimate, EmpiricalMeasure)
where
    S: HomeoSampler + Clone + Sync,
{
    assert!(n >= 1 && replicas >= 1);
    let results: Vec<(f64, EmpiricalMeasure)> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut local = sampler.clone();
            local.reset(seed.wrapping_add(r as u64));
            let mut measure = EmpiricalMeasure::with_origin(bins, -0.5);
            let mut pos = frac1(x0);
            let mut acc = KahanSum::new();
            for _ in 0..n {
                let f = local.next_homeo();
                let d = f.lift().displacement(pos);
                acc.add(d);
                pos = frac1(pos + d);
                measure.record(pos);
            }
            (acc.total() / n as f64, measure)
        })
        .collect();
    let rates: Vec<f64> = results.iter().map(|(r, _)| *r).collect();
    let mut merged = EmpiricalMeasure::with_origin(bins, -0.5);
    for (_, m) in &results {
        merged.merge(m);
    }
    (RotationEstimate::from_replica_rates(&rates, n), merged)
}

/// Mean displacement over k fresh draws of the sampler at a fixed circle
/// point: a Monte Carlo evaluation of E_omega[beta_1(omega, s)].
pub fn mean_displacement<S: HomeoSampler + ?Sized>(sampler: &mut S, s: f64, k: u64) -> f64 {
    let mut acc = KahanSum::new();
    for _ in 0..k {
        let f = sampler.next_homeo();
        acc.add(f.lift().displacement(s));
    }
    acc.total() / k as f64
}

/// Result of checking the invariant-measure average formula
/// rho(f) = integral of beta d(nu).
#[derive(Debug, Clone, Copy)]
pub struct InvariantAverage {
    /// integral of beta against the histogram (bin centers).
    pub value: f64,
    /// Total-variation distance between nu and its pushforward under f,
    /// up to binning resolution; near 0 when nu is f-invariant.
    pub pushforward_defect: f64,
}

/// Evaluate the displacement average against a (supposedly f-invariant)
/// measure, reporting the pushforward-invariance defect alongside.
pub fn invariant_average_check(f: &CircleHomeo, nu: &EmpiricalMeasure) -> InvariantAverage {
    let value = nu.integrate(|s| f.lift().displacement(s));
    let mut pushed = EmpiricalMeasure::with_origin(nu.bins(), nu.origin());
    let w = nu.bin_width();
    let masses = nu.masses();
    for (i, &m) in masses.iter().enumerate() {
        if m > 0.0 {
            let center = nu.bin_left(i) + 0.5 * w;
            pushed.record_weighted(f.apply(center), m);
        }
    }
    let pm = pushed.masses();
    let defect = 0.5
        * masses
            .iter()
            .zip(&pm)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    InvariantAverage { value, pushforward_defect: defect }
}

/// The four piecewise-linear maps of the canonical deterministic 4-cycle:
/// every map fixes 0, and the images chain 1/8 -> 3/8 -> -3/8 -> -1/8 ->
/// 1/8, one quarter turn of net motion per cycle away from the fixed point.
pub fn piecewise_four_cycle() -> Result<PeriodicCycle> {
    let f1 = Lift::from_points(&[(0.0, 0.0), (0.125, 0.375)])?;
    let f2 = Lift::from_points(&[(0.0, 0.0), (0.375, 0.625)])?;
    let f3 = Lift::from_points(&[(0.0, 0.0), (0.625, 0.875)])?;
    let f4 = Lift::from_points(&[(0.0, 0.0), (0.875, 0.125)])?;
    PeriodicCycle::new(vec![
        CircleHomeo::new(f1),
        CircleHomeo::new(f2),
        CircleHomeo::new(f3),
        CircleHomeo::new(f4),
    ])
}
