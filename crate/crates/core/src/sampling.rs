//! Discretization of continuous cocycles at period T: sampled rotation
//! numbers, convergence of rho(phi_T)/T to the continuous rotation number,
//! exact recovery below the Nyquist rate, the distribution of the sampled
//! displacement beta_1^T, and winding-count diagnostics.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::circle::{frac1, psi_eval, wrap1};
use crate::error::{CoreError, Result};
use crate::estimate::{KahanSum, RotationEstimate};
use crate::flows::{flow_deterministic, AngState, Coeff2, CocycleSpec, Stepper};
use crate::linear::{eigen_rotation_number, Mat2};
use crate::measure::EmpiricalMeasure;

fn unit_or_err(v: [f64; 2]) -> Result<[f64; 2]> {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if !n.is_finite() || n == 0.0 {
        return Err(CoreError::InvalidParameter("initial direction must be nonzero".into()));
    }
    Ok([v[0] / n, v[1] / n])
}

fn window_steps(t_window: f64, dt: f64) -> Result<(u64, f64)> {
    if !(t_window > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "window length must be positive, got {t_window}"
        )));
    }
    if !(dt > 0.0) {
        return Err(CoreError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let k = (t_window / dt).round().max(1.0);
    Ok((k as u64, t_window / k))
}

/// Integrate one continuous trajectory to time n*T and return the n window
/// matrices phi((k+1)T) phi(kT)^{-1}; every window has positive determinant.
pub fn sample_matrices(
    spec: &CocycleSpec,
    t_window: f64,
    n: u64,
    seed: u64,
    dt: f64,
) -> Result<Vec<Mat2>> {
    if n == 0 {
        return Err(CoreError::InvalidParameter("need at least one window".into()));
    }
    let (steps, h) = window_steps(t_window, dt)?;
    let mut stepper = Stepper::new(spec, h, seed, 0);
    let mut st = AngState::new([1.0, 0.0]);
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let mut w = Mat2::identity();
        for _ in 0..steps {
            let u = stepper.step(&mut st)?;
            w = u.mul(&w);
        }
        out.push(w);
    }
    Ok(out)
}

/// Single-pass first-approach estimator over a finite matrix sequence;
/// the value is in turns per step.
pub fn sampled_rotation_number(mats: &[Mat2], x0: f64) -> Result<RotationEstimate> {
    if mats.is_empty() {
        return Err(CoreError::Empty("matrix sequence"));
    }
    let mut pos = frac1(x0);
    let mut acc = KahanSum::new();
    for g in mats {
        let psi0 = wrap1(g.a21.atan2(g.a11) / TAU);
        let d = psi_eval(g, psi0, pos) - pos;
        acc.add(d);
        pos = frac1(pos + d);
    }
    Ok(RotationEstimate::from_rate(acc.total() / mats.len() as f64, mats.len() as u64))
}

/// Shared-path sampling study over a decreasing T grid.
///
/// `windows` is the window count at the finest T; every T in the grid
/// samples the same continuous trajectory of horizon windows * min(T), so
/// coarser T's get horizon/T windows. dt must divide every grid T.
#[derive(Debug, Clone)]
pub struct SamplingStudy {
    pub spec: CocycleSpec,
    pub t_grid: Vec<f64>,
    pub windows: u64,
    pub replicas: u32,
    pub seed: u64,
    pub dt: f64,
    pub s0: [f64; 2],
}

impl SamplingStudy {
    fn validate(&self) -> Result<Vec<u64>> {
        if self.t_grid.is_empty() {
            return Err(CoreError::Empty("T grid"));
        }
        if self.windows == 0 || self.replicas == 0 {
            return Err(CoreError::InvalidParameter(
                "windows and replicas must be positive".into(),
            ));
        }
        if !(self.dt > 0.0) {
            return Err(CoreError::InvalidParameter("dt must be positive".into()));
        }
        let mut steps = Vec::with_capacity(self.t_grid.len());
        for w in self.t_grid.windows(2) {
            if w[1] >= w[0] {
                return Err(CoreError::InvalidParameter(
                    "T grid must be strictly decreasing".into(),
                ));
            }
        }
        for &t in &self.t_grid {
            if !(t > 0.0) {
                return Err(CoreError::InvalidParameter("grid T must be positive".into()));
            }
            let k = (t / self.dt).round();
            if k < 1.0 || (k * self.dt - t).abs() > 1e-9 * t.max(1.0) {
                return Err(CoreError::InvalidParameter(format!(
                    "dt = {} must divide every grid T (offender: {t})",
                    self.dt
                )));
            }
            steps.push(k as u64);
        }
        Ok(steps)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub t: f64,
    pub rho_over_t: f64,
    pub stderr: f64,
    pub windows: u64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    /// Rows sorted by descending T.
    pub rows: Vec<ConvergenceRow>,
    /// Continuous rotation number estimated from the same trajectories.
    pub rho_continuous: f64,
    pub rho_continuous_stderr: f64,
    /// Whether |rho_T/T - rho_continuous| is nonincreasing along the grid
    /// within a 2-stderr slack.
    pub monotone_approach: bool,
}

/// For each T in the grid: the sampled rotation number divided by T (turns
/// per unit time) with its replica standard error, all T sharing the same
/// driving path per replica.
pub fn convergence_study(study: &SamplingStudy) -> Result<ConvergenceTable> {
    let steps_per = study.validate()?;
    let s0 = unit_or_err(study.s0)?;
    let t_min = *study.t_grid.last().unwrap();
    let total_steps = steps_per.last().unwrap() * study.windows;
    let horizon = t_min * study.windows as f64;
    let m = study.t_grid.len();

    let per_replica: Result<Vec<(f64, Vec<f64>, Vec<u64>)>> = (0..study.replicas)
        .into_par_iter()
        .map(|r| {
            let mut stepper = Stepper::new(&study.spec, study.dt, study.seed, r as u64);
            let mut st = AngState::new(s0);
            let alpha0 = st.alpha;
            let mut w = vec![Mat2::identity(); m];
            let mut x = vec![frac1(alpha0); m];
            let mut sums = vec![KahanSum::new(); m];
            let mut counts = vec![0u64; m];
            for k in 1..=total_steps {
                let u = stepper.step(&mut st)?;
                for i in 0..m {
                    w[i] = u.mul(&w[i]);
                    let ma = w[i].max_abs();
                    if ma > 1e100 || ma < 1e-100 {
                        // rescaling is projectively invisible and keeps det > 0
                        w[i] = w[i].scale(1.0 / ma).expect("max_abs is positive");
                    }
                    if k % steps_per[i] == 0 {
                        let g = &w[i];
                        let psi0 = wrap1(g.a21.atan2(g.a11) / TAU);
                        let d = psi_eval(g, psi0, x[i]) - x[i];
                        sums[i].add(d);
                        x[i] = frac1(x[i] + d);
                        w[i] = Mat2::identity();
                        counts[i] += 1;
                    }
                }
            }
            let rho_cont = (st.alpha - alpha0) / horizon;
            let rates = (0..m)
                .map(|i| sums[i].total() / counts[i] as f64 / study.t_grid[i])
                .collect();
            Ok((rho_cont, rates, counts))
        })
        .collect();
    let per_replica = per_replica?;

    let r = study.replicas as f64;
    let mean_se = |vals: &[f64]| -> (f64, f64) {
        let mean = vals.iter().sum::<f64>() / r;
        let se = if vals.len() > 1 {
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0);
            (var / r).sqrt()
        } else {
            0.0
        };
        (mean, se)
    };

    let conts: Vec<f64> = per_replica.iter().map(|(c, _, _)| *c).collect();
    let (rho_continuous, rho_continuous_stderr) = mean_se(&conts);

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let vals: Vec<f64> = per_replica.iter().map(|(_, rates, _)| rates[i]).collect();
        let (mean, se) = mean_se(&vals);
        rows.push(ConvergenceRow {
            t: study.t_grid[i],
            rho_over_t: mean,
            stderr: se,
            windows: per_replica[0].2[i],
        });
    }

    let mut monotone = true;
    for pair in rows.windows(2) {
        let d_coarse = (pair[0].rho_over_t - rho_continuous).abs();
        let d_fine = (pair[1].rho_over_t - rho_continuous).abs();
        if d_fine > d_coarse + 2.0 * (pair[0].stderr + pair[1].stderr) {
            monotone = false;
        }
    }

    Ok(ConvergenceTable {
        rows,
        rho_continuous,
        rho_continuous_stderr,
        monotone_approach: monotone,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct NyquistReport {
    pub exact: bool,
    pub rho_t_over_t: f64,
    pub rho_cont: f64,
}

/// Deterministic sampling check: below the Nyquist rate (T < 1/(2 rho))
/// the sampled rotation number recovers the continuous one exactly;
/// above it the report shows the aliased value.
pub fn nyquist_check(a: &Coeff2, t: f64) -> Result<NyquistReport> {
    if !(t > 0.0) {
        return Err(CoreError::InvalidParameter(format!("T must be positive, got {t}")));
    }
    let rho_cont = a.flow_rotation_rate();
    let phi_t = flow_deterministic(a, t);
    let rho_t_over_t = eigen_rotation_number(&phi_t).value() / t;
    let below = rho_cont == 0.0 || t < 1.0 / (2.0 * rho_cont);
    let exact = below && (rho_t_over_t - rho_cont).abs() < 1e-12;
    Ok(NyquistReport { exact, rho_t_over_t, rho_cont })
}

#[derive(Debug, Clone)]
pub struct BetaStudy {
    pub samples: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
    /// Histogram over the symmetric interval (-1/2, 1/2].
    pub histogram: EmpiricalMeasure,
}

/// Sample the wrapped one-window displacement beta_1^T = wrap(alpha_T -
/// alpha_0) over independent replicas of the cocycle.
pub fn beta_t_samples(
    spec: &CocycleSpec,
    t_window: f64,
    n_samples: u64,
    seed: u64,
    s0: [f64; 2],
    dt: f64,
    bins: usize,
) -> Result<BetaStudy> {
    if n_samples == 0 {
        return Err(CoreError::InvalidParameter("need at least one sample".into()));
    }
    let (steps, h) = window_steps(t_window, dt)?;
    let s0 = unit_or_err(s0)?;
    let samples: Result<Vec<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|idx| {
            let mut stepper = Stepper::new(spec, h, seed, idx);
            let mut st = AngState::new(s0);
            let a0 = st.alpha;
            for _ in 0..steps {
                stepper.step(&mut st)?;
            }
            Ok(wrap1(st.alpha - a0))
        })
        .collect();
    let samples = samples?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let stderr = if samples.len() > 1 {
        let var = samples.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let mut histogram = EmpiricalMeasure::with_origin(bins, -0.5);
    for &b in &samples {
        histogram.record(b);
    }
    Ok(BetaStudy { samples, mean, stderr, histogram })
}

/// Signed half-integer level crossings of the angular path over one window.
#[derive(Debug, Clone, Copy)]
pub struct WindingRecord {
    pub n_plus: u64,
    pub n_minus: u64,
}

impl WindingRecord {
    pub fn net(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

#[derive(Debug, Clone)]
pub struct WindingStudy {
    pub records: Vec<WindingRecord>,
    pub e_plus_over_t: f64,
    pub e_minus_over_t: f64,
}

/// Count anti-clockwise (n_plus) and clockwise (n_minus) crossings of the
/// antipodal levels k + 1/2 by the unwrapped angle on a fine grid.
pub fn winding_counts(
    spec: &CocycleSpec,
    t_window: f64,
    n_samples: u64,
    fine_dt: f64,
    seed: u64,
    s0: [f64; 2],
) -> Result<WindingStudy> {
    if n_samples == 0 {
        return Err(CoreError::InvalidParameter("need at least one sample".into()));
    }
    if !(fine_dt < t_window) {
        return Err(CoreError::InvalidParameter(
            "fine_dt must be smaller than the window".into(),
        ));
    }
    let (steps, h) = window_steps(t_window, fine_dt)?;
    let s0 = unit_or_err(s0)?;
    let records: Result<Vec<WindingRecord>> = (0..n_samples)
        .into_par_iter()
        .map(|idx| {
            let mut stepper = Stepper::new(spec, h, seed, idx);
            let mut st = AngState::new(s0);
            for _ in 0..steps {
                stepper.step(&mut st)?;
            }
            Ok(WindingRecord { n_plus: st.n_plus, n_minus: st.n_minus })
        })
        .collect();
    let records = records?;
    let n = records.len() as f64;
    let e_plus = records.iter().map(|r| r.n_plus as f64).sum::<f64>() / n;
    let e_minus = records.iter().map(|r| r.n_minus as f64).sum::<f64>() / n;
    Ok(WindingStudy {
        records,
        e_plus_over_t: e_plus / t_window,
        e_minus_over_t: e_minus / t_window,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ErratumCheck {
    /// max |(beta + k) - (alpha_T - alpha_0)| with k the wrap integer;
    /// exactly 0 in IEEE arithmetic.
    pub max_angle_defect: f64,
    /// Samples where the wrap integer disagrees with the net signed
    /// crossing count (must be 0).
    pub integer_defects: u64,
}

/// Per-trajectory check of the decomposition beta_1^T = (alpha_T - alpha_0)
/// - k, where the integer k must equal the net signed antipode-crossing
/// count of the fine path (the erratum's N is -k).
pub fn erratum_identity_check(
    spec: &CocycleSpec,
    t_window: f64,
    n_samples: u64,
    seed: u64,
    fine_dt: f64,
    s0: [f64; 2],
) -> Result<ErratumCheck> {
    if n_samples == 0 {
        return Err(CoreError::InvalidParameter("need at least one sample".into()));
    }
    let (steps, h) = window_steps(t_window, fine_dt)?;
    let s0 = unit_or_err(s0)?;
    let per: Result<Vec<(f64, u64)>> = (0..n_samples)
        .into_par_iter()
        .map(|idx| {
            let mut stepper = Stepper::new(spec, h, seed, idx);
            let mut st = AngState::new(s0);
            let a0 = st.alpha;
            for _ in 0..steps {
                stepper.step(&mut st)?;
            }
            let delta = st.alpha - a0;
            let beta = wrap1(delta);
            let k = delta - beta; // exact integer-valued float
            let net = st.n_plus as i64 - st.n_minus as i64;
            let angle_defect = ((beta + k) - delta).abs();
            let int_defect = (k - net as f64 != 0.0) as u64;
            Ok((angle_defect, int_defect))
        })
        .collect();
    let per = per?;
    Ok(ErratumCheck {
        max_angle_defect: per.iter().map(|(a, _)| *a).fold(0.0, f64::max),
        integer_defects: per.iter().map(|(_, d)| *d).sum(),
    })
}

/// Density at x (turns) of a Gaussian with mean mu and variance var wrapped
/// to the unit circle: the sum of the normal density over unit translates.
pub fn wrapped_gaussian_density(x: f64, mu: f64, var: f64) -> f64 {
    let sigma = var.sqrt();
    let kmax = (8.0 * sigma + (x - mu).abs()).ceil() as i64 + 1;
    let norm = 1.0 / (sigma * TAU.sqrt());
    let mut d = 0.0;
    for k in -kmax..=kmax {
        let z = (x + k as f64 - mu) / sigma;
        d += norm * (-0.5 * z * z).exp();
    }
    d
}

/// Quadrature oracle for E[wrap(Z)], Z ~ Normal(mu, var): Simpson
/// integration of x times the wrapped density over (-1/2, 1/2], which is
/// the sum of the integrals of (x - k) * density over unit translates.
pub fn wrapped_gaussian_mean(mu: f64, var: f64) -> f64 {
    assert!(var > 0.0, "variance must be positive");
    let sigma = var.sqrt();
    let mut n = ((64.0 / sigma).ceil() as usize).max(4096);
    if n % 2 == 1 {
        n += 1;
    }
    let h = 1.0 / n as f64;
    let f = |x: f64| x * wrapped_gaussian_density(x, mu, var);
    let mut total = f(-0.5) + f(0.5);
    for i in 1..n {
        let x = -0.5 + i as f64 * h;
        total += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    total * h / 3.0
}

/// Expected histogram masses of the wrapped Gaussian on a uniform binning
/// starting at `origin` (Simpson per bin).
pub fn wrapped_gaussian_bin_masses(bins: usize, origin: f64, mu: f64, var: f64) -> Vec<f64> {
    let w = 1.0 / bins as f64;
    let sub = 16usize;
    (0..bins)
        .map(|i| {
            let left = origin + i as f64 * w;
            let h = w / sub as f64;
            let f = |x: f64| wrapped_gaussian_density(x, mu, var);
            let mut total = f(left) + f(left + w);
            for j in 1..sub {
                let x = left + j as f64 * h;
                total += if j % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
            }
            total * h / 3.0
        })
        .collect()
}
