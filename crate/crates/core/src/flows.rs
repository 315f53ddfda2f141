//! Continuous linear cocycles on R^2 with exact tracking of the continuous
//! unwrapped angle in turns: deterministic matrix flows, real-noise linear
//! ODEs (RK4) and Stratonovich SDE cocycles (Heun predictor-corrector).

use std::f64::consts::TAU;

use crate::circle::wrap1;
use crate::error::{CoreError, Result};
use crate::estimate::RotationEstimate;
use crate::linear::{eigen_from_tr_det, Eigen2, Mat2};
use crate::noise::{bridge_split, counter_key, GaussianWalker};

/// Plain 2x2 coefficient matrix (a generator; determinant unrestricted).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeff2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Coeff2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Coeff2 {
        Coeff2 { a11, a12, a21, a22 }
    }

    pub const ZERO: Coeff2 = Coeff2::new(0.0, 0.0, 0.0, 0.0);

    /// Generator of the rotation at `rate` turns per unit time.
    pub fn rotation_generator(rate: f64) -> Coeff2 {
        Coeff2::new(0.0, -TAU * rate, TAU * rate, 0.0)
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn eigenvalues(&self) -> Eigen2 {
        eigen_from_tr_det(self.trace(), self.det())
    }

    /// Continuous rotation number of the flow of this generator, in turns
    /// per unit time: b/(2 pi) for a complex pair a +/- ib, 0 otherwise.
    pub fn flow_rotation_rate(&self) -> f64 {
        match self.eigenvalues() {
            Eigen2::Complex { im, .. } => im / TAU,
            Eigen2::Real { .. } => 0.0,
        }
    }
}

/// e^{tA} by the closed-form 2x2 expression, split on the sign of the
/// shifted discriminant (trigonometric, hyperbolic and nilpotent cases).
pub fn flow_deterministic(a: &Coeff2, t: f64) -> Mat2 {
    let mu = 0.5 * a.trace();
    // N = A - mu I satisfies N^2 = q I
    let n11 = a.a11 - mu;
    let q = n11 * n11 + a.a12 * a.a21;
    let (c, s) = if q < -1e-30 {
        let w = (-q).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else if q > 1e-30 {
        let l = q.sqrt();
        ((l * t).cosh(), (l * t).sinh() / l)
    } else {
        (1.0, t)
    };
    let e = (mu * t).exp();
    Mat2::new_unchecked(
        e * (c + s * n11),
        e * (s * a.a12),
        e * (s * a.a21),
        e * (c - s * n11),
    )
}

/// The angular drift f(s) of the Stratonovich system, in radians per unit
/// time, with v the anti-clockwise perpendicular of s:
/// f(s) = <As,v> + sum_i ( 1/2 <(B^i)^2 s, v> - <B^i s, s><B^i s, v> ).
pub fn angular_drift(a: &Coeff2, bs: &[Coeff2], s: [f64; 2]) -> f64 {
    let v = [-s[1], s[0]];
    let dot = |p: [f64; 2], q: [f64; 2]| p[0] * q[0] + p[1] * q[1];
    let mut f = dot(a.apply(s), v);
    for b in bs {
        let b_s = b.apply(s);
        let b2_s = b.apply(b_s);
        f += 0.5 * dot(b2_s, v) - dot(b_s, s) * dot(b_s, v);
    }
    f
}

/// Driving path of a real-noise linear ODE: a stationary (or periodic)
/// assignment of coefficient matrices to times, reproducible from a seed.
#[derive(Debug, Clone)]
pub enum RealNoiseDriver {
    /// Deterministic periodic switching among the given coefficients.
    /// Switch times falling strictly inside an integration step cost the
    /// matrix/angle consistency O(dt^2) at that step; align them with the
    /// grid when that matters.
    PeriodicSwitch { period: f64, coeffs: Vec<Coeff2> },
    /// i.i.d. coefficient per dwell window, counter-seeded so any window
    /// can be queried independently. Same grid-alignment caveat.
    RandomSwitch { dwell: f64, coeffs: Vec<Coeff2> },
    /// Smooth stationary modulation A(t) = base + sin(2 pi (f t + phase))
    /// * amplitude, with the phase drawn uniformly from the seed.
    Modulated { base: Coeff2, amplitude: Coeff2, freq: f64 },
}

impl RealNoiseDriver {
    pub fn constant(a: Coeff2) -> RealNoiseDriver {
        RealNoiseDriver::PeriodicSwitch { period: 1.0, coeffs: vec![a] }
    }

    pub fn coeff_at(&self, t: f64, seed: u64) -> Coeff2 {
        match self {
            RealNoiseDriver::PeriodicSwitch { period, coeffs } => {
                let k = coeffs.len();
                let phase = (t / period).rem_euclid(1.0);
                let idx = ((phase * k as f64) as usize).min(k - 1);
                coeffs[idx]
            }
            RealNoiseDriver::RandomSwitch { dwell, coeffs } => {
                let window = (t / dwell).floor() as i64 as u64;
                let idx = (counter_key(&[seed, window, 0x5EED]) % coeffs.len() as u64) as usize;
                coeffs[idx]
            }
            RealNoiseDriver::Modulated { base, amplitude, freq } => {
                let phase = counter_key(&[seed, 0x0FA5E]) as f64 / u64::MAX as f64;
                let w = (TAU * (freq * t + phase)).sin();
                Coeff2::new(
                    base.a11 + w * amplitude.a11,
                    base.a12 + w * amplitude.a12,
                    base.a21 + w * amplitude.a21,
                    base.a22 + w * amplitude.a22,
                )
            }
        }
    }
}

/// A continuous linear cocycle on R^2.
#[derive(Debug, Clone)]
pub enum CocycleSpec {
    Deterministic { a: Coeff2 },
    RealNoise { driver: RealNoiseDriver },
    Sde { a: Coeff2, b: Vec<Coeff2> },
}

impl CocycleSpec {
    pub fn deterministic(a: Coeff2) -> CocycleSpec {
        CocycleSpec::Deterministic { a }
    }

    pub fn real_noise(driver: RealNoiseDriver) -> CocycleSpec {
        CocycleSpec::RealNoise { driver }
    }

    pub fn sde(a: Coeff2, b: Vec<Coeff2>) -> Result<CocycleSpec> {
        if b.is_empty() {
            return Err(CoreError::Empty("diffusion coefficient list"));
        }
        Ok(CocycleSpec::Sde { a, b })
    }

    /// The random linear rotation: dx = 2 pi J x dt + 2 pi J x o dW, whose
    /// unwrapped angle is exactly t + W_t turns and whose rotation number
    /// is 1 turn per unit time.
    pub fn noisy_rotation() -> CocycleSpec {
        let j = Coeff2::rotation_generator(1.0);
        CocycleSpec::Sde { a: j, b: vec![j] }
    }
}

/// Stratonovich-Heun configuration. The scheme is fixed; dt halves
/// automatically whenever a step would turn the angle by a quarter turn.
#[derive(Debug, Clone, Copy)]
pub struct SdeConfig {
    pub dt: f64,
    pub seed: u64,
}

impl SdeConfig {
    pub fn new(dt: f64, seed: u64) -> Result<SdeConfig> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(CoreError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        Ok(SdeConfig { dt, seed })
    }
}

/// Time-indexed path of cocycle matrices with the continuous unwrapped
/// angle (turns) and the unit direction path.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub matrices: Vec<Mat2>,
    pub alpha: Vec<f64>,
    pub s: Vec<[f64; 2]>,
}

impl Trajectory {
    pub fn total_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0) - self.times[0]
    }

    pub fn steps(&self) -> usize {
        self.times.len().saturating_sub(1)
    }
}

const MAX_HALVINGS: u32 = 14;

/// Direction-and-angle state advanced by the steppers. `x` is the
/// (un-normalized) direction vector; `alpha` the unwrapped angle in turns.
/// Signed half-integer level crossings of alpha relative to `alpha_ref`
/// are counted on every accepted substep.
#[derive(Debug, Clone)]
pub(crate) struct AngState {
    pub x: [f64; 2],
    pub alpha: f64,
    alpha_ref: f64,
    band: i64,
    pub n_plus: u64,
    pub n_minus: u64,
}

impl AngState {
    pub fn new(s0: [f64; 2]) -> AngState {
        let alpha = wrap1(s0[1].atan2(s0[0]) / TAU);
        AngState { x: s0, alpha, alpha_ref: alpha, band: 0, n_plus: 0, n_minus: 0 }
    }

    pub fn unit(&self) -> [f64; 2] {
        let n = (self.x[0] * self.x[0] + self.x[1] * self.x[1]).sqrt();
        [self.x[0] / n, self.x[1] / n]
    }

    #[inline]
    fn bookkeep(&mut self) {
        let rel = self.alpha - self.alpha_ref;
        let nb = (rel - 0.5).ceil() as i64;
        if nb > self.band {
            self.n_plus += (nb - self.band) as u64;
        } else if nb < self.band {
            self.n_minus += (self.band - nb) as u64;
        }
        self.band = nb;
    }

    /// Accept a move to xn if it turns by less than a quarter turn,
    /// unwrapping the angle geometrically.
    #[inline]
    fn try_advance(&mut self, xn: [f64; 2]) -> bool {
        let cross = self.x[0] * xn[1] - self.x[1] * xn[0];
        let dot = self.x[0] * xn[0] + self.x[1] * xn[1];
        let da = cross.atan2(dot) / TAU;
        if !(da.abs() < 0.25) {
            return false;
        }
        self.alpha += da;
        self.set_x(xn);
        self.bookkeep();
        true
    }

    /// Accept a move with an externally integrated angle increment (the
    /// real-noise angular ODE path), under the same quarter-turn contract.
    #[inline]
    fn try_advance_with_delta(&mut self, xn: [f64; 2], da: f64) -> bool {
        if !(da.abs() < 0.25) {
            return false;
        }
        self.alpha += da;
        self.set_x(xn);
        self.bookkeep();
        true
    }

    #[inline]
    fn set_x(&mut self, xn: [f64; 2]) {
        let m = xn[0] * xn[0] + xn[1] * xn[1];
        if m > 1e120 || m < 1e-120 {
            let inv = 1.0 / m.sqrt();
            self.x = [xn[0] * inv, xn[1] * inv];
        } else {
            self.x = xn;
        }
    }
}

/// One Stratonovich-Heun base step: with M = A h + sum_i B^i dW_i the
/// update matrix is U = I + M + M^2/2 (identical to averaging the Euler
/// predictor and corrector slopes, since the system is linear).
#[inline]
fn heun_update(a: &Coeff2, bs: &[Coeff2], h: f64, dws: &[f64]) -> Mat2 {
    let mut m11 = a.a11 * h;
    let mut m12 = a.a12 * h;
    let mut m21 = a.a21 * h;
    let mut m22 = a.a22 * h;
    for (b, &dw) in bs.iter().zip(dws) {
        m11 += b.a11 * dw;
        m12 += b.a12 * dw;
        m21 += b.a21 * dw;
        m22 += b.a22 * dw;
    }
    // U = I + M + M^2/2; det(U) > 0 for every real M.
    let s11 = 0.5 * (m11 * m11 + m12 * m21);
    let s12 = 0.5 * m12 * (m11 + m22);
    let s21 = 0.5 * m21 * (m11 + m22);
    let s22 = 0.5 * (m22 * m22 + m12 * m21);
    Mat2::new_unchecked(1.0 + m11 + s11, m12 + s12, m21 + s21, 1.0 + m22 + s22)
}

/// RK4 transition matrix for Phi' = A(t) Phi over [t, t+h], from identity.
/// The right endpoint is sampled one-sidedly from inside the step so that
/// piecewise drivers whose switch times sit on the grid integrate
/// segment-exactly.
fn rk4_update(driver: &RealNoiseDriver, seed: u64, t: f64, h: f64) -> Mat2 {
    let a1 = driver.coeff_at(t, seed);
    let am = driver.coeff_at(t + 0.5 * h, seed);
    let a4 = driver.coeff_at(t + h * (1.0 - 1e-9), seed);
    let id = Mat2::identity();
    let k1 = coeff_mul_mat(&a1, &id);
    let k2 = coeff_mul_mat(&am, &mat_axpy(&id, &k1, 0.5 * h));
    let k3 = coeff_mul_mat(&am, &mat_axpy(&id, &k2, 0.5 * h));
    let k4 = coeff_mul_mat(&a4, &mat_axpy(&id, &k3, h));
    Mat2::new_unchecked(
        1.0 + h / 6.0 * (k1.a11 + 2.0 * k2.a11 + 2.0 * k3.a11 + k4.a11),
        h / 6.0 * (k1.a12 + 2.0 * k2.a12 + 2.0 * k3.a12 + k4.a12),
        h / 6.0 * (k1.a21 + 2.0 * k2.a21 + 2.0 * k3.a21 + k4.a21),
        1.0 + h / 6.0 * (k1.a22 + 2.0 * k2.a22 + 2.0 * k3.a22 + k4.a22),
    )
}

fn coeff_mul_mat(a: &Coeff2, m: &Mat2) -> Mat2 {
    Mat2::new_unchecked(
        a.a11 * m.a11 + a.a12 * m.a21,
        a.a11 * m.a12 + a.a12 * m.a22,
        a.a21 * m.a11 + a.a22 * m.a21,
        a.a21 * m.a12 + a.a22 * m.a22,
    )
}

fn mat_axpy(m: &Mat2, k: &Mat2, c: f64) -> Mat2 {
    Mat2::new_unchecked(
        m.a11 + c * k.a11,
        m.a12 + c * k.a12,
        m.a21 + c * k.a21,
        m.a22 + c * k.a22,
    )
}

/// RK4 increment of the angular ODE alpha' = <v, A(t) s>/(2 pi) (turns).
fn rk4_angle_delta(driver: &RealNoiseDriver, seed: u64, t: f64, h: f64, alpha: f64) -> f64 {
    let rate = |tt: f64, aa: f64| {
        let (sn, cs) = (TAU * aa).sin_cos();
        let s = [cs, sn];
        let a = driver.coeff_at(tt, seed);
        angular_drift(&a, &[], s) / TAU
    };
    let k1 = rate(t, alpha);
    let k2 = rate(t + 0.5 * h, alpha + 0.5 * h * k1);
    let k3 = rate(t + 0.5 * h, alpha + 0.5 * h * k2);
    let k4 = rate(t + h * (1.0 - 1e-9), alpha + h * k3);
    h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Streaming integrator over one base grid; `step` advances one base step
/// of size dt and returns the transition matrix of that step.
pub(crate) enum Stepper<'a> {
    Det {
        a: Coeff2,
        u: Mat2,
        dt: f64,
    },
    Real {
        driver: &'a RealNoiseDriver,
        seed: u64,
        // time is derived as k*dt: accumulating t += dt drifts across
        // driver switch boundaries
        k: u64,
        dt: f64,
    },
    Sde {
        a: Coeff2,
        b: &'a [Coeff2],
        dt: f64,
        walker: GaussianWalker,
        seed: u64,
        stream: u64,
        step: u64,
        dws: Vec<f64>,
    },
}

impl<'a> Stepper<'a> {
    pub fn new(spec: &'a CocycleSpec, dt: f64, seed: u64, stream: u64) -> Stepper<'a> {
        match spec {
            CocycleSpec::Deterministic { a } => {
                Stepper::Det { a: *a, u: flow_deterministic(a, dt), dt }
            }
            CocycleSpec::RealNoise { driver } => Stepper::Real { driver, seed, k: 0, dt },
            CocycleSpec::Sde { a, b } => Stepper::Sde {
                a: *a,
                b,
                dt,
                walker: GaussianWalker::new(seed, stream),
                seed,
                stream,
                step: 0,
                dws: vec![0.0; b.len()],
            },
        }
    }

    pub fn step(&mut self, st: &mut AngState) -> Result<Mat2> {
        match self {
            Stepper::Det { a, u, dt } => det_substep(a, *u, *dt, st, 0),
            Stepper::Real { driver, seed, k, dt } => {
                let t = *k as f64 * *dt;
                let out = real_substep(driver, *seed, t, *dt, st, 0);
                *k += 1;
                out
            }
            Stepper::Sde { a, b, dt, walker, seed, stream, step, dws } => {
                let sq = dt.sqrt();
                for dw in dws.iter_mut() {
                    *dw = sq * walker.normal();
                }
                let out = sde_substep(a, b, *dt, dws, st, *seed, *stream, *step, 0, 0);
                *step += 1;
                out
            }
        }
    }
}

fn det_substep(a: &Coeff2, u: Mat2, h: f64, st: &mut AngState, depth: u32) -> Result<Mat2> {
    let xn = u.apply(st.x);
    if st.try_advance(xn) {
        return Ok(u);
    }
    if depth >= MAX_HALVINGS {
        return Err(CoreError::StepFloorReached { dt_floor: h });
    }
    let uh = flow_deterministic(a, 0.5 * h);
    let u1 = det_substep(a, uh, 0.5 * h, st, depth + 1)?;
    let u2 = det_substep(a, uh, 0.5 * h, st, depth + 1)?;
    Ok(u2.mul(&u1))
}

fn real_substep(
    driver: &RealNoiseDriver,
    seed: u64,
    t: f64,
    h: f64,
    st: &mut AngState,
    depth: u32,
) -> Result<Mat2> {
    let u = rk4_update(driver, seed, t, h);
    let da = rk4_angle_delta(driver, seed, t, h, st.alpha);
    let xn = u.apply(st.x);
    if st.try_advance_with_delta(xn, da) {
        return Ok(u);
    }
    if depth >= MAX_HALVINGS {
        return Err(CoreError::StepFloorReached { dt_floor: h });
    }
    let u1 = real_substep(driver, seed, t, 0.5 * h, st, depth + 1)?;
    let u2 = real_substep(driver, seed, t + 0.5 * h, 0.5 * h, st, depth + 1)?;
    Ok(u2.mul(&u1))
}

#[allow(clippy::too_many_arguments)]
fn sde_substep(
    a: &Coeff2,
    bs: &[Coeff2],
    h: f64,
    dws: &[f64],
    st: &mut AngState,
    seed: u64,
    stream: u64,
    step: u64,
    depth: u32,
    idx: u64,
) -> Result<Mat2> {
    let u = heun_update(a, bs, h, dws);
    let xn = u.apply(st.x);
    if st.try_advance(xn) {
        return Ok(u);
    }
    if depth >= MAX_HALVINGS {
        return Err(CoreError::StepFloorReached { dt_floor: h });
    }
    // Brownian-bridge refinement: halve dt, reusing this step's increments.
    let mut left = Vec::with_capacity(dws.len());
    let mut right = Vec::with_capacity(dws.len());
    for (i, &dw) in dws.iter().enumerate() {
        let key = counter_key(&[seed, stream, step, depth as u64, idx, i as u64, 0xB41D6E]);
        let (l, r) = bridge_split(dw, h, key);
        left.push(l);
        right.push(r);
    }
    let u1 = sde_substep(a, bs, 0.5 * h, &left, st, seed, stream, step, depth + 1, 2 * idx)?;
    let u2 = sde_substep(a, bs, 0.5 * h, &right, st, seed, stream, step, depth + 1, 2 * idx + 1)?;
    Ok(u2.mul(&u1))
}

fn integrate_on_grid(
    spec: &CocycleSpec,
    t_final: f64,
    dt: f64,
    seed: u64,
    s0: [f64; 2],
) -> Result<Trajectory> {
    if !(t_final > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "final time must be positive, got {t_final}"
        )));
    }
    if !(dt > 0.0) {
        return Err(CoreError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let s0 = normalize(s0)?;
    let n = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / n as f64;
    let mut stepper = Stepper::new(spec, h, seed, 0);
    let mut st = AngState::new(s0);
    let mut phi = Mat2::identity();
    let mut times = Vec::with_capacity(n + 1);
    let mut matrices = Vec::with_capacity(n + 1);
    let mut alpha = Vec::with_capacity(n + 1);
    let mut s = Vec::with_capacity(n + 1);
    times.push(0.0);
    matrices.push(phi);
    alpha.push(st.alpha);
    s.push(st.unit());
    for k in 1..=n {
        let u = stepper.step(&mut st)?;
        phi = u.mul(&phi);
        times.push(k as f64 * h);
        matrices.push(phi);
        alpha.push(st.alpha);
        s.push(st.unit());
    }
    Ok(Trajectory { times, matrices, alpha, s })
}

fn normalize(v: [f64; 2]) -> Result<[f64; 2]> {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if !n.is_finite() || n == 0.0 {
        return Err(CoreError::InvalidParameter("initial direction must be nonzero".into()));
    }
    Ok([v[0] / n, v[1] / n])
}

/// Integrate a real-noise linear ODE cocycle: RK4 for the matrix equation
/// and for the angular equation on the same grid.
pub fn integrate_real_noise(
    spec: &CocycleSpec,
    t_final: f64,
    dt: f64,
    seed: u64,
    s0: [f64; 2],
) -> Result<Trajectory> {
    match spec {
        CocycleSpec::RealNoise { .. } | CocycleSpec::Deterministic { .. } => {
            integrate_on_grid(spec, t_final, dt, seed, s0)
        }
        CocycleSpec::Sde { .. } => Err(CoreError::InvalidParameter(
            "integrate_real_noise expects a deterministic or real-noise cocycle".into(),
        )),
    }
}

/// Integrate a Stratonovich SDE cocycle with the Heun predictor-corrector,
/// sharing the Gaussian increments between the matrix path and the angular
/// path; the angle is unwrapped continuously in turns.
pub fn integrate_sde(
    spec: &CocycleSpec,
    t_final: f64,
    cfg: &SdeConfig,
    s0: [f64; 2],
) -> Result<Trajectory> {
    match spec {
        CocycleSpec::Sde { .. } => integrate_on_grid(spec, t_final, cfg.dt, cfg.seed, s0),
        _ => Err(CoreError::InvalidParameter("integrate_sde expects an SDE cocycle".into())),
    }
}

/// Integrate any cocycle kind on a uniform grid (deterministic flows use
/// the exact exponential per step).
pub fn integrate(
    spec: &CocycleSpec,
    t_final: f64,
    dt: f64,
    seed: u64,
    s0: [f64; 2],
) -> Result<Trajectory> {
    integrate_on_grid(spec, t_final, dt, seed, s0)
}

/// (alpha(T) - alpha(0)) / T in turns per unit time.
pub fn continuous_rotation_number(traj: &Trajectory) -> Result<RotationEstimate> {
    let t = traj.total_time();
    if !(t > 0.0) {
        return Err(CoreError::InvalidParameter(
            "trajectory must cover a positive total time".into(),
        ));
    }
    let rate = (traj.alpha[traj.alpha.len() - 1] - traj.alpha[0]) / t;
    let mut est = RotationEstimate::from_rate(rate, traj.steps() as u64);
    est.truncation_bound = 1.0 / t;
    Ok(est)
}
