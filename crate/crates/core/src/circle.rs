//! Circle arithmetic, normalized lifts and rotation numbers of single
//! orientation-preserving circle homeomorphisms.
//!
//! A circle point is represented by any real number of turns; the canonical
//! representative lives in the half-open symmetric interval (-1/2, 1/2].
//! A homeomorphism is carried by a normalized lift F with F(x+1) = F(x)+1
//! and F(0) in (-1/2, 1/2].

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::estimate::{KahanSum, RotationEstimate};
use crate::linear::Mat2;

/// Angle in turns constrained to (-1/2, 1/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedTurn(f64);

impl WrappedTurn {
    /// Wrap a finite real to its representative in (-1/2, 1/2].
    pub fn wrap(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(CoreError::NonFinite(x));
        }
        Ok(Self::wrap_unchecked(x))
    }

    #[inline]
    pub fn wrap_unchecked(x: f64) -> Self {
        WrappedTurn(wrap1(x))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<WrappedTurn> for f64 {
    fn from(w: WrappedTurn) -> f64 {
        w.0
    }
}

/// Representative of x mod 1 in (-1/2, 1/2]. The subtraction of the integer
/// part is exact in IEEE arithmetic, so wrap1(wrap1(x)) == wrap1(x).
#[inline]
pub fn wrap1(x: f64) -> f64 {
    x - (x - 0.5).ceil()
}

/// x mod 1 in [0, 1), guarded against the rounding-to-1 edge case.
#[inline]
pub(crate) fn frac1(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// The public operation form of [WrappedTurn::wrap].
pub fn wrap_turn(x: f64) -> Result<WrappedTurn> {
    WrappedTurn::wrap(x)
}

/// Distance between two angles on the circle (turns), at most 1/2.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    wrap1(a - b).abs()
}

const VALIDATION_GRID: usize = 512;
const MIN_TABLE: usize = 256;
const BISECT_TOL: f64 = 1e-12;

/// Normalized monotone lift of an orientation-preserving circle
/// homeomorphism: F(x) = x + delta(x mod 1) with F(0) in (-1/2, 1/2].
///
/// Three representations are supported: closed-form callables, strictly
/// increasing tables with piecewise-linear interpolation, and the exact
/// projective lift of a positive-determinant 2x2 matrix.
#[derive(Clone)]
pub struct Lift {
    repr: LiftRepr,
    /// Integer translation subtracted from the raw representation so that
    /// F(0) lands in (-1/2, 1/2].
    shift: f64,
}

#[derive(Clone)]
enum LiftRepr {
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Values of the raw lift at i/B for i = 0..B; F(x+1) = F(x)+1 extends.
    Table(Arc<Vec<f64>>),
    /// psi0 = normalized angle of g e1, the value of the lift at 0.
    Projective { g: Mat2, psi0: f64 },
}

impl std::fmt::Debug for Lift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.repr {
            LiftRepr::Analytic(_) => "analytic",
            LiftRepr::Table(_) => "table",
            LiftRepr::Projective { .. } => "projective",
        };
        write!(f, "Lift({kind}, F(0)={})", self.eval(0.0))
    }
}

impl Lift {
    /// Validate a raw lift on a sampled grid and normalize it by the unique
    /// integer translation putting F(0) in (-1/2, 1/2].
    pub fn from_fn<F>(raw: F) -> Result<Lift>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        validate_raw_lift(&raw)?;
        let shift = (raw(0.0) - 0.5).ceil();
        let lift = Lift { repr: LiftRepr::Analytic(Arc::new(raw)), shift };
        lift.check_span()?;
        Ok(lift)
    }

    /// Rigid rotation by `a` turns (normalized representative).
    pub fn rotation(a: f64) -> Lift {
        let aw = wrap1(a);
        Lift { repr: LiftRepr::Analytic(Arc::new(move |x| x + aw)), shift: 0.0 }
    }

    /// Table of raw lift values at i/B, i = 0..B (B >= 256), interpolated
    /// piecewise-linearly and extended by F(x+1) = F(x)+1.
    pub fn from_table(values: Vec<f64>) -> Result<Lift> {
        if values.len() < MIN_TABLE {
            return Err(CoreError::InvalidLift(format!(
                "table needs at least {MIN_TABLE} grid values, got {}",
                values.len()
            )));
        }
        let b = values.len();
        for i in 0..b {
            if !values[i].is_finite() {
                return Err(CoreError::NonFinite(values[i]));
            }
            let next = if i + 1 == b { values[0] + 1.0 } else { values[i + 1] };
            if next <= values[i] {
                return Err(CoreError::InvalidLift(format!(
                    "table is not strictly increasing at index {i}"
                )));
            }
        }
        let shift = (values[0] - 0.5).ceil();
        let lift = Lift { repr: LiftRepr::Table(Arc::new(values)), shift };
        lift.check_span()?;
        Ok(lift)
    }

    /// Piecewise-linear lift through circle point constraints (x_i, y_i)
    /// with x_i in [0, 1): the unique PL interpolant is resampled on a
    /// uniform 512-point grid (exact when the x_i are multiples of 1/512).
    pub fn from_points(points: &[(f64, f64)]) -> Result<Lift> {
        if points.is_empty() {
            return Err(CoreError::Empty("constraint point list"));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in pts.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(CoreError::InvalidLift(
                    "constraint points must be strictly increasing in x and y".into(),
                ));
            }
        }
        let first = pts[0];
        pts.push((first.0 + 1.0, first.1 + 1.0));

        let b = VALIDATION_GRID;
        let mut values = Vec::with_capacity(b);
        let mut seg = 0usize;
        for i in 0..b {
            // grid point relative to the first constraint
            let x = first.0 + i as f64 / b as f64;
            while seg + 1 < pts.len() - 1 && pts[seg + 1].0 <= x {
                seg += 1;
            }
            let (x0, y0) = pts[seg];
            let (x1, y1) = pts[seg + 1];
            let t = (x - x0) / (x1 - x0);
            values.push(y0 + t * (y1 - y0));
        }
        if first.0 == 0.0 {
            Lift::from_table(values)
        } else {
            // shift the tabulated grid back to start at 0
            let delta: Vec<(f64, f64)> = (0..b)
                .map(|i| (frac1(first.0 + i as f64 / b as f64), values[i] - (first.0 + i as f64 / b as f64)))
                .collect();
            Lift::from_fn(move |x: f64| {
                let f = frac1(x);
                // nearest tabulated displacement (grid is uniform mod 1)
                let idx = ((f - delta[0].0) * b as f64).rem_euclid(b as f64) as usize % b;
                x + delta[idx].1
            })
        }
    }

    pub(crate) fn projective(g: Mat2, psi0: f64) -> Lift {
        Lift { repr: LiftRepr::Projective { g, psi0 }, shift: 0.0 }
    }

    fn check_span(&self) -> Result<()> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..VALIDATION_GRID {
            let x = i as f64 / VALIDATION_GRID as f64;
            let d = self.displacement(x);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if hi - lo >= 1.0 || lo <= -1.5 || hi >= 1.5 {
            return Err(CoreError::InvalidLift(format!(
                "displacement span [{lo}, {hi}] violates the lift bounds"
            )));
        }
        Ok(())
    }

    /// F(x) for any real x.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.repr {
            LiftRepr::Analytic(f) => f(x) - self.shift,
            LiftRepr::Table(v) => table_eval(v, x) - self.shift,
            LiftRepr::Projective { g, psi0 } => psi_eval(g, *psi0, x),
        }
    }

    /// The angular displacement beta(s) = F(x) - x for any representative x
    /// of the circle point s (well defined by periodicity).
    #[inline]
    pub fn displacement(&self, s: f64) -> f64 {
        self.eval(s) - s
    }

    /// Monotone bisection inverse: the x with F(x) = y, to 1e-12.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let mut lo = y - 1.6;
        let mut hi = y + 1.6;
        if self.eval(lo) > y || self.eval(hi) < y {
            return Err(CoreError::BisectionDiverged);
        }
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= BISECT_TOL {
                return Ok(0.5 * (lo + hi));
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn is_normalized(&self) -> bool {
        let f0 = self.eval(0.0);
        -0.5 < f0 && f0 <= 0.5
    }
}

fn validate_raw_lift<F: Fn(f64) -> f64>(raw: &F) -> Result<()> {
    let n = VALIDATION_GRID;
    let mut prev = raw(0.0);
    if !prev.is_finite() {
        return Err(CoreError::NonFinite(prev));
    }
    for i in 1..=n {
        let x = i as f64 / n as f64;
        let v = raw(x);
        if !v.is_finite() {
            return Err(CoreError::NonFinite(v));
        }
        if v <= prev {
            return Err(CoreError::InvalidLift(format!(
                "not strictly increasing on the validation grid near x = {x}"
            )));
        }
        prev = v;
    }
    for i in 0..16 {
        let x = i as f64 / 16.0 - 0.5;
        if (raw(x + 1.0) - raw(x) - 1.0).abs() > 1e-9 {
            return Err(CoreError::InvalidLift(format!(
                "F(x+1) - F(x) - 1 = {} at x = {x}",
                raw(x + 1.0) - raw(x) - 1.0
            )));
        }
    }
    Ok(())
}

#[inline]
fn table_eval(v: &[f64], x: f64) -> f64 {
    let b = v.len();
    let xf = x.floor();
    let mut frac = x - xf;
    if frac >= 1.0 {
        frac = 0.0;
    }
    let pos = frac * b as f64;
    let j = (pos as usize).min(b - 1);
    let t = pos - j as f64;
    let vj = v[j];
    let vnext = if j + 1 == b { v[0] + 1.0 } else { v[j + 1] };
    xf + vj + t * (vnext - vj)
}

/// Exact evaluation of the normalized projective lift of g.
///
/// delta has period 1/2 and span < 1/2 for linear maps, so the value at
/// x mod 1/2 is the unique representative of the raw projected angle in
/// [psi0, psi0 + 1/2); the rounding below selects that branch with a
/// quarter-turn safety margin.
#[inline]
pub(crate) fn psi_eval(g: &Mat2, psi0: f64, x: f64) -> f64 {
    let base = (2.0 * x).floor() * 0.5;
    let xr = x - base; // in [0, 1/2)
    let (sn, cs) = (TAU * xr).sin_cos();
    let y1 = g.a11 * cs + g.a12 * sn;
    let y2 = g.a21 * cs + g.a22 * sn;
    let phi = y2.atan2(y1) / TAU;
    let m = (psi0 - phi + 0.25).round();
    phi + m + base
}

/// Orientation-preserving circle homeomorphism, carried by its normalized
/// lift.
#[derive(Clone, Debug)]
pub struct CircleHomeo {
    lift: Lift,
}

impl CircleHomeo {
    pub fn new(lift: Lift) -> Self {
        debug_assert!(lift.is_normalized());
        CircleHomeo { lift }
    }

    pub fn rotation(a: f64) -> Self {
        CircleHomeo { lift: Lift::rotation(a) }
    }

    pub fn lift(&self) -> &Lift {
        &self.lift
    }

    /// Action on a circle point (in turns), returned wrapped.
    pub fn apply(&self, p: f64) -> f64 {
        wrap1(self.lift.eval(p))
    }
}

/// Normalize a raw lift callable into a [Lift] (the unique integer
/// translation puts F(0) into (-1/2, 1/2]).
pub fn normalize_lift<F>(raw: F) -> Result<Lift>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Lift::from_fn(raw)
}

/// Pointwise composition g(f(x)). The result is a valid lift of the
/// composed homeomorphism and is deliberately NOT re-normalized: the
/// accumulated winding is the quantity the rotation-number average divides
/// by n.
pub fn lift_compose(g: &Lift, f: &Lift) -> Lift {
    let g = g.clone();
    let f = f.clone();
    Lift {
        repr: LiftRepr::Analytic(Arc::new(move |x| g.eval(f.eval(x)))),
        shift: 0.0,
    }
}

/// (F^(n)(x0) - x0)/n, wrapped, with the 1/n truncation bound recorded.
pub fn classical_rotation_number(f: &CircleHomeo, n_iter: u64, x0: f64) -> RotationEstimate {
    assert!(n_iter >= 1);
    let lift = &f.lift;
    let mut pos = frac1(x0);
    let mut acc = KahanSum::new();
    for _ in 0..n_iter {
        let d = lift.displacement(pos);
        acc.add(d);
        pos = frac1(pos + d);
    }
    RotationEstimate::from_rate(acc.total() / n_iter as f64, n_iter)
}

/// The ordered lifted orbit of a point: a nondecreasing real sequence
/// covering the given circle orbit with gaps in [0, 1).
#[derive(Debug, Clone)]
pub struct OrbitSequence {
    thetas: Vec<f64>,
}

impl OrbitSequence {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// Build the ordered lifted orbit of p from successive orbit images
/// f_n ∘ ... ∘ f_1(p) (circle points, any representatives).
pub fn ordered_lifted_orbit(images: &[f64], p: f64) -> OrbitSequence {
    let mut thetas = Vec::with_capacity(images.len() + 1);
    let mut theta = wrap1(p);
    thetas.push(theta);
    for &img in images {
        let gap = frac1(img - theta);
        theta += gap;
        thetas.push(theta);
    }
    OrbitSequence { thetas }
}

/// (theta_n - theta_0)/n for the final index, wrapped.
pub fn orbit_rotation_number(orbit: &OrbitSequence) -> Result<RotationEstimate> {
    if orbit.thetas.len() < 2 {
        return Err(CoreError::InvalidParameter(
            "orbit rotation number needs an orbit of length >= 2".into(),
        ));
    }
    let n = (orbit.thetas.len() - 1) as u64;
    let rate = (orbit.thetas[orbit.thetas.len() - 1] - orbit.thetas[0]) / n as f64;
    Ok(RotationEstimate::from_rate(rate, n))
}

const CONJUGATE_TABLE: usize = 2048;

/// h ∘ f ∘ h^{-1}, with h^{-1} computed by monotone bisection on the lift.
///
/// With `reverse` set, the conjugation is by the orientation-reversing
/// homeomorphism whose (decreasing) lift is -H, which flips the sign of the
/// rotation number.
pub fn conjugate(h: &CircleHomeo, f: &CircleHomeo, reverse: bool) -> Result<CircleHomeo> {
    let hl = &h.lift;
    let fl = &f.lift;
    let b = CONJUGATE_TABLE;
    let mut values = Vec::with_capacity(b);
    for i in 0..b {
        let x = i as f64 / b as f64;
        let y = if reverse {
            let u = hl.inverse(-x)?;
            -hl.eval(fl.eval(u))
        } else {
            let u = hl.inverse(x)?;
            hl.eval(fl.eval(u))
        };
        values.push(y);
    }
    Ok(CircleHomeo::new(Lift::from_table(values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arnold(omega: f64, k: f64) -> CircleHomeo {
        CircleHomeo::new(Lift::from_fn(move |x| x + omega + k * (TAU * x).sin()).unwrap())
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_turn(0.0).unwrap().value(), 0.0);
        assert_eq!(wrap_turn(0.5).unwrap().value(), 0.5);
        assert_eq!(wrap_turn(-0.5).unwrap().value(), 0.5);
        assert_eq!(wrap_turn(1.75).unwrap().value(), -0.25);
        assert!(wrap_turn(f64::NAN).is_err());
        assert!(wrap_turn(f64::INFINITY).is_err());
    }

    #[test]
    fn normalization_examples() {
        let l = Lift::from_fn(|x| x + 3.25).unwrap();
        assert!((l.eval(0.0) - 0.25).abs() < 1e-15);

        let l = Lift::from_fn(|x| x + 0.5).unwrap();
        assert_eq!(l.eval(0.0), 0.5);

        let l = Lift::from_fn(|x| x - 0.5).unwrap();
        assert_eq!(l.eval(0.0), 0.5);
    }

    #[test]
    fn compose_translations_add() {
        let a = Lift::rotation(0.25);
        let b = Lift::rotation(1.0 / 3.0);
        let c = lift_compose(&a, &b);
        assert!((c.eval(0.0) - (0.25 + 1.0 / 3.0)).abs() < 1e-15);

        let id = Lift::rotation(0.0);
        let c = lift_compose(&a, &id);
        for i in 0..10 {
            let x = i as f64 * 0.1;
            assert!((c.eval(x) - a.eval(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn compose_matches_nested_evaluation() {
        // independent oracle: direct nested closure evaluation
        let f = |x: f64| x + 0.3 + 0.05 * (TAU * x).sin();
        let l = Lift::from_fn(f).unwrap();
        let c = lift_compose(&l, &l);
        for i in 0..32 {
            let x = i as f64 / 32.0 - 0.5;
            assert!((c.eval(x) - f(f(x))).abs() < 1e-12);
        }
    }

    #[test]
    fn rigid_rotation_is_exact() {
        let f = CircleHomeo::rotation(1.0 / 3.0);
        for &n in &[1u64, 7, 100] {
            for &x0 in &[0.0, 0.3, -1.2] {
                let e = classical_rotation_number(&f, n, x0);
                assert!((e.value.value() - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fixed_point_forces_zero() {
        // F(x) = x + 0.1 sin(2 pi x) fixes 0
        let f = CircleHomeo::new(Lift::from_fn(|x| x + 0.1 * (TAU * x).sin()).unwrap());
        let e = classical_rotation_number(&f, 10_000, 0.37);
        assert!(e.value.value().abs() < 1e-3, "rho = {}", e.value.value());
        let e0 = classical_rotation_number(&f, 100, 0.0);
        assert_eq!(e0.value.value(), 0.0);
    }

    #[test]
    fn arnold_matches_long_iteration_oracle() {
        let f = arnold(0.3, 0.05);
        let est = classical_rotation_number(&f, 1_000_000, 0.0);
        // brute-force oracle: two orders of magnitude more iterations
        let oracle = classical_rotation_number(&f, 100_000_000, 0.0);
        assert!(
            (est.value.value() - oracle.value.value()).abs() < 1e-5,
            "est {} vs oracle {}",
            est.value.value(),
            oracle.value.value()
        );
        // frozen oracle value (computed with the 1e8-step run above)
        assert!((oracle.value.value() - 0.2971387).abs() < 1e-6);
    }

    #[test]
    fn ordered_orbit_quarter_steps() {
        let p = 0.1;
        let images: Vec<f64> = (1..=8).map(|n| wrap1(0.1 + n as f64 * 0.25)).collect();
        let orbit = ordered_lifted_orbit(&images, p);
        for (n, th) in orbit.thetas().iter().enumerate() {
            assert!((th - (0.1 + n as f64 * 0.25)).abs() < 1e-12);
        }
        let e = orbit_rotation_number(&orbit).unwrap();
        assert!((e.value.value() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ordered_orbit_constant_images() {
        let p = 0.3;
        let images = vec![0.3; 5];
        let orbit = ordered_lifted_orbit(&images, p);
        assert!(orbit.thetas().iter().all(|&t| t == 0.3));
    }

    #[test]
    fn empty_images_give_length_one_orbit() {
        let orbit = ordered_lifted_orbit(&[], 0.2);
        assert_eq!(orbit.len(), 1);
        assert!(orbit_rotation_number(&orbit).is_err());
    }

    #[test]
    fn orbit_agrees_with_classical_for_single_homeo() {
        let f = arnold(0.3, 0.05);
        let n = 5000usize;
        let mut p = 0.12;
        let mut images = Vec::with_capacity(n);
        for _ in 0..n {
            p = f.apply(p);
            images.push(p);
        }
        let orbit = ordered_lifted_orbit(&images, 0.12);
        let via_orbit = orbit_rotation_number(&orbit).unwrap().value.value();
        let classical = classical_rotation_number(&f, n as u64, 0.12).value.value();
        assert!(
            (via_orbit - classical).abs() <= 2.0 / n as f64,
            "{via_orbit} vs {classical}"
        );
    }

    #[test]
    fn conjugation_by_identity() {
        let f = arnold(0.3, 0.05);
        let h = CircleHomeo::rotation(0.0);
        let c = conjugate(&h, &f, false).unwrap();
        for i in 0..16 {
            let x = i as f64 / 16.0;
            assert!((c.lift().eval(x) - f.lift().eval(x)).abs() < 1e-3);
        }
        let rc = classical_rotation_number(&c, 10_000, 0.0).value.value();
        let rf = classical_rotation_number(&f, 10_000, 0.0).value.value();
        assert!((rc - rf).abs() < 2e-4);
    }

    #[test]
    fn conjugation_preserves_rotation_number() {
        let n = 20_000u64;
        let f = CircleHomeo::rotation(0.2);
        let h = arnold(0.05, 0.03);
        let c = conjugate(&h, &f, false).unwrap();
        let rho = classical_rotation_number(&c, n, 0.3).value.value();
        assert!((rho - 0.2).abs() <= 2.0 / n as f64 + 1e-6, "rho = {rho}");
    }

    #[test]
    fn reversing_conjugation_flips_the_sign() {
        let n = 20_000u64;
        let f = CircleHomeo::rotation(0.2);
        let h = arnold(0.05, 0.03);
        let c = conjugate(&h, &f, true).unwrap();
        let rho = classical_rotation_number(&c, n, 0.3).value.value();
        assert!((rho + 0.2).abs() <= 2.0 / n as f64 + 1e-6, "rho = {rho}");
    }

    #[test]
    fn commuting_rotations_add() {
        let a = 0.25;
        let b = 0.375;
        let c = lift_compose(&Lift::rotation(a), &Lift::rotation(b));
        let f = CircleHomeo::new(Lift::from_fn(move |x| c.eval(x)).unwrap());
        let e = classical_rotation_number(&f, 16, 0.0);
        assert_eq!(e.value.value(), wrap1(a + b));
    }

    #[test]
    fn invalid_lifts_are_rejected() {
        assert!(Lift::from_fn(|x| x - 2.0 * x).is_err()); // decreasing
        assert!(Lift::from_fn(|x| 1.5 * x).is_err()); // not periodic
        assert!(Lift::from_fn(|x| x + 0.5 * (TAU * x).sin()).is_err()); // non-monotone
    }

    #[test]
    fn table_lift_round_trip() {
        let vals: Vec<f64> = (0..512).map(|i| i as f64 / 512.0 + 0.25).collect();
        let l = Lift::from_table(vals).unwrap();
        assert!((l.eval(0.125) - 0.375).abs() < 1e-15);
        assert!((l.eval(3.125) - 3.375).abs() < 1e-12);
        assert!(Lift::from_table(vec![0.0; 8]).is_err());
    }

    proptest! {
        #[test]
        fn wrap_is_idempotent_and_in_range(x in -1e6f64..1e6) {
            let w = wrap1(x);
            prop_assert!(w > -0.5 && w <= 0.5);
            prop_assert_eq!(wrap1(w), w);
        }

        #[test]
        fn lift_periodicity_and_bounds(omega in -0.49f64..0.49, k in 0.0f64..0.1, x in -3.0f64..3.0) {
            let l = Lift::from_fn(move |x: f64| x + omega + k * (TAU * x).sin()).unwrap();
            prop_assert!((l.eval(x + 1.0) - l.eval(x) - 1.0).abs() < 1e-12);
            prop_assert!(l.displacement(x).abs() < 1.5);
            prop_assert!(l.is_normalized());
        }

        #[test]
        fn initial_point_independence(omega in -0.45f64..0.45, x0 in -0.5f64..0.5, x1 in -0.5f64..0.5) {
            let f = arnold(omega, 0.04);
            let n = 1000u64;
            let a = classical_rotation_number(&f, n, x0).raw_rate;
            let b = classical_rotation_number(&f, n, x1).raw_rate;
            prop_assert!((a - b).abs() <= 2.0 / n as f64);
        }
    }
}
