//! Three-dimensional invariant-subspace dynamics and the progress auditor.
//!
//! Starting from `|N>`, a Grover-like schedule never leaves
//! `span{|i*>, |S->, |S_perp>}`, where `|S->` is the normalized uniform state
//! on `S \ {i*}` and `|S_perp>` the one on the complement of `S`. The frame
//! works in the shifted orthonormal basis
//!
//! ```text
//! x = cos t0 |i*> - sin t0 |S->
//! y = cos p0 |S> - sin p0 |S_perp>
//! z = |N>
//! ```
//!
//! with `t0 = asin(1/sqrt M)`, `p0 = asin sqrt(M/N)`, and polar coordinates
//! `x = sin theta`, `y = cos theta sin phi`, `z = cos theta cos phi`. Points
//! are gauge-fixed to `theta >= 0` using the global sign.
//!
//! The primitives are applied as exact 3x3 reflections; the first-order angle
//! updates are only used as test targets.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;

use crate::cost::cost_to_f64;
use crate::error::{Error, Result};
use crate::problem::{OracleAssignment, ProblemInstance};
use crate::rootfind::optimal_angle;
use crate::statevec::{Primitive, Schedule, StateVector};

/// Largest tolerated norm outside the invariant subspace.
pub const EMBED_TOLERANCE: f64 = 1e-9;
/// `|x|` below this counts as `theta = 0`, where the gauge is ambiguous.
const POLE_TOLERANCE: f64 = 1e-14;
/// Stand-in for `epsilon = 0` in audits.
pub const AUDIT_EPSILON_FLOOR: f64 = 1e-6;

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarFrame {
    pub n: usize,
    pub m: usize,
    pub theta0: f64,
    pub phi0: f64,
    pub phi_opt: f64,
    pub k: f64,
}

/// Builds the frame of `instance`. `phi_opt` solves
/// `tan(phi + phi0) = phi + (c_*/c_S) phi0`.
pub fn frame(instance: &ProblemInstance) -> Result<PolarFrame> {
    let (n, m) = (instance.n(), instance.m());
    if m < 2 || n <= m {
        return Err(Error::DegenerateFrame { n, m });
    }
    let theta0 = (1.0 / m as f64).sqrt().asin();
    let phi0 = (m as f64 / n as f64).sqrt().asin();
    let phi_opt = optimal_angle(phi0, instance.cost_ratio());
    let k = theta0 * (phi_opt + phi0).cos();
    Ok(PolarFrame { n, m, theta0, phi0, phi_opt, k })
}

impl PolarFrame {
    /// Shifted basis vectors written in the standard `(|i*>, |S->, |S_perp>)` basis.
    fn basis(&self) -> [Vec3; 3] {
        let (st, ct) = self.theta0.sin_cos();
        let (sp, cp) = self.phi0.sin_cos();
        [[ct, -st, 0.0], [cp * st, cp * ct, -sp], [sp * st, sp * ct, cp]]
    }

    pub fn to_standard(&self, p: PolarPoint) -> Vec3 {
        let (st, ct) = p.theta.sin_cos();
        let (sp, cp) = p.phi.sin_cos();
        let shifted = [st, ct * sp, ct * cp];
        let [bx, by, bz] = self.basis();
        std::array::from_fn(|i| shifted[0] * bx[i] + shifted[1] * by[i] + shifted[2] * bz[i])
    }

    pub fn from_standard(&self, v: Vec3) -> PolarPoint {
        let [bx, by, bz] = self.basis();
        PolarPoint::from_shifted([dot(v, bx), dot(v, by), dot(v, bz)])
    }

    /// Per-cost progress ceiling `2 phi0 k / c_S`.
    pub fn rate_bound(&self, c_s: f64) -> f64 {
        2.0 * self.phi0 * self.k / c_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub theta: f64,
    pub phi: f64,
}

impl PolarPoint {
    /// The uniform state.
    pub const ORIGIN: PolarPoint = PolarPoint { theta: 0.0, phi: 0.0 };

    /// Gauge-fixed point: `theta >= 0`, `phi` in `(-pi, pi]`, and at the
    /// pole (where `v` and `-v` share `theta = 0`) `phi` in `(-pi/2, pi/2]`.
    pub fn gauged(theta: f64, phi: f64) -> Self {
        let (mut theta, mut phi) = if theta < 0.0 { (-theta, phi + PI) } else { (theta, phi) };
        phi = wrap_angle(phi);
        if theta.sin().abs() <= POLE_TOLERANCE {
            theta = 0.0;
            if phi <= -FRAC_PI_2 || phi > FRAC_PI_2 {
                phi = wrap_angle(phi + PI);
            }
        }
        Self { theta, phi }
    }

    fn from_shifted(v: Vec3) -> Self {
        let norm = dot(v, v).sqrt();
        let x = (v[0] / norm).clamp(-1.0, 1.0);
        Self::gauged(x.asin(), v[1].atan2(v[2]))
    }
}

/// Projects `state` onto the invariant subspace of `assignment` and returns
/// its gauge-fixed polar coordinates.
pub fn embed(state: &StateVector, assignment: &OracleAssignment, frame: &PolarFrame) -> Result<PolarPoint> {
    let coords = standard_coordinates(state, assignment, frame)?;
    Ok(frame.from_standard(coords))
}

fn standard_coordinates(state: &StateVector, assignment: &OracleAssignment, frame: &PolarFrame) -> Result<Vec3> {
    let i_star = assignment.i_star().ok_or(Error::NoMarkedItem)?;
    if state.len() != frame.n || assignment.n() != frame.n {
        return Err(Error::DimensionMismatch { expected: frame.n, found: state.len().max(assignment.n()) });
    }
    if assignment.set_size() != frame.m {
        return Err(Error::InvalidInstance(format!("|S| = {} but the frame has M = {}", assignment.set_size(), frame.m)));
    }
    let amps = state.amplitudes();
    let (mut sum_rest, mut sum_out) = (0.0, 0.0);
    for (i, &a) in amps.iter().enumerate() {
        if i == i_star {
            continue;
        }
        if assignment.contains(i) {
            sum_rest += a;
        } else {
            sum_out += a;
        }
    }
    let (n_rest, n_out) = ((frame.m - 1) as f64, (frame.n - frame.m) as f64);
    let (mean_rest, mean_out) = (sum_rest / n_rest, sum_out / n_out);
    let mut residual = 0.0;
    for (i, &a) in amps.iter().enumerate() {
        if i == i_star {
            continue;
        }
        let mean = if assignment.contains(i) { mean_rest } else { mean_out };
        residual += (a - mean) * (a - mean);
    }
    let residual = residual.sqrt();
    if residual > EMBED_TOLERANCE {
        return Err(Error::NotInSubspace { residual });
    }
    Ok([amps[i_star], sum_rest / n_rest.sqrt(), sum_out / n_out.sqrt()])
}

fn apply_standard(v: Vec3, op: Primitive, frame: &PolarFrame) -> Vec3 {
    match op {
        Primitive::OracleStar => [-v[0], v[1], v[2]],
        Primitive::OracleS => [-v[0], -v[1], v[2]],
        Primitive::Diffusion => {
            let z = frame.basis()[2];
            let s = 2.0 * dot(z, v);
            [v[0] - s * z[0], v[1] - s * z[1], v[2] - s * z[2]]
        }
    }
}

/// Exact action of one primitive on a polar point, re-gauged.
pub fn apply_polar(point: PolarPoint, op: Primitive, frame: &PolarFrame) -> PolarPoint {
    frame.from_standard(apply_standard(frame.to_standard(point), op, frame))
}

/// `|<i*|point>|^2`.
pub fn success_from_polar(point: PolarPoint, frame: &PolarFrame) -> f64 {
    let a = frame.to_standard(point)[0];
    a * a
}

/// Polar points after each step of `schedule`, starting from `|N>`.
/// Entry `0` is the uniform state; entry `j + 1` follows step `j`.
pub fn run_exact(frame: &PolarFrame, schedule: &Schedule) -> Vec<PolarPoint> {
    let mut v = frame.to_standard(PolarPoint::ORIGIN);
    let mut points = Vec::with_capacity(schedule.len() + 1);
    points.push(PolarPoint::ORIGIN);
    for &op in schedule.steps() {
        v = apply_standard(v, op, frame);
        points.push(frame.from_standard(v));
    }
    points
}

/// `min over l of |phi + 2 l pi - pi/2|`.
pub fn distance_to_half_pi(phi: f64) -> f64 {
    wrap_angle(phi - FRAC_PI_2).abs()
}

/// `H(theta, phi) = theta - k * dist(phi, pi/2)`, defined for `theta > 0`.
pub fn progress(point: PolarPoint, frame: &PolarFrame) -> Result<f64> {
    if point.theta <= 0.0 {
        return Err(Error::UndefinedProgress { theta: point.theta });
    }
    Ok(point.theta - frame.k * distance_to_half_pi(point.phi))
}

/// First-order progress of one `O_*` applied at angle `phi`:
/// `2 (theta0 sin(phi + phi0) - k phi)`.
pub fn p_star(phi: f64, frame: &PolarFrame) -> f64 {
    2.0 * (frame.theta0 * (phi + frame.phi0).sin() - frame.k * phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOptions {
    /// Relative slack on the per-cost bound.
    pub tolerance: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { tolerance: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressRecord {
    /// Index of the step in the schedule.
    pub step: usize,
    pub primitive: Primitive,
    pub cost: f64,
    /// Coordinates after the step.
    pub theta: f64,
    pub phi: f64,
    pub h_before: f64,
    pub h_after: f64,
    pub dh: f64,
    /// `None` for free steps.
    pub dh_per_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressTrace {
    pub frame: PolarFrame,
    /// Step after which tracking begins, if the schedule ever reaches it.
    pub start_step: Option<usize>,
    pub records: Vec<ProgressRecord>,
    pub bound_per_cost: f64,
    pub tolerance: f64,
    pub epsilon_used: f64,
    /// True when an `epsilon = 0` instance was audited at [`AUDIT_EPSILON_FLOOR`].
    pub epsilon_substituted: bool,
    /// Steps whose progress per cost exceeds `bound_per_cost * (1 + tolerance)`.
    pub violations: Vec<usize>,
}

impl ProgressTrace {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest progress per unit cost over charged steps.
    pub fn max_rate(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.dh_per_cost).reduce(f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,primitive,cost,theta,phi,H,dH,dH_per_cost\n");
        for r in &self.records {
            let rate = r.dh_per_cost.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{},{},{},{}", r.step, r.primitive, r.cost, r.theta, r.phi, r.h_after, r.dh, rate);
        }
        out
    }
}

/// Index into `points` where tracking starts: after the last rise of
/// `theta` from below `2 theta0` to at least `2 theta0`, the first point
/// with `phi >= 0`.
fn start_index(points: &[PolarPoint], theta0: f64) -> Option<usize> {
    let threshold = 2.0 * theta0;
    let crossing = (1..points.len()).rev().find(|&j| points[j - 1].theta < threshold && points[j].theta >= threshold)?;
    (crossing..points.len()).find(|&j| points[j].phi >= 0.0)
}

/// Replays `schedule` in the exact three-dimensional picture and records the
/// progress function from the tracking start onward.
pub fn audit_schedule(
    instance: &ProblemInstance,
    assignment: &OracleAssignment,
    schedule: &Schedule,
    options: AuditOptions,
) -> Result<ProgressTrace> {
    instance.admits(assignment)?;
    if !assignment.is_marked() {
        return Err(Error::NoMarkedItem);
    }
    let frame = frame(instance)?;
    let epsilon_substituted = instance.epsilon() == 0.0;
    let epsilon_used = if epsilon_substituted { AUDIT_EPSILON_FLOOR } else { instance.epsilon() };
    let c_star = cost_to_f64(&instance.c_star());
    let c_s = cost_to_f64(&instance.c_s());
    let bound = frame.rate_bound(c_s);
    let limit = bound * (1.0 + options.tolerance);

    let points = run_exact(&frame, schedule);
    let start = start_index(&points, frame.theta0);
    let mut records = Vec::new();
    let mut violations = Vec::new();
    if let Some(s) = start {
        let mut h = progress(points[s], &frame)?;
        for j in s..schedule.len() {
            let op = schedule.steps()[j];
            let after = points[j + 1];
            let h_after = progress(after, &frame)?;
            let cost = match op {
                Primitive::Diffusion => 0.0,
                Primitive::OracleS => c_s,
                Primitive::OracleStar => c_star,
            };
            let dh = h_after - h;
            let dh_per_cost = (cost > 0.0).then(|| dh / cost);
            if dh_per_cost.is_some_and(|r| r > limit) {
                violations.push(j);
            }
            records.push(ProgressRecord {
                step: j,
                primitive: op,
                cost,
                theta: after.theta,
                phi: after.phi,
                h_before: h,
                h_after,
                dh,
                dh_per_cost,
            });
            h = h_after;
        }
    }
    Ok(ProgressTrace {
        frame,
        start_step: start.map(|s| s.saturating_sub(1)),
        records,
        bound_per_cost: bound,
        tolerance: options.tolerance,
        epsilon_used,
        epsilon_substituted,
        violations,
    })
}

/// Sampling density for [`check_sequence_lemma`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceGrid {
    /// Points in `(0, pi/2)` for the angle of the later `O_*`.
    pub positive: usize,
    /// Points in `(-pi/2, 0)` for the angle of the earlier `O_*`.
    pub negative: usize,
    /// Points in `[0, 2 phi0)` for the comparison angle.
    pub window: usize,
}

impl Default for SequenceGrid {
    fn default() -> Self {
        Self { positive: 200, negative: 200, window: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InequalityTally {
    pub checked: usize,
    pub violated: usize,
    /// Largest `lhs - rhs` seen; negative when every case holds strictly.
    pub worst_margin: f64,
}

impl InequalityTally {
    fn record(&mut self, lhs: f64, rhs: f64, strict: bool) {
        let margin = lhs - rhs;
        if self.checked == 0 || margin > self.worst_margin {
            self.worst_margin = margin;
        }
        self.checked += 1;
        let ok = if strict { margin < 0.0 } else { margin <= 1e-15 };
        if !ok {
            self.violated += 1;
        }
    }

    pub fn holds(&self) -> bool {
        self.violated == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceReport {
    /// `p*(a) + p*(b) <= 2 p*(phi_opt)` when `a + b >= 0`.
    pub seq1: InequalityTally,
    /// `4 t0 sin((a+b)/2 + p0) cos((a-b)/2) < 4 t0 sin p0` when `-pi/4 < (a+b)/2 < 0`.
    pub seq2: InequalityTally,
    /// `2 t0 sin(b + p0) <= 2 t0 sin(w + p0)` for `w` in `[0, 2 p0)`.
    pub seq3: InequalityTally,
}

impl SequenceReport {
    pub fn holds(&self) -> bool {
        self.seq1.holds() && self.seq2.holds() && self.seq3.holds()
    }
}

/// Open-interval grid of `count` points strictly inside `(lo, hi)`.
fn interior(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (1..=count).map(move |j| lo + (hi - lo) * j as f64 / (count + 1) as f64)
}

/// Samples the three inequalities that rule out applying `O_*` at negative
/// angles.
pub fn check_sequence_lemma(frame: &PolarFrame, grid: SequenceGrid) -> Result<SequenceReport> {
    if grid.positive == 0 || grid.negative == 0 || grid.window == 0 {
        return Err(Error::EmptyGrid);
    }
    let t0 = frame.theta0;
    let best = 2.0 * p_star(frame.phi_opt, frame);
    let mut report = SequenceReport { seq1: Default::default(), seq2: Default::default(), seq3: Default::default() };
    let windows: Vec<f64> = (0..grid.window).map(|j| 2.0 * frame.phi0 * j as f64 / grid.window as f64).collect();
    for b in interior(-FRAC_PI_2, 0.0, grid.negative) {
        for a in interior(0.0, FRAC_PI_2, grid.positive) {
            if a + b >= 0.0 {
                report.seq1.record(p_star(a, frame) + p_star(b, frame), best, false);
            }
            let mid = (a + b) / 2.0;
            if -PI / 4.0 < mid && mid < 0.0 {
                let lhs = 4.0 * t0 * (mid + frame.phi0).sin() * ((a - b) / 2.0).cos();
                report.seq2.record(lhs, 4.0 * t0 * frame.phi0.sin(), true);
            }
        }
        for &w in &windows {
            report.seq3.record(2.0 * t0 * (b + frame.phi0).sin(), 2.0 * t0 * (w + frame.phi0).sin(), false);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Cost;
    use crate::schedules::{build_hybrid, optimize_hybrid};
    use crate::statevec::run_schedule;

    fn inst(n: usize, m: usize, c_star: Cost, c_s: Cost, eps: f64) -> ProblemInstance {
        ProblemInstance::new(n, m, c_star, c_s, eps).unwrap()
    }

    fn unit(n: usize, m: usize, ratio: i128) -> ProblemInstance {
        inst(n, m, Cost::from_integer(ratio), Cost::from_integer(1), 0.1)
    }

    #[test]
    fn frame_angles() {
        let f = frame(&unit(16, 4, 1)).unwrap();
        assert!((f.theta0 - PI / 6.0).abs() < 1e-15);
        assert!((f.phi0 - PI / 6.0).abs() < 1e-15);
        assert_eq!(f.phi_opt, 0.0);
        assert!((f.k - f.theta0 * f.phi0.cos()).abs() < 1e-15);
        assert_eq!(frame(&unit(16, 1, 1)), Err(Error::DegenerateFrame { n: 16, m: 1 }));
        assert_eq!(frame(&unit(16, 16, 1)), Err(Error::DegenerateFrame { n: 16, m: 16 }));
    }

    #[test]
    fn phi_opt_matches_grid_scan() {
        let f = frame(&inst(10_000, 400, Cost::from_integer(1), Cost::new(1, 20), 0.0)).unwrap();
        let res = |p: f64| (p + f.phi0).tan() - p - 20.0 * f.phi0;
        let upper = FRAC_PI_2 - f.phi0;
        let steps = 1_000_000;
        let h = upper / steps as f64;
        let cell = (0..steps).find(|&j| res(j as f64 * h) < 0.0 && res((j + 1) as f64 * h) >= 0.0).unwrap();
        assert!((f.phi_opt - (cell as f64 + 0.5) * h).abs() <= h);
    }

    #[test]
    fn uniform_and_marked_states() {
        let i = unit(64, 8, 5);
        let f = frame(&i).unwrap();
        let a = OracleAssignment::new(64, 0..8, Some(3)).unwrap();
        let u = StateVector::uniform(64).unwrap();
        let p = embed(&u, &a, &f).unwrap();
        assert!(p.theta.abs() < 1e-12 && p.phi.abs() < 1e-12);
        let neg = StateVector::from_amplitudes(u.amplitudes().iter().map(|x| -x).collect());
        let q = embed(&neg, &a, &f).unwrap();
        assert!(q.theta.abs() < 1e-12 && q.phi.abs() < 1e-12);

        let target = embed(&StateVector::basis(64, 3).unwrap(), &a, &f).unwrap();
        // <x|i*> = cos t0 = sin(theta), so theta = pi/2 - t0.
        assert!((target.theta - (FRAC_PI_2 - f.theta0)).abs() < 1e-12);
        assert!((success_from_polar(target, &f) - 1.0).abs() < 1e-12);

        let off = StateVector::basis(64, 4).unwrap();
        assert!(matches!(embed(&off, &a, &f), Err(Error::NotInSubspace { .. })));
    }

    #[test]
    fn gauge_invariance() {
        let i = unit(64, 8, 5);
        let f = frame(&i).unwrap();
        let a = OracleAssignment::new(64, 0..8, Some(3)).unwrap();
        let plan = build_hybrid(&i, 1).unwrap();
        let (state, _) = run_schedule(&i, &a, &plan.plan.schedule).unwrap();
        let neg = StateVector::from_amplitudes(state.amplitudes().iter().map(|x| -x).collect());
        let p = embed(&state, &a, &f).unwrap();
        let q = embed(&neg, &a, &f).unwrap();
        assert!((p.theta - q.theta).abs() < 1e-12 && (p.phi - q.phi).abs() < 1e-12);
    }

    #[test]
    fn reflections_in_polar_form() {
        let f = frame(&unit(1000, 40, 7)).unwrap();
        let p = PolarPoint::gauged(0.3, 0.2);
        let g = apply_polar(p, Primitive::Diffusion, &f);
        assert!((g.theta - 0.3).abs() < 1e-12 && (g.phi - (PI - 0.2)).abs() < 1e-12);
        let s = apply_polar(p, Primitive::OracleS, &f);
        let expect = PolarPoint::gauged(0.3, PI - 0.2 - 2.0 * f.phi0);
        assert!((s.theta - expect.theta).abs() < 1e-12 && (s.phi - expect.phi).abs() < 1e-12);
    }

    #[test]
    fn item_oracle_first_order() {
        // theta grows by 2 t0 sin(phi + p0) up to O(t0^2).
        let f = frame(&unit(1_000_000, 10_000, 7)).unwrap();
        for phi in [0.0, 0.3, 1.0] {
            let p = PolarPoint::gauged(0.4, phi);
            let q = apply_polar(p, Primitive::OracleStar, &f);
            let predicted = 0.4 + 2.0 * f.theta0 * (phi + f.phi0).sin();
            assert!((q.theta - predicted).abs() < 4.0 * f.theta0 * f.theta0, "{phi}");
        }
    }

    #[test]
    fn progress_values() {
        let f = PolarFrame { n: 10, m: 2, theta0: 0.1, phi0: 0.1, phi_opt: 0.0, k: 0.01 };
        assert_eq!(progress(PolarPoint { theta: 0.5, phi: FRAC_PI_2 }, &f).unwrap(), 0.5);
        assert!((progress(PolarPoint { theta: 0.5, phi: 0.0 }, &f).unwrap() - (0.5 - 0.01 * FRAC_PI_2)).abs() < 1e-15);
        let a = progress(PolarPoint { theta: 0.5, phi: 0.7 }, &f).unwrap();
        let b = progress(PolarPoint { theta: 0.5, phi: 0.7 + TAU }, &f).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(matches!(progress(PolarPoint::ORIGIN, &f), Err(Error::UndefinedProgress { .. })));
    }

    #[test]
    fn p_star_peaks_at_phi_opt() {
        let f = frame(&unit(10_000, 100, 30)).unwrap();
        assert!((p_star(0.0, &f) - 2.0 * f.theta0 * f.phi0.sin()).abs() < 1e-15);
        let steps = 100_000;
        let h = FRAC_PI_2 / steps as f64;
        let argmax = (0..=steps).map(|j| j as f64 * h).fold(0.0, |b: f64, p| if p_star(p, &f) > p_star(b, &f) { p } else { b });
        assert!((argmax - f.phi_opt).abs() <= h);
        let flat = frame(&unit(10_000, 100, 1)).unwrap();
        let argmax = (0..=steps).map(|j| j as f64 * h).fold(0.0, |b: f64, p| if p_star(p, &flat) > p_star(b, &flat) { p } else { b });
        assert_eq!(argmax, 0.0);
    }

    #[test]
    fn audit_of_optimal_hybrid() {
        let i = unit(1_000_000, 1000, 20);
        let plan = optimize_hybrid(&i).unwrap();
        let a = OracleAssignment::new(1_000_000, 0..1000, Some(0)).unwrap();
        let trace = audit_schedule(&i, &a, &plan.plan.schedule, AuditOptions::default()).unwrap();
        assert!(trace.start_step.is_some());
        assert!(trace.passes(), "max rate {:?} vs {}", trace.max_rate(), trace.bound_per_cost);
        for r in &trace.records {
            match r.primitive {
                Primitive::Diffusion => assert!(r.dh.abs() < 1e-12),
                Primitive::OracleS => assert!(r.dh.abs() <= 2.0 * trace.frame.phi0 * trace.frame.k + 1e-12),
                Primitive::OracleStar => {}
            }
        }
        let csv = trace.to_csv();
        assert!(csv.starts_with("step,primitive,cost,theta,phi,H,dH,dH_per_cost\n"));
        assert_eq!(csv.lines().count(), trace.records.len() + 1);
    }

    #[test]
    fn audit_without_crossing_is_vacuous() {
        let i = unit(1000, 10, 3);
        let a = OracleAssignment::new(1000, 0..10, Some(0)).unwrap();
        let trace = audit_schedule(&i, &a, &Schedule::new(), AuditOptions::default()).unwrap();
        assert!(trace.records.is_empty() && trace.passes() && trace.start_step.is_none());
        let zero = i.with_epsilon(0.0).unwrap();
        assert!(audit_schedule(&zero, &a, &Schedule::new(), AuditOptions::default()).unwrap().epsilon_substituted);
        let unmarked = OracleAssignment::new(1000, 0..10, None).unwrap();
        assert_eq!(audit_schedule(&i, &unmarked, &Schedule::new(), AuditOptions::default()), Err(Error::NoMarkedItem));
    }

    #[test]
    fn sequence_inequalities() {
        let f = frame(&unit(1_000_000, 1000, 20)).unwrap();
        let report = check_sequence_lemma(&f, SequenceGrid::default()).unwrap();
        assert!(report.holds(), "{report:?}");
        assert!(report.seq1.checked > 0 && report.seq2.checked > 0 && report.seq3.checked > 0);
        // Symmetric pair.
        let d = 1e-3;
        assert!(p_star(f.phi_opt, &f) + p_star(-f.phi_opt + d, &f) <= 2.0 * p_star(f.phi_opt, &f));
        let (a, b) = (0.1, -0.3);
        let lhs = 4.0 * f.theta0 * ((a + b) / 2.0 + f.phi0).sin() * ((a - b) / 2.0_f64).cos();
        assert!(lhs < 4.0 * f.theta0 * f.phi0.sin());
        assert_eq!(check_sequence_lemma(&f, SequenceGrid { positive: 0, ..Default::default() }), Err(Error::EmptyGrid));
    }
}
