//! Adaptive Runge-Kutta-Fehlberg 7(8) propagation with event localization.
//!
//! The 13-stage embedded pair advances on the 8th-order solution and uses the
//! 7th/8th difference for step control. Between accepted step points the
//! solution is interpolated by a cubic Hermite segment built from the stored
//! endpoint derivatives; events are scalar functions of (t, state) whose sign
//! changes are bracketed by steps and refined on that segment by bisection.
//! Backward integration (t_limit < t0) works the same way with negative
//! steps; event directions are read along the direction of travel.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Step-size and tolerance settings. `h_*` fields are magnitudes in TU.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields, default))]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: u64,
    /// Width to which event crossing times are bisected, TU.
    pub event_time_tol: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            h_init: 1e-4,
            h_min: 1e-14,
            h_max: 1e-2,
            max_steps: 5_000_000,
            event_time_tol: 1e-10,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<(), &'static str> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite())
            || !(self.abs_tol > 0.0 && self.abs_tol.is_finite())
        {
            return Err("tolerances must be finite and positive");
        }
        if !(self.h_min > 0.0 && self.h_init >= self.h_min && self.h_max >= self.h_init) {
            return Err("step bounds must satisfy 0 < h_min <= h_init <= h_max");
        }
        if !(self.event_time_tol > 0.0 && self.event_time_tol.is_finite()) {
            return Err("event_time_tol must be finite and positive");
        }
        if self.max_steps == 0 {
            return Err("max_steps must be at least 1");
        }
        Ok(())
    }
}

/// Right-hand side of an autonomous-or-not first-order ODE system.
pub trait OdeSystem<const N: usize> {
    type Error;
    fn eval(&self, t: f64, y: &[f64; N]) -> Result<[f64; N], Self::Error>;
}

impl<F, const N: usize> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    type Error = core::convert::Infallible;
    fn eval(&self, t: f64, y: &[f64; N]) -> Result<[f64; N], Self::Error> {
        Ok(self(t, y))
    }
}

/// Which way an event function must cross zero, along the direction of
/// integration, to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventDirection {
    Rising,
    Falling,
    Any,
}

/// Scalar event: g(t, y) crossing zero.
pub struct EventSpec<'a, const N: usize> {
    pub label: &'a str,
    pub direction: EventDirection,
    /// Terminal events stop the propagation at the refined crossing.
    pub terminal: bool,
    pub function: &'a dyn Fn(f64, &[f64; N]) -> f64,
}

/// A refined crossing. `direction` is the actual sense of the crossing.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord<const N: usize> {
    pub index: usize,
    pub label: String,
    pub t: f64,
    pub y: [f64; N],
    pub direction: EventDirection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    /// Reached t_limit.
    TimeLimit,
    /// Stopped by a terminal event.
    Event { index: usize, label: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Stats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
    /// Largest scaled error among accepted steps (must stay <= 1).
    pub max_accepted_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation<const N: usize> {
    /// Accepted step points in path order, first = initial state, last =
    /// final state (time limit or terminal event).
    pub samples: Vec<Sample<N>>,
    pub events: Vec<EventRecord<N>>,
    pub termination: Termination,
    pub stats: Stats,
}

impl<const N: usize> Propagation<N> {
    pub fn final_sample(&self) -> Sample<N> {
        *self.samples.last().expect("propagation keeps at least the initial sample")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropagateError<E> {
    InvalidSettings(&'static str),
    Rhs { t: f64, source: E },
    /// The error test kept failing down to the minimum step size.
    StepUnderflow { t: f64, h: f64 },
    MaxSteps { t: f64, max_steps: u64 },
}

impl<E: fmt::Display> fmt::Display for PropagateError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidSettings(msg) => write!(f, "invalid integrator settings: {msg}"),
            Self::Rhs { t, source } => write!(f, "derivative evaluation failed at t = {t}: {source}"),
            Self::StepUnderflow { t, h } => {
                write!(f, "step size underflow at t = {t} (h = {h:e})")
            }
            Self::MaxSteps { t, max_steps } => {
                write!(f, "exceeded {max_steps} steps at t = {t}")
            }
        }
    }
}

impl<E: fmt::Debug + fmt::Display> core::error::Error for PropagateError<E> {}

/// Cubic Hermite segment between two accepted step points.
#[derive(Debug, Clone, Copy)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub f0: [f64; N],
    pub f1: [f64; N],
}

impl<const N: usize> DenseSegment<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let s = (t - self.t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let mut out = [0.0; N];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = h00 * self.y0[i]
                + h10 * h * self.f0[i]
                + h01 * self.y1[i]
                + h11 * h * self.f1[i];
        }
        out
    }
}

/// Failure to refine an event crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LocateError {
    #[error("event function does not change sign across the bracket")]
    NoSignChange,
}

/// Bisects an event function to a crossing inside a dense segment.
///
/// The endpoints must straddle zero. Returns the refined time (bracket width
/// at most `time_tol`) and the interpolated state there.
pub fn locate_event<const N: usize>(
    segment: &DenseSegment<N>,
    g: &dyn Fn(f64, &[f64; N]) -> f64,
    time_tol: f64,
) -> Result<(f64, [f64; N]), LocateError> {
    let g0 = g(segment.t0, &segment.y0);
    let g1 = g(segment.t1, &segment.y1);
    if g0 == 0.0 {
        return Ok((segment.t0, segment.y0));
    }
    if g1 == 0.0 {
        return Ok((segment.t1, segment.y1));
    }
    if (g0 > 0.0) == (g1 > 0.0) {
        return Err(LocateError::NoSignChange);
    }
    let mut lo = segment.t0;
    let mut hi = segment.t1;
    let mut g_lo = g0;
    // Bracket width shrinks by half each round; bound the count for safety.
    for _ in 0..200 {
        if (hi - lo).abs() <= time_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let y_mid = segment.eval(mid);
        let g_mid = g(mid, &y_mid);
        if g_mid == 0.0 {
            return Ok((mid, y_mid));
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((t, segment.eval(t)))
}

// Fehlberg 7(8) tableau, 13 stages. The 7th- and 8th-order weights share the
// middle stages; their difference reduces to the single 41/840 combination
// used for the error estimate.
const STAGES: usize = 13;

const C: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    1.0 / 2.0,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

const A: [[f64; STAGES - 1]; STAGES] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.0,
        0.0,
        0.0,
        -53.0 / 6.0,
        704.0 / 45.0,
        -107.0 / 9.0,
        67.0 / 90.0,
        3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];

const B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

const ERR_WEIGHT: f64 = 41.0 / 840.0;

/// One embedded step from (t, y) with signed step h.
#[derive(Debug, Clone, Copy)]
pub struct StepOutcome<const N: usize> {
    pub y7: [f64; N],
    pub y8: [f64; N],
    /// Scaled error: max over components of |y8 - y7| / (abs_tol + rel_tol *
    /// |state|). Acceptable when at most 1.
    pub error: f64,
}

/// Evaluates the 13 stages and both solutions of the embedded pair.
///
/// `f_start`, when available, must equal the derivative at (t, y); passing it
/// saves the first stage evaluation.
pub fn rkf78_step<S: OdeSystem<N>, const N: usize>(
    system: &S,
    t: f64,
    y: &[f64; N],
    h: f64,
    f_start: Option<&[f64; N]>,
    settings: &IntegratorSettings,
) -> Result<(StepOutcome<N>, u64), S::Error> {
    let mut k = [[0.0f64; N]; STAGES];
    let mut evals = 0u64;
    match f_start {
        Some(f0) => k[0] = *f0,
        None => {
            k[0] = system.eval(t, y)?;
            evals += 1;
        }
    }
    let mut stage_y = [0.0f64; N];
    for i in 1..STAGES {
        for (n, item) in stage_y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..i {
                let a = A[i][j];
                if a != 0.0 {
                    acc += a * k[j][n];
                }
            }
            *item = y[n] + h * acc;
        }
        k[i] = system.eval(t + C[i] * h, &stage_y)?;
        evals += 1;
    }

    let mut y8 = [0.0f64; N];
    let mut error: f64 = 0.0;
    let mut y7 = [0.0f64; N];
    for n in 0..N {
        let mut acc = 0.0;
        for i in 0..STAGES {
            if B8[i] != 0.0 {
                acc += B8[i] * k[i][n];
            }
        }
        y8[n] = y[n] + h * acc;
        let diff = h * ERR_WEIGHT * (k[11][n] + k[12][n] - k[0][n] - k[10][n]);
        y7[n] = y8[n] - diff;
        let scale = settings.abs_tol
            + settings.rel_tol * f64::max(abs(y[n]), abs(y8[n]));
        let e = abs(diff) / scale;
        if !e.is_finite() {
            error = f64::INFINITY;
        } else if e > error {
            error = e;
        }
    }
    Ok((StepOutcome { y7, y8, error }, evals))
}

#[inline(always)]
fn abs(x: f64) -> f64 {
    crate::math::abs(x)
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
/// Scaled error the controller aims the next step at. Steering toward a
/// quarter of the acceptance threshold keeps realized errors well under the
/// tolerance (long legs conserve invariants much better) for roughly 20%
/// more steps.
const TARGET_ERROR: f64 = 0.25;

fn step_factor(error: f64) -> f64 {
    if error == 0.0 {
        return MAX_FACTOR;
    }
    if !error.is_finite() {
        return MIN_FACTOR;
    }
    (SAFETY * crate::math::powf(error / TARGET_ERROR, -0.125)).clamp(MIN_FACTOR, MAX_FACTOR)
}

/// Integrates from (t0, y0) toward t_limit, handling events.
///
/// Non-terminal event crossings are refined and recorded without disturbing
/// the step sequence; the first terminal crossing ends the propagation at the
/// refined time. Identical inputs produce bit-identical output.
pub fn propagate<S: OdeSystem<N>, const N: usize>(
    system: &S,
    y0: [f64; N],
    t0: f64,
    t_limit: f64,
    events: &[EventSpec<'_, N>],
    settings: &IntegratorSettings,
) -> Result<Propagation<N>, PropagateError<S::Error>> {
    settings.validate().map_err(PropagateError::InvalidSettings)?;

    let mut stats = Stats::default();
    let mut samples = Vec::new();
    let mut records = Vec::new();
    samples.push(Sample { t: t0, y: y0 });
    if t_limit == t0 {
        return Ok(Propagation { samples, events: records, termination: Termination::TimeLimit, stats });
    }
    let dir = if t_limit > t0 { 1.0 } else { -1.0 };

    let rhs = |t: f64, y: &[f64; N]| -> Result<[f64; N], PropagateError<S::Error>> {
        system.eval(t, y).map_err(|source| PropagateError::Rhs { t, source })
    };

    let mut t = t0;
    let mut y = y0;
    let mut f = rhs(t, &y)?;
    stats.rhs_evals += 1;

    let mut g: Vec<f64> = events.iter().map(|e| (e.function)(t, &y)).collect();
    let mut h = dir * settings.h_init.min((t_limit - t0).abs());

    loop {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(PropagateError::MaxSteps { t, max_steps: settings.max_steps });
        }

        // Never overshoot the time limit.
        let mut hit_limit = false;
        if (t + h - t_limit) * dir >= 0.0 {
            h = t_limit - t;
            hit_limit = true;
        }

        let (attempt, evals) = rkf78_step(system, t, &y, h, Some(&f), settings)
            .map_err(|source| PropagateError::Rhs { t, source })?;
        stats.rhs_evals += evals;

        if attempt.error > 1.0 {
            stats.rejected += 1;
            let shrunk = h * step_factor(attempt.error);
            if shrunk.abs() < settings.h_min {
                return Err(PropagateError::StepUnderflow { t, h: shrunk });
            }
            h = shrunk;
            continue;
        }

        stats.accepted += 1;
        if attempt.error > stats.max_accepted_error {
            stats.max_accepted_error = attempt.error;
        }

        let t_new = if hit_limit { t_limit } else { t + h };
        let y_new = attempt.y8;
        let f_new = rhs(t_new, &y_new)?;
        stats.rhs_evals += 1;

        // Event pass over this step's dense segment.
        let segment = DenseSegment { t0: t, t1: t_new, y0: y, y1: y_new, f0: f, f1: f_new };
        let mut crossings: Vec<(f64, usize, EventDirection, [f64; N])> = Vec::new();
        for (idx, spec) in events.iter().enumerate() {
            let g_new = (spec.function)(t_new, &y_new);
            let g_old = g[idx];
            let rising = g_old < 0.0 && g_new >= 0.0;
            let falling = g_old > 0.0 && g_new <= 0.0;
            let wanted = match spec.direction {
                EventDirection::Rising => rising,
                EventDirection::Falling => falling,
                EventDirection::Any => rising || falling,
            };
            if wanted {
                let (t_ev, _) = locate_event(&segment, spec.function, settings.event_time_tol)
                    .expect("sign change checked before refinement");
                // Re-integrate the partial step to the crossing time: the
                // recorded state then carries integration accuracy instead
                // of the dense interpolant's, and downstream measurements
                // (energies, turn angles) inherit it.
                let y_ev = if t_ev == t {
                    y
                } else if t_ev == t_new {
                    y_new
                } else {
                    let (partial, evals) = rkf78_step(system, t, &y, t_ev - t, Some(&f), settings)
                        .map_err(|source| PropagateError::Rhs { t, source })?;
                    stats.rhs_evals += evals;
                    partial.y8
                };
                let actual =
                    if rising { EventDirection::Rising } else { EventDirection::Falling };
                crossings.push((t_ev, idx, actual, y_ev));
            }
            g[idx] = g_new;
        }
        // Path order; ties resolved by registration order for determinism.
        crossings.sort_by(|a, b| {
            (a.0 * dir).partial_cmp(&(b.0 * dir)).unwrap().then(a.1.cmp(&b.1))
        });

        let mut terminated: Option<(usize, f64, [f64; N])> = None;
        for (t_ev, idx, actual, y_ev) in crossings {
            records.push(EventRecord {
                index: idx,
                label: events[idx].label.to_string(),
                t: t_ev,
                y: y_ev,
                direction: actual,
            });
            if events[idx].terminal {
                terminated = Some((idx, t_ev, y_ev));
                break;
            }
        }
        if let Some((idx, t_ev, y_ev)) = terminated {
            samples.push(Sample { t: t_ev, y: y_ev });
            return Ok(Propagation {
                samples,
                events: records,
                termination: Termination::Event { index: idx, label: events[idx].label.to_string() },
                stats,
            });
        }

        samples.push(Sample { t: t_new, y: y_new });
        t = t_new;
        y = y_new;
        f = f_new;

        if hit_limit {
            return Ok(Propagation {
                samples,
                events: records,
                termination: Termination::TimeLimit,
                stats,
            });
        }

        let grown = h * step_factor(attempt.error);
        h = dir * grown.abs().clamp(settings.h_min, settings.h_max);
    }
}
