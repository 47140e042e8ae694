//! With a zero mass ratio the rotating-frame equations collapse to a Kepler
//! problem around the primary at the origin, which has a closed-form
//! solution. These tests hold the integrator to that solution.

use swingby_core::dynamics::{self, DynamicsError, InertialState, RotatingState};
use swingby_core::integrator::{propagate, rkf78_step, IntegratorSettings, OdeSystem};

struct PointMass;

impl OdeSystem<4> for PointMass {
    type Error = DynamicsError;
    fn eval(&self, t: f64, y: &[f64; 4]) -> Result<[f64; 4], DynamicsError> {
        let state = RotatingState::from_array(y, t);
        dynamics::crtbp_derivative(&state, 0.0, [0.0, 0.0])
    }
}

const A: f64 = 0.9;
const E: f64 = 0.3;

fn mean_motion() -> f64 {
    A.powf(-1.5)
}

fn period() -> f64 {
    2.0 * core::f64::consts::PI / mean_motion()
}

/// Rotating-frame state of the reference ellipse at time t, pericenter on
/// the +x axis at t = 0. Kepler's equation is solved by Newton iteration.
fn kepler_state(t: f64) -> RotatingState {
    let n = mean_motion();
    let m = n * t;
    let mut ecc_anomaly = m;
    for _ in 0..60 {
        let f = ecc_anomaly - E * ecc_anomaly.sin() - m;
        let fp = 1.0 - E * ecc_anomaly.cos();
        let step = f / fp;
        ecc_anomaly -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let (sin_e, cos_e) = ecc_anomaly.sin_cos();
    let r = A * (1.0 - E * cos_e);
    let b_over_a = (1.0 - E * E).sqrt();
    let inertial = InertialState {
        x: A * (cos_e - E),
        y: A * b_over_a * sin_e,
        vx: -n * A * A * sin_e / r,
        vy: n * A * A * b_over_a * cos_e / r,
        t,
    };
    dynamics::inertial_to_rotating(&inertial)
}

fn initial_state() -> RotatingState {
    kepler_state(0.0)
}

fn state_error(a: &RotatingState, b: &RotatingState) -> (f64, f64) {
    let pos = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    let vel = ((a.vx - b.vx).powi(2) + (a.vy - b.vy).powi(2)).sqrt();
    (pos, vel)
}

#[test]
fn adaptive_propagation_tracks_the_ellipse() {
    let settings = IntegratorSettings::default();
    let y0 = initial_state().to_array();

    // One full period back to the start, plus an interior point where the
    // anomaly is nontrivial.
    for t_end in [period(), 0.37 * period()] {
        let run = propagate(&PointMass, y0, 0.0, t_end, &[], &settings).unwrap();
        let end = run.final_sample();
        assert_eq!(end.t, t_end);
        let got = RotatingState::from_array(&end.y, end.t);
        let want = kepler_state(t_end);
        let (pos_err, vel_err) = state_error(&got, &want);
        assert!(pos_err <= 1e-9, "position error {pos_err:.3e} at t = {t_end}");
        assert!(vel_err <= 1e-8, "velocity error {vel_err:.3e} at t = {t_end}");
        assert!(run.stats.max_accepted_error <= 1.0);
        assert_eq!(run.stats.rejected.min(50), run.stats.rejected, "unexpected churn");
    }
}

/// Integrates the ellipse with n uniform steps and returns the final
/// position error against the analytic state.
fn fixed_step_error(n: usize) -> f64 {
    let settings = IntegratorSettings::default();
    let h = period() / n as f64;
    let mut y = initial_state().to_array();
    let mut f_start = None;
    for k in 0..n {
        let t = k as f64 * h;
        let (outcome, _) = rkf78_step(&PointMass, t, &y, h, f_start.as_ref(), &settings).unwrap();
        y = outcome.y8;
        f_start = None;
    }
    let t_end = n as f64 * h;
    let got = RotatingState::from_array(&y, t_end);
    let (pos_err, _) = state_error(&got, &kepler_state(t_end));
    pos_err
}

#[test]
fn fixed_step_error_decays_at_eighth_order() {
    let coarse = fixed_step_error(50);
    let fine = fixed_step_error(100);
    // Guard: the fine error must sit well above roundoff for the ratio to
    // measure truncation order rather than noise.
    assert!(fine > 1e-13, "fine error {fine:.3e} is in the roundoff floor");
    let ratio = coarse / fine;
    assert!(
        ratio >= 100.0,
        "error ratio per halving {ratio:.1} (coarse {coarse:.3e}, fine {fine:.3e})"
    );
}
