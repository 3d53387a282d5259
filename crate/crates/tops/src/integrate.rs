//! Explicit fixed-step (RK4) and adaptive (Dormand–Prince 5(4)) integration
//! with dense output at requested sample times.
//!
//! The integrators are deliberately general-purpose rather than
//! structure-preserving: acceptance of every system in the catalog is
//! drift-bounded, so tight tolerances on a standard embedded pair are the
//! right tool.

use crate::poisson::{PhaseKind, PhasePoint};
use crate::systems::SystemSpec;
use nalgebra::DVector;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error("step size underflow at t = {0} (dt < 1e-14 T)")]
    StepUnderflow(f64),
    #[error("state became non-finite at t = {0}")]
    NonFinite(f64),
    #[error("exceeded max_steps = {0}")]
    MaxSteps(usize),
    #[error(transparent)]
    System(#[from] crate::systems::SystemError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegrateMethod {
    /// Classical fixed-step Runge–Kutta of order 4.
    Rk4 { dt: f64 },
    /// Dormand–Prince 5(4) with weighted-RMS error control.
    Dopri45 { rel_tol: f64, abs_tol: f64 },
}

impl Default for IntegrateMethod {
    fn default() -> Self {
        IntegrateMethod::Dopri45 { rel_tol: 1e-10, abs_tol: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StepperConfig {
    pub method: IntegrateMethod,
    pub t_final: f64,
    /// Number of uniformly spaced output samples (in addition to t = 0).
    pub samples: usize,
    pub max_steps: usize,
}

impl StepperConfig {
    pub fn adaptive(t_final: f64) -> Self {
        StepperConfig {
            method: IntegrateMethod::default(),
            t_final,
            samples: 1000,
            max_steps: 10_000_000,
        }
    }

    pub fn with_tols(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.method = IntegrateMethod::Dopri45 { rel_tol, abs_tol };
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

/// Time grid plus states; monitor channels are attached by the runner.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub kind: PhaseKind,
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &PhasePoint {
        self.states.last().expect("non-empty trajectory")
    }
}

/// Integrates the catalog system from `x0` over `[0, T]`.
pub fn simulate(
    spec: &SystemSpec,
    x0: &PhasePoint,
    cfg: &StepperConfig,
) -> Result<Trajectory, IntegrateError> {
    spec.rhs(x0)?; // surface kind mismatch before integrating
    let spec = spec.clone();
    simulate_field(
        move |y: &DVector<f64>| {
            let x = PhasePoint::from_flat(spec.kind(), y);
            spec.rhs(&x).expect("kind checked above")
        },
        x0.kind(),
        &x0.flatten(),
        cfg,
    )
}

/// Integrates an arbitrary flattened field (used for time-reversal checks).
pub fn simulate_field(
    f: impl Fn(&DVector<f64>) -> DVector<f64>,
    kind: PhaseKind,
    y0: &DVector<f64>,
    cfg: &StepperConfig,
) -> Result<Trajectory, IntegrateError> {
    let sample_times: Vec<f64> = if cfg.t_final == 0.0 || cfg.samples == 0 {
        vec![0.0]
    } else {
        (0..=cfg.samples)
            .map(|i| cfg.t_final * i as f64 / cfg.samples as f64)
            .collect()
    };
    let flats = match cfg.method {
        IntegrateMethod::Rk4 { dt } => rk4_drive(&f, y0, cfg, dt, &sample_times)?,
        IntegrateMethod::Dopri45 { rel_tol, abs_tol } => {
            dopri45_drive(&f, y0, cfg, rel_tol, abs_tol, &sample_times)?
        }
    };
    Ok(Trajectory {
        kind,
        times: sample_times,
        states: flats.iter().map(|v| PhasePoint::from_flat(kind, v)).collect(),
    })
}

fn rk4_step(
    f: &impl Fn(&DVector<f64>) -> DVector<f64>,
    y: &DVector<f64>,
    dt: f64,
) -> DVector<f64> {
    let k1 = f(y);
    let k2 = f(&(y + &k1 * (dt / 2.0)));
    let k3 = f(&(y + &k2 * (dt / 2.0)));
    let k4 = f(&(y + &k3 * dt));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

fn rk4_drive(
    f: &impl Fn(&DVector<f64>) -> DVector<f64>,
    y0: &DVector<f64>,
    cfg: &StepperConfig,
    dt: f64,
    sample_times: &[f64],
) -> Result<Vec<DVector<f64>>, IntegrateError> {
    assert!(dt > 0.0, "rk4 needs dt > 0");
    let mut out = Vec::with_capacity(sample_times.len());
    let mut y = y0.clone();
    let mut t = 0.0;
    let mut steps = 0usize;
    for &ts in sample_times {
        while t + dt <= ts + 1e-15 * cfg.t_final.max(1.0) {
            y = rk4_step(f, &y, dt);
            t += dt;
            steps += 1;
            if steps > cfg.max_steps {
                return Err(IntegrateError::MaxSteps(cfg.max_steps));
            }
            if !y.iter().all(|v| v.is_finite()) {
                return Err(IntegrateError::NonFinite(t));
            }
        }
        if ts - t > 1e-14 * cfg.t_final.max(1.0) {
            // partial step onto the sample time
            let rem = ts - t;
            let ys = rk4_step(f, &y, rem);
            out.push(ys);
        } else {
            out.push(y.clone());
        }
    }
    Ok(out)
}

// Dormand–Prince RK5(4)7M tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct AcceptedStep {
    t0: f64,
    dt: f64,
    y0: DVector<f64>,
    f0: DVector<f64>,
    y1: DVector<f64>,
    f1: DVector<f64>,
}

impl AcceptedStep {
    /// Cubic Hermite interpolant on the accepted step.
    fn eval(&self, t: f64) -> DVector<f64> {
        let s = (t - self.t0) / self.dt;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        &self.y0 * h00 + &self.f0 * (h10 * self.dt) + &self.y1 * h01 + &self.f1 * (h11 * self.dt)
    }
}

fn dopri45_drive(
    f: &impl Fn(&DVector<f64>) -> DVector<f64>,
    y0: &DVector<f64>,
    cfg: &StepperConfig,
    rel_tol: f64,
    abs_tol: f64,
    sample_times: &[f64],
) -> Result<Vec<DVector<f64>>, IntegrateError> {
    assert!(rel_tol > 0.0 && abs_tol > 0.0);
    let t_end = cfg.t_final;
    let mut out = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0usize;
    while next_sample < sample_times.len() && sample_times[next_sample] <= 0.0 {
        out.push(y0.clone());
        next_sample += 1;
    }
    if next_sample >= sample_times.len() {
        return Ok(out);
    }

    let n = y0.len();
    let mut t = 0.0;
    let mut y = y0.clone();
    let mut fy = f(&y);
    let mut dt = initial_step(&y, &fy, rel_tol, t_end);
    let mut steps = 0usize;

    while t < t_end {
        if dt < 1e-14 * t_end.max(1.0) {
            return Err(IntegrateError::StepUnderflow(t));
        }
        if t + dt > t_end {
            dt = t_end - t;
        }
        steps += 1;
        if steps > cfg.max_steps {
            return Err(IntegrateError::MaxSteps(cfg.max_steps));
        }

        let mut k: Vec<DVector<f64>> = Vec::with_capacity(7);
        k.push(fy.clone());
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = DP_A[stage][j];
                if a != 0.0 {
                    ys += kj * (a * dt);
                }
            }
            let _ = DP_C; // stage times unused: the field is autonomous
            k.push(f(&ys));
        }
        let mut y5 = y.clone();
        let mut y4 = y.clone();
        for (j, kj) in k.iter().enumerate() {
            if DP_B5[j] != 0.0 {
                y5 += kj * (DP_B5[j] * dt);
            }
            if DP_B4[j] != 0.0 {
                y4 += kj * (DP_B4[j] * dt);
            }
        }
        // weighted RMS error norm
        let mut err = 0.0;
        for i in 0..n {
            let sc = abs_tol + rel_tol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = (err / n as f64).sqrt();

        if err <= 1.0 {
            if !y5.iter().all(|v| v.is_finite()) {
                return Err(IntegrateError::NonFinite(t + dt));
            }
            let f1 = k[6].clone(); // FSAL: k7 = f(y5)
            let step = AcceptedStep { t0: t, dt, y0: y.clone(), f0: k[0].clone(), y1: y5.clone(), f1: f1.clone() };
            let t_new = t + dt;
            while next_sample < sample_times.len() && sample_times[next_sample] <= t_new + 1e-14 * t_end {
                let ts = sample_times[next_sample];
                if (ts - t_new).abs() <= 1e-14 * t_end.max(1.0) {
                    out.push(y5.clone());
                } else {
                    out.push(step.eval(ts));
                }
                next_sample += 1;
            }
            t = t_new;
            y = y5;
            fy = f1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        dt *= factor;
    }
    while next_sample < sample_times.len() {
        out.push(y.clone());
        next_sample += 1;
    }
    Ok(out)
}

fn initial_step(y: &DVector<f64>, fy: &DVector<f64>, rel_tol: f64, t_end: f64) -> f64 {
    let d0 = y.norm();
    let d1 = fy.norm();
    let h = if d1 > 1e-10 { 0.01 * (d0.max(1.0) / d1) } else { 1e-6 };
    h.min(t_end).max(1e-10 * t_end) * (rel_tol / 1e-6).powf(0.25).min(1.0).max(1e-3)
}

pub use crate::report::monitor;
