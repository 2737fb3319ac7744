//! Fixed-step classical Runge–Kutta with step doubling until two successive
//! resolutions agree.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// State types the integrator can advance.
pub trait OdeState: Clone {
    /// `self += a * other`
    fn axpy(&mut self, a: f64, other: &Self);
    fn max_abs_diff(&self, other: &Self) -> f64;
    fn max_abs(&self) -> f64;
}

impl OdeState for Vec<C64> {
    fn axpy(&mut self, a: f64, other: &Self) {
        for (x, y) in self.iter_mut().zip(other) {
            *x += y * a;
        }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

impl OdeState for CMatrix {
    fn axpy(&mut self, a: f64, other: &Self) {
        for (x, y) in self.iter_mut().zip(other.iter()) {
            *x += y * a;
        }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

impl<A: OdeState, B: OdeState> OdeState for (A, B) {
    fn axpy(&mut self, a: f64, other: &Self) {
        self.0.axpy(a, &other.0);
        self.1.axpy(a, &other.1);
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0).max(self.1.max_abs_diff(&other.1))
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs().max(self.1.max_abs())
    }
}

/// Step-doubling controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOptions {
    pub initial_steps: usize,
    pub tol: f64,
    pub max_halvings: u32,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            initial_steps: 200,
            tol: 1e-8,
            max_halvings: 10,
        }
    }
}

impl StepOptions {
    pub fn with_steps(initial_steps: usize) -> Self {
        Self {
            initial_steps,
            ..Self::default()
        }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// One RK4 step from `t` with step `h`.
pub fn rk4_step<S, F>(rhs: &F, t: f64, y: &S, h: f64) -> S
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    let k1 = rhs(t, y);
    let mut y2 = y.clone();
    y2.axpy(h / 2.0, &k1);
    let k2 = rhs(t + h / 2.0, &y2);
    let mut y3 = y.clone();
    y3.axpy(h / 2.0, &k2);
    let k3 = rhs(t + h / 2.0, &y3);
    let mut y4 = y.clone();
    y4.axpy(h, &k3);
    let k4 = rhs(t + h, &y4);

    let mut out = y.clone();
    out.axpy(h / 6.0, &k1);
    out.axpy(h / 3.0, &k2);
    out.axpy(h / 3.0, &k3);
    out.axpy(h / 6.0, &k4);
    out
}

/// Integrates from `t0` to `t1` with `steps` equal steps. `observe` is called
/// after every step with (step index, time, state) and may abort the run.
pub fn rk4_fixed<S, F, O>(rhs: &F, y0: &S, t0: f64, t1: f64, steps: usize, mut observe: O) -> Result<S>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
    O: FnMut(usize, f64, &S) -> Result<()>,
{
    assert!(steps > 0);
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.clone();
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        y = rk4_step(rhs, t, &y, h);
        observe(k + 1, t0 + (k + 1) as f64 * h, &y)?;
    }
    Ok(y)
}

#[derive(Clone, Debug)]
pub struct Converged<S> {
    pub state: S,
    pub steps: usize,
    pub difference: f64,
}

/// Repeats [`rk4_fixed`] with doubled step counts until two successive
/// results agree to `opts.tol` in max-norm, relative to the largest
/// component once that exceeds one.
pub fn rk4_converged<S, F, O>(rhs: &F, y0: &S, t0: f64, t1: f64, opts: StepOptions, mut observe: O) -> Result<Converged<S>>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
    O: FnMut(usize, f64, &S) -> Result<()>,
{
    let mut steps = opts.initial_steps.max(1);
    let mut previous = rk4_fixed(rhs, y0, t0, t1, steps, &mut observe)?;
    let mut difference = f64::INFINITY;
    for _ in 0..opts.max_halvings {
        steps *= 2;
        let next = rk4_fixed(rhs, y0, t0, t1, steps, &mut observe)?;
        difference = next.max_abs_diff(&previous);
        previous = next;
        if difference < opts.tol * previous.max_abs().max(1.0) {
            return Ok(Converged {
                state: previous,
                steps,
                difference,
            });
        }
    }
    Err(Error::NonConvergence {
        halvings: opts.max_halvings,
        difference,
    })
}
