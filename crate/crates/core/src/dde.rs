//! Method-of-steps integration of ẋ(t) = X(x̃(t), x(t)), x̃(t) = x(t−τ),
//! with classical fixed-step RK4 and cubic-Hermite dense output. The step
//! divides τ exactly (h = τ/m), so derivative-discontinuity points t = kτ
//! always coincide with step boundaries and every stage-level delayed lookup
//! lands in an already-completed interval. At τ = 0 the integrator degrades
//! to a plain ODE scheme with the delayed argument read from the current
//! state.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::state::DelayPair;

/// Initial data φ on [−τ, 0].
#[derive(Clone)]
pub struct HistoryFunction {
    dim: usize,
    eval: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
    description: String,
}

impl HistoryFunction {
    pub fn from_fn<F>(dim: usize, description: &str, eval: F) -> Self
    where
        F: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            eval: Arc::new(eval),
            description: description.to_string(),
        }
    }

    pub fn constant(x0: Vec<f64>) -> Self {
        let desc = format!(
            "constant [{}]",
            x0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        );
        let dim = x0.len();
        Self::from_fn(dim, &desc, move |_| x0.clone())
    }

    /// Per-coordinate polynomials in θ, coefficients in ascending degree.
    pub fn polynomial(coeffs: Vec<Vec<f64>>) -> Self {
        let dim = coeffs.len();
        let desc = format!(
            "polynomial [{}]",
            coeffs
                .iter()
                .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("; ")
        );
        Self::from_fn(dim, &desc, move |t| {
            coeffs
                .iter()
                .map(|c| c.iter().rev().fold(0.0, |acc, k| acc * t + k))
                .collect()
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn eval(&self, theta: f64) -> Vec<f64> {
        (self.eval)(theta)
    }
}

/// Step-size and horizon configuration. For τ > 0 the step is τ/steps_per_delay;
/// for τ = 0 the explicit `step` is used.
#[derive(Debug, Clone)]
pub struct IntegrationConfig {
    pub tau: f64,
    pub t_end: f64,
    pub steps_per_delay: usize,
    pub step: f64,
    pub record_every: usize,
}

impl IntegrationConfig {
    pub fn delay(tau: f64, steps_per_delay: usize, t_end: f64) -> Self {
        Self {
            tau,
            t_end,
            steps_per_delay,
            step: 0.0,
            record_every: 1,
        }
    }

    pub fn ode(step: f64, t_end: f64) -> Self {
        Self {
            tau: 0.0,
            t_end,
            steps_per_delay: 1,
            step,
            record_every: 1,
        }
    }

    pub fn validate(&self) -> Result<f64> {
        if !self.tau.is_finite() || self.tau < 0.0 {
            return Err(Error::InvalidArgument(format!("tau must be >= 0, got {}", self.tau)));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::InvalidArgument(format!("t_end must be > 0, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be >= 1".into()));
        }
        let h = if self.tau > 0.0 {
            if self.steps_per_delay == 0 {
                return Err(Error::InvalidArgument("steps_per_delay must be >= 1".into()));
            }
            self.tau / self.steps_per_delay as f64
        } else {
            if !(self.step > 0.0) {
                return Err(Error::InvalidArgument(format!("step must be > 0, got {}", self.step)));
            }
            self.step
        };
        Ok(h)
    }
}

/// A piecewise cubic-Hermite record of the solution, evaluable at any time of
/// [t₀ − τ, last knot]; times before t₀ delegate to the history function.
pub struct DenseTrajectory {
    t0: f64,
    tau: f64,
    h: f64,
    knots: Vec<f64>,
    states: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
    history: HistoryFunction,
}

impl DenseTrajectory {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.history.dim()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn derivs(&self) -> &[Vec<f64>] {
        &self.derivs
    }

    pub fn last_time(&self) -> f64 {
        *self.knots.last().expect("trajectory has at least one knot")
    }

    pub fn history(&self) -> &HistoryFunction {
        &self.history
    }

    /// Solution value at `t`; exact at knots, history for t ≤ t₀.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let lo = self.t0 - self.tau;
        let hi = self.last_time();
        let slack = 1e-9 * self.h.max(1.0);
        if t < lo - slack || t > hi + slack {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        Ok(self.eval_unchecked(t.clamp(lo, hi)))
    }

    /// Interpolates with no domain check; times beyond the last knot use the
    /// final interval's polynomial (never reached by the integrator when
    /// h ≤ τ, which the configuration guarantees for τ > 0).
    fn eval_unchecked(&self, t: f64) -> Vec<f64> {
        if t <= self.t0 {
            return self.history.eval(t - self.t0);
        }
        if self.knots.len() == 1 {
            return self.states[0].clone();
        }
        let mut i = ((t - self.t0) / self.h).floor() as usize;
        if i >= self.knots.len() - 1 {
            i = self.knots.len() - 2;
        }
        // the floor can land one interval high when t sits on a knot boundary
        if t < self.knots[i] && i > 0 {
            i -= 1;
        }
        // delayed lookups reconstruct knot times as t − kτ, which can sit an
        // ulp off the stored knot; snap those to the knot value
        let snap = 1e-9 * self.h;
        if (t - self.knots[i]).abs() <= snap {
            return self.states[i].clone();
        }
        if (t - self.knots[i + 1]).abs() <= snap {
            return self.states[i + 1].clone();
        }
        // inside the step still being completed the right-end derivative does
        // not exist yet; extrapolate the previous interval's polynomial
        if i + 1 >= self.derivs.len() && i > 0 {
            i -= 1;
        }
        let dt = self.knots[i + 1] - self.knots[i];
        let u = (t - self.knots[i]) / dt;
        hermite(u, dt, &self.states[i], &self.derivs[i], &self.states[i + 1], &self.derivs[i + 1])
    }
}

fn hermite(u: f64, dt: f64, x0: &[f64], d0: &[f64], x1: &[f64], d1: &[f64]) -> Vec<f64> {
    let u2 = u * u;
    let u3 = u2 * u;
    let c00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let c10 = u3 - 2.0 * u2 + u;
    let c01 = -2.0 * u3 + 3.0 * u2;
    let c11 = u3 - u2;
    (0..x0.len())
        .map(|k| c00 * x0[k] + c10 * dt * d0[k] + c01 * x1[k] + c11 * dt * d1[k])
        .collect()
}

/// Evaluate a trajectory at `t` (exact at knots).
pub fn eval_trajectory(traj: &DenseTrajectory, t: f64) -> Result<Vec<f64>> {
    traj.eval(t)
}

/// Integrates the field from t = 0 to `cfg.t_end` by the method of steps.
/// At each RK stage time s the delayed argument x(s − τ) is read from the
/// dense output (or from φ when s − τ ≤ 0).
pub fn integrate<F>(field: F, phi: &HistoryFunction, cfg: &IntegrationConfig) -> Result<DenseTrajectory>
where
    F: Fn(&DelayPair) -> Vec<f64>,
{
    let h = cfg.validate()?;
    let t0 = 0.0;
    let dim = phi.dim();
    let x0 = phi.eval(0.0);
    if x0.len() != dim {
        return Err(Error::DimensionMismatch {
            context: "history function",
            expected: dim,
            found: x0.len(),
        });
    }
    for probe in [-cfg.tau, -0.5 * cfg.tau, 0.0] {
        if phi.eval(probe).iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: format!("history value at θ = {probe}"),
            });
        }
    }

    let mut traj = DenseTrajectory {
        t0,
        tau: cfg.tau,
        h,
        knots: vec![t0],
        states: vec![x0],
        derivs: Vec::with_capacity(1),
        history: phi.clone(),
    };

    let delayed_of = |traj: &DenseTrajectory, t: f64| -> Vec<f64> {
        if cfg.tau == 0.0 {
            Vec::new() // diagonal pair built by the caller
        } else {
            traj.eval_unchecked(t - cfg.tau)
        }
    };
    let eval_field = |traj: &DenseTrajectory, t: f64, x: &[f64]| -> Result<Vec<f64>> {
        let pair = if cfg.tau == 0.0 {
            DelayPair::diagonal(x)
        } else {
            DelayPair::new(delayed_of(traj, t), x.to_vec())?
        };
        let v = field(&pair);
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "vector field output",
                expected: dim,
                found: v.len(),
            });
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::BlowUp { t });
        }
        Ok(v)
    };

    let d0 = eval_field(&traj, t0, &traj.states[0])?;
    traj.derivs.push(d0);

    let n_full = ((cfg.t_end - t0) / h).floor() as usize;
    let remainder = cfg.t_end - t0 - n_full as f64 * h;
    let total_steps = n_full + usize::from(remainder > 1e-12 * h.max(1.0));

    for k in 0..total_steps {
        let t = traj.knots[k];
        let hk = if k < n_full { h } else { cfg.t_end - t };
        let x = traj.states[k].clone();
        let k1 = traj.derivs[k].clone();
        let k2 = eval_field(&traj, t + 0.5 * hk, &axpy(&x, 0.5 * hk, &k1))?;
        let k3 = eval_field(&traj, t + 0.5 * hk, &axpy(&x, 0.5 * hk, &k2))?;
        let k4 = eval_field(&traj, t + hk, &axpy(&x, hk, &k3))?;
        let mut xn = Vec::with_capacity(dim);
        for i in 0..dim {
            xn.push(x[i] + hk / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        }
        let tn = if k + 1 == total_steps && remainder > 1e-12 * h.max(1.0) {
            cfg.t_end
        } else {
            t0 + (k + 1) as f64 * h
        };
        if xn.iter().any(|c| !c.is_finite()) {
            return Err(Error::BlowUp { t: tn });
        }
        traj.knots.push(tn);
        traj.states.push(xn);
        let dn = eval_field(&traj, tn, &traj.states[k + 1])?;
        traj.derivs.push(dn);
    }
    Ok(traj)
}

fn axpy(x: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + a * di).collect()
}

/// How the error of a refinement sequence is measured.
pub enum Reference<'a> {
    ClosedForm(&'a dyn Fn(f64) -> Vec<f64>),
    /// Compare each run against the finest configuration in the sequence.
    FinestGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrderEstimate {
    /// Least-squares slope of log error against log step.
    Slope(f64),
    /// Errors at or below roundoff; no meaningful order.
    Degenerate { max_error: f64 },
}

/// Runs the field at each configuration and estimates the convergence order
/// from the final-time errors. Requires at least three step sizes.
pub fn convergence_order<F>(
    field: F,
    phi: &HistoryFunction,
    cfgs: &[IntegrationConfig],
    reference: Reference<'_>,
) -> Result<OrderEstimate>
where
    F: Fn(&DelayPair) -> Vec<f64>,
{
    if cfgs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 configurations, got {}",
            cfgs.len()
        )));
    }
    let finest = match reference {
        Reference::ClosedForm(_) => None,
        Reference::FinestGrid => {
            let idx = cfgs
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    let ha = a.1.validate().unwrap_or(f64::INFINITY);
                    let hb = b.1.validate().unwrap_or(f64::INFINITY);
                    ha.partial_cmp(&hb).expect("finite steps")
                })
                .map(|(i, _)| i)
                .expect("non-empty");
            Some((idx, integrate(&field, phi, &cfgs[idx])?))
        }
    };

    let mut pts = Vec::new();
    let mut max_error = 0.0_f64;
    for (i, cfg) in cfgs.iter().enumerate() {
        if let Some((fi, _)) = finest {
            if fi == i {
                continue;
            }
        }
        let h = cfg.validate()?;
        let traj = integrate(&field, phi, cfg)?;
        let t_end = traj.last_time();
        let x = traj.states().last().expect("at least one knot");
        let reference_state = match &reference {
            Reference::ClosedForm(f) => f(t_end),
            Reference::FinestGrid => finest.as_ref().expect("set above").1.eval(t_end)?,
        };
        let err = x
            .iter()
            .zip(&reference_state)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        max_error = max_error.max(err);
        pts.push((h.ln(), err));
    }
    if max_error < 1e-13 {
        return Ok(OrderEstimate::Degenerate { max_error });
    }
    let pts: Vec<(f64, f64)> = pts
        .into_iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(lh, e)| (lh, e.ln()))
        .collect();
    if pts.len() < 2 {
        return Ok(OrderEstimate::Degenerate { max_error });
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(OrderEstimate::Slope(slope))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_delay_field(p: &DelayPair) -> Vec<f64> {
        vec![-p.delayed()[0]]
    }

    #[test]
    fn scalar_linear_test_matches_hand_integration() {
        // ẋ = −x(t−1), φ ≡ 1: on [0,1] x = 1 − t, on [1,2] x = t²/2 − 2t + 3/2
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfg = IntegrationConfig::delay(1.0, 100, 2.0);
        let traj = integrate(linear_delay_field, &phi, &cfg).unwrap();
        let x1 = traj.eval(1.0).unwrap()[0];
        let x2 = traj.eval(2.0).unwrap()[0];
        assert!(x1.abs() < 1e-10, "x(1) = {x1}");
        assert!((x2 + 0.5).abs() < 1e-10, "x(2) = {x2}");
    }

    #[test]
    fn ode_path_exponential_decay() {
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfg = IntegrationConfig::ode(1e-3, 1.0);
        let traj = integrate(|p: &DelayPair| vec![-p.current()[0]], &phi, &cfg).unwrap();
        let x1 = traj.eval(1.0).unwrap()[0];
        assert!((x1 - (-1.0_f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn zero_field_keeps_initial_state_exactly() {
        let phi = HistoryFunction::constant(vec![0.4, -0.7]);
        let cfg = IntegrationConfig::delay(0.5, 10, 3.0);
        let traj = integrate(|p: &DelayPair| vec![0.0; p.dim()], &phi, &cfg).unwrap();
        for s in traj.states() {
            assert_eq!(s, &vec![0.4, -0.7]);
        }
        assert_eq!(traj.eval(1.234).unwrap(), vec![0.4, -0.7]);
    }

    #[test]
    fn knots_align_with_delay_multiples() {
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfg = IntegrationConfig::delay(0.5, 7, 4.0);
        let traj = integrate(linear_delay_field, &phi, &cfg).unwrap();
        for j in 1..=8 {
            let target = 0.5 * j as f64;
            let nearest = traj
                .knots()
                .iter()
                .fold(f64::INFINITY, |m, k| m.min((k - target).abs()));
            assert!(nearest < 1e-12, "kτ = {target} missing from grid");
        }
    }

    #[test]
    fn eval_exact_at_knots_and_in_history() {
        let phi = HistoryFunction::polynomial(vec![vec![1.0, 2.0]]); // 1 + 2θ
        let cfg = IntegrationConfig::delay(1.0, 4, 1.0);
        let traj = integrate(linear_delay_field, &phi, &cfg).unwrap();
        for (k, s) in traj.knots().iter().zip(traj.states()) {
            assert_eq!(&traj.eval(*k).unwrap(), s);
        }
        assert_eq!(traj.eval(-0.5).unwrap(), vec![0.0]); // 1 + 2(−0.5)
        assert!(traj.eval(-1.5).is_err());
        assert!(traj.eval(traj.last_time() + 1.0).is_err());
    }

    #[test]
    fn hermite_reproduces_linear_solutions_exactly() {
        // ẋ = 1 with x(0) = 0 gives x(t) = t; the interpolant is exact for it
        let phi = HistoryFunction::constant(vec![0.0]);
        let cfg = IntegrationConfig::ode(0.25, 2.0);
        let traj = integrate(|_: &DelayPair| vec![1.0], &phi, &cfg).unwrap();
        for t in [0.1, 0.33, 0.5, 1.111, 1.99] {
            let v = traj.eval(t).unwrap()[0];
            assert!((v - t).abs() < 1e-14, "x({t}) = {v}");
        }
    }

    #[test]
    fn determinism_bitwise() {
        let phi = HistoryFunction::constant(vec![0.5, 0.5, 1.0]);
        let cfg = IntegrationConfig::delay(0.5, 20, 5.0);
        let field = |p: &DelayPair| {
            let (xt, x) = (p.delayed(), p.current());
            vec![
                0.4 * x[1] * xt[2] - 0.2 * x[2] * xt[1],
                0.2 * x[2] * xt[0] - 0.6 * x[0] * xt[2],
                0.6 * x[0] * xt[1] - 0.4 * x[1] * xt[0],
            ]
        };
        let a = integrate(field, &phi, &cfg).unwrap();
        let b = integrate(field, &phi, &cfg).unwrap();
        assert_eq!(a.states(), b.states());
        assert_eq!(a.knots(), b.knots());
    }

    #[test]
    fn blow_up_reports_time() {
        // ẋ = x² from 1 blows up near t = 1
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfg = IntegrationConfig::ode(0.01, 5.0);
        let err = integrate(|p: &DelayPair| vec![p.current()[0] * p.current()[0]], &phi, &cfg);
        match err {
            Err(Error::BlowUp { t }) => assert!(t > 0.5 && t < 2.0, "blow-up at {t}"),
            Err(other) => panic!("expected blow-up, got {other:?}"),
            Ok(_) => panic!("expected blow-up, integration finished"),
        }
    }

    #[test]
    fn order_four_on_smooth_ode() {
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfgs: Vec<IntegrationConfig> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|s| IntegrationConfig::ode(*s, 1.0))
            .collect();
        let exact = |t: f64| vec![(-t).exp()];
        let est = convergence_order(
            |p: &DelayPair| vec![-p.current()[0]],
            &phi,
            &cfgs,
            Reference::ClosedForm(&exact),
        )
        .unwrap();
        match est {
            OrderEstimate::Slope(s) => assert!((s - 4.0).abs() < 0.2, "slope {s}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_field_order_degenerate() {
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfgs: Vec<IntegrationConfig> = [0.2, 0.1, 0.05]
            .iter()
            .map(|s| IntegrationConfig::ode(*s, 1.0))
            .collect();
        let exact = |_: f64| vec![1.0];
        let est = convergence_order(|p: &DelayPair| vec![0.0; p.dim()], &phi, &cfgs, Reference::ClosedForm(&exact)).unwrap();
        assert!(matches!(est, OrderEstimate::Degenerate { .. }));
    }

    #[test]
    fn fewer_than_three_configs_rejected() {
        let phi = HistoryFunction::constant(vec![1.0]);
        let cfgs = vec![IntegrationConfig::ode(0.1, 1.0), IntegrationConfig::ode(0.05, 1.0)];
        let exact = |_: f64| vec![1.0];
        assert!(convergence_order(|p: &DelayPair| vec![0.0; p.dim()], &phi, &cfgs, Reference::ClosedForm(&exact)).is_err());
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(IntegrationConfig::delay(-1.0, 10, 1.0).validate().is_err());
        assert!(IntegrationConfig::delay(1.0, 0, 1.0).validate().is_err());
        assert!(IntegrationConfig::ode(0.0, 1.0).validate().is_err());
        assert!(IntegrationConfig::ode(0.1, -1.0).validate().is_err());
    }
}
