//! Smooth functions on ℝⁿ or on the doubled space, carried together with
//! their analytic gradients. Functions of ℝⁿ alone are embedded as pair
//! functions that ignore one slot, so a single type serves the static and
//! the delay setting.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sample::Sampler;
use crate::state::DelayPair;

/// Which slot(s) of the pair a scalar field actually reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    CurrentOnly,
    DelayedOnly,
    Full,
}

/// Which slot a finite-difference probe perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Current,
    Delayed,
}

type ValueFn = Arc<dyn Fn(&DelayPair) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&DelayPair) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    kind: FieldKind,
    label: String,
    value: ValueFn,
    grad_current: GradFn,
    grad_delayed: GradFn,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .field("label", &self.label)
            .finish()
    }
}

impl ScalarField {
    /// Field depending only on the current slot.
    pub fn of_current<V, G>(dim: usize, label: &str, value: V, grad: G) -> Self
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            kind: FieldKind::CurrentOnly,
            label: label.to_string(),
            value: Arc::new(move |p| value(p.current())),
            grad_current: Arc::new(move |p| grad(p.current())),
            grad_delayed: Arc::new(move |p| vec![0.0; p.dim()]),
        }
    }

    /// Field depending only on the delayed slot.
    pub fn of_delayed<V, G>(dim: usize, label: &str, value: V, grad: G) -> Self
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            kind: FieldKind::DelayedOnly,
            label: label.to_string(),
            value: Arc::new(move |p| value(p.delayed())),
            grad_current: Arc::new(move |p| vec![0.0; p.dim()]),
            grad_delayed: Arc::new(move |p| grad(p.delayed())),
        }
    }

    /// Field reading both slots.
    pub fn full<V, Gc, Gd>(dim: usize, label: &str, value: V, grad_current: Gc, grad_delayed: Gd) -> Self
    where
        V: Fn(&DelayPair) -> f64 + Send + Sync + 'static,
        Gc: Fn(&DelayPair) -> Vec<f64> + Send + Sync + 'static,
        Gd: Fn(&DelayPair) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            kind: FieldKind::Full,
            label: label.to_string(),
            value: Arc::new(value),
            grad_current: Arc::new(grad_current),
            grad_delayed: Arc::new(grad_delayed),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::of_current(dim, "0", |_| 0.0, move |x| vec![0.0; x.len()])
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::of_current(dim, "const", move |_| c, move |x| vec![0.0; x.len()])
    }

    /// Pointwise sum h₁ + h₂ (used for the equivalence check with h = h₁ + h₂).
    pub fn sum(&self, other: &ScalarField) -> Result<ScalarField> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "ScalarField::sum",
                expected: self.dim,
                found: other.dim,
            });
        }
        let (av, bv) = (self.value.clone(), other.value.clone());
        let (ac, bc) = (self.grad_current.clone(), other.grad_current.clone());
        let (ad, bd) = (self.grad_delayed.clone(), other.grad_delayed.clone());
        let kind = if self.kind == other.kind { self.kind } else { FieldKind::Full };
        Ok(ScalarField {
            dim: self.dim,
            kind,
            label: format!("{} + {}", self.label, other.label),
            value: Arc::new(move |p| av(p) + bv(p)),
            grad_current: Arc::new(move |p| {
                ac(p).iter().zip(bc(p)).map(|(a, b)| a + b).collect()
            }),
            grad_delayed: Arc::new(move |p| {
                ad(p).iter().zip(bd(p)).map(|(a, b)| a + b).collect()
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value_at(&self, p: &DelayPair) -> f64 {
        (self.value)(p)
    }

    pub fn grad_current_at(&self, p: &DelayPair) -> Vec<f64> {
        (self.grad_current)(p)
    }

    pub fn grad_delayed_at(&self, p: &DelayPair) -> Vec<f64> {
        (self.grad_delayed)(p)
    }

    pub fn grad_at(&self, p: &DelayPair, slot: Slot) -> Vec<f64> {
        match slot {
            Slot::Current => self.grad_current_at(p),
            Slot::Delayed => self.grad_delayed_at(p),
        }
    }
}

/// Default step scale for central differences: 1e-5 · max(1, |coordinate|).
pub fn default_fd_step(coord: f64) -> f64 {
    1e-5 * coord.abs().max(1.0)
}

/// Central-difference gradient of `f` in the chosen slot:
/// (f(p + step·eᵢ) − f(p − step·eᵢ)) / (2·step) per coordinate.
pub fn finite_diff_gradient<F>(f: F, p: &DelayPair, slot: Slot, step: f64) -> Result<Vec<f64>>
where
    F: Fn(&DelayPair) -> f64,
{
    if step <= 0.0 {
        return Err(Error::InvalidArgument(format!("step must be > 0, got {step}")));
    }
    if !p.is_finite() {
        return Err(Error::NonFinite {
            what: "finite-difference base point".into(),
        });
    }
    let n = p.dim();
    let mut grad = Vec::with_capacity(n);
    for i in 0..n {
        let mut lo = p.clone();
        let mut hi = p.clone();
        let (mut dlo, mut clo) = (lo.delayed().to_vec(), lo.current().to_vec());
        let (mut dhi, mut chi) = (hi.delayed().to_vec(), hi.current().to_vec());
        match slot {
            Slot::Current => {
                clo[i] -= step;
                chi[i] += step;
            }
            Slot::Delayed => {
                dlo[i] -= step;
                dhi[i] += step;
            }
        }
        lo = DelayPair::new(dlo, clo)?;
        hi = DelayPair::new(dhi, chi)?;
        let (flo, fhi) = (f(&lo), f(&hi));
        if !flo.is_finite() || !fhi.is_finite() {
            return Err(Error::NonFinite {
                what: format!("function value while probing coordinate {}", i + 1),
            });
        }
        grad.push((fhi - flo) / (2.0 * step));
    }
    Ok(grad)
}

/// Outcome of comparing analytic against central-difference gradients.
#[derive(Debug, Clone)]
pub struct GradientReport {
    pub max_rel_error: f64,
    pub samples: usize,
    pub pass: bool,
    /// (sample index, slot, coordinate) of the worst disagreement.
    pub worst: Option<(usize, Slot, usize)>,
}

/// Compares analytic and finite-difference gradients of `f` at `samples`
/// random points of [-2, 2]ⁿ × [-2, 2]ⁿ. Relative error per coordinate is
/// |analytic − fd| / max(1, |fd|).
pub fn check_gradient(f: &ScalarField, samples: usize, tol: f64, seed: u64) -> Result<GradientReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let mut sampler = Sampler::new(seed);
    let mut max_rel = 0.0_f64;
    let mut worst = None;
    for s in 0..samples {
        let p = sampler.pair(f.dim());
        for slot in [Slot::Current, Slot::Delayed] {
            let analytic = f.grad_at(&p, slot);
            let coords = match slot {
                Slot::Current => p.current(),
                Slot::Delayed => p.delayed(),
            };
            for i in 0..f.dim() {
                let step = default_fd_step(coords[i]);
                let fd_i = fd_partial(f, &p, slot, i, step)?;
                let rel = (analytic[i] - fd_i).abs() / fd_i.abs().max(1.0);
                if rel > max_rel {
                    max_rel = rel;
                    worst = Some((s, slot, i));
                }
            }
        }
    }
    Ok(GradientReport {
        max_rel_error: max_rel,
        samples,
        pass: max_rel <= tol,
        worst,
    })
}

fn fd_partial(f: &ScalarField, p: &DelayPair, slot: Slot, i: usize, step: f64) -> Result<f64> {
    let perturb = |sign: f64| -> Result<f64> {
        let mut d = p.delayed().to_vec();
        let mut c = p.current().to_vec();
        match slot {
            Slot::Current => c[i] += sign * step,
            Slot::Delayed => d[i] += sign * step,
        }
        let q = DelayPair::new(d, c)?;
        let v = f.value_at(&q);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: format!("function value while probing coordinate {}", i + 1),
            });
        }
        Ok(v)
    };
    Ok((perturb(1.0)? - perturb(-1.0)?) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> ScalarField {
        ScalarField::of_current(
            3,
            "x1 x2 x3",
            |x| x[0] * x[1] * x[2],
            |x| vec![x[1] * x[2], x[0] * x[2], x[0] * x[1]],
        )
    }

    #[test]
    fn central_difference_on_symmetric_cubic() {
        let p = DelayPair::diagonal(&[1.0, 1.0, 1.0]);
        let g = finite_diff_gradient(|q| q.current()[0] * q.current()[1] * q.current()[2], &p, Slot::Current, 1e-5)
            .unwrap();
        for gi in g {
            assert!((gi - 1.0).abs() < 1e-9, "got {gi}");
        }
    }

    #[test]
    fn constant_has_zero_gradient() {
        let p = DelayPair::new(vec![0.3, -1.0, 2.0], vec![1.0, 0.5, -0.2]).unwrap();
        let g = finite_diff_gradient(|_| 4.25, &p, Slot::Delayed, 1e-4).unwrap();
        assert_eq!(g, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn delayed_slot_partial_of_mixed_product() {
        // f(x̃, x) = x² · x̃²  at x̃ = (0,2,0), x = (0,3,0): ∂/∂x̃ = (0, x², 0).
        let p = DelayPair::new(vec![0.0, 2.0, 0.0], vec![0.0, 3.0, 0.0]).unwrap();
        let g = finite_diff_gradient(|q| q.current()[1] * q.delayed()[1], &p, Slot::Delayed, 1e-5).unwrap();
        assert!((g[0]).abs() < 1e-10);
        assert!((g[1] - 3.0).abs() < 1e-9);
        assert!((g[2]).abs() < 1e-10);
    }

    #[test]
    fn error_scales_as_step_squared() {
        // Halving the step must shrink the error about 4x on a smooth field.
        let f = |q: &DelayPair| q.current()[0].powi(3) * (1.0 + q.current()[1]).sin();
        let p = DelayPair::diagonal(&[1.3, 0.4, -0.7]);
        let exact = 3.0 * 1.3_f64.powi(2) * (1.4_f64).sin();
        let e1 = (finite_diff_gradient(f, &p, Slot::Current, 1e-3).unwrap()[0] - exact).abs();
        let e2 = (finite_diff_gradient(f, &p, Slot::Current, 5e-4).unwrap()[0] - exact).abs();
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn check_gradient_passes_correct_and_flags_scaled() {
        let good = ScalarField::of_current(
            3,
            "h2",
            |x| 0.5 * (0.6 * x[0] * x[0] + 0.4 * x[1] * x[1] + 0.2 * x[2] * x[2]),
            |x| vec![0.6 * x[0], 0.4 * x[1], 0.2 * x[2]],
        );
        let rep = check_gradient(&good, 100, 1e-6, 42).unwrap();
        assert!(rep.pass, "max_rel_error = {}", rep.max_rel_error);

        let bad = ScalarField::of_current(
            3,
            "h2 (grad doubled)",
            |x| 0.5 * (0.6 * x[0] * x[0] + 0.4 * x[1] * x[1] + 0.2 * x[2] * x[2]),
            |x| vec![1.2 * x[0], 0.8 * x[1], 0.4 * x[2]],
        );
        let rep = check_gradient(&bad, 100, 1e-6, 42).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_rel_error - 1.0).abs() < 0.2, "got {}", rep.max_rel_error);
    }

    #[test]
    fn check_gradient_mixed_slots() {
        // h₁(x̃,x) = ½(x¹)² + x²x̃² + ½(x³)²; hand gradients (x¹, x̃², x³) and (0, x², 0).
        let h1 = ScalarField::full(
            3,
            "h1",
            |p| 0.5 * p.current()[0].powi(2) + p.current()[1] * p.delayed()[1] + 0.5 * p.current()[2].powi(2),
            |p| vec![p.current()[0], p.delayed()[1], p.current()[2]],
            |p| vec![0.0, p.current()[1], 0.0],
        );
        let rep = check_gradient(&h1, 100, 1e-6, 1).unwrap();
        assert!(rep.pass, "max_rel_error = {}", rep.max_rel_error);
    }

    #[test]
    fn probing_a_pole_reports_non_finite() {
        // base x1 = 0.5 with step 0.5 probes f at x1 = 0, where 1/x1 blows up
        let p = DelayPair::diagonal(&[0.5, 1.0]);
        let bad = finite_diff_gradient(|q| 1.0 / q.current()[0], &p, Slot::Current, 0.5);
        assert!(matches!(bad, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn sum_adds_values_and_gradients() {
        let f = cubic();
        let g = ScalarField::of_current(3, "x1", |x| x[0], |_| vec![1.0, 0.0, 0.0]);
        let s = f.sum(&g).unwrap();
        let p = DelayPair::diagonal(&[2.0, 3.0, 4.0]);
        assert_eq!(s.value_at(&p), 24.0 + 2.0);
        assert_eq!(s.grad_current_at(&p), vec![13.0, 8.0, 6.0]);
    }
}
