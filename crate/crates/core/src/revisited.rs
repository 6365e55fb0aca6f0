//! Construction of the dissipation tensor from a Hamiltonian/Casimir pair,
//! so that the combined skew + metric field is a revisited system.
//!
//! Two variants are provided. The `Annihilator` variant is the explicit
//! local solution
//!     g^{ij} = A_i B_j (i ≠ j),   g^{ii} = −Σ_{k≠i} A_k B_k
//! with A = ∇h₁, B = ∇h₂ in static mode and A = H_{·2}, B = H_{·1}
//! (current-slot partials of h₂ and h₁) in delay mode; it annihilates A on
//! the second index by a telescoping identity but is not symmetric for a
//! generic pair. The `OuterProduct` variant is the single-function pattern
//! the worked systems realize: static g = ∇h∇hᵀ − |∇h|²·I (symmetric,
//! negative semidefinite), delay g^{ij} = Gᵢ(x̃)Hⱼ(x) with G, H the diagonal
//! gradient γ(y) = ∂h/∂x(y,y) read at the delayed and current points.

use std::sync::Arc;

use crate::bracket::{norm_inf, VectorFieldSpec};
use crate::error::{Error, Result};
use crate::sample::Sampler;
use crate::scalar::ScalarField;
use crate::state::DelayPair;
use crate::tensor::{SlotSignature, SymmetryClass, TensorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricVariant {
    Annihilator,
    OuterProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    Static,
    Delay,
}

/// A constructed metric together with the covector field its rows annihilate
/// exactly (the telescoping identity of the construction).
#[derive(Clone)]
pub struct BuiltMetric {
    pub tensor: TensorField,
    annihilated: Arc<dyn Fn(&DelayPair) -> Vec<f64> + Send + Sync>,
    pub annihilated_label: String,
}

impl BuiltMetric {
    /// The covector c with Σⱼ g^{ij} cⱼ = 0 rowwise by construction.
    pub fn annihilated_covector(&self, p: &DelayPair) -> Vec<f64> {
        (self.annihilated)(p)
    }

    /// Max over rows of |Σⱼ g^{ij} cⱼ| / max(1, scale) at a point.
    pub fn annihilation_residual(&self, p: &DelayPair) -> f64 {
        let c = self.annihilated_covector(p);
        let m = self.tensor.components(p);
        let scale = m
            .iter()
            .flatten()
            .fold(0.0_f64, |a, b| a.max(b.abs()))
            * norm_inf(&c);
        let mut worst = 0.0_f64;
        for row in &m {
            let r: f64 = row.iter().zip(&c).map(|(a, b)| a * b).sum();
            worst = worst.max(r.abs());
        }
        worst / scale.max(1.0)
    }

    /// Max relative annihilation residual over seeded random points.
    pub fn max_annihilation_residual(&self, samples: usize, seed: u64) -> f64 {
        let mut sampler = Sampler::new(seed);
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            worst = worst.max(self.annihilation_residual(&sampler.pair(self.tensor.dim())));
        }
        worst
    }
}

fn outer_with_excluded_diagonal(a: &[f64], b: &[f64]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                m[i][i] = -(0..n).filter(|k| *k != i).map(|k| a[k] * b[k]).sum::<f64>();
            } else {
                m[i][j] = a[i] * b[j];
            }
        }
    }
    m
}

/// The explicit two-function solution of the annihilation equations.
/// Static mode solves Σⱼ g^{ij} ∂h₁/∂xʲ = 0; delay mode solves
/// Σⱼ g^{ij} ∂h₂/∂xʲ = 0 (current-slot partials in both factors).
pub fn build_annihilator_metric(h1: &ScalarField, h2: &ScalarField, mode: BuildMode) -> Result<BuiltMetric> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch {
            context: "build_annihilator_metric",
            expected: h1.dim(),
            found: h2.dim(),
        });
    }
    let dim = h1.dim();
    let (h1c, h2c) = (h1.clone(), h2.clone());
    match mode {
        BuildMode::Static => {
            let tensor = TensorField::new(
                dim,
                "annihilator metric (static)",
                SymmetryClass::General,
                SlotSignature::CurrentCurrent,
                move |p| outer_with_excluded_diagonal(&h1c.grad_current_at(p), &h2c.grad_current_at(p)),
            );
            let h1a = h1.clone();
            Ok(BuiltMetric {
                tensor,
                annihilated: Arc::new(move |p| h1a.grad_current_at(p)),
                annihilated_label: format!("∂({})/∂x", h1.label()),
            })
        }
        BuildMode::Delay => {
            // rows carry the h₂ factor: g^{ij} = H_{j1} H_{i2}
            let tensor = TensorField::new(
                dim,
                "annihilator metric (delay)",
                SymmetryClass::General,
                SlotSignature::DelayedCurrent,
                move |p| outer_with_excluded_diagonal(&h2c.grad_current_at(p), &h1c.grad_current_at(p)),
            );
            let h2a = h2.clone();
            Ok(BuiltMetric {
                tensor,
                annihilated: Arc::new(move |p| h2a.grad_current_at(p)),
                annihilated_label: format!("∂({})/∂x", h2.label()),
            })
        }
    }
}

/// The single-function pattern the worked systems realize. Static mode:
/// g^{ij} = hᵢhⱼ − δ^{ij}|∇h|², symmetric with g·∇h = 0. Delay mode:
/// g^{ij}(x̃,x) = Gᵢ Hⱼ off the diagonal and −Σ_{k≠i} Gₖ Hₖ on it, where
/// G = γ(x̃), H = γ(x) and γ(y) = (∂h/∂x)(y, y) is the diagonal gradient;
/// the rows annihilate γ(x̃).
pub fn build_outer_product_metric(h: &ScalarField, mode: BuildMode) -> Result<BuiltMetric> {
    let dim = h.dim();
    let hc = h.clone();
    match mode {
        BuildMode::Static => {
            let tensor = TensorField::new(
                dim,
                "outer-product metric (static)",
                SymmetryClass::Symmetric,
                SlotSignature::CurrentCurrent,
                move |p| {
                    let c = hc.grad_current_at(p);
                    outer_with_excluded_diagonal(&c, &c)
                },
            );
            let ha = h.clone();
            Ok(BuiltMetric {
                tensor,
                annihilated: Arc::new(move |p| ha.grad_current_at(p)),
                annihilated_label: format!("∂({})/∂x", h.label()),
            })
        }
        BuildMode::Delay => {
            let diag_grad = move |h: &ScalarField, y: &[f64]| -> Vec<f64> {
                h.grad_current_at(&DelayPair::diagonal(y))
            };
            let hg = h.clone();
            let tensor = TensorField::new(
                dim,
                "outer-product metric (delay)",
                SymmetryClass::MixedT11,
                SlotSignature::DelayedCurrent,
                move |p| {
                    let g = diag_grad(&hg, p.delayed());
                    let hcur = diag_grad(&hg, p.current());
                    outer_with_excluded_diagonal(&g, &hcur)
                },
            );
            let ha = h.clone();
            Ok(BuiltMetric {
                tensor,
                annihilated: Arc::new(move |p| ha.grad_current_at(&DelayPair::diagonal(p.delayed()))),
                annihilated_label: format!("γ({})(x̃)", h.label()),
            })
        }
    }
}

/// A constructed revisited system: the wired field plus the built metric and
/// the sampled residual of the Casimir hypothesis on the skew tensor.
pub struct RevisitedSystem {
    pub spec: VectorFieldSpec,
    pub metric: BuiltMetric,
    /// max over samples of ‖P·∇(casimir candidate)‖∞; nonzero values mean the
    /// skew tensor does not actually annihilate the paired function
    pub casimir_residual: f64,
    pub warnings: Vec<String>,
}

/// Wires the skew tensor with a constructed metric into a revisited field.
/// Static mode: X = P∇h₁ + g∇h₂ with g generated from h₁; the Casimir check
/// samples ‖P·∇h₂‖. Delay mode: X = P·∂ₓh₂ + g·∂x̃h₁ with g generated from
/// h₂; the check samples ‖P·∂ₓh₁‖. With `strict` the check failing is an
/// error; otherwise it is reported as a warning.
pub fn build_revisited_system(
    p_tensor: &TensorField,
    h1: &ScalarField,
    h2: &ScalarField,
    variant: MetricVariant,
    mode: BuildMode,
    strict: bool,
) -> Result<RevisitedSystem> {
    const CASIMIR_TOL: f64 = 1e-10;
    const CASIMIR_SAMPLES: usize = 100;
    const CASIMIR_SEED: u64 = 0x5eed;

    let metric = match (variant, mode) {
        (MetricVariant::Annihilator, m) => build_annihilator_metric(h1, h2, m)?,
        (MetricVariant::OuterProduct, BuildMode::Static) => build_outer_product_metric(h1, BuildMode::Static)?,
        (MetricVariant::OuterProduct, BuildMode::Delay) => build_outer_product_metric(h2, BuildMode::Delay)?,
    };

    let casimir_grad: Box<dyn Fn(&DelayPair) -> Vec<f64>> = match mode {
        BuildMode::Static => {
            let h = h2.clone();
            Box::new(move |p| h.grad_current_at(p))
        }
        BuildMode::Delay => {
            let h = h1.clone();
            Box::new(move |p| h.grad_current_at(p))
        }
    };
    let mut sampler = Sampler::new(CASIMIR_SEED);
    let mut casimir_residual = 0.0_f64;
    for _ in 0..CASIMIR_SAMPLES {
        let at = sampler.pair(p_tensor.dim());
        let r = p_tensor.apply(&at, &casimir_grad(&at))?;
        casimir_residual = casimir_residual.max(norm_inf(&r));
    }

    let mut warnings = Vec::new();
    if casimir_residual > CASIMIR_TOL {
        let msg = format!(
            "skew tensor does not annihilate the paired function (residual {casimir_residual:.3e})"
        );
        if strict {
            return Err(Error::ConstraintViolation(msg));
        }
        warnings.push(msg);
    }
    if metric.tensor.is_numerically_zero(8, CASIMIR_SEED) {
        warnings.push("constructed metric is identically zero (degenerate generating gradient)".into());
    }

    let spec = match mode {
        BuildMode::Static => VectorFieldSpec::static_almost(p_tensor.clone(), metric.tensor.clone(), h1.clone(), h2.clone())?,
        BuildMode::Delay => VectorFieldSpec::delay_almost(p_tensor.clone(), metric.tensor.clone(), h1.clone(), h2.clone())?,
    };
    Ok(RevisitedSystem {
        spec,
        metric,
        casimir_residual,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const_grad_field(dim: usize, grad: Vec<f64>) -> ScalarField {
        let g2 = grad.clone();
        ScalarField::of_current(
            dim,
            "linear",
            move |x| x.iter().zip(&g2).map(|(a, b)| a * b).sum(),
            move |_| grad.clone(),
        )
    }

    #[test]
    fn annihilator_on_constant_orthogonal_gradients() {
        // ∇h₁ = e₁, ∇h₂ = e₂: only g¹² = 1 survives
        let h1 = const_grad_field(3, vec![1.0, 0.0, 0.0]);
        let h2 = const_grad_field(3, vec![0.0, 1.0, 0.0]);
        let built = build_annihilator_metric(&h1, &h2, BuildMode::Static).unwrap();
        let m = built.tensor.components(&DelayPair::diagonal(&[0.3, 0.4, 0.5]));
        for i in 0..3 {
            for j in 0..3 {
                let want = if (i, j) == (0, 1) { 1.0 } else { 0.0 };
                assert_eq!(m[i][j], want, "entry ({i},{j})");
            }
        }
        assert_eq!(built.max_annihilation_residual(100, 9), 0.0);
    }

    #[test]
    fn annihilator_with_equal_pair_is_projector_complement() {
        let h = ScalarField::of_current(
            3,
            "h",
            |x| 0.5 * (x[0] * x[0] + 2.0 * x[1] * x[1]) + x[2],
            |x| vec![x[0], 2.0 * x[1], 1.0],
        );
        let built = build_annihilator_metric(&h, &h, BuildMode::Static).unwrap();
        let mut s = Sampler::new(13);
        for _ in 0..50 {
            let at = s.pair(3);
            let m = built.tensor.components(&at);
            let c = h.grad_current_at(&at);
            let n2: f64 = c.iter().map(|v| v * v).sum();
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { c[i] * c[i] - n2 } else { c[i] * c[j] };
                    assert!((m[i][j] - want).abs() <= 1e-14 * want.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn degenerate_gradient_gives_zero_tensor() {
        let h1 = ScalarField::constant(3, 7.0);
        let h2 = const_grad_field(3, vec![1.0, 2.0, 3.0]);
        let built = build_annihilator_metric(&h1, &h2, BuildMode::Static).unwrap();
        assert!(built.tensor.is_numerically_zero(8, 1));
    }

    #[test]
    fn outer_product_static_axis_gradient() {
        // ∇h = e₁ pointwise: g = diag(0, −1, −1)
        let h = const_grad_field(3, vec![1.0, 0.0, 0.0]);
        let built = build_outer_product_metric(&h, BuildMode::Static).unwrap();
        let m = built.tensor.components(&DelayPair::diagonal(&[1.0, -1.0, 2.0]));
        assert_eq!(m[0][0], 0.0);
        assert_eq!(m[1][1], -1.0);
        assert_eq!(m[2][2], -1.0);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(m[i][j], 0.0);
                }
            }
        }
        assert_eq!(built.max_annihilation_residual(100, 2), 0.0);
    }

    #[test]
    fn outer_product_static_is_negative_semidefinite() {
        let h = ScalarField::of_current(
            3,
            "h1",
            |x| 0.5 * (0.6 * x[0] * x[0] + 0.4 * x[1] * x[1] + 0.2 * x[2] * x[2]),
            |x| vec![0.6 * x[0], 0.4 * x[1], 0.2 * x[2]],
        );
        let built = build_outer_product_metric(&h, BuildMode::Static).unwrap();
        let mut s = Sampler::new(21);
        for _ in 0..200 {
            let at = s.pair(3);
            let m = built.tensor.components(&at);
            let v = s.point(3);
            let mut q = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    q += v[i] * m[i][j] * v[j];
                }
            }
            assert!(q <= 1e-12, "quadratic form {q} > 0");
        }
    }

    #[test]
    fn delay_variants_annihilate_their_covectors() {
        let h1 = ScalarField::full(
            3,
            "h1",
            |p| 0.6 * p.delayed()[0] * p.current()[0] + 0.4 * p.delayed()[1] * p.current()[1] + 0.2 * p.delayed()[2] * p.current()[2],
            |p| vec![0.6 * p.delayed()[0], 0.4 * p.delayed()[1], 0.2 * p.delayed()[2]],
            |p| vec![0.6 * p.current()[0], 0.4 * p.current()[1], 0.2 * p.current()[2]],
        );
        let h2 = ScalarField::full(
            3,
            "h2",
            |p| 0.5 * p.current()[0].powi(2) + p.current()[1] * p.delayed()[1] + 0.5 * p.current()[2].powi(2),
            |p| vec![p.current()[0], p.delayed()[1], p.current()[2]],
            |p| vec![0.0, p.current()[1], 0.0],
        );
        let ann = build_annihilator_metric(&h2, &h1, BuildMode::Delay).unwrap();
        assert!(ann.max_annihilation_residual(200, 77) <= 1e-15);
        let outer = build_outer_product_metric(&h1, BuildMode::Delay).unwrap();
        assert!(outer.max_annihilation_residual(200, 78) <= 1e-15);
    }

    #[test]
    fn revisited_with_constant_h1_warns_zero_tensor() {
        let p = TensorField::new(3, "P", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
            let x = p.current();
            vec![
                vec![0.0, x[2], -x[1]],
                vec![-x[2], 0.0, x[0]],
                vec![x[1], -x[0], 0.0],
            ]
        });
        let h1 = ScalarField::constant(3, 1.0);
        let h2 = ScalarField::of_current(3, "h2", |x| 0.5 * x.iter().map(|v| v * v).sum::<f64>(), |x| x.to_vec());
        let sys = build_revisited_system(&p, &h1, &h2, MetricVariant::OuterProduct, BuildMode::Static, false).unwrap();
        assert!(sys.warnings.iter().any(|w| w.contains("identically zero")));
        assert!(sys.metric.tensor.is_numerically_zero(8, 3));
    }
}
