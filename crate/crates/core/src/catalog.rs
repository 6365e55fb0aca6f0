//! Named constructors for every concrete system shipped with the library,
//! each bundled with its tensor fields, scalar fields, known invariants and
//! structural checks. Each entry carries two independent encodings of its
//! dynamics: the bracket-assembled field (`spec`) and a literal closure with
//! the displayed components (`literal_field`); structural checks compare
//! them at random points. Where the source displays are suspected of typos,
//! the constructed system is canonical and the literal display is kept
//! behind the paper-literal flag with its diff reported informationally.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bracket::{norm_inf, VectorFieldSpec};
use crate::error::{Error, Result};
use crate::revisited::{build_revisited_system, BuildMode, MetricVariant};
use crate::scalar::ScalarField;
use crate::state::DelayPair;
use crate::tensor::{SlotSignature, SymmetryClass, TensorField};

pub type FieldFn = Arc<dyn Fn(&DelayPair) -> Vec<f64> + Send + Sync>;
pub type ResidualFn = Arc<dyn Fn(&DelayPair) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct NamedScalar {
    pub label: String,
    pub field: ScalarField,
}

/// A named residual that must vanish (≤ 1e-12 relative) at every point.
#[derive(Clone)]
pub struct StructuralCheck {
    pub label: String,
    residual: ResidualFn,
}

impl StructuralCheck {
    fn new(label: &str, residual: ResidualFn) -> Self {
        Self {
            label: label.to_string(),
            residual,
        }
    }

    pub fn residual_at(&self, p: &DelayPair) -> f64 {
        (self.residual)(p)
    }
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: usize,
    pub spec: VectorFieldSpec,
    pub parameters: Vec<(String, f64)>,
    pub invariants: Vec<NamedScalar>,
    pub diagnostics: Vec<NamedScalar>,
    /// Residuals that must vanish.
    pub structural_checks: Vec<StructuralCheck>,
    /// Informational diffs against displays suspected of typos; reported,
    /// never asserted.
    pub display_diffs: Vec<StructuralCheck>,
    /// The displayed components, verbatim.
    pub literal_field: Option<FieldFn>,
    pub is_delay: bool,
    pub static_counterpart: Option<&'static str>,
    pub default_tau: f64,
    pub default_history: Vec<f64>,
    pub warnings: Vec<String>,
}

impl CatalogEntry {
    /// The canonical right-hand side.
    pub fn field(&self) -> FieldFn {
        let spec = self.spec.clone();
        Arc::new(move |p| spec.eval(p))
    }

    /// The verbatim displayed right-hand side, where one exists.
    pub fn paper_literal_field(&self) -> Option<FieldFn> {
        self.literal_field.clone()
    }
}

/// Relative deviation between two component vectors.
fn rel_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

fn check_fields_match(label: &str, a: FieldFn, b: FieldFn) -> StructuralCheck {
    StructuralCheck::new(label, Arc::new(move |p| rel_dev(&a(p), &b(p))))
}

const DEFAULT_TAU: f64 = 0.5;
const DEFAULT_X0: [f64; 3] = [0.5, 0.5, 1.0];

// ---------------------------------------------------------------------------
// shared tensors and scalar fields
// ---------------------------------------------------------------------------

/// The rigid-body skew matrix evaluated at the current point.
fn rigid_matrix_current() -> TensorField {
    TensorField::new(3, "P(x)", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
        let x = p.current();
        vec![
            vec![0.0, x[2], -x[1]],
            vec![-x[2], 0.0, x[0]],
            vec![x[1], -x[0], 0.0],
        ]
    })
}

/// The rigid-body skew matrix evaluated at the delayed point.
fn rigid_matrix_delayed() -> TensorField {
    TensorField::new(3, "P(x̃)", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
        let xt = p.delayed();
        vec![
            vec![0.0, xt[2], -xt[1]],
            vec![-xt[2], 0.0, xt[0]],
            vec![xt[1], -xt[0], 0.0],
        ]
    })
}

/// The mixed-entry skew matrix with components 0, x³, −x̃².
fn mixed_skew_matrix() -> TensorField {
    TensorField::new(3, "P(x̃,x)", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
        let (xt, x) = (p.delayed(), p.current());
        vec![
            vec![0.0, x[2], -xt[1]],
            vec![-x[2], 0.0, x[0]],
            vec![xt[1], -x[0], 0.0],
        ]
    })
}

/// ½[a₁(x¹)² + a₂(x²)² + a₃(x³)²] of the current state.
fn weighted_energy(a: [f64; 3], label: &str) -> ScalarField {
    ScalarField::of_current(
        3,
        label,
        move |x| 0.5 * (a[0] * x[0] * x[0] + a[1] * x[1] * x[1] + a[2] * x[2] * x[2]),
        move |x| vec![a[0] * x[0], a[1] * x[1], a[2] * x[2]],
    )
}

/// ½|x|² of the current state.
fn half_norm_current(label: &str) -> ScalarField {
    ScalarField::of_current(
        3,
        label,
        |x| 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]),
        |x| x.to_vec(),
    )
}

/// ½|x̃|² of the delayed state.
fn half_norm_delayed(label: &str) -> ScalarField {
    ScalarField::of_delayed(
        3,
        label,
        |x| 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]),
        |x| x.to_vec(),
    )
}

/// ½(x¹)² + x²x̃² + ½(x³)² on the doubled space.
fn mixed_quadratic(label: &str) -> ScalarField {
    ScalarField::full(
        3,
        label,
        |p| {
            let (xt, x) = (p.delayed(), p.current());
            0.5 * x[0] * x[0] + x[1] * xt[1] + 0.5 * x[2] * x[2]
        },
        |p| vec![p.current()[0], p.delayed()[1], p.current()[2]],
        |p| vec![0.0, p.current()[1], 0.0],
    )
}

/// ½a₁(x¹)² + a₂x²x̃² + ½a₃(x³)² on the doubled space.
fn mixed_weighted_quadratic(a: [f64; 3], label: &str) -> ScalarField {
    ScalarField::full(
        3,
        label,
        move |p| {
            let (xt, x) = (p.delayed(), p.current());
            0.5 * a[0] * x[0] * x[0] + a[1] * x[1] * xt[1] + 0.5 * a[2] * x[2] * x[2]
        },
        move |p| vec![a[0] * p.current()[0], a[1] * p.delayed()[1], a[2] * p.current()[2]],
        move |p| vec![0.0, a[1] * p.current()[1], 0.0],
    )
}

/// a₁x̃¹x¹ + a₂x̃²x² + a₃x̃³x³ on the doubled space.
fn delayed_bilinear(a: [f64; 3], label: &str) -> ScalarField {
    ScalarField::full(
        3,
        label,
        move |p| {
            let (xt, x) = (p.delayed(), p.current());
            a[0] * xt[0] * x[0] + a[1] * xt[1] * x[1] + a[2] * xt[2] * x[2]
        },
        move |p| {
            let xt = p.delayed();
            vec![a[0] * xt[0], a[1] * xt[1], a[2] * xt[2]]
        },
        move |p| {
            let x = p.current();
            vec![a[0] * x[0], a[1] * x[1], a[2] * x[2]]
        },
    )
}

fn zero_metric_delay() -> TensorField {
    TensorField::zero(3, SlotSignature::DelayedCurrent)
}

fn zero_metric_static() -> TensorField {
    TensorField::zero(3, SlotSignature::CurrentCurrent)
}

// ---------------------------------------------------------------------------
// parameter plumbing
// ---------------------------------------------------------------------------

fn get(params: &HashMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn reject_unknown(params: &HashMap<String, f64>, allowed: &[&str]) -> Result<()> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "unknown parameter `{k}` (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn inertia_params(params: &HashMap<String, f64>) -> Result<[f64; 3]> {
    reject_unknown(params, &["a1", "a2", "a3"])?;
    Ok([
        get(params, "a1", 0.6),
        get(params, "a2", 0.4),
        get(params, "a3", 0.2),
    ])
}

fn distinctness_warnings(a: [f64; 3]) -> Vec<String> {
    let mut w = Vec::new();
    if a[0] == a[1] || a[1] == a[2] || a[0] == a[2] {
        w.push(format!(
            "parameters a = ({}, {}, {}) are not pairwise distinct; parts of the dynamics degenerate",
            a[0], a[1], a[2]
        ));
    }
    w
}

// ---------------------------------------------------------------------------
// entry constructors
// ---------------------------------------------------------------------------

fn validate_three_wave(s: [f64; 3], gamma: [f64; 3]) -> Result<()> {
    for si in s {
        if si != 1.0 && si != -1.0 {
            return Err(Error::ConstraintViolation(format!("sᵢ must be ±1, got {si}")));
        }
    }
    for gi in gamma {
        if gi == 0.0 || !gi.is_finite() {
            return Err(Error::ConstraintViolation(format!("γᵢ must be finite and nonzero, got {gi}")));
        }
    }
    if (gamma[0] + gamma[1] + gamma[2]).abs() > 1e-12 {
        return Err(Error::ConstraintViolation(format!(
            "γ₁+γ₂+γ₃ must vanish, got {}",
            gamma[0] + gamma[1] + gamma[2]
        )));
    }
    Ok(())
}

/// Gradient system of the resonant three-wave interaction.
pub fn three_wave(s: [f64; 3], gamma: [f64; 3]) -> Result<CatalogEntry> {
    validate_three_wave(s, gamma)?;
    let c = [s[0] * gamma[0], s[1] * gamma[1], s[2] * gamma[2]];
    // contravariant components; the covariant display is their reciprocal
    let g = TensorField::diagonal(c.to_vec(), SlotSignature::CurrentCurrent);
    let h = ScalarField::of_current(
        3,
        "x1 x2 x3",
        |x| x[0] * x[1] * x[2],
        |x| vec![x[1] * x[2], x[0] * x[2], x[0] * x[1]],
    );
    let spec = VectorFieldSpec::static_leibniz(zero_metric_static(), g, h)?;
    let literal: FieldFn = Arc::new(move |p| {
        let x = p.current();
        vec![c[0] * x[1] * x[2], c[1] * x[0] * x[2], c[2] * x[0] * x[1]]
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    Ok(CatalogEntry {
        name: "three-wave",
        dim: 3,
        spec,
        parameters: vec![
            ("s1".into(), s[0]),
            ("s2".into(), s[1]),
            ("s3".into(), s[2]),
            ("gamma1".into(), gamma[0]),
            ("gamma2".into(), gamma[1]),
            ("gamma3".into(), gamma[2]),
        ],
        invariants: vec![],
        diagnostics: vec![],
        structural_checks: vec![check_fields_match(
            "gradient field matches displayed components",
            assembled,
            literal.clone(),
        )],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: false,
        static_counterpart: None,
        default_tau: 0.0,
        default_history: DEFAULT_X0.to_vec(),
        warnings: vec![],
    })
}

/// Euler equations of the free rigid body.
pub fn rigid_body(a: [f64; 3]) -> Result<CatalogEntry> {
    let p_tensor = rigid_matrix_current();
    let h1 = weighted_energy(a, "h1");
    let h2 = half_norm_current("h2");
    let spec = VectorFieldSpec::static_leibniz(p_tensor.clone(), zero_metric_static(), h1.clone())?;
    let literal: FieldFn = Arc::new(move |p| {
        let x = p.current();
        vec![
            (a[1] - a[2]) * x[1] * x[2],
            (a[2] - a[0]) * x[0] * x[2],
            (a[0] - a[1]) * x[0] * x[1],
        ]
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    let p_for_casimir = p_tensor;
    Ok(CatalogEntry {
        name: "rigid-body",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![
            NamedScalar { label: "h1 (energy)".into(), field: h1 },
            NamedScalar { label: "h2 (casimir)".into(), field: h2 },
        ],
        diagnostics: vec![],
        structural_checks: vec![
            check_fields_match("field matches displayed components", assembled, literal.clone()),
            StructuralCheck::new(
                "P·x = 0 (casimir rows)",
                Arc::new(move |p| {
                    let r = p_for_casimir.apply(p, p.current()).expect("dims agree");
                    norm_inf(&r) / norm_inf(p.current()).max(1.0)
                }),
            ),
        ],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: false,
        static_counterpart: None,
        default_tau: 0.0,
        default_history: DEFAULT_X0.to_vec(),
        warnings: distinctness_warnings(a),
    })
}

/// Magnetization dynamics in an external field.
pub fn landau_lifschitz(gamma: f64, lambda: f64, b: [f64; 3]) -> Result<CatalogEntry> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::ConstraintViolation(format!("gamma must be finite and nonzero, got {gamma}")));
    }
    if !lambda.is_finite() {
        return Err(Error::ConstraintViolation("lambda must be finite".into()));
    }
    // cross-product matrix: P·v = x × v
    let p_tensor = TensorField::new(3, "[x]x", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
        let x = p.current();
        vec![
            vec![0.0, -x[2], x[1]],
            vec![x[2], 0.0, -x[0]],
            vec![-x[1], x[0], 0.0],
        ]
    });
    let g_tensor = TensorField::new(
        3,
        "(λ/(γ|x|²))(xxᵀ−|x|²I)",
        SymmetryClass::Symmetric,
        SlotSignature::CurrentCurrent,
        move |p| {
            let x = p.current();
            let n2 = x.iter().map(|v| v * v).sum::<f64>();
            let coeff = lambda / (gamma * n2);
            let mut m = vec![vec![0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = coeff * (x[i] * x[j] - if i == j { n2 } else { 0.0 });
                }
            }
            m
        },
    );
    let h = ScalarField::of_current(
        3,
        "γ B·x",
        move |x| gamma * (b[0] * x[0] + b[1] * x[1] + b[2] * x[2]),
        move |_| vec![gamma * b[0], gamma * b[1], gamma * b[2]],
    );
    let spec = VectorFieldSpec::static_almost(p_tensor, g_tensor, h.clone(), h)?;
    let literal: FieldFn = Arc::new(move |p| {
        let x = p.current();
        let xb = cross(x, &b);
        let xxb = cross(x, &xb);
        let n2 = x.iter().map(|v| v * v).sum::<f64>();
        (0..3).map(|i| gamma * xb[i] + lambda / n2 * xxb[i]).collect()
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    let norm2 = ScalarField::of_current(
        3,
        "|x|^2",
        |x| x.iter().map(|v| v * v).sum(),
        |x| x.iter().map(|v| 2.0 * v).collect(),
    );
    Ok(CatalogEntry {
        name: "landau-lifschitz",
        dim: 3,
        spec,
        parameters: vec![
            ("gamma".into(), gamma),
            ("lambda".into(), lambda),
            ("b1".into(), b[0]),
            ("b2".into(), b[1]),
            ("b3".into(), b[2]),
        ],
        invariants: vec![NamedScalar { label: "|x|^2".into(), field: norm2 }],
        diagnostics: vec![],
        structural_checks: vec![check_fields_match(
            "bracket field matches displayed closed form",
            assembled,
            literal.clone(),
        )],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: false,
        static_counterpart: None,
        default_tau: 0.0,
        default_history: vec![1.0, 0.2, 0.1],
        warnings: vec![],
    })
}

fn cross(a: &[f64], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// The rigid body augmented with the constructed dissipation tensor.
pub fn revisited_rigid_body(a: [f64; 3]) -> Result<CatalogEntry> {
    let h1 = weighted_energy(a, "h1");
    let h2 = half_norm_current("h2");
    let built = build_revisited_system(
        &rigid_matrix_current(),
        &h1,
        &h2,
        MetricVariant::OuterProduct,
        BuildMode::Static,
        false,
    )?;
    let spec = built.spec.clone();

    // the displayed metric table, encoded verbatim
    let table = move |x: &[f64]| -> Vec<Vec<f64>> {
        let (a1, a2, a3) = (a[0], a[1], a[2]);
        vec![
            vec![
                -a2 * a2 * x[1] * x[1] - a3 * a3 * x[2] * x[2],
                a1 * a2 * x[0] * x[1],
                a1 * a3 * x[0] * x[2],
            ],
            vec![
                a1 * a2 * x[0] * x[1],
                -a1 * a1 * x[0] * x[0] - a3 * a3 * x[2] * x[2],
                a2 * a3 * x[1] * x[2],
            ],
            vec![
                a1 * a3 * x[0] * x[2],
                a2 * a3 * x[1] * x[2],
                -a1 * a1 * x[0] * x[0] - a2 * a2 * x[1] * x[1],
            ],
        ]
    };
    let g_built = built.metric.tensor.clone();
    let table_check = table;
    let metric_matches_table = StructuralCheck::new(
        "constructed metric matches displayed table",
        Arc::new(move |p| {
            let m = g_built.components(p);
            let t = table_check(p.current());
            let mut worst = 0.0_f64;
            for i in 0..3 {
                worst = worst.max(rel_dev(&m[i], &t[i]));
            }
            worst
        }),
    );
    // field assembled from the literal table and the skew part, an
    // independent route to the revisited system
    let h1c = h1.clone();
    let h2c = h2.clone();
    let table_field = table;
    let from_table: FieldFn = Arc::new(move |p| {
        let x = p.current();
        let pm = vec![
            vec![0.0, x[2], -x[1]],
            vec![-x[2], 0.0, x[0]],
            vec![x[1], -x[0], 0.0],
        ];
        let gh1 = h1c.grad_current_at(p);
        let gh2 = h2c.grad_current_at(p);
        let t = table_field(x);
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| pm[i][j] * gh1[j] + t[i][j] * gh2[j])
                    .sum::<f64>()
            })
            .collect()
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    // the prose display of the revisited system; its X³ line carries the
    // coefficient a₂(a₃−a₁) where the table-assembled field has a₂(a₃−a₂)
    let literal_display: FieldFn = Arc::new(move |p| {
        let x = p.current();
        let (a1, a2, a3) = (a[0], a[1], a[2]);
        vec![
            (a2 - a3) * x[1] * x[2] + a2 * (a1 - a2) * x[0] * x[1] * x[1] + a3 * (a1 - a3) * x[0] * x[2] * x[2],
            (a3 - a1) * x[0] * x[2] + a3 * (a2 - a3) * x[1] * x[2] * x[2] + a1 * (a2 - a1) * x[1] * x[0] * x[0],
            (a1 - a2) * x[0] * x[1] + a1 * (a3 - a1) * x[2] * x[0] * x[0] + a2 * (a3 - a1) * x[2] * x[1] * x[1],
        ]
    });
    Ok(CatalogEntry {
        name: "revisited-rigid-body",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![NamedScalar { label: "h1 (energy)".into(), field: h1 }],
        diagnostics: vec![NamedScalar { label: "h2 (dissipated)".into(), field: h2 }],
        structural_checks: vec![
            metric_matches_table,
            check_fields_match(
                "constructed field matches table-assembled field",
                assembled.clone(),
                from_table,
            ),
        ],
        display_diffs: vec![check_fields_match(
            "constructed field vs prose display (suspected typo in last coefficient)",
            assembled,
            literal_display.clone(),
        )],
        literal_field: Some(literal_display),
        is_delay: false,
        static_counterpart: None,
        default_tau: 0.0,
        default_history: DEFAULT_X0.to_vec(),
        warnings: built.warnings,
    })
}

/// Rigid body with the delay entering through one direction.
pub fn rigid_body_delay_one_direction(a: [f64; 3]) -> Result<CatalogEntry> {
    let p_tensor = mixed_skew_matrix();
    let h1 = mixed_quadratic("h1");
    let h2 = mixed_weighted_quadratic(a, "h2");
    let spec = VectorFieldSpec::delay_almost(p_tensor.clone(), zero_metric_delay(), h1.clone(), h2.clone())?;
    let literal: FieldFn = Arc::new(move |p| {
        let (xt, x) = (p.delayed(), p.current());
        vec![
            (a[1] - a[2]) * xt[1] * x[2],
            (a[2] - a[0]) * x[0] * x[2],
            (a[0] - a[1]) * x[0] * xt[1],
        ]
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    let frozen = |label: &str, h: ScalarField, f: FieldFn| -> StructuralCheck {
        StructuralCheck::new(
            label,
            Arc::new(move |p| {
                let x = f(p);
                let g = h.grad_current_at(p);
                let v: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
                v.abs() / norm_inf(&x).max(norm_inf(&g)).max(1.0)
            }),
        )
    };
    let hyp_p = {
        let h1g = h1.clone();
        let pt = p_tensor;
        StructuralCheck::new(
            "P annihilates ∂h1/∂x (equivalence hypothesis)",
            Arc::new(move |p| {
                let r = pt.apply(p, &h1g.grad_current_at(p)).expect("dims agree");
                norm_inf(&r) / norm_inf(&h1g.grad_current_at(p)).max(1.0)
            }),
        )
    };
    Ok(CatalogEntry {
        name: "rigid-body-delay-1d",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![
            NamedScalar { label: "h1".into(), field: h1.clone() },
            NamedScalar { label: "h2".into(), field: h2.clone() },
        ],
        diagnostics: vec![],
        structural_checks: vec![
            check_fields_match("field matches displayed components", assembled.clone(), literal.clone()),
            frozen("X(h1) = 0 on the current slot", h1, assembled.clone()),
            frozen("X(h2) = 0 on the current slot", h2, assembled),
            hyp_p,
        ],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: true,
        static_counterpart: Some("rigid-body"),
        default_tau: DEFAULT_TAU,
        default_history: DEFAULT_X0.to_vec(),
        warnings: distinctness_warnings(a),
    })
}

/// Rigid body with the delay entering through every direction.
pub fn rigid_body_delay_all_directions(a: [f64; 3]) -> Result<CatalogEntry> {
    let p_tensor = rigid_matrix_delayed();
    let h2 = weighted_energy(a, "h2");
    let spec = VectorFieldSpec::delay_almost(p_tensor, zero_metric_delay(), ScalarField::zero(3), h2.clone())?;
    let literal: FieldFn = Arc::new(move |p| {
        let (xt, x) = (p.delayed(), p.current());
        vec![
            a[1] * x[1] * xt[2] - a[2] * x[2] * xt[1],
            a[2] * x[2] * xt[0] - a[0] * x[0] * xt[2],
            a[0] * x[0] * xt[1] - a[1] * x[1] * xt[0],
        ]
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    let h1 = half_norm_current("h1");
    // X(π₁*h₁) equals this function, nonzero on an open set
    let alpha = ScalarField::full(
        3,
        "alpha",
        move |p| {
            let (xt, x) = (p.delayed(), p.current());
            a[0] * x[0] * (xt[1] * x[2] - xt[2] * x[1])
                + a[1] * x[1] * (xt[2] * x[0] - xt[0] * x[2])
                + a[2] * x[2] * (xt[0] * x[1] - xt[1] * x[0])
        },
        move |p| {
            let (xt, x) = (p.delayed(), p.current());
            vec![
                (a[0] - a[2]) * xt[1] * x[2] + (a[1] - a[0]) * xt[2] * x[1],
                (a[1] - a[0]) * x[0] * xt[2] + (a[2] - a[1]) * xt[0] * x[2],
                (a[0] - a[2]) * x[0] * xt[1] + (a[2] - a[1]) * x[1] * xt[0],
            ]
        },
        move |p| {
            let x = p.current();
            vec![
                (a[2] - a[1]) * x[1] * x[2],
                (a[0] - a[2]) * x[0] * x[2],
                (a[1] - a[0]) * x[0] * x[1],
            ]
        },
    );
    let conserved_check = {
        let h2c = h2.clone();
        let f = assembled.clone();
        StructuralCheck::new(
            "X(h2) = 0 exactly (telescoping sum)",
            Arc::new(move |p| {
                let x = f(p);
                let g = h2c.grad_current_at(p);
                let v: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
                v.abs() / norm_inf(&x).max(1.0)
            }),
        )
    };
    let alpha_check = {
        let h1c = h1.clone();
        let ac = alpha.clone();
        let f = assembled.clone();
        StructuralCheck::new(
            "X(h1) equals the displayed alpha",
            Arc::new(move |p| {
                let x = f(p);
                let g = h1c.grad_current_at(p);
                let v: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
                let want = ac.value_at(p);
                (v - want).abs() / v.abs().max(want.abs()).max(1.0)
            }),
        )
    };
    Ok(CatalogEntry {
        name: "rigid-body-delay-3d",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![NamedScalar { label: "h2".into(), field: h2 }],
        diagnostics: vec![
            NamedScalar { label: "h1 (not conserved)".into(), field: h1 },
            NamedScalar { label: "alpha".into(), field: alpha },
        ],
        structural_checks: vec![
            check_fields_match("field matches displayed components", assembled, literal.clone()),
            conserved_check,
            alpha_check,
        ],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: true,
        static_counterpart: Some("rigid-body"),
        default_tau: DEFAULT_TAU,
        default_history: DEFAULT_X0.to_vec(),
        warnings: distinctness_warnings(a),
    })
}

/// Three-wave interaction driven entirely by the delayed state.
pub fn three_wave_delay(s: [f64; 3], gamma: [f64; 3]) -> Result<CatalogEntry> {
    validate_three_wave(s, gamma)?;
    let c = [s[0] * gamma[0], s[1] * gamma[1], s[2] * gamma[2]];
    let g = TensorField::diagonal(c.to_vec(), SlotSignature::DelayedCurrent);
    let h_delayed = ScalarField::of_delayed(
        3,
        "π1* (x1 x2 x3)",
        |x| x[0] * x[1] * x[2],
        |x| vec![x[1] * x[2], x[0] * x[2], x[0] * x[1]],
    );
    let spec = VectorFieldSpec::delay_almost(zero_metric_static(), g, h_delayed, ScalarField::zero(3))?;
    let literal: FieldFn = Arc::new(move |p| {
        let xt = p.delayed();
        vec![c[0] * xt[1] * xt[2], c[1] * xt[0] * xt[2], c[2] * xt[0] * xt[1]]
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    Ok(CatalogEntry {
        name: "three-wave-delay",
        dim: 3,
        spec,
        parameters: vec![
            ("s1".into(), s[0]),
            ("s2".into(), s[1]),
            ("s3".into(), s[2]),
            ("gamma1".into(), gamma[0]),
            ("gamma2".into(), gamma[1]),
            ("gamma3".into(), gamma[2]),
        ],
        invariants: vec![],
        diagnostics: vec![],
        structural_checks: vec![check_fields_match(
            "X = g(π1* h): assembled field matches displayed components",
            assembled,
            literal.clone(),
        )],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: true,
        static_counterpart: Some("three-wave"),
        default_tau: DEFAULT_TAU,
        default_history: DEFAULT_X0.to_vec(),
        warnings: vec![],
    })
}

/// The revisited rigid body with delay, built from the Hamiltonian/Casimir
/// pair rather than transcribed from the display.
pub fn revisited_rigid_body_delay(a: [f64; 3]) -> Result<CatalogEntry> {
    let h1 = half_norm_delayed("h1 (delayed)");
    let h2 = weighted_energy(a, "h2");
    let built = build_revisited_system(
        &rigid_matrix_current(),
        &h1,
        &h2,
        MetricVariant::OuterProduct,
        BuildMode::Delay,
        false,
    )?;
    let spec = built.spec.clone();
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };

    let g_built = built.metric.tensor.clone();
    let first_row = StructuralCheck::new(
        "metric first row matches displayed matrix",
        Arc::new(move |p| {
            let (xt, x) = (p.delayed(), p.current());
            let (a1, a2, a3) = (a[0], a[1], a[2]);
            let want = [
                -a2 * a2 * x[1] * xt[1] - a3 * a3 * x[2] * xt[2],
                a1 * a2 * xt[0] * x[1],
                a1 * a3 * xt[0] * x[2],
            ];
            rel_dev(&g_built.components(p)[0], &want)
        }),
    );
    let diag_reduction = {
        let f = assembled.clone();
        let static_field = revisited_rigid_body(a)?.field();
        StructuralCheck::new(
            "diagonal x̃ = x reduces to the static revisited field",
            Arc::new(move |p| {
                let d = DelayPair::diagonal(p.current());
                rel_dev(&f(&d), &static_field(&d))
            }),
        )
    };
    let p_part_ignores_delay = {
        let spec2 = spec.clone();
        StructuralCheck::new(
            "skew part depends on the current state only",
            Arc::new(move |p| {
                let swapped = DelayPair::new(p.current().to_vec(), p.current().to_vec()).expect("dims");
                let mixed = DelayPair::new(p.delayed().to_vec(), p.current().to_vec()).expect("dims");
                rel_dev(&spec2.skew_component(&swapped), &spec2.skew_component(&mixed))
            }),
        )
    };

    // verbatim (4.9)-style display, with its suspect middle coefficients
    let literal_display: FieldFn = Arc::new(move |p| {
        let (xt, x) = (p.delayed(), p.current());
        let (a1, a2, a3) = (a[0], a[1], a[2]);
        vec![
            (a2 - a3) * x[1] * x[2] + a2 * (a1 - a2) * xt[0] * xt[1] * x[1] + a3 * (a1 - a3) * xt[0] * xt[2] * x[2],
            (a3 - a1) * x[0] * x[2] + a3 * (a2 - a1) * xt[1] * xt[2] * x[2] + a1 * (a2 - a1) * xt[1] * xt[0] * x[0],
            (a1 - a2) * x[0] * x[1] + a1 * (a3 - a1) * xt[2] * xt[0] * x[0] + a2 * (a3 - a2) * xt[2] * xt[1] * x[1],
        ]
    });
    let g_full_display_diff = {
        let gb = built.metric.tensor.clone();
        StructuralCheck::new(
            "constructed metric vs full displayed matrix (symmetrized lower triangle)",
            Arc::new(move |p| {
                let (xt, x) = (p.delayed(), p.current());
                let (a1, a2, a3) = (a[0], a[1], a[2]);
                let want = [
                    [
                        -a2 * a2 * x[1] * xt[1] - a3 * a3 * x[2] * xt[2],
                        a1 * a2 * xt[0] * x[1],
                        a1 * a3 * xt[0] * x[2],
                    ],
                    [
                        a1 * a2 * xt[0] * x[1],
                        -a1 * a1 * x[0] * xt[0] - a3 * a3 * x[2] * xt[2],
                        a2 * a3 * xt[1] * x[2],
                    ],
                    [
                        a1 * a3 * xt[0] * x[2],
                        a2 * a3 * xt[1] * x[2],
                        -a1 * a1 * xt[0] * x[0] - a2 * a2 * xt[1] * x[1],
                    ],
                ];
                let m = gb.components(p);
                let mut worst = 0.0_f64;
                for i in 0..3 {
                    worst = worst.max(rel_dev(&m[i], &want[i]));
                }
                worst
            }),
        )
    };

    Ok(CatalogEntry {
        name: "revisited-rigid-body-delay",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![],
        diagnostics: vec![NamedScalar { label: "h2 (dissipation candidate)".into(), field: h2 }],
        structural_checks: vec![first_row, diag_reduction, p_part_ignores_delay],
        display_diffs: vec![
            check_fields_match(
                "constructed field vs verbatim display",
                assembled,
                literal_display.clone(),
            ),
            g_full_display_diff,
        ],
        literal_field: Some(literal_display),
        is_delay: true,
        static_counterpart: Some("revisited-rigid-body"),
        default_tau: DEFAULT_TAU,
        default_history: DEFAULT_X0.to_vec(),
        warnings: built.warnings,
    })
}

/// The delay system generated by the mixed-entry skew tensor and the
/// delayed-bilinear Hamiltonian.
pub fn example_4_5(a: [f64; 3]) -> Result<CatalogEntry> {
    let p_tensor = mixed_skew_matrix();
    let h_pair = delayed_bilinear(a, "h1 (bilinear)");
    let casimir = mixed_quadratic("h2 (casimir)");
    let spec = VectorFieldSpec::delay_almost(p_tensor.clone(), zero_metric_delay(), casimir.clone(), h_pair)?;
    let literal: FieldFn = Arc::new(move |p| {
        let (xt, x) = (p.delayed(), p.current());
        vec![
            a[1] * xt[1] * x[2] - a[2] * xt[1] * xt[2],
            a[2] * x[0] * xt[2] - a[0] * xt[0] * x[2],
            a[0] * xt[0] * xt[1] - a[1] * x[0] * xt[1],
        ]
    });
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    let casimir_check = {
        let c = casimir;
        StructuralCheck::new(
            "P annihilates ∂h2/∂x (casimir property)",
            Arc::new(move |p| {
                let g = c.grad_current_at(p);
                let r = p_tensor.apply(p, &g).expect("dims agree");
                norm_inf(&r) / norm_inf(&g).max(1.0)
            }),
        )
    };
    Ok(CatalogEntry {
        name: "example-4-5",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![],
        diagnostics: vec![],
        structural_checks: vec![
            check_fields_match("field matches displayed components", assembled, literal.clone()),
            casimir_check,
        ],
        display_diffs: vec![],
        literal_field: Some(literal),
        is_delay: true,
        static_counterpart: Some("rigid-body"),
        default_tau: DEFAULT_TAU,
        default_history: DEFAULT_X0.to_vec(),
        warnings: vec![],
    })
}

/// The revisited variant of the mixed-entry delay system.
pub fn revisited_example_4_5(a: [f64; 3]) -> Result<CatalogEntry> {
    let h_pair = delayed_bilinear(a, "h1 (bilinear)");
    let casimir = mixed_quadratic("h2 (casimir)");
    let built = build_revisited_system(
        &mixed_skew_matrix(),
        &casimir,
        &h_pair,
        MetricVariant::OuterProduct,
        BuildMode::Delay,
        false,
    )?;
    let spec = built.spec.clone();
    let assembled = {
        let spec = spec.clone();
        Arc::new(move |p: &DelayPair| spec.eval(p)) as FieldFn
    };
    let annihilation = {
        let m = built.metric.clone();
        StructuralCheck::new(
            "metric annihilates ∂h1/∂x",
            Arc::new(move |p| m.annihilation_residual(p)),
        )
    };
    // wiring check: assembled must equal base display plus the metric part
    let wiring_check = {
        let base = example_4_5(a)?.literal_field.expect("base has a display");
        let g_tensor = built.metric.tensor.clone();
        let cas = mixed_quadratic("h2");
        let f = assembled.clone();
        StructuralCheck::new(
            "field equals base display plus metric part",
            Arc::new(move |p| {
                let b = base(p);
                let gp = g_tensor.apply(p, &cas.grad_delayed_at(p)).expect("dims agree");
                let want: Vec<f64> = b.iter().zip(&gp).map(|(x, y)| x + y).collect();
                rel_dev(&f(p), &want)
            }),
        )
    };
    // verbatim (4.12)-style display: only the middle row carries metric terms
    let literal_display: FieldFn = Arc::new(move |p| {
        let (xt, x) = (p.delayed(), p.current());
        let (a1, a2, a3) = (a[0], a[1], a[2]);
        vec![
            a2 * xt[1] * x[2] - a3 * xt[1] * xt[2],
            a3 * x[0] * xt[2] - a1 * xt[0] * x[2] - a1 * a1 * x[0] * xt[0] * x[1] - a3 * a3 * x[1] * x[2] * xt[2],
            a1 * xt[0] * xt[1] - a2 * x[0] * xt[1],
        ]
    });
    Ok(CatalogEntry {
        name: "revisited-example-4-5",
        dim: 3,
        spec,
        parameters: vec![("a1".into(), a[0]), ("a2".into(), a[1]), ("a3".into(), a[2])],
        invariants: vec![],
        diagnostics: vec![NamedScalar { label: "h1 (bilinear)".into(), field: delayed_bilinear(a, "h1") }],
        structural_checks: vec![annihilation, wiring_check],
        display_diffs: vec![check_fields_match(
            "constructed field vs verbatim display (rows 1 and 3 lack metric terms there)",
            assembled,
            literal_display.clone(),
        )],
        literal_field: Some(literal_display),
        is_delay: true,
        static_counterpart: None,
        default_tau: DEFAULT_TAU,
        default_history: DEFAULT_X0.to_vec(),
        warnings: built.warnings,
    })
}

// ---------------------------------------------------------------------------
// lookup
// ---------------------------------------------------------------------------

pub const CATALOG_NAMES: [&str; 10] = [
    "three-wave",
    "rigid-body",
    "landau-lifschitz",
    "revisited-rigid-body",
    "rigid-body-delay-1d",
    "rigid-body-delay-3d",
    "three-wave-delay",
    "revisited-rigid-body-delay",
    "example-4-5",
    "revisited-example-4-5",
];

/// Builds a catalog entry by interface name, with parameter overrides.
pub fn by_name(name: &str, params: &HashMap<String, f64>) -> Result<CatalogEntry> {
    let three_wave_params = |params: &HashMap<String, f64>| -> Result<([f64; 3], [f64; 3])> {
        reject_unknown(params, &["s1", "s2", "s3", "gamma1", "gamma2", "gamma3"])?;
        Ok((
            [
                get(params, "s1", 1.0),
                get(params, "s2", 1.0),
                get(params, "s3", 1.0),
            ],
            [
                get(params, "gamma1", 1.0),
                get(params, "gamma2", 1.0),
                get(params, "gamma3", -2.0),
            ],
        ))
    };
    match name {
        "three-wave" => {
            let (s, g) = three_wave_params(params)?;
            three_wave(s, g)
        }
        "three-wave-delay" => {
            let (s, g) = three_wave_params(params)?;
            three_wave_delay(s, g)
        }
        "rigid-body" => rigid_body(inertia_params(params)?),
        "revisited-rigid-body" => revisited_rigid_body(inertia_params(params)?),
        "rigid-body-delay-1d" => rigid_body_delay_one_direction(inertia_params(params)?),
        "rigid-body-delay-3d" => rigid_body_delay_all_directions(inertia_params(params)?),
        "revisited-rigid-body-delay" => revisited_rigid_body_delay(inertia_params(params)?),
        "example-4-5" => example_4_5(inertia_params(params)?),
        "revisited-example-4-5" => revisited_example_4_5(inertia_params(params)?),
        "landau-lifschitz" => {
            reject_unknown(params, &["gamma", "lambda", "b1", "b2", "b3"])?;
            landau_lifschitz(
                get(params, "gamma", 1.0),
                get(params, "lambda", 0.1),
                [
                    get(params, "b1", 0.0),
                    get(params, "b2", 0.0),
                    get(params, "b3", 1.0),
                ],
            )
        }
        other => Err(Error::UnknownSystem(other.to_string())),
    }
}

/// Every entry at its default parameters.
pub fn default_catalog() -> Vec<CatalogEntry> {
    CATALOG_NAMES
        .iter()
        .map(|n| by_name(n, &HashMap::new()).expect("defaults are valid"))
        .collect()
}

/// A rigid-body entry whose displayed components are perturbed by `epsilon`
/// in the first coordinate; its field-vs-display check must fail by about
/// that much. Test fixture for the verification harness.
pub fn perturbed_fixture(epsilon: f64) -> CatalogEntry {
    let mut entry = rigid_body([0.6, 0.4, 0.2]).expect("defaults are valid");
    let assembled = entry.field();
    let literal: FieldFn = {
        let lit = entry.literal_field.clone().expect("rigid body has a display");
        Arc::new(move |p: &DelayPair| {
            let mut v = lit(p);
            v[0] += epsilon;
            v
        })
    };
    entry.name = "planted-fixture";
    entry.structural_checks = vec![StructuralCheck::new(
        "field matches displayed components (perturbed)",
        Arc::new(move |p| {
            let a = assembled(p);
            let b = literal(p);
            a.iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        }),
    )];
    entry
}
