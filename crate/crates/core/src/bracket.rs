//! Bracket evaluation and vector-field assembly, for the static setting
//! (ℝⁿ, one or two Hamiltonians) and the delay setting (doubled space).
//!
//! Slot conventions, hard-coded per wiring:
//!   - `StaticLeibniz`:  Xⁱ = Σⱼ (P^{ij} + g^{ij}) ∂h/∂xʲ
//!   - `StaticAlmost`:   Xⁱ = Σⱼ P^{ij} ∂h₁/∂xʲ + g^{ij} ∂h₂/∂xʲ
//!   - `DelayAlmost`:    Xⁱ = Σⱼ P^{ij} ∂h₂/∂xʲ + g^{ij} ∂h₁/∂x̃ʲ
//!
//! In the delay wiring the skew tensor pairs with the *current*-slot gradient
//! of h₂ and the metric tensor with the *delayed*-slot gradient of h₁; the
//! output only ever drives the current slot, so the assembled dynamics never
//! writes x̃.

use crate::error::{Error, Result};
use crate::poly::{Poly, VarSet};
use crate::sample::Sampler;
use crate::scalar::ScalarField;
use crate::state::DelayPair;
use crate::tensor::{SlotSignature, TensorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wiring {
    StaticLeibniz,
    StaticAlmost,
    DelayAlmost,
}

/// A fully wired vector field: tensors, Hamiltonian pair and wiring mode.
#[derive(Debug, Clone)]
pub struct VectorFieldSpec {
    dim: usize,
    p: TensorField,
    g: TensorField,
    h1: ScalarField,
    h2: ScalarField,
    wiring: Wiring,
}

impl VectorFieldSpec {
    pub fn static_leibniz(p: TensorField, g: TensorField, h: ScalarField) -> Result<Self> {
        Self::build(p, g, h.clone(), h, Wiring::StaticLeibniz)
    }

    pub fn static_almost(p: TensorField, g: TensorField, h1: ScalarField, h2: ScalarField) -> Result<Self> {
        Self::build(p, g, h1, h2, Wiring::StaticAlmost)
    }

    pub fn delay_almost(p: TensorField, g: TensorField, h1: ScalarField, h2: ScalarField) -> Result<Self> {
        Self::build(p, g, h1, h2, Wiring::DelayAlmost)
    }

    fn build(p: TensorField, g: TensorField, h1: ScalarField, h2: ScalarField, wiring: Wiring) -> Result<Self> {
        let dim = p.dim();
        for (found, context) in [
            (g.dim(), "VectorFieldSpec metric tensor"),
            (h1.dim(), "VectorFieldSpec h1"),
            (h2.dim(), "VectorFieldSpec h2"),
        ] {
            if found != dim {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: dim,
                    found,
                });
            }
        }
        match wiring {
            Wiring::DelayAlmost => {
                if p.slot_signature() != SlotSignature::CurrentCurrent {
                    return Err(Error::InvalidArgument(
                        "delay wiring needs a current-current skew tensor".into(),
                    ));
                }
                if g.slot_signature() != SlotSignature::DelayedCurrent {
                    return Err(Error::InvalidArgument(
                        "delay wiring needs a delayed-current metric tensor".into(),
                    ));
                }
            }
            Wiring::StaticLeibniz | Wiring::StaticAlmost => {
                if p.slot_signature() != SlotSignature::CurrentCurrent
                    || g.slot_signature() != SlotSignature::CurrentCurrent
                {
                    return Err(Error::InvalidArgument(
                        "static wirings need current-current tensors".into(),
                    ));
                }
            }
        }
        Ok(Self { dim, p, g, h1, h2, wiring })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn wiring(&self) -> Wiring {
        self.wiring
    }

    pub fn skew_part(&self) -> &TensorField {
        &self.p
    }

    pub fn metric_part(&self) -> &TensorField {
        &self.g
    }

    pub fn h1(&self) -> &ScalarField {
        &self.h1
    }

    pub fn h2(&self) -> &ScalarField {
        &self.h2
    }

    /// Contribution of the skew tensor alone.
    pub fn skew_component(&self, at: &DelayPair) -> Vec<f64> {
        let grad = match self.wiring {
            Wiring::StaticLeibniz => self.h1.grad_current_at(at),
            Wiring::StaticAlmost => self.h1.grad_current_at(at),
            Wiring::DelayAlmost => self.h2.grad_current_at(at),
        };
        self.p.apply(at, &grad).expect("dimension checked at build")
    }

    /// Contribution of the metric tensor alone.
    pub fn metric_component(&self, at: &DelayPair) -> Vec<f64> {
        let grad = match self.wiring {
            Wiring::StaticLeibniz => self.h2.grad_current_at(at),
            Wiring::StaticAlmost => self.h2.grad_current_at(at),
            Wiring::DelayAlmost => self.h1.grad_delayed_at(at),
        };
        self.g.apply(at, &grad).expect("dimension checked at build")
    }

    /// The assembled field Xⁱ at a point of the doubled space; output
    /// components drive the current slot only.
    pub fn eval(&self, at: &DelayPair) -> Vec<f64> {
        let a = self.skew_component(at);
        let b = self.metric_component(at);
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    /// Closure view for the integrator.
    pub fn as_field(&self) -> impl Fn(&DelayPair) -> Vec<f64> + '_ {
        move |p| self.eval(p)
    }
}

/// The symmetric bracket Σᵢⱼ (∂f/∂xⁱ) g^{ij} (∂h/∂xʲ) at a point,
/// current-slot gradients on both sides.
pub fn pseudometric_bracket(g: &TensorField, f: &ScalarField, h: &ScalarField, p: &DelayPair) -> Result<f64> {
    if f.dim() != g.dim() || h.dim() != g.dim() || p.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            context: "pseudometric_bracket",
            expected: g.dim(),
            found: f.dim().max(h.dim()).max(p.dim()),
        });
    }
    let gf = f.grad_current_at(p);
    let gh = h.grad_current_at(p);
    let gv = g.apply(p, &gh)?;
    Ok(gf.iter().zip(gv).map(|(a, b)| a * b).sum())
}

pub fn leibniz_vector_field(spec: &VectorFieldSpec, p: &DelayPair) -> Result<Vec<f64>> {
    expect_wiring(spec, Wiring::StaticLeibniz)?;
    Ok(spec.eval(p))
}

pub fn almost_leibniz_vector_field(spec: &VectorFieldSpec, p: &DelayPair) -> Result<Vec<f64>> {
    expect_wiring(spec, Wiring::StaticAlmost)?;
    Ok(spec.eval(p))
}

pub fn delay_vector_field(spec: &VectorFieldSpec, p: &DelayPair) -> Result<Vec<f64>> {
    expect_wiring(spec, Wiring::DelayAlmost)?;
    Ok(spec.eval(p))
}

fn expect_wiring(spec: &VectorFieldSpec, want: Wiring) -> Result<()> {
    if spec.wiring() != want {
        return Err(Error::InvalidArgument(format!(
            "expected {want:?} wiring, spec is {:?}",
            spec.wiring()
        )));
    }
    if spec.dim() == 0 {
        return Err(Error::InvalidArgument("zero-dimensional spec".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Bracket-law verification with random polynomial test functions
// ---------------------------------------------------------------------------

/// Which form of law (b) to check; the broken form drops the metric cofactor
/// term and exists to prove the checker can see a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawForm {
    Full,
    MissingMetricCofactor,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub trials: usize,
    pub max_residual_product_rule: f64,
    pub max_residual_pair_scaling: f64,
    pub max_residual_diagonal_scaling: f64,
    pub pass: bool,
    pub tol: f64,
}

impl LawReport {
    pub fn max_residual(&self) -> f64 {
        self.max_residual_product_rule
            .max(self.max_residual_pair_scaling)
            .max(self.max_residual_diagonal_scaling)
    }

    pub fn failing_law(&self) -> Option<&'static str> {
        if self.max_residual_product_rule > self.tol {
            Some("product-rule")
        } else if self.max_residual_pair_scaling > self.tol {
            Some("pair-scaling")
        } else if self.max_residual_diagonal_scaling > self.tol {
            Some("diagonal-scaling")
        } else {
            None
        }
    }
}

/// Σᵢⱼ (∂f/∂xⁱ) P^{ij} (∂h/∂xʲ): the skew tensor always pairs current
/// gradients on both sides.
fn pairing_skew(p_tensor: &TensorField, f: &Poly, h: &Poly, at: &DelayPair) -> f64 {
    let gf = f.grad_current(at);
    let gh = h.grad_current(at);
    let m = p_tensor.components(at);
    contract(&gf, &m, &gh)
}

/// Metric pairing; the h-side gradient slot depends on the wiring.
fn pairing_metric(g_tensor: &TensorField, f: &Poly, h: &Poly, at: &DelayPair, wiring: Wiring) -> f64 {
    let gf = f.grad_current(at);
    let gh = match wiring {
        Wiring::StaticLeibniz | Wiring::StaticAlmost => h.grad_current(at),
        Wiring::DelayAlmost => h.grad_delayed(at),
    };
    let m = g_tensor.components(at);
    contract(&gf, &m, &gh)
}

fn contract(u: &[f64], m: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0.0 {
            continue;
        }
        let row: f64 = m[i].iter().zip(v).map(|(a, b)| a * b).sum();
        acc += ui * row;
    }
    acc
}

/// [f, (h₁, h₂)] at a point, with the tensor-to-function pairing of the
/// given wiring (static: P↔h₁, g↔h₂; delay: P↔h₂, g↔h₁ with a delayed
/// gradient).
fn almost_bracket(
    p_tensor: &TensorField,
    g_tensor: &TensorField,
    wiring: Wiring,
    f: &Poly,
    h1: &Poly,
    h2: &Poly,
    at: &DelayPair,
) -> f64 {
    match wiring {
        Wiring::StaticLeibniz | Wiring::StaticAlmost => {
            pairing_skew(p_tensor, f, h1, at) + pairing_metric(g_tensor, f, h2, at, wiring)
        }
        Wiring::DelayAlmost => {
            pairing_skew(p_tensor, f, h2, at) + pairing_metric(g_tensor, f, h1, at, wiring)
        }
    }
}

/// Numerically checks the three derivation laws of the two-Hamiltonian
/// bracket at random points, with random polynomial test functions of total
/// degree ≤ 3:
///   (a) [f₁f₂, (h₁,h₂)] = [f₁,(h₁,h₂)] f₂ + f₁ [f₂,(h₁,h₂)]
///   (b) [f, h·(h₁,h₂)]  = h [f,(h₁,h₂)] + h_P·P(f,h) + h_g·g(f,h)
///       where h_P / h_g are the functions P and g pair with under the wiring
///   (c) [f, l·(h,h)]    = l [f,(h,h)] + h [f,(l,l)]
/// Residuals are relative to max(1, |lhs|, |rhs|).
pub fn verify_bracket_laws(
    p_tensor: &TensorField,
    g_tensor: &TensorField,
    wiring: Wiring,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<LawReport> {
    verify_bracket_laws_form(p_tensor, g_tensor, wiring, trials, tol, seed, LawForm::Full)
}

pub fn verify_bracket_laws_form(
    p_tensor: &TensorField,
    g_tensor: &TensorField,
    wiring: Wiring,
    trials: usize,
    tol: f64,
    seed: u64,
    form: LawForm,
) -> Result<LawReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if p_tensor.dim() != g_tensor.dim() {
        return Err(Error::DimensionMismatch {
            context: "verify_bracket_laws",
            expected: p_tensor.dim(),
            found: g_tensor.dim(),
        });
    }
    let dim = p_tensor.dim();
    let pair_vars = match wiring {
        Wiring::StaticLeibniz | Wiring::StaticAlmost => VarSet::CurrentOnly,
        Wiring::DelayAlmost => VarSet::Both,
    };
    let mut sampler = Sampler::new(seed);
    let mut r_a = 0.0_f64;
    let mut r_b = 0.0_f64;
    let mut r_c = 0.0_f64;
    for _ in 0..trials {
        let at = sampler.pair(dim);
        // first-slot test functions live on the base space
        let f = Poly::random(dim, 3, VarSet::CurrentOnly, &mut sampler);
        let f2 = Poly::random(dim, 3, VarSet::CurrentOnly, &mut sampler);
        let h = Poly::random(dim, 3, pair_vars, &mut sampler);
        let l = Poly::random(dim, 3, pair_vars, &mut sampler);
        let h1 = Poly::random(dim, 3, pair_vars, &mut sampler);
        let h2 = Poly::random(dim, 3, pair_vars, &mut sampler);

        let br = |ff: &Poly, a: &Poly, b: &Poly| almost_bracket(p_tensor, g_tensor, wiring, ff, a, b, &at);

        // (a) product rule in the first slot
        let lhs = br(&f.mul(&f2), &h1, &h2);
        let rhs = br(&f, &h1, &h2) * f2.eval(&at) + f.eval(&at) * br(&f2, &h1, &h2);
        r_a = r_a.max(rel_residual(lhs, rhs));

        // (b) scaling the pair by h
        let lhs = br(&f, &h.mul(&h1), &h.mul(&h2));
        let (h_p, h_g) = match wiring {
            Wiring::StaticLeibniz | Wiring::StaticAlmost => (&h1, &h2),
            Wiring::DelayAlmost => (&h2, &h1),
        };
        let mut rhs = h.eval(&at) * br(&f, &h1, &h2)
            + h_p.eval(&at) * pairing_skew(p_tensor, &f, &h, &at);
        if form == LawForm::Full {
            rhs += h_g.eval(&at) * pairing_metric(g_tensor, &f, &h, &at, wiring);
        }
        r_b = r_b.max(rel_residual(lhs, rhs));

        // (c) scaling a diagonal pair
        let lh = l.mul(&h);
        let lhs = br(&f, &lh, &lh);
        let rhs = l.eval(&at) * br(&f, &h, &h) + h.eval(&at) * br(&f, &l, &l);
        r_c = r_c.max(rel_residual(lhs, rhs));
    }
    Ok(LawReport {
        trials,
        max_residual_product_rule: r_a,
        max_residual_pair_scaling: r_b,
        max_residual_diagonal_scaling: r_c,
        pass: r_a <= tol && r_b <= tol && r_c <= tol,
        tol,
    })
}

fn rel_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// Equivalence of (h₁, h₂) with the single Hamiltonian h = h₁ + h₂
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub hypothesis_skew_residual: f64,
    pub hypothesis_metric_residual: f64,
    pub equivalence_residual: f64,
    pub hypotheses_hold: bool,
    pub equivalent: bool,
    pub pass: bool,
}

/// Checks, at random points of the doubled space, (i) the residuals of the
/// hypotheses Σⱼ P^{ij} ∂h₁/∂xʲ = 0 and Σⱼ g^{ij} ∂h₂/∂x̃ʲ = 0 and (ii) that
/// the delay field built from (h₁, h₂) equals the one built from (h, h) with
/// h = h₁ + h₂.
pub fn verify_equivalence_prop42(
    p_tensor: &TensorField,
    g_tensor: &TensorField,
    h1: &ScalarField,
    h2: &ScalarField,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<EquivalenceReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let spec_pair = VectorFieldSpec::delay_almost(p_tensor.clone(), g_tensor.clone(), h1.clone(), h2.clone())?;
    let h = h1.sum(h2)?;
    let spec_diag = VectorFieldSpec::delay_almost(p_tensor.clone(), g_tensor.clone(), h.clone(), h)?;
    let mut sampler = Sampler::new(seed);
    let mut hyp_p = 0.0_f64;
    let mut hyp_g = 0.0_f64;
    let mut equiv = 0.0_f64;
    for _ in 0..trials {
        let at = sampler.pair(p_tensor.dim());
        let rp = p_tensor.apply(&at, &h1.grad_current_at(&at))?;
        let rg = g_tensor.apply(&at, &h2.grad_delayed_at(&at))?;
        hyp_p = hyp_p.max(norm_inf(&rp));
        hyp_g = hyp_g.max(norm_inf(&rg));
        let a = spec_pair.eval(&at);
        let b = spec_diag.eval(&at);
        let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        equiv = equiv.max(norm_inf(&d));
    }
    let hypotheses_hold = hyp_p <= tol && hyp_g <= tol;
    let equivalent = equiv <= tol;
    Ok(EquivalenceReport {
        hypothesis_skew_residual: hyp_p,
        hypothesis_metric_residual: hyp_g,
        equivalence_residual: equiv,
        hypotheses_hold,
        equivalent,
        pass: hypotheses_hold && equivalent,
    })
}

pub(crate) fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SymmetryClass;

    fn rigid_p() -> TensorField {
        TensorField::new(3, "P", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
            let x = p.current();
            vec![
                vec![0.0, x[2], -x[1]],
                vec![-x[2], 0.0, x[0]],
                vec![x[1], -x[0], 0.0],
            ]
        })
    }

    fn revisited_g(a: [f64; 3]) -> TensorField {
        TensorField::new(3, "g", SymmetryClass::Symmetric, SlotSignature::CurrentCurrent, move |p| {
            let x = p.current();
            let c = [a[0] * x[0], a[1] * x[1], a[2] * x[2]];
            let mut m = vec![vec![0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        m[i][i] = -(0..3).filter(|k| *k != i).map(|k| c[k] * c[k]).sum::<f64>();
                    } else {
                        m[i][j] = c[i] * c[j];
                    }
                }
            }
            m
        })
    }

    fn product_h() -> ScalarField {
        ScalarField::of_current(
            3,
            "x1 x2 x3",
            |x| x[0] * x[1] * x[2],
            |x| vec![x[1] * x[2], x[0] * x[2], x[0] * x[1]],
        )
    }

    #[test]
    fn pseudometric_cancellation_at_unit_point() {
        // contravariant diag(s·γ) with s=(1,1,1), γ=(1,1,−2): all partials are
        // 1 at (1,1,1), so the bracket telescopes to 1 + 1 − 2 = 0
        let g = TensorField::diagonal(vec![1.0, 1.0, -2.0], SlotSignature::CurrentCurrent);
        let h = product_h();
        let p = DelayPair::diagonal(&[1.0, 1.0, 1.0]);
        let v = pseudometric_bracket(&g, &h, &h, &p).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn pseudometric_zero_for_constant_argument() {
        let g = TensorField::diagonal(vec![1.0, 1.0, -2.0], SlotSignature::CurrentCurrent);
        let c = ScalarField::constant(3, 3.25);
        let h = product_h();
        let mut s = Sampler::new(4);
        for _ in 0..20 {
            let p = s.pair(3);
            assert_eq!(pseudometric_bracket(&g, &c, &h, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn pseudometric_symmetric_in_arguments() {
        let g = TensorField::diagonal(vec![1.0, 1.0, -2.0], SlotSignature::CurrentCurrent);
        let f = ScalarField::of_current(3, "f", |x| x[0] * x[0] + x[1], |x| vec![2.0 * x[0], 1.0, 0.0]);
        let h = product_h();
        let mut s = Sampler::new(8);
        for _ in 0..100 {
            let p = s.pair(3);
            let a = pseudometric_bracket(&g, &f, &h, &p).unwrap();
            let b = pseudometric_bracket(&g, &h, &f, &p).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn three_wave_field_values() {
        let g = TensorField::diagonal(vec![1.0, 1.0, -2.0], SlotSignature::CurrentCurrent);
        let spec = VectorFieldSpec::static_leibniz(
            TensorField::zero(3, SlotSignature::CurrentCurrent),
            g,
            product_h(),
        )
        .unwrap();
        let v = leibniz_vector_field(&spec, &DelayPair::diagonal(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(v, vec![1.0, 1.0, -2.0]);
        let v0 = spec.eval(&DelayPair::diagonal(&[0.0, 0.0, 0.0]));
        assert_eq!(v0, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn rigid_body_field_value() {
        let h1 = ScalarField::of_current(
            3,
            "h1",
            |x| 0.5 * (0.6 * x[0] * x[0] + 0.4 * x[1] * x[1] + 0.2 * x[2] * x[2]),
            |x| vec![0.6 * x[0], 0.4 * x[1], 0.2 * x[2]],
        );
        let spec = VectorFieldSpec::static_leibniz(rigid_p(), TensorField::zero(3, SlotSignature::CurrentCurrent), h1).unwrap();
        let v = spec.eval(&DelayPair::diagonal(&[1.0, 1.0, 1.0]));
        let expected = [0.2, -0.4, 0.2];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{v:?}");
        }
    }

    #[test]
    fn additivity_of_parts_is_exact() {
        let h1 = ScalarField::of_current(3, "h1", |x| x[0] * x[1], |x| vec![x[1], x[0], 0.0]);
        let h2 = ScalarField::of_current(3, "h2", |x| x[2] * x[2], |x| vec![0.0, 0.0, 2.0 * x[2]]);
        let p = rigid_p();
        let g = revisited_g([0.6, 0.4, 0.2]);
        let full = VectorFieldSpec::static_almost(p.clone(), g.clone(), h1.clone(), h2.clone()).unwrap();
        let p_only =
            VectorFieldSpec::static_almost(p, TensorField::zero(3, SlotSignature::CurrentCurrent), h1.clone(), ScalarField::zero(3))
                .unwrap();
        let g_only =
            VectorFieldSpec::static_almost(TensorField::zero(3, SlotSignature::CurrentCurrent), g, ScalarField::zero(3), h2).unwrap();
        let mut s = Sampler::new(2);
        for _ in 0..50 {
            let at = s.pair(3);
            let f = full.eval(&at);
            let a = p_only.eval(&at);
            let b = g_only.eval(&at);
            for i in 0..3 {
                assert!((f[i] - (a[i] + b[i])).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn skew_annihilates_its_own_hamiltonian_direction() {
        // Σᵢⱼ hᵢ P^{ij} hⱼ = 0 for skew P: the mechanism behind first integrals
        let p = rigid_p();
        let h = product_h();
        let mut s = Sampler::new(17);
        for _ in 0..100 {
            let at = s.pair(3);
            let v = pseudometric_bracket(&p, &h, &h, &at).unwrap();
            assert!(v.abs() <= 1e-13, "residual {v}");
        }
    }

    #[test]
    fn rigid_body_p_annihilates_radius_exactly() {
        // each row of P is a cross-product row, so P(x)·x = 0 identically
        let p = rigid_p();
        let mut s = Sampler::new(23);
        for _ in 0..100 {
            let at = s.pair(3);
            let v = p.apply(&at, at.current()).unwrap();
            assert_eq!(v, vec![0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn laws_hold_for_rigid_body_pair() {
        let rep = verify_bracket_laws(&rigid_p(), &revisited_g([0.6, 0.4, 0.2]), Wiring::StaticAlmost, 200, 1e-8, 300).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn planted_violation_fails_law_b() {
        let rep = verify_bracket_laws_form(
            &rigid_p(),
            &revisited_g([0.6, 0.4, 0.2]),
            Wiring::StaticAlmost,
            50,
            1e-8,
            300,
            LawForm::MissingMetricCofactor,
        )
        .unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.failing_law(), Some("pair-scaling"));
    }

    #[test]
    fn zero_tensors_give_zero_residual() {
        let z = TensorField::zero(3, SlotSignature::CurrentCurrent);
        let rep = verify_bracket_laws(&z, &z, Wiring::StaticAlmost, 20, 1e-8, 1).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_residual(), 0.0);
    }

    #[test]
    fn equivalence_trivial_for_zero_pair() {
        let p = TensorField::zero(3, SlotSignature::CurrentCurrent);
        let g = TensorField::zero(3, SlotSignature::DelayedCurrent);
        let rep = verify_equivalence_prop42(&p, &g, &ScalarField::zero(3), &ScalarField::zero(3), 10, 1e-12, 5).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.equivalence_residual, 0.0);
    }

    #[test]
    fn generic_dense_metric_breaks_the_hypothesis() {
        let g = TensorField::new(3, "dense", SymmetryClass::General, SlotSignature::DelayedCurrent, |_| {
            vec![
                vec![0.7, 0.3, 0.1],
                vec![0.2, 0.9, 0.4],
                vec![0.5, 0.6, 0.8],
            ]
        });
        let p = TensorField::zero(3, SlotSignature::CurrentCurrent);
        let h1 = ScalarField::zero(3);
        let h2 = ScalarField::of_delayed(3, "h2", |x| 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), |x| x.to_vec());
        let rep = verify_equivalence_prop42(&p, &g, &h1, &h2, 50, 1e-10, 6).unwrap();
        assert!(!rep.hypotheses_hold);
        assert!(rep.hypothesis_metric_residual > 0.1);
    }

    #[test]
    fn delay_wiring_slot_signature_enforced() {
        let p = TensorField::zero(3, SlotSignature::CurrentCurrent);
        let g_bad = TensorField::zero(3, SlotSignature::CurrentCurrent);
        let err = VectorFieldSpec::delay_almost(p, g_bad, ScalarField::zero(3), ScalarField::zero(3));
        assert!(err.is_err());
    }
}
