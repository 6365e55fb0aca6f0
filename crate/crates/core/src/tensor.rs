//! Coefficient-matrix-valued tensor fields on the doubled space. A tensor is
//! stored extensionally: a function producing its n×n component matrix at a
//! point, plus the symmetry class and slot signature it claims.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sample::Sampler;
use crate::state::DelayPair;

/// Componentwise symmetry the matrix of components is declared to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    Skew,
    Symmetric,
    /// Mixed-slot tensors whose components are symmetric only on the diagonal
    /// x̃ = x (the delay-metric pattern); no componentwise law is checked.
    MixedT11,
    General,
}

/// Which covectors the tensor's slots pair with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotSignature {
    /// Both slots pair with current-slot covectors (the P position).
    CurrentCurrent,
    /// First slot delayed, second current (the delay-metric position).
    DelayedCurrent,
}

type EvalFn = Arc<dyn Fn(&DelayPair) -> Vec<Vec<f64>> + Send + Sync>;

#[derive(Clone)]
pub struct TensorField {
    dim: usize,
    symmetry: SymmetryClass,
    slot: SlotSignature,
    label: String,
    eval: EvalFn,
}

impl std::fmt::Debug for TensorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TensorField")
            .field("dim", &self.dim)
            .field("symmetry", &self.symmetry)
            .field("slot", &self.slot)
            .field("label", &self.label)
            .finish()
    }
}

impl TensorField {
    pub fn new<F>(dim: usize, label: &str, symmetry: SymmetryClass, slot: SlotSignature, eval: F) -> Self
    where
        F: Fn(&DelayPair) -> Vec<Vec<f64>> + Send + Sync + 'static,
    {
        Self {
            dim,
            symmetry,
            slot,
            label: label.to_string(),
            eval: Arc::new(eval),
        }
    }

    pub fn zero(dim: usize, slot: SlotSignature) -> Self {
        Self::new(dim, "0", SymmetryClass::Symmetric, slot, move |_| {
            vec![vec![0.0; dim]; dim]
        })
    }

    /// Constant diagonal components.
    pub fn diagonal(entries: Vec<f64>, slot: SlotSignature) -> Self {
        let dim = entries.len();
        Self::new(dim, "diag", SymmetryClass::Symmetric, slot, move |_| {
            let mut m = vec![vec![0.0; dim]; dim];
            for (i, e) in entries.iter().enumerate() {
                m[i][i] = *e;
            }
            m
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symmetry(&self) -> SymmetryClass {
        self.symmetry
    }

    pub fn slot_signature(&self) -> SlotSignature {
        self.slot
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn components(&self, p: &DelayPair) -> Vec<Vec<f64>> {
        (self.eval)(p)
    }

    /// Matrix–vector product Σⱼ T^{ij} vⱼ of the components at `p`.
    pub fn apply(&self, p: &DelayPair, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "TensorField::apply",
                expected: self.dim,
                found: v.len(),
            });
        }
        let m = self.components(p);
        Ok(mat_vec(&m, v))
    }

    /// True if every component is exactly zero at a few sampled points.
    pub fn is_numerically_zero(&self, samples: usize, seed: u64) -> bool {
        let mut sampler = Sampler::new(seed);
        (0..samples).all(|_| {
            let m = self.components(&sampler.pair(self.dim));
            m.iter().flatten().all(|c| c.abs() == 0.0)
        })
    }
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Outcome of a symmetry-class check at random points.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub max_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Verifies the declared symmetry class at `samples` random points:
/// skew requires T + Tᵀ = 0, symmetric requires T − Tᵀ = 0 (both to an
/// absolute tolerance); mixed/general classes only require finite entries.
pub fn check_symmetry(t: &TensorField, samples: usize, tol: f64, seed: u64) -> Result<SymmetryReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let mut sampler = Sampler::new(seed);
    let mut max_residual = 0.0_f64;
    let mut finite = true;
    for _ in 0..samples {
        let p = sampler.pair(t.dim());
        let m = t.components(&p);
        if m.len() != t.dim() || m.iter().any(|r| r.len() != t.dim()) {
            return Err(Error::DimensionMismatch {
                context: "check_symmetry",
                expected: t.dim(),
                found: m.len(),
            });
        }
        finite &= m.iter().flatten().all(|c| c.is_finite());
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                let r = match t.symmetry() {
                    SymmetryClass::Skew => (m[i][j] + m[j][i]).abs(),
                    SymmetryClass::Symmetric => (m[i][j] - m[j][i]).abs(),
                    SymmetryClass::MixedT11 | SymmetryClass::General => 0.0,
                };
                max_residual = max_residual.max(r);
            }
        }
    }
    Ok(SymmetryReport {
        max_residual,
        samples,
        pass: finite && max_residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rigid_body_p() -> TensorField {
        TensorField::new(3, "P", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |p| {
            let x = p.current();
            vec![
                vec![0.0, x[2], -x[1]],
                vec![-x[2], 0.0, x[0]],
                vec![x[1], -x[0], 0.0],
            ]
        })
    }

    #[test]
    fn rigid_body_matrix_is_skew() {
        let rep = check_symmetry(&rigid_body_p(), 100, 1e-12, 3).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn identity_declared_skew_fails() {
        let id = TensorField::new(3, "I", SymmetryClass::Skew, SlotSignature::CurrentCurrent, |_| {
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ]
        });
        let rep = check_symmetry(&id, 10, 1e-12, 3).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.max_residual, 2.0);
    }

    #[test]
    fn displayed_delay_metric_is_componentwise_symmetric() {
        // the displayed matrix of the delayed rigid-body metric repeats its
        // upper triangle, so componentwise symmetry holds for it
        let (a1, a2, a3) = (0.6, 0.4, 0.2);
        let g = TensorField::new(3, "g display", SymmetryClass::Symmetric, SlotSignature::DelayedCurrent, move |p| {
            let (xt, x) = (p.delayed(), p.current());
            vec![
                vec![
                    -a2 * a2 * x[1] * xt[1] - a3 * a3 * x[2] * xt[2],
                    a1 * a2 * xt[0] * x[1],
                    a1 * a3 * xt[0] * x[2],
                ],
                vec![
                    a1 * a2 * xt[0] * x[1],
                    -a1 * a1 * x[0] * xt[0] - a3 * a3 * x[2] * xt[2],
                    a2 * a3 * xt[1] * x[2],
                ],
                vec![
                    a1 * a3 * xt[0] * x[2],
                    a2 * a3 * xt[1] * x[2],
                    -a1 * a1 * xt[0] * x[0] - a2 * a2 * xt[1] * x[1],
                ],
            ]
        });
        let rep = check_symmetry(&g, 100, 1e-12, 9).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn rejects_zero_samples() {
        assert!(check_symmetry(&rigid_body_p(), 0, 1e-12, 0).is_err());
    }
}
