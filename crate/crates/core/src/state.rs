//! Points of the state space and of the doubled (delayed, current) space.

use crate::error::{Error, Result};

/// A point x ∈ ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    coords: Vec<f64>,
}

impl PhaseState {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "state dimension must be at least 1".into(),
            ));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                what: format!("state coordinate {c}"),
            });
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl std::ops::Index<usize> for PhaseState {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// A point (x̃, x) of the doubled space: delayed state first, current second.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayPair {
    delayed: Vec<f64>,
    current: Vec<f64>,
}

impl DelayPair {
    pub fn new(delayed: Vec<f64>, current: Vec<f64>) -> Result<Self> {
        if delayed.len() != current.len() {
            return Err(Error::DimensionMismatch {
                context: "DelayPair",
                expected: current.len(),
                found: delayed.len(),
            });
        }
        if delayed.is_empty() {
            return Err(Error::InvalidArgument(
                "state dimension must be at least 1".into(),
            ));
        }
        Ok(Self { delayed, current })
    }

    /// The pair (x, x) on the diagonal.
    pub fn diagonal(x: &[f64]) -> Self {
        Self {
            delayed: x.to_vec(),
            current: x.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.current.len()
    }

    pub fn delayed(&self) -> &[f64] {
        &self.delayed
    }

    pub fn current(&self) -> &[f64] {
        &self.current
    }

    /// Pair with the two slots exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            delayed: self.current.clone(),
            current: self.delayed.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.delayed.iter().chain(&self.current).all(|c| c.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(PhaseState::new(vec![]).is_err());
        assert!(PhaseState::new(vec![1.0, f64::NAN]).is_err());
        assert!(PhaseState::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(PhaseState::new(vec![0.0]).is_ok());
    }

    #[test]
    fn pair_requires_matching_dims() {
        assert!(DelayPair::new(vec![1.0], vec![1.0, 2.0]).is_err());
        let p = DelayPair::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.swapped().delayed(), &[3.0, 4.0]);
    }
}
