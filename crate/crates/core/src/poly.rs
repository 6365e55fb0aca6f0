//! Multivariate polynomials on the doubled space, used as test functions for
//! the bracket-law checks. Variables 0..n are the delayed coordinates x̃,
//! variables n..2n the current coordinates x. Derivatives are exact, so any
//! law residual is pure floating-point noise.

use crate::sample::Sampler;
use crate::state::DelayPair;

#[derive(Debug, Clone)]
pub struct Poly {
    dim: usize,
    /// (coefficient, exponent per variable), exponents of length 2·dim
    terms: Vec<(f64, Vec<u8>)>,
}

/// Which variables a random polynomial is allowed to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSet {
    CurrentOnly,
    Both,
}

impl Poly {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: vec![] }
    }

    /// Dense random polynomial of total degree ≤ `max_degree` with
    /// coefficients drawn uniformly from [-1, 1].
    pub fn random(dim: usize, max_degree: u8, vars: VarSet, sampler: &mut Sampler) -> Self {
        let nvars = 2 * dim;
        let mut terms = Vec::new();
        let mut exps = vec![0u8; nvars];
        fn rec(
            v: usize,
            remaining: u8,
            exps: &mut Vec<u8>,
            terms: &mut Vec<(f64, Vec<u8>)>,
            sampler: &mut Sampler,
            lo: usize,
        ) {
            if v == exps.len() {
                terms.push((sampler.unit(), exps.clone()));
                return;
            }
            let budget = if v < lo { 0 } else { remaining };
            for e in 0..=budget {
                exps[v] = e;
                rec(v + 1, remaining - e, exps, terms, sampler, lo);
            }
            exps[v] = 0;
        }
        let lo = match vars {
            VarSet::CurrentOnly => dim,
            VarSet::Both => 0,
        };
        rec(0, max_degree, &mut exps, &mut terms, sampler, lo);
        Self { dim, terms }
    }

    pub fn eval(&self, p: &DelayPair) -> f64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                let mut v = *c;
                for (k, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        let x = if k < self.dim {
                            p.delayed()[k]
                        } else {
                            p.current()[k - self.dim]
                        };
                        v *= x.powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    /// Exact partial derivative with respect to variable `var`
    /// (0..dim delayed, dim..2·dim current).
    pub fn partial(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, exps)| exps[var] > 0)
            .map(|(c, exps)| {
                let mut e = exps.clone();
                let k = e[var];
                e[var] -= 1;
                (c * k as f64, e)
            })
            .collect();
        Poly { dim: self.dim, terms }
    }

    pub fn grad_current(&self, p: &DelayPair) -> Vec<f64> {
        (0..self.dim).map(|i| self.partial(self.dim + i).eval(p)).collect()
    }

    pub fn grad_delayed(&self, p: &DelayPair) -> Vec<f64> {
        (0..self.dim).map(|i| self.partial(i).eval(p)).collect()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, ea) in &self.terms {
            for (cb, eb) in &other.terms {
                let exps: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((ca * cb, exps));
            }
        }
        Poly { dim: self.dim, terms }
    }
}
