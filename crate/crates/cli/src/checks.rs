//! The `check` subcommand: drives the gradient, symmetry, bracket-law,
//! structural and annihilation suites over the catalog and prints one
//! machine-readable line per check.

use std::collections::HashMap;

use metriplectic::bracket::{verify_bracket_laws, verify_bracket_laws_form, LawForm};
use metriplectic::diagnostics::structural_residual;
use metriplectic::revisited::{build_annihilator_metric, build_outer_product_metric, BuildMode};
use metriplectic::scalar::check_gradient;
use metriplectic::tensor::check_symmetry;
use metriplectic::{by_name, catalog, default_catalog, CatalogEntry};

use crate::CliError;

pub struct CheckOptions {
    pub scope: String,
    pub trials: usize,
    pub samples: usize,
    pub seed: u64,
    pub planted: bool,
}

const GRAD_TOL: f64 = 1e-6;
const SYM_TOL: f64 = 1e-12;
const LAW_TOL: f64 = 1e-8;
const STRUCT_TOL: f64 = 1e-12;
const ANNIHILATION_TOL: f64 = 1e-12;

struct Tally {
    checks: usize,
    failures: usize,
}

impl Tally {
    fn record(&mut self, system: &str, check: &str, value: f64, tol: f64) {
        self.checks += 1;
        let status = if value <= tol { "pass" } else { "fail" };
        if value > tol {
            self.failures += 1;
        }
        println!("RESULT system={system} check={check} status={status} value={value:.3e} tol={tol:.0e}");
    }

}

pub fn run(opts: &CheckOptions) -> Result<i32, CliError> {
    let entries: Vec<CatalogEntry> = if opts.scope == "all" {
        default_catalog()
    } else {
        vec![by_name(&opts.scope, &HashMap::new())?]
    };
    let mut tally = Tally { checks: 0, failures: 0 };

    for entry in &entries {
        check_entry(entry, opts, &mut tally)?;
    }
    if opts.scope == "all" {
        check_builders(opts, &mut tally)?;
    }
    if opts.planted {
        run_planted(opts, &mut tally)?;
    }

    println!("SUMMARY checks={} failures={}", tally.checks, tally.failures);
    Ok(if tally.failures == 0 { 0 } else { 1 })
}

fn check_entry(entry: &CatalogEntry, opts: &CheckOptions, tally: &mut Tally) -> Result<(), CliError> {
    for w in &entry.warnings {
        println!("INFO system={} warning=\"{w}\"", entry.name);
    }
    let mut scalars: Vec<(String, &metriplectic::ScalarField)> = vec![
        ("gradient(spec h1)".into(), entry.spec.h1()),
        ("gradient(spec h2)".into(), entry.spec.h2()),
    ];
    for ns in entry.invariants.iter().chain(&entry.diagnostics) {
        scalars.push((format!("gradient({})", ns.label), &ns.field));
    }
    for (label, field) in scalars {
        let rep = check_gradient(field, opts.samples, GRAD_TOL, opts.seed)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        tally.record(entry.name, &label.replace(' ', "-"), rep.max_rel_error, GRAD_TOL);
    }

    for tensor in [entry.spec.skew_part(), entry.spec.metric_part()] {
        let rep = check_symmetry(tensor, opts.samples, SYM_TOL, opts.seed)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        tally.record(
            entry.name,
            &format!("symmetry({})", tensor.label()).replace(' ', "-"),
            rep.max_residual,
            SYM_TOL,
        );
    }

    let law = verify_bracket_laws(
        entry.spec.skew_part(),
        entry.spec.metric_part(),
        entry.spec.wiring(),
        opts.trials,
        LAW_TOL,
        opts.seed,
    )
    .map_err(|e| CliError::Invalid(e.to_string()))?;
    tally.record(entry.name, "bracket-laws", law.max_residual(), LAW_TOL);

    let rep = structural_residual(entry, opts.samples, opts.seed).map_err(|e| CliError::Invalid(e.to_string()))?;
    for (label, value) in &rep.checks {
        tally.record(entry.name, &format!("structural({})", label).replace(' ', "-"), *value, STRUCT_TOL);
    }
    for (label, value) in &rep.display_diffs {
        println!(
            "INFO system={} display-diff=\"{label}\" max_deviation={value:.3e}",
            entry.name
        );
    }
    Ok(())
}

/// Annihilation identities of both metric builders in both modes, at the
/// standard Hamiltonian/Casimir pairs.
fn check_builders(opts: &CheckOptions, tally: &mut Tally) -> Result<(), CliError> {
    let rb = by_name("rigid-body", &HashMap::new())?;
    let e45 = by_name("example-4-5", &HashMap::new())?;
    let n = opts.samples.max(1000);
    let cases = [
        ("annihilator-static", build_annihilator_metric(rb.spec.h1(), &rb.invariants[1].field, BuildMode::Static)),
        ("annihilator-delay", build_annihilator_metric(e45.spec.h1(), e45.spec.h2(), BuildMode::Delay)),
        ("outer-product-static", build_outer_product_metric(rb.spec.h1(), BuildMode::Static)),
        ("outer-product-delay", build_outer_product_metric(e45.spec.h2(), BuildMode::Delay)),
    ];
    for (label, built) in cases {
        let built = built.map_err(|e| CliError::Invalid(e.to_string()))?;
        let r = built.max_annihilation_residual(n, opts.seed);
        tally.record("builder", &format!("annihilation({label})"), r, ANNIHILATION_TOL);
    }
    Ok(())
}

/// Deliberately broken fixtures, scored like ordinary checks: a working
/// verifier reports both as failures and the run exits nonzero.
fn run_planted(opts: &CheckOptions, tally: &mut Tally) -> Result<(), CliError> {
    let rev = by_name("revisited-rigid-body", &HashMap::new())?;
    let broken = verify_bracket_laws_form(
        rev.spec.skew_part(),
        rev.spec.metric_part(),
        rev.spec.wiring(),
        opts.trials.min(50),
        LAW_TOL,
        opts.seed,
        LawForm::MissingMetricCofactor,
    )
    .map_err(|e| CliError::Invalid(e.to_string()))?;
    tally.record("planted-fixture", "bracket-laws(dropped-metric-cofactor)", broken.max_residual(), LAW_TOL);

    let fixture = catalog::perturbed_fixture(1e-3);
    let rep = structural_residual(&fixture, opts.samples, opts.seed).map_err(|e| CliError::Invalid(e.to_string()))?;
    for (label, value) in &rep.checks {
        tally.record("planted-fixture", &format!("structural({})", label).replace(' ', "-"), *value, STRUCT_TOL);
    }
    Ok(())
}
