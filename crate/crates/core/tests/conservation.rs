//! First-integral behavior of the catalog systems along numerical solutions.

use std::collections::HashMap;

use metriplectic::dde::{integrate, HistoryFunction, IntegrationConfig};
use metriplectic::diagnostics::first_integral_drift;
use metriplectic::scalar::ScalarField;
use metriplectic::{by_name, catalog};

fn default_phi() -> HistoryFunction {
    HistoryFunction::constant(vec![0.5, 0.5, 1.0])
}

#[test]
fn all_directions_delay_conserves_weighted_energy() {
    // the field is everywhere tangent to the level sets of h2, so the drift
    // sits at roundoff level
    let entry = by_name("rigid-body-delay-3d", &HashMap::new()).unwrap();
    let f = entry.field();
    let cfg = IntegrationConfig::delay(0.5, 50, 20.0);
    let traj = integrate(|p| f(p), &default_phi(), &cfg).unwrap();
    let rep = first_integral_drift(&traj, &entry.invariants[0].field, 0.5).unwrap();
    assert!(rep.max_drift < 1e-10, "h2 drift {}", rep.max_drift);
}

#[test]
fn one_direction_delay_conserves_the_combination_not_the_pair() {
    // along solutions the delayed slot evolves, so the chain term
    // (a3 - a1) x2(t) x1(t-tau) x3(t-tau) drives h1 and h2 at O(1);
    // the combination h2 - a2 h1 cancels that term exactly
    let a = [0.6, 0.4, 0.2];
    let entry = catalog::rigid_body_delay_one_direction(a).unwrap();
    let f = entry.field();
    let cfg = IntegrationConfig::delay(0.5, 50, 20.0);
    let traj = integrate(|p| f(p), &default_phi(), &cfg).unwrap();

    let h1 = &entry.invariants[0].field;
    let h2 = &entry.invariants[1].field;
    let d1 = first_integral_drift(&traj, h1, 0.5).unwrap().max_drift;
    let d2 = first_integral_drift(&traj, h2, 0.5).unwrap().max_drift;
    assert!(d1 > 1e-2, "h1 drift unexpectedly small: {d1}");
    assert!(d2 > 1e-2, "h2 drift unexpectedly small: {d2}");

    let combo = ScalarField::of_current(
        3,
        "h2 - a2 h1 restricted",
        move |x| 0.5 * (a[0] - a[1]) * x[0] * x[0] + 0.5 * (a[2] - a[1]) * x[2] * x[2],
        move |x| vec![(a[0] - a[1]) * x[0], 0.0, (a[2] - a[1]) * x[2]],
    );
    let dc = first_integral_drift(&traj, &combo, 0.5).unwrap().max_drift;
    assert!(dc < 1e-10, "combination drift {dc}");
}

#[test]
fn one_direction_drift_is_physical_not_numerical() {
    // refining the grid leaves the h1 drift unchanged: it is a property of
    // the flow, not of the integrator
    let entry = by_name("rigid-body-delay-1d", &HashMap::new()).unwrap();
    let f = entry.field();
    let mut drifts = Vec::new();
    for m in [50, 100] {
        let cfg = IntegrationConfig::delay(0.5, m, 20.0);
        let traj = integrate(|p| f(p), &default_phi(), &cfg).unwrap();
        drifts.push(first_integral_drift(&traj, &entry.invariants[0].field, 0.5).unwrap().max_drift);
    }
    let ratio = drifts[0] / drifts[1];
    assert!((0.99..1.01).contains(&ratio), "drifts {drifts:?}");
}

#[test]
fn rigid_body_long_run_casimir_drift() {
    let entry = by_name("rigid-body", &HashMap::new()).unwrap();
    let f = entry.field();
    let cfg = IntegrationConfig::ode(1e-2, 50.0);
    let traj = integrate(|p| f(p), &default_phi(), &cfg).unwrap();
    let h2 = &entry.invariants[1];
    let rep = first_integral_drift(&traj, &h2.field, 0.0).unwrap();
    assert!(rep.max_drift < 1e-8, "casimir drift {}", rep.max_drift);
}

#[test]
fn landau_lifschitz_conserves_the_norm() {
    let entry = by_name("landau-lifschitz", &HashMap::new()).unwrap();
    let f = entry.field();
    let phi = HistoryFunction::constant(entry.default_history.clone());
    let cfg = IntegrationConfig::ode(1e-2, 20.0);
    let traj = integrate(|p| f(p), &phi, &cfg).unwrap();
    let rep = first_integral_drift(&traj, &entry.invariants[0].field, 0.0).unwrap();
    assert!(rep.max_drift < 1e-9, "norm drift {}", rep.max_drift);
}

#[test]
fn delay_revisited_tracks_static_revisited_as_tau_shrinks() {
    let delay = by_name("revisited-rigid-body-delay", &HashMap::new()).unwrap();
    let stat = by_name("revisited-rigid-body", &HashMap::new()).unwrap();
    let df = delay.field();
    let sf = stat.field();
    let phi = default_phi();
    let mut sups = Vec::new();
    for tau in [1e-3, 5e-4] {
        let dde = integrate(|p| df(p), &phi, &IntegrationConfig::delay(tau, 1, 10.0)).unwrap();
        let ode = integrate(|p| sf(p), &phi, &IntegrationConfig::ode(tau, 10.0)).unwrap();
        let mut sup = 0.0_f64;
        for (t, x) in dde.knots().iter().zip(dde.states()) {
            let y = ode.eval(*t).unwrap();
            for k in 0..3 {
                sup = sup.max((x[k] - y[k]).abs());
            }
        }
        sups.push(sup);
    }
    let ratio = sups[0] / sups[1];
    assert!(sups[0] < 1e-3, "sup difference {}", sups[0]);
    assert!((1.7..2.3).contains(&ratio), "sups {sups:?}, ratio {ratio}");
}
