//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured margins (visible under `cargo test --test acceptance --
//! --nocapture`). Tolerances are pinned here and in `atanfd::tolerances`.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use atanfd::diagnostics::{
    self, balance_residuals, check_inequality_1, check_inequality_2, decay_bound, wiener_check,
};
use atanfd::grid::{Grid, GridFunction};
use atanfd::models::{self, Model, ModelKind, ModelParams};
use atanfd::timestep::{run_with_diagnostics, step_rk4, SolverConfig, SolverState, Termination};
use atanfd::tolerances;
use atanfd::trialgen::{random_positive_density, Preset, TrialConfig};
use atanfd::Error;

fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

fn run(u0: &GridFunction, model: &Model, t_end: f64, record_every: f64, cfl: f64) -> atanfd::Trajectory {
    let config = SolverConfig {
        cfl,
        t_end,
        record_every,
        ..SolverConfig::default()
    };
    let traj = run_with_diagnostics(u0, model, &config).unwrap();
    assert_eq!(
        traj.termination,
        Termination::ReachedTEnd,
        "run did not reach t_end: {}",
        traj.termination
    );
    traj
}

/// Criterion 1: inequality fuzz: 10,000 random unit-mass positive trials at
/// n = 512, K = 32; both margins >= -1e-10 on every trial; < 60 s.
#[test]
fn criterion_01_inequality_fuzz() {
    let started = Instant::now();
    let g = grid(512);
    let mut worst_1 = f64::INFINITY;
    let mut worst_2 = f64::INFINITY;
    for seed in 0..10_000u64 {
        let cfg = TrialConfig {
            seed,
            max_mode: 32,
            ..TrialConfig::default()
        };
        let u = random_positive_density(&cfg, g).unwrap();
        let m1 = check_inequality_1(&u).unwrap().margin;
        let m2 = match check_inequality_2(&u) {
            Ok(rep) => rep.margin,
            Err(Error::DegenerateInput) => 0.0,
            Err(e) => panic!("seed {seed}: {e}"),
        };
        assert!(
            m1 >= tolerances::INEQUALITY_MARGIN,
            "inequality 1 violated at seed {seed}: margin {m1}"
        );
        assert!(
            m2 >= tolerances::INEQUALITY_MARGIN,
            "inequality 2 violated at seed {seed}: margin {m2}"
        );
        worst_1 = worst_1.min(m1);
        worst_2 = worst_2.min(m2);
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "fuzz took {elapsed:?}, budget is 60 s"
    );
    println!(
        "acceptance 01 (inequality fuzz): PASS - 10000 trials, worst margins {worst_1:.3e} / {worst_2:.3e}, {elapsed:?}"
    );
}

/// Criterion 2: mass conservation: cosine_bump(0.5), n = 256, t_end = 1,
/// relative drift <= 1e-8.
#[test]
fn criterion_02_mass_conservation() {
    let u0 = Preset::CosineBump(0.5).realize(grid(256)).unwrap();
    let traj = run(&u0, &Model::arctan_local(), 1.0, 1e-3, 0.25);
    let mass0 = traj.samples[0].diagnostics.mass;
    let drift = traj
        .samples
        .iter()
        .map(|s| (s.diagnostics.mass - mass0).abs() / mass0)
        .fold(0.0f64, f64::max);
    assert!(
        drift <= tolerances::MASS_DRIFT_REL,
        "relative mass drift {drift} exceeds 1e-8"
    );
    println!("acceptance 02 (mass conservation): PASS - max relative drift {drift:.3e}");
}

/// Criterion 3: maximum principle: same run; max_u non-increasing and min_u
/// non-decreasing across records within 1e-9.
#[test]
fn criterion_03_maximum_principle() {
    let u0 = Preset::CosineBump(0.5).realize(grid(256)).unwrap();
    let traj = run(&u0, &Model::arctan_local(), 1.0, 1e-3, 0.25);
    let slack = tolerances::MAX_PRINCIPLE_SLACK;
    let mut worst = 0.0f64;
    for w in traj.samples.windows(2) {
        let (a, b) = (&w[0].diagnostics, &w[1].diagnostics);
        assert!(
            b.max_u <= a.max_u + slack,
            "max principle violated at t = {}: {} -> {}",
            b.t,
            a.max_u,
            b.max_u
        );
        assert!(
            b.min_u >= a.min_u - slack,
            "min principle violated at t = {}: {} -> {}",
            b.t,
            a.min_u,
            b.min_u
        );
        worst = worst.max(b.max_u - a.max_u).max(a.min_u - b.min_u);
    }
    println!("acceptance 03 (maximum principle): PASS - worst excursion {worst:.3e}");
}

/// Criterion 4: entropy and energy balances: same run with
/// record_every = 1e-3, both residuals <= 1e-6; halving record_every reduces
/// each residual by >= 3x.
#[test]
fn criterion_04_balances() {
    let u0 = Preset::CosineBump(0.5).realize(grid(256)).unwrap();
    let model = Model::arctan_local();
    let coarse = run(&u0, &model, 1.0, 1e-3, 0.25);
    let (entropy_res, energy_res) = balance_residuals(&coarse).unwrap();
    assert!(
        entropy_res <= tolerances::BALANCE_RESIDUAL,
        "entropy balance residual {entropy_res} exceeds 1e-6"
    );
    assert!(
        energy_res <= tolerances::BALANCE_RESIDUAL,
        "energy balance residual {energy_res} exceeds 1e-6"
    );
    let fine = run(&u0, &model, 1.0, 5e-4, 0.25);
    let (entropy_fine, energy_fine) = balance_residuals(&fine).unwrap();
    assert!(
        entropy_res / entropy_fine >= 3.0,
        "entropy residual only improved {q}x when halving record_every",
        q = entropy_res / entropy_fine
    );
    assert!(
        energy_res / energy_fine >= 3.0,
        "energy residual only improved {q}x when halving record_every",
        q = energy_res / energy_fine
    );
    println!(
        "acceptance 04 (entropy/energy balances): PASS - residuals {entropy_res:.3e}/{energy_res:.3e}, refinement {:.2}x/{:.2}x",
        entropy_res / entropy_fine,
        energy_res / energy_fine
    );
}

/// Criterion 5: energy decay bound with C = (2π)^(-1/2): cosine_bump(a) for
/// a in {0.1, 0.3, 0.5}, every record over [0, 2] sits below the envelope.
#[test]
fn criterion_05_energy_decay_bound() {
    assert!((diagnostics::POINCARE_CONSTANT - 1.0 / TAU.sqrt()).abs() < 1e-16);
    let mut tightest = f64::INFINITY;
    for a in [0.1, 0.3, 0.5] {
        let u0 = Preset::CosineBump(a).realize(grid(256)).unwrap();
        let traj = run(&u0, &Model::arctan_local(), 2.0, 0.01, 0.25);
        for s in &traj.samples {
            let bound = decay_bound(&u0, s.t);
            assert!(
                s.diagnostics.l2_dist <= bound + 1e-12,
                "decay bound violated for a = {a} at t = {}: {} > {bound}",
                s.t,
                s.diagnostics.l2_dist
            );
            tightest = tightest.min(bound - s.diagnostics.l2_dist);
        }
    }
    println!("acceptance 05 (energy decay bound): PASS - tightest gap {tightest:.3e}");
}

/// Criterion 6: slope bound and Lyapunov decay: exp_sin(1) to t = 1; theta
/// sup-norm and L(u) non-increasing within 1e-8; initial sup-norm is pi/4.
#[test]
fn criterion_06_slope_and_lyapunov() {
    let u0 = Preset::ExpSin(1.0).realize(grid(256)).unwrap();
    let traj = run(&u0, &Model::arctan_local(), 1.0, 0.01, 0.25);
    let theta0 = traj.samples[0].diagnostics.theta_linf;
    assert!(
        (theta0 - PI / 4.0).abs() <= 1e-10,
        "initial slope angle {theta0} is not pi/4"
    );
    let slack = tolerances::MONOTONE_SLACK;
    for w in traj.samples.windows(2) {
        let (a, b) = (&w[0].diagnostics, &w[1].diagnostics);
        assert!(
            b.theta_linf <= a.theta_linf + slack,
            "theta sup-norm increased at t = {}: {} -> {}",
            b.t,
            a.theta_linf,
            b.theta_linf
        );
        assert!(
            b.lyapunov <= a.lyapunov + slack,
            "Lyapunov functional increased at t = {}: {} -> {}",
            b.t,
            a.lyapunov,
            b.lyapunov
        );
    }
    let d = traj.last().unwrap().diagnostics;
    println!(
        "acceptance 06 (slope bound, Lyapunov decay): PASS - theta {theta0:.6} -> {:.6}, L {:.6} -> {:.6}",
        d.theta_linf, traj.samples[0].diagnostics.lyapunov, d.lyapunov
    );
}

/// Criterion 7: Wiener regime: wiener_small(0.05) to t = 1 passes both the
/// A^1 monotonicity and the discrete differential inequality with slack
/// <= 1e-4; cosine_bump(0.3) is reported as violating the 1/10 hypothesis.
#[test]
fn criterion_07_wiener_regime() {
    let u0 = Preset::WienerSmall(0.05).realize(grid(256)).unwrap();
    let traj = run(&u0, &Model::arctan_local(), 1.0, 0.01, 0.25);
    let report = wiener_check(&traj, u0.mean()).unwrap();
    assert!(report.hypothesis_satisfied, "0.05 < 1/10 must hold");
    let checks = report.checks.expect("hypothesis holds, checks must run");
    assert!(checks.a1_monotone, "A1 norm not non-increasing");
    assert!(
        checks.max_differential_slack <= tolerances::WIENER_DIFFERENTIAL_SLACK,
        "differential inequality slack {} exceeds 1e-4",
        checks.max_differential_slack
    );
    assert!(checks.contraction < 1.0);
    assert!(report.passes());

    let big = Preset::CosineBump(0.3).realize(grid(256)).unwrap();
    let traj_big = run(&big, &Model::arctan_local(), 1.0, 0.01, 0.25);
    let report_big = wiener_check(&traj_big, big.mean()).unwrap();
    assert!(
        !report_big.hypothesis_satisfied,
        "a1(0) = 0.3 must be reported as violating the 1/10 hypothesis"
    );
    assert!((report_big.a1_initial - 0.3).abs() < 1e-12);
    println!(
        "acceptance 07 (Wiener regime): PASS - slack {:.3e}, c = {:.3}, hypothesis rejection at 0.3 reported",
        checks.max_differential_slack, checks.contraction
    );
}

/// Criterion 8: regularized-scheme convergence: cosine_bump(0.5) to
/// t = 0.25 with (eps, kappa) in {1e-2, 1e-3, 1e-4}, delta = eps; the
/// sup-distance to the unregularized final state decreases monotonically and
/// the finest level is below 1e-3.
#[test]
fn criterion_08_regularized_convergence() {
    let g = grid(256);
    let u0 = Preset::CosineBump(0.5).realize(g).unwrap();
    let reference = run(&u0, &Model::arctan_local(), 0.25, 0.05, 0.25)
        .last()
        .unwrap()
        .u
        .clone();
    let mut distances = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let model = Model::new(
            ModelKind::Regularized,
            ModelParams {
                epsilon: eps,
                kappa: eps,
                ..ModelParams::default()
            },
        )
        .unwrap();
        // the scheme's initial data: mollified and lifted by delta = eps
        let prepared = u0.heat_mollify(eps).map(|v| v + eps).unwrap();
        let final_state = run(&prepared, &model, 0.25, 0.05, 0.25)
            .last()
            .unwrap()
            .u
            .clone();
        let dist = final_state
            .zip_map(&reference, |a, b| a - b)
            .unwrap()
            .norm_linf();
        distances.push(dist);
    }
    assert!(
        distances[0] > distances[1] && distances[1] > distances[2],
        "sup-distances not monotone: {distances:?}"
    );
    assert!(
        distances[2] < 1e-3,
        "finest level distance {} is not below 1e-3",
        distances[2]
    );
    println!(
        "acceptance 08 (regularized convergence): PASS - distances {:.3e} > {:.3e} > {:.3e}",
        distances[0], distances[1], distances[2]
    );
}

/// Criterion 9: solver self-convergence: cosine_bump(0.5) to t = 0.5; the
/// n = 256 run and the (n = 512, cfl halved) run differ by <= 1e-7 in L-inf;
/// fd_derivative converges to the spectral derivative at order 2.
#[test]
fn criterion_09_self_convergence() {
    let coarse = run(
        &Preset::CosineBump(0.5).realize(grid(256)).unwrap(),
        &Model::arctan_local(),
        0.5,
        0.1,
        0.25,
    )
    .last()
    .unwrap()
    .u
    .clone();
    let fine = run(
        &Preset::CosineBump(0.5).realize(grid(512)).unwrap(),
        &Model::arctan_local(),
        0.5,
        0.1,
        0.125,
    )
    .last()
    .unwrap()
    .u
    .clone();
    let sup = coarse
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| (v - fine.values()[2 * j]).abs())
        .fold(0.0f64, f64::max);
    assert!(sup <= 1e-7, "self-convergence gap {sup} exceeds 1e-7");

    // order-2 convergence of the finite-difference oracle
    let fd_error = |n: usize| {
        let f = GridFunction::from_fn(grid(n), |x| x.sin().exp()).unwrap();
        f.fd_derivative()
            .zip_map(&f.derivative(1), |a, b| a - b)
            .unwrap()
            .norm_linf()
    };
    let (e1, e2, e3) = (fd_error(128), fd_error(256), fd_error(512));
    for ratio in [e1 / e2, e2 / e3] {
        assert!(
            (3.5..=4.5).contains(&ratio),
            "fd convergence ratio {ratio} outside [3.5, 4.5]"
        );
    }
    println!(
        "acceptance 09 (self-convergence): PASS - state gap {sup:.3e}, fd ratios {:.2}/{:.2}",
        e1 / e2,
        e2 / e3
    );
}

/// Criterion 10: theta-formulation consistency: along an arctan trajectory
/// the centered time difference of theta_from_u matches rhs_theta with error
/// O(h^2): Richardson ratio in [3.5, 4.5] when h halves.
#[test]
fn criterion_10_theta_consistency() {
    let g = grid(128);
    let u0 = Preset::CosineBump(0.3).realize(g).unwrap();
    let model = Model::arctan_local();
    let dt = 1e-5;
    let advance = |u: &GridFunction, steps: usize| {
        let mut state = SolverState::initial(u.clone());
        for _ in 0..steps {
            state = step_rk4(&state, &model, dt).unwrap();
        }
        state.u
    };
    let error_at = |h_steps: usize| {
        let h = h_steps as f64 * dt;
        let before = advance(&u0, 200);
        let center = advance(&before, h_steps);
        let after = advance(&center, h_steps);
        let fd = models::theta_from_u(&after)
            .unwrap()
            .zip_map(&models::theta_from_u(&before).unwrap(), |a, b| {
                (a - b) / (2.0 * h)
            })
            .unwrap();
        let predicted =
            models::rhs_theta(&models::theta_from_u(&center).unwrap(), &center).unwrap();
        fd.zip_map(&predicted, |x, y| x - y).unwrap().norm_linf()
    };
    let (e1, e2) = (error_at(256), error_at(128));
    let ratio = e1 / e2;
    assert!(
        (3.5..=4.5).contains(&ratio),
        "Richardson ratio {ratio} outside [3.5, 4.5] (e1 = {e1}, e2 = {e2})"
    );
    println!("acceptance 10 (theta consistency): PASS - Richardson ratio {ratio:.3}");
}
