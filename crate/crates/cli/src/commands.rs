//! The three subcommands. Exit codes: 0 success, 1 config error, 2 run
//! breakdown (partial output retained), 3 inequality violation.

use atanfd::diagnostics::{self, DiagnosticsRecord};
use atanfd::grid::{Grid, GridFunction};
use atanfd::models::{Model, ModelKind, ModelParams};
use atanfd::timestep::{run_with_diagnostics, SolverConfig, Termination};
use atanfd::trialgen::{random_positive_density, TrialConfig};
use atanfd::Error;

use crate::config::{load_initial_data, FuzzConfig, InitialData, OutputFormat, RunConfig};
use crate::emit::{fmt_f64, render_csv, render_json, write_atomic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BREAKDOWN: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

fn config_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_CONFIG
}

pub fn cmd_simulate(cfg: RunConfig) -> i32 {
    let grid = match Grid::new(cfg.n) {
        Ok(g) => g,
        Err(e) => return config_error(e),
    };
    let raw_u0 = match &cfg.initial {
        InitialData::Preset(p) => match p.realize(grid) {
            Ok(u) => u,
            Err(e) => return config_error(e),
        },
        InitialData::File(path) => {
            let values = match load_initial_data(path, cfg.n) {
                Ok(v) => v,
                Err(e) => return config_error(e),
            };
            match GridFunction::new(grid, values) {
                Ok(u) => u,
                Err(e) => return config_error(format!("initial_data: {e}")),
            }
        }
    };
    let params = ModelParams {
        epsilon: cfg.epsilon,
        kappa: cfg.kappa,
        hilbert_sign: cfg.hilbert_sign,
        positivity_floor: cfg.positivity_floor,
    };
    let model = match Model::new(cfg.model, params) {
        Ok(m) => m,
        Err(e) => return config_error(e),
    };
    // the regularized scheme starts from mollified, lifted data
    let u0 = if cfg.model == ModelKind::Regularized {
        match raw_u0.heat_mollify(cfg.kappa).map(|v| v + cfg.delta) {
            Ok(u) => u,
            Err(e) => return config_error(e),
        }
    } else {
        raw_u0
    };
    let solver = SolverConfig {
        cfl: cfg.cfl,
        t_end: cfg.t_end,
        record_every: cfg.record_every,
        max_steps: cfg.max_steps,
        positivity_floor: cfg.positivity_floor,
    };
    let trajectory = match run_with_diagnostics(&u0, &model, &solver) {
        Ok(t) => t,
        Err(e) => return config_error(e),
    };

    let records: Vec<DiagnosticsRecord> = trajectory.samples.iter().map(|s| s.diagnostics).collect();
    let rendered = match cfg.format {
        OutputFormat::Csv => render_csv(&records),
        OutputFormat::Json => render_json(&records),
    };
    if let Err(e) = write_atomic(&cfg.output, &rendered) {
        return config_error(format!("output: cannot write {}: {e}", cfg.output.display()));
    }

    println!("termination: {}", trajectory.termination);
    println!("records: {} -> {}", records.len(), cfg.output.display());
    if let Some(last) = trajectory.last() {
        let d = &last.diagnostics;
        println!(
            "final: t={} mass={} min_u={} max_u={} l2_dist={} entropy={}",
            fmt_f64(d.t),
            fmt_f64(d.mass),
            fmt_f64(d.min_u),
            fmt_f64(d.max_u),
            fmt_f64(d.l2_dist),
            fmt_f64(d.entropy),
        );
    }
    match diagnostics::balance_residuals(&trajectory) {
        Ok((entropy_res, energy_res)) => println!(
            "balance residuals: entropy={} energy={}",
            fmt_f64(entropy_res),
            fmt_f64(energy_res)
        ),
        Err(_) => println!("balance residuals: n/a (needs at least 3 records)"),
    }
    let max_excess = trajectory
        .samples
        .iter()
        .map(|s| s.diagnostics.l2_dist - diagnostics::decay_bound(&u0, s.t))
        .fold(f64::NEG_INFINITY, f64::max);
    if max_excess.is_finite() {
        println!(
            "decay bound: {} (max excess {})",
            if max_excess <= 1e-10 { "satisfied" } else { "exceeded" },
            fmt_f64(max_excess)
        );
    } else {
        println!("decay bound: n/a (no records)");
    }

    match trajectory.termination {
        Termination::ReachedTEnd => EXIT_OK,
        _ => EXIT_BREAKDOWN,
    }
}

pub fn cmd_fuzz(cfg: FuzzConfig) -> i32 {
    let grid = match Grid::new(cfg.n) {
        Ok(g) => g,
        Err(e) => return config_error(e),
    };
    let mut rows = String::from("trial,seed,margin_1,margin_2\n");
    let mut worst: Option<(u64, f64)> = None;
    let mut violations = 0u64;
    for trial in 0..cfg.trials {
        let seed = cfg.seed0.wrapping_add(trial);
        let trial_cfg = TrialConfig {
            seed,
            max_mode: cfg.max_mode,
            min_floor: cfg.min_floor,
            amplitude_decay: cfg.amplitude_decay,
        };
        let u = match random_positive_density(&trial_cfg, grid) {
            Ok(u) => u,
            Err(e) => return config_error(e),
        };
        let m1 = match diagnostics::check_inequality_1(&u) {
            Ok(rep) => rep.margin,
            Err(e) => return config_error(format!("trial {trial} (seed {seed}): {e}")),
        };
        let m2 = match diagnostics::check_inequality_2(&u) {
            Ok(rep) => rep.margin,
            // constant limit: both sides vanish, margin 0
            Err(Error::DegenerateInput) => 0.0,
            Err(e) => return config_error(format!("trial {trial} (seed {seed}): {e}")),
        };
        rows.push_str(&format!(
            "{trial},{seed},{},{}\n",
            fmt_f64(m1),
            fmt_f64(m2)
        ));
        for margin in [m1, m2] {
            if margin < -cfg.tolerance {
                violations += 1;
                if worst.map(|(_, w)| margin < w).unwrap_or(true) {
                    worst = Some((seed, margin));
                }
            }
        }
    }
    if let Err(e) = write_atomic(&cfg.report, &rows) {
        return config_error(format!("report: cannot write {}: {e}", cfg.report.display()));
    }
    println!(
        "fuzz: {} trials at n={} max_mode={} -> {}",
        cfg.trials,
        cfg.n,
        cfg.max_mode,
        cfg.report.display()
    );
    if let Some((seed, margin)) = worst {
        println!(
            "violations: {violations} (worst margin {} at seed {seed}; replay with --seed0 {seed} --trials 1)",
            fmt_f64(margin)
        );
        EXIT_VIOLATION
    } else {
        println!("violations: 0 (all margins >= {})", fmt_f64(-cfg.tolerance));
        EXIT_OK
    }
}

pub fn cmd_presets() -> i32 {
    println!("available presets (pass with --preset 'name(args)'):");
    println!("  constant          u = 1                         no parameters");
    println!("  cosine_bump(a)    u = 1 + a*cos x               requires |a| < 1");
    println!("  exp_sin(a)        u = exp(a*sin x)              any finite a");
    println!("  two_mode(a,b)     u = 1 + a*cos x + b*sin 2x    requires min u > 0");
    println!("  wiener_small(a)   u = 1 + a*cos x               requires |a| < 0.1 (A1 smallness)");
    EXIT_OK
}
