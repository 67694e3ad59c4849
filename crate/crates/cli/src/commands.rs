use std::path::Path;

use bgsol_core::dynamics::{
    default_budget, detect_cycle, domination_experiment, energy_decay_experiment, energy_trace,
    hitting_time, DominationConfig,
};
use bgsol_core::etienne::{to_svg, to_text_grid};
use bgsol_core::partitions::{q1_move, qp_move, t0_config, triangle_side};
use bgsol_core::rng::stream_rng;
use bgsol_core::sampling::random_reasonable;
use bgsol_core::stationary::{
    default_reasonable_bounds, deviation_profile, exact_stationary, loglog_fit, mc_estimate,
    EstimateConfig, PredicateSpec, Start,
};
use bgsol_core::{BernoulliField, EtienneDiagram, Probability};
use serde_json::json;

use crate::args::{
    ChainArgs, CycleArgs, DetRun, Deviation, Dominate, Energy, Estimate, Exact, Hit, PredicateKind,
    Sweep,
};
use crate::output::{opt, Report, Table};
use crate::CliError;

fn random_p(p: f64) -> Result<Probability, CliError> {
    Ok(Probability::strictly_random(p)?)
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive, got {x}"
        )))
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_start(s: &str) -> Result<Start, CliError> {
    Ok(match s {
        "t0" => Start::T0,
        "single-pile" => Start::SinglePile,
        "worst-case" => Start::WorstCase,
        other => Start::Custom(other.parse()?),
    })
}

fn chain_config(
    n: u64,
    p: Probability,
    predicate: PredicateSpec,
    c: &ChainArgs,
    seed: u64,
) -> Result<EstimateConfig, CliError> {
    let mut cfg = EstimateConfig::new(n, p, predicate);
    cfg.seed = seed;
    cfg.chains = c.chains;
    if let Some(s) = c.stride {
        cfg.stride = s;
    }
    if let Some(b) = c.burn_in {
        cfg.burn_in = b;
    }
    cfg.moves = c.moves.unwrap_or(cfg.burn_in + 10_000 * cfg.stride);
    cfg.start = parse_start(&c.start)?;
    Ok(cfg)
}

pub fn det_run(a: &DetRun, seed: u64) -> Result<Report, CliError> {
    let p = Probability::new(a.p)?;
    let mut field = BernoulliField::new(p, seed);
    let mut table = Table::new(&["move", "state"]);
    let mut states = Vec::with_capacity(a.moves as usize);
    let mut s = a.start.clone();
    for t in 1..=a.moves {
        s = if p.is_one() {
            q1_move(&s)
        } else {
            qp_move(&s, &mut field)
        };
        table.push([t.to_string(), s.to_string()]);
        states.push(s.clone());
    }
    let d = EtienneDiagram::from_partition(&s);
    if let Some(path) = &a.grid {
        write_file(path, &to_text_grid(&d))?;
    }
    if let Some(path) = &a.svg {
        write_file(path, &to_svg(&d, Some(triangle_side(s.total()))))?;
    }
    Report::new(&json!({ "start": a.start, "states": states }), table)
}

pub fn cycle(a: &CycleArgs) -> Result<Report, CliError> {
    let r = detect_cycle(&a.start, a.max_moves)?;
    let mut table = Table::new(&["index", "state"]);
    for (i, s) in r.cycle_states.iter().enumerate() {
        table.push([i.to_string(), s.to_string()]);
    }
    let result = json!({
        "start": r.start,
        "transient": r.transient_length,
        "period": r.cycle_length,
        "cycle": r.cycle_states,
        "reached_stable": r.reached_stable,
    });
    Ok(Report::new(&result, table)?
        .note("transient", r.transient_length)
        .note("period", r.cycle_length)
        .note("reached_stable", r.reached_stable))
}

fn trace_table(rows: &[bgsol_core::dynamics::TraceRow]) -> Table {
    let mut table = Table::new(&[
        "move_index",
        "E2x",
        "E_tilde",
        "h_minus",
        "h_plus",
        "V_minus",
        "V_plus",
    ]);
    for r in rows {
        table.push([
            r.move_index.to_string(),
            r.e2x.to_string(),
            r.e_tilde.to_string(),
            r.h_minus.to_string(),
            r.h_plus.to_string(),
            r.v_minus.to_string(),
            r.v_plus.to_string(),
        ]);
    }
    table
}

pub fn hit(a: &Hit, seed: u64) -> Result<Report, CliError> {
    positive("eps", a.eps)?;
    let (start, reasonable) = match (&a.start, a.n) {
        (Some(s), _) => (
            s.clone(),
            a.require_reasonable.then_some((a.gamma1, a.gamma2)),
        ),
        (None, Some(n)) => {
            let s = random_reasonable(n, a.gamma1, a.gamma2, &mut stream_rng(seed, 0))?;
            (s, Some((a.gamma1, a.gamma2)))
        }
        (None, None) => return Err(CliError::Usage("give --start or --n".into())),
    };
    let budget = a.budget.unwrap_or_else(|| default_budget(start.total()));
    let r = hitting_time(&start, a.eps, budget, reasonable)?;
    let result = json!({
        "start": start,
        "report": r,
        "hit_constant": r.hit_constant(),
        "settle_constant": r.settle_constant(),
    });
    Ok(Report::new(&result, trace_table(&r.energy_trace))?
        .note("budget", budget)
        .note("hit_time", opt(r.hit_time))
        .note("settle_time", opt(r.settle_time))
        .note("stayed", r.stayed)
        .note("exits_after_hit", r.exits_after_hit))
}

pub fn energy(a: &Energy) -> Result<Report, CliError> {
    if a.stride == 0 {
        return Err(CliError::Usage("--stride must be positive".into()));
    }
    if let Some(stages) = a.decay_stages {
        positive("block-constant", a.block_constant)?;
        let d = energy_decay_experiment(&a.start, stages, a.block_constant);
        let mut table = Table::new(&["move_index", "E2x", "E_tilde"]);
        for p in &d.points {
            table.push([
                p.move_index.to_string(),
                p.e2x.to_string(),
                p.e_tilde.to_string(),
            ]);
        }
        let monotone = d.monotone;
        return Ok(Report::new(&d, table)?.note("monotone", monotone));
    }
    let moves = a.moves.unwrap_or_else(|| default_budget(a.start.total()));
    let rows = energy_trace(&a.start, moves, a.stride);
    Report::new(&rows, trace_table(&rows))
}

fn estimate_row(cfg: &EstimateConfig, est: &bgsol_core::StationaryEstimate) -> Vec<String> {
    vec![
        est.value.to_string(),
        opt(est.ci_low),
        opt(est.ci_high),
        opt(est.n_samples),
        cfg.chains.to_string(),
        cfg.moves.to_string(),
        cfg.burn_in.to_string(),
        cfg.stride.to_string(),
    ]
}

const ESTIMATE_COLUMNS: [&str; 8] = [
    "value",
    "ci_low",
    "ci_high",
    "n_samples",
    "chains",
    "moves",
    "burn_in",
    "stride",
];

pub fn estimate(a: &Estimate, seed: u64) -> Result<Report, CliError> {
    let p = random_p(a.p)?;
    let (alpha0, beta0) = default_reasonable_bounds(p);
    let predicate = match a.predicate {
        PredicateKind::RoughTriangle => PredicateSpec::RoughTriangle {
            eps: positive("eps", a.eps)?,
            p,
        },
        PredicateKind::G => PredicateSpec::G {
            alpha: positive("alpha", a.alpha.unwrap_or(alpha0))?,
            beta: positive("beta", a.beta.unwrap_or(beta0))?,
        },
        PredicateKind::V => PredicateSpec::V {
            eps: positive("eps", a.eps)?,
        },
        PredicateKind::VHat => PredicateSpec::VHat {
            eps: positive("eps", a.eps)?,
        },
        PredicateKind::Equals => PredicateSpec::Equals {
            state: a
                .state
                .clone()
                .ok_or_else(|| CliError::Usage("--predicate equals needs --state".into()))?,
        },
        PredicateKind::Always => PredicateSpec::Always,
    };
    let cfg = chain_config(a.n, p, predicate, &a.chain, seed)?;
    let est = mc_estimate(&cfg)?;
    let mut table = Table::new(&ESTIMATE_COLUMNS);
    table.push(estimate_row(&cfg, &est));
    Report::new(&json!({ "config": cfg, "estimate": est }), table)
}

pub fn exact(a: &Exact) -> Result<Report, CliError> {
    let law = exact_stationary(a.n, random_p(a.p)?)?;
    let mut table = Table::new(&["state", "probability"]);
    let mut states = Vec::new();
    for (s, &w) in law.states().iter().zip(law.probabilities()) {
        table.push([s.to_string(), w.to_string()]);
        states.push(json!({ "state": s, "probability": w }));
    }
    let residual = law.residual();
    Ok(
        Report::new(&json!({ "states": states, "residual": residual }), table)?
            .note("residual", residual),
    )
}

pub fn sweep(a: &Sweep, seed: u64) -> Result<Report, CliError> {
    let ps =
        a.p.iter()
            .map(|&p| random_p(p))
            .collect::<Result<Vec<_>, _>>()?;
    for &eps in &a.eps {
        positive("eps", eps)?;
    }
    if a.n.is_empty() || ps.is_empty() || a.eps.is_empty() {
        return Err(CliError::Usage("the grid is empty".into()));
    }
    let mut header = vec!["n", "p", "eps"];
    header.extend(ESTIMATE_COLUMNS);
    header.push("error");
    let mut table = Table::new(&header);
    let mut rows = Vec::new();
    for &n in &a.n {
        for &p in &ps {
            for &eps in &a.eps {
                let cell = [n.to_string(), p.get().to_string(), eps.to_string()];
                let run = chain_config(
                    n,
                    p,
                    PredicateSpec::RoughTriangle { eps, p },
                    &a.chain,
                    seed,
                )
                .and_then(|cfg| Ok((mc_estimate(&cfg)?, cfg)));
                match run {
                    Ok((est, cfg)) => {
                        table.push(
                            cell.into_iter()
                                .chain(estimate_row(&cfg, &est))
                                .chain([String::new()]),
                        );
                        rows.push(json!({ "n": n, "p": p, "eps": eps, "config": cfg, "estimate": est, "error": null }));
                    }
                    Err(e) => {
                        let blank = std::iter::repeat_n(String::new(), ESTIMATE_COLUMNS.len());
                        table.push(cell.into_iter().chain(blank).chain([e.to_string()]));
                        rows.push(json!({ "n": n, "p": p, "eps": eps, "error": e.to_string() }));
                    }
                }
            }
        }
    }
    Report::new(&rows, table)
}

pub fn dominate(a: &Dominate, seed: u64) -> Result<Report, CliError> {
    let start = match (&a.start, a.n) {
        (Some(s), Some(n)) if s.total() != n => {
            return Err(CliError::Usage(format!(
                "start {s} does not hold {n} cards"
            )));
        }
        (Some(s), _) => s.clone(),
        (None, Some(n)) => t0_config(n),
        (None, None) => return Err(CliError::Usage("give --n or --start".into())),
    };
    let n = start.total();
    let horizon = a.horizon.unwrap_or_else(|| (n as f64).sqrt().ceil() as u64);
    let cfg = DominationConfig {
        start,
        p: random_p(a.p)?,
        delta0: positive("delta0", a.delta0)?,
        horizon,
        trials: a.trials,
        seed,
    };
    let out = domination_experiment(&cfg)?;
    let mut table = Table::new(&["n", "kappa", "horizon", "trials", "successes", "fraction"]);
    table.push([
        n.to_string(),
        out.kappa.to_string(),
        horizon.to_string(),
        out.trials.to_string(),
        out.successes.to_string(),
        out.fraction.to_string(),
    ]);
    let failures: Vec<String> = out.first_failures.iter().map(u64::to_string).collect();
    Ok(Report::new(
        &json!({ "n": n, "horizon": horizon, "outcome": out }),
        table,
    )?
    .note("first_failures", failures.join(" ")))
}

pub fn deviation(a: &Deviation, seed: u64) -> Result<Report, CliError> {
    let p = random_p(a.p)?;
    let mut table = Table::new(&[
        "n",
        "samples",
        "mean",
        "median",
        "q05",
        "q25",
        "q50",
        "q75",
        "q95",
        "min",
        "max",
        "median_over_sqrt_n",
        "median_over_n_quarter",
    ]);
    let mut profiles = Vec::new();
    let mut points = Vec::new();
    for &n in &a.n {
        let cfg = chain_config(n, p, PredicateSpec::Always, &a.chain, seed)?;
        let prof = deviation_profile(&cfg)?;
        let nf = n as f64;
        let mut row = vec![
            n.to_string(),
            prof.samples.to_string(),
            prof.mean.to_string(),
            prof.median.to_string(),
        ];
        row.extend(prof.quantiles.iter().map(|(_, v)| v.to_string()));
        row.extend([
            prof.min.to_string(),
            prof.max.to_string(),
            (prof.median / nf.sqrt()).to_string(),
            (prof.median / nf.powf(0.25)).to_string(),
        ]);
        table.push(row);
        points.push((nf, prof.median));
        profiles.push(prof);
    }
    let fit = loglog_fit(&points);
    let mut report = Report::new(&json!({ "profiles": profiles, "median_fit": fit }), table)?;
    if let Some(f) = &fit {
        report = report
            .note("median_loglog_slope", f.slope)
            .note("median_loglog_slope_se", opt(f.slope_se));
    }
    Ok(report)
}
