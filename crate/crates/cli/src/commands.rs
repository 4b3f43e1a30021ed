//! One function per subcommand, each producing a CSV [`Table`].

use qdiscrim_core::channels::KrausChannel;
use qdiscrim_core::discrimination::{
    self, ansatz_states, best_two_pauli_pe, helstrom_error, optimal_entangled, product_baseline_pe,
    product_baseline_states, Encoding, Priors, SignalPair,
};
use qdiscrim_core::info::{self, Ensemble};
use qdiscrim_core::montecarlo::{BlockTally, ErrorEstimate, Experiment};
use qdiscrim_core::optimizer::{
    search_product_inputs_with, SearchOptions, SearchReport, SeesawOptions, SeesawReport,
    TwoUseProblem,
};
use rayon::prelude::*;

use crate::args::{PairKind, RunConfig};
use crate::error::CliError;
use crate::output::{fixed, full, opt_fixed, opt_full, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `(x, product, entangled)` as printed in the published table, verbatim.
pub const PUBLISHED_TABLE: [(f64, &str, &str); 6] = [
    (0.50, "0.250000", "0.241801"),
    (0.60, "0.200000", "0.188231"),
    (0.70, "0.150000", "0.137817"),
    (0.80, "0.010000", "0.090072"),
    (0.90, "0.050000", "0.044319"),
    (0.95, "0.025000", "0.022009"),
];

pub const MISPRINT_NOTE: &str =
    "published product value 0.010000 is a misprint; the baseline (1-x)/2 gives 0.100000";

/// Restarts of the numerical search run in parallel with per-restart streams.
pub fn parallel_search(channel: &KrausChannel, opts: &SearchOptions, seed: u64) -> SearchReport {
    let problem = TwoUseProblem::new(channel);
    let outcomes = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|i| problem.search_restart(seed, i, opts))
        .collect();
    SearchReport::from_restarts(outcomes)
}

pub fn parallel_seesaw(channel: &KrausChannel, opts: &SeesawOptions, seed: u64) -> SeesawReport {
    let problem = TwoUseProblem::new(channel);
    let runs = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|i| problem.seesaw_run(seed, i, opts))
        .collect();
    SeesawReport::from_runs(runs)
}

pub fn search_options(restarts: usize) -> SearchOptions {
    SearchOptions {
        restarts,
        ..SearchOptions::default()
    }
}

pub fn cmd_table(published: bool) -> Result<Table, CliError> {
    let mut header = vec![
        "x",
        "pe_product",
        "pe_entangled",
        "advantage",
        "pe_product_full",
        "pe_entangled_full",
        "advantage_full",
        "note",
    ];
    if published {
        header.extend(["published_pe_product", "published_pe_entangled"]);
    }
    let mut t = Table::new(&header);
    for (x, pub_product, pub_entangled) in PUBLISHED_TABLE {
        let product = product_baseline_pe(x)?;
        let entangled = optimal_entangled(x)?.pe;
        let advantage = product - entangled;
        let note = if pub_product.parse::<f64>().ok() != Some((product * 1e6).round() / 1e6) {
            MISPRINT_NOTE
        } else {
            ""
        };
        let mut row = vec![
            format!("{x:.2}"),
            fixed(product),
            fixed(entangled),
            fixed(advantage),
            full(product),
            full(entangled),
            full(advantage),
            note.to_string(),
        ];
        if published {
            row.extend([pub_product.to_string(), pub_entangled.to_string()]);
        }
        t.push(row);
    }
    Ok(t)
}

struct SweepRow {
    x: f64,
    product: f64,
    ansatz: Option<f64>,
    search: Option<f64>,
    advantage: f64,
    encoding: Option<Encoding>,
}

fn sweep_point(cfg: &RunConfig, x: f64) -> Result<SweepRow, CliError> {
    let channel = cfg.channel.build(x)?;
    let opts = search_options(cfg.restarts);
    let search = (cfg.restarts > 0).then(|| parallel_search(&channel, &opts, cfg.seed).best_pe);
    if cfg.channel.is_two_pauli() {
        let product = product_baseline_pe(x)?;
        let ansatz = optimal_entangled(x).ok().map(|o| o.pe);
        let (best, encoding) = best_two_pauli_pe(x)?;
        Ok(SweepRow {
            x,
            product,
            ansatz,
            search,
            advantage: product - best,
            encoding: Some(encoding),
        })
    } else {
        let product =
            search_product_inputs_with(&channel, &search_options(cfg.restarts.max(1)), cfg.seed)
                .best_pe;
        Ok(SweepRow {
            x,
            product,
            ansatz: None,
            search,
            advantage: search.map_or(0.0, |s| (product - s).max(0.0)),
            encoding: None,
        })
    }
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let points = if cfg.channel.takes_parameter() {
        cfg.grid.points()
    } else {
        vec![cfg.x]
    };
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|x| sweep_point(cfg, *x))
        .collect::<Result<_, _>>()?;
    let threshold = discrimination::ansatz_threshold();
    let mut t = Table::new(&[
        "channel",
        "x",
        "pe_product",
        "pe_ansatz",
        "pe_search",
        "advantage",
        "above_one_third",
        "ansatz_admissible",
        "best_encoding",
        "x_full",
        "pe_product_full",
        "pe_ansatz_full",
        "pe_search_full",
        "advantage_full",
        "seed",
        "restarts",
        "version",
    ]);
    let two_pauli = cfg.channel.is_two_pauli();
    let flag = |b: bool| {
        if two_pauli {
            b.to_string()
        } else {
            String::new()
        }
    };
    for r in rows {
        t.push(vec![
            cfg.channel.label(),
            fixed(r.x),
            fixed(r.product),
            opt_fixed(r.ansatz),
            opt_fixed(r.search),
            fixed(r.advantage),
            flag(r.x > 1.0 / 3.0),
            flag(r.x >= threshold),
            match r.encoding {
                Some(Encoding::Product) => "product".into(),
                Some(Encoding::Entangled) => "entangled".into(),
                None => String::new(),
            },
            full(r.x),
            full(r.product),
            opt_full(r.ansatz),
            opt_full(r.search),
            full(r.advantage),
            cfg.seed.to_string(),
            cfg.restarts.to_string(),
            VERSION.to_string(),
        ]);
    }
    Ok(t)
}

pub fn cmd_optimize(cfg: &RunConfig) -> Result<Table, CliError> {
    let x = cfg.x;
    let channel = cfg.channel.build(x)?;
    let search = parallel_search(&channel, &search_options(cfg.restarts), cfg.seed);
    let seesaw = parallel_seesaw(
        &channel,
        &SeesawOptions {
            restarts: cfg.restarts,
            ..SeesawOptions::default()
        },
        cfg.seed,
    );
    let product = search_product_inputs_with(&channel, &search_options(cfg.restarts), cfg.seed);
    let (entangled_ref, product_ref) = if cfg.channel.is_two_pauli() {
        (Some(best_two_pauli_pe(x)?.0), Some(product_baseline_pe(x)?))
    } else {
        (None, None)
    };
    let mut t = Table::new(&[
        "channel",
        "x",
        "method",
        "pe",
        "reference",
        "pe_full",
        "reference_full",
        "converged",
        "seed",
        "restarts",
    ]);
    let label = cfg.channel.label();
    let mut row = |method: &str, pe: f64, reference: Option<f64>, converged: String| {
        t.push(vec![
            label.clone(),
            fixed(x),
            method.to_string(),
            fixed(pe),
            opt_fixed(reference),
            full(pe),
            opt_full(reference),
            converged,
            cfg.seed.to_string(),
            cfg.restarts.to_string(),
        ]);
    };
    row(
        "search",
        search.best_pe,
        entangled_ref,
        search.converged.to_string(),
    );
    row(
        "seesaw",
        seesaw.search.best_pe,
        entangled_ref,
        seesaw.search.converged.to_string(),
    );
    row(
        "product_search",
        product.best_pe,
        product_ref,
        product.converged.to_string(),
    );
    let best = search.best_pe.min(seesaw.search.best_pe);
    row(
        "advantage",
        product.best_pe - best,
        entangled_ref.zip(product_ref).map(|(e, p)| p - e),
        String::new(),
    );
    Ok(t)
}

/// Input pair for `kind`, and whether it came from a closed form.
fn resolve_pair(
    cfg: &RunConfig,
    channel: &KrausChannel,
    kind: PairKind,
) -> Result<SignalPair, CliError> {
    let two_pauli = cfg.channel.is_two_pauli();
    match kind {
        PairKind::Product if two_pauli => Ok(product_baseline_states(cfg.x)?),
        PairKind::Product => Err(CliError::Usage(
            "--pair product is defined for two_pauli only".into(),
        )),
        PairKind::Optimal if two_pauli => match best_two_pauli_pe(cfg.x)?.1 {
            Encoding::Entangled => Ok(ansatz_states(optimal_entangled(cfg.x)?.alpha)),
            Encoding::Product => Ok(product_baseline_states(cfg.x)?),
        },
        PairKind::Optimal | PairKind::Search => {
            Ok(parallel_search(channel, &search_options(cfg.restarts), cfg.seed).best_pair)
        }
    }
}

pub fn run_experiment(exp: &Experiment) -> Result<ErrorEstimate, CliError> {
    let tallies: Vec<BlockTally> = (0..exp.blocks())
        .into_par_iter()
        .map(|b| exp.run_block(b))
        .collect::<Result<_, _>>()?;
    Ok(tallies
        .into_iter()
        .fold(BlockTally::default(), |a, b| a + b)
        .into())
}

pub fn cmd_mc(cfg: &RunConfig, kind: PairKind) -> Result<Table, CliError> {
    let channel = cfg.channel.build(cfg.x)?;
    let pair = resolve_pair(cfg, &channel, kind)?;
    let trials = if cfg.quick {
        cfg.trials.min(100_000)
    } else {
        cfg.trials
    };
    let exp = Experiment::new(&pair, &channel, trials, cfg.seed)?;
    let est = run_experiment(&exp)?;
    let z = if est.standard_error > 0.0 {
        (est.pe - exp.analytic_pe) / est.standard_error
    } else if est.pe == exp.analytic_pe {
        0.0
    } else {
        f64::INFINITY
    };
    let within = (est.pe - exp.analytic_pe).abs() <= 4.0 * est.standard_error.max(1e-12);
    let mut t = Table::new(&[
        "channel",
        "x",
        "pair",
        "trials",
        "errors",
        "pe_empirical",
        "standard_error",
        "pe_analytic",
        "z_score",
        "within_4_sigma",
        "pe_empirical_full",
        "standard_error_full",
        "pe_analytic_full",
        "seed",
    ]);
    t.push(vec![
        cfg.channel.label(),
        fixed(cfg.x),
        format!("{kind:?}").to_lowercase(),
        est.trials.to_string(),
        est.errors.to_string(),
        fixed(est.pe),
        fixed(est.standard_error),
        fixed(exp.analytic_pe),
        format!("{z:.3}"),
        within.to_string(),
        full(est.pe),
        full(est.standard_error),
        full(exp.analytic_pe),
        cfg.seed.to_string(),
    ]);
    Ok(t)
}

pub fn cmd_info(cfg: &RunConfig, budget: usize) -> Result<Table, CliError> {
    let channel = cfg.channel.build(cfg.x)?;
    let pair = resolve_pair(cfg, &channel, PairKind::Optimal)?;
    let (r0, r1) = pair.through_two_uses(&channel)?;
    let h = helstrom_error(&r0, &r1, Priors::equal())?;
    let ensemble = Ensemble::uniform(vec![r0.clone(), r1.clone()])?;
    let helstrom_info = info::mutual_information(&ensemble, &h.measurement)?;
    let (povm_restarts, grid) = if cfg.quick { (1, 4) } else { (4, 10) };
    let capacity = info::capacity_fixed_outputs(&[r0, r1], povm_restarts, grid, cfg.seed)?;
    let budget = if cfg.quick { budget.min(1) } else { budget };
    let uses = info::two_use_vs_single_use(&channel, budget, cfg.seed)?;

    let mut t = Table::new(&[
        "channel",
        "x",
        "quantity",
        "value",
        "value_full",
        "lower_bound",
        "detail",
        "seed",
    ]);
    let label = cfg.channel.label();
    let mut row = |q: &str, v: f64, lower: bool, detail: String| {
        t.push(vec![
            label.clone(),
            fixed(cfg.x),
            q.to_string(),
            fixed(v),
            full(v),
            lower.to_string(),
            detail,
            cfg.seed.to_string(),
        ]);
    };
    row("helstrom_pe", h.pe, false, "best known input pair".into());
    row(
        "helstrom_information",
        helstrom_info,
        false,
        format!("bsc_value={}", full(1.0 - info::binary_entropy(h.pe))),
    );
    row(
        "capacity_fixed_outputs",
        capacity.capacity,
        capacity.lower_bound,
        format!("prior0={}", full(capacity.priors[0])),
    );
    row(
        "single_use_capacity",
        uses.single_use,
        uses.lower_bound,
        format!("budget={budget}"),
    );
    row(
        "two_use_capacity",
        uses.two_use,
        uses.lower_bound,
        format!("budget={budget}"),
    );
    row(
        "two_use_ratio",
        uses.ratio,
        uses.lower_bound,
        "heuristic".into(),
    );
    Ok(t)
}
