//! The property battery behind `qdiscrim verify`.

use qdiscrim_core::channels::{amplitude_damping, depolarizing, two_pauli, DensityMatrix};
use qdiscrim_core::discrimination::{
    ansatz_pe_compact, ansatz_pe_trig, ansatz_states, ansatz_threshold, bell_plane_pair,
    bell_to_computational, best_two_pauli_pe, commutation_probe, helstrom_error, helstrom_pe,
    optimal_entangled, product_baseline_pe, product_baseline_states, threshold_boundary,
    to_bell_frame, two_pauli_output_bell, BellCoefficients, Priors, SignalPair,
};
use qdiscrim_core::info::{binary_entropy, mutual_information, Ensemble};
use qdiscrim_core::matrix::ComplexMatrix;
use qdiscrim_core::montecarlo::Experiment;
use qdiscrim_core::optimizer::{dominance_check_against, SearchOptions, SeesawOptions};
use qdiscrim_core::random::{self, Stream};
use qdiscrim_core::{discrimination, Complex64};
use rand::Rng;

use crate::args::{ChannelSpec, RunConfig};
use crate::channel_file;
use crate::commands::{
    parallel_search, parallel_seesaw, run_experiment, search_options, PUBLISHED_TABLE,
};
use crate::error::CliError;
use crate::output::{full, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// The measured quantity the limit applies to.
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

impl Check {
    fn at_most(name: &'static str, value: f64, limit: f64, detail: String) -> Self {
        Self {
            name,
            passed: value <= limit,
            value,
            limit,
            detail,
        }
    }

    fn flag(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            value: f64::from(u8::from(passed)),
            limit: 1.0,
            detail,
        }
    }
}

/// Sample counts for the full and `--quick` batteries.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub grid: usize,
    pub bell_cases: usize,
    pub commutation_cases: usize,
    pub dominance_samples: usize,
    pub search_restarts: usize,
    pub side_restarts: usize,
    pub depolarizing_points: &'static [f64],
    pub damping_points: &'static [f64],
    pub trials: u64,
}

impl Budget {
    pub fn new(quick: bool, restarts: usize) -> Self {
        if quick {
            Self {
                grid: 20,
                bell_cases: 50,
                commutation_cases: 20,
                dominance_samples: 100,
                search_restarts: restarts.min(16),
                side_restarts: 4,
                depolarizing_points: &[0.1, 0.5, 0.9],
                damping_points: &[0.5],
                trials: 100_000,
            }
        } else {
            Self {
                grid: 100,
                bell_cases: 200,
                commutation_cases: 50,
                dominance_samples: 500,
                search_restarts: restarts,
                side_restarts: 8,
                depolarizing_points: &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
                damping_points: &[0.3, 0.5, 0.7],
                trials: 1_000_000,
            }
        }
    }
}

fn table_check() -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for (x, product, entangled) in PUBLISHED_TABLE {
        let e: f64 = entangled.parse().expect("static table");
        worst = worst.max((optimal_entangled(x)?.pe - e).abs());
        if (x - 0.80).abs() > 1e-12 {
            let p: f64 = product.parse().expect("static table");
            worst = worst.max((product_baseline_pe(x)? - p).abs());
        }
    }
    let eighty = product_baseline_pe(0.80)?;
    let mut c = Check::at_most("table", worst, 5e-6, format!("x=0.80 product={eighty:.6}"));
    c.passed &= eighty == 0.5 - 0.5 * 0.80;
    Ok(c)
}

fn threshold_check() -> Check {
    let t = ansatz_threshold();
    let residual = (threshold_boundary(t) - 1.0).abs();
    let mut c = Check::at_most(
        "threshold",
        (t - 0.227539).abs(),
        1e-6,
        format!("x*={} boundary_residual={residual:e}", full(t)),
    );
    c.passed &= residual < 1e-9;
    c
}

fn closed_form_check(n: usize) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        let ch = two_pauli(x)?;
        for j in 0..n {
            let alpha = std::f64::consts::PI * j as f64 / (n - 1) as f64;
            let (r0, r1) = ansatz_states(alpha).through_two_uses(&ch)?;
            let brute = helstrom_pe(r0.as_matrix(), r1.as_matrix())?;
            worst = worst
                .max((ansatz_pe_trig(alpha, x) - brute).abs())
                .max((ansatz_pe_compact((2.0 * alpha).cos(), x) - brute).abs());
        }
    }
    Ok(Check::at_most(
        "closed_form_grid",
        worst,
        1e-10,
        format!("{n}x{n} grid"),
    ))
}

fn bell_output_check(cases: usize, seed: u64) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let mut rng = random::stream(seed, Stream::Test, i as u64);
        let v = random::pure_state(&mut rng, 4);
        let n = v.iter().map(|c| c.re * c.re).sum::<f64>().sqrt();
        let coeffs = BellCoefficients::real(v[0].re / n, v[1].re / n, v[2].re / n, v[3].re / n)?;
        let x: f64 = rng.random();
        let bell = two_pauli_output_bell(&coeffs, x)?;
        let psi = bell_to_computational(&coeffs);
        let brute = two_pauli(x)?.apply_two(&DensityMatrix::from_pure(&psi)?)?;
        let brute = to_bell_frame(brute.as_matrix());
        worst = worst.max(bell.as_matrix().max_abs_diff(&brute));
    }
    Ok(Check::at_most(
        "bell_output_matrix",
        worst,
        1e-10,
        format!("{cases} seeded cases"),
    ))
}

fn advantage_check() -> Result<Check, CliError> {
    let mut ok = true;
    let mut worst_below: f64 = f64::NEG_INFINITY;
    let mut min_gain_above = f64::INFINITY;
    for k in 1..=99 {
        let x = k as f64 / 100.0;
        let product = product_baseline_pe(x)?;
        let best = best_two_pauli_pe(x)?.0;
        if x > 1.0 / 3.0 {
            min_gain_above = min_gain_above.min(product - best);
            ok &= best < product;
        } else {
            let ansatz = optimal_entangled(x).map(|o| o.pe).unwrap_or(f64::INFINITY);
            worst_below = worst_below.max(product - ansatz);
            ok &= product - ansatz <= 1e-9;
        }
    }
    let third = 1.0 / 3.0;
    let gap = (optimal_entangled(third)?.pe - third).abs();
    ok &= gap < 1e-12 && (product_baseline_pe(third)? - third).abs() < 1e-12;
    Ok(Check::flag(
        "advantage_regime",
        ok,
        format!(
            "min gain above 1/3 {min_gain_above:e}; max gain at or below 1/3 {worst_below:e}; gap at 1/3 {gap:e}"
        ),
    ))
}

/// A fixed orthonormal pair in Bell coordinates whose outputs do not commute.
pub const COUNTEREXAMPLE: [[f64; 4]; 2] = [
    [-0.459506, -0.870791, 0.127295, 0.119889],
    [-0.578111, 0.163069, -0.770549, -0.213192],
];

pub fn counterexample_pair() -> Result<SignalPair, CliError> {
    let v = |u: [f64; 4]| -> Result<Vec<Complex64>, CliError> {
        let n = u.iter().map(|t| t * t).sum::<f64>().sqrt();
        let c = BellCoefficients::real(u[0] / n, u[1] / n, u[2] / n, u[3] / n)?;
        Ok(bell_to_computational(&c))
    };
    let a = v(COUNTEREXAMPLE[0])?;
    let b = v(COUNTEREXAMPLE[1])?;
    // Project out the rounding overlap.
    let ov = qdiscrim_core::matrix::inner(&a, &b);
    let b: Vec<Complex64> = b.iter().zip(&a).map(|(y, x)| y - x * ov).collect();
    let n = qdiscrim_core::matrix::norm(&b);
    Ok(SignalPair::pure(a, b.iter().map(|c| c / n).collect())?)
}

pub const PROBE_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 1.0 / 3.0, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

fn commutation_check(cases: usize, seed: u64) -> Result<Check, CliError> {
    let counter = commutation_probe(&counterexample_pair()?, 0.5)?;
    let mut bell_worst: f64 = 0.0;
    for i in 0..cases {
        let mut rng = random::stream(seed, Stream::Test, 10_000 + i as u64);
        let a = rng.random_range(0..4usize);
        let b = (a + rng.random_range(1..4usize)) % 4;
        let alpha = rng.random::<f64>() * std::f64::consts::TAU;
        let x: f64 = rng.random();
        bell_worst = bell_worst.max(commutation_probe(&bell_plane_pair(a, b, alpha), x)?);
    }
    let family = discrimination::two_plane_pair(0.4, 1.1);
    let mut commuting = Vec::new();
    for x in PROBE_GRID {
        if commutation_probe(&family, x)? < 1e-10 {
            commuting.push(x);
        }
    }
    let expected = [0.0, 1.0 / 3.0, 1.0];
    let family_ok = commuting.len() == 3
        && commuting
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).abs() < 1e-15);
    Ok(Check::flag(
        "commutation",
        counter > 1e-6 && bell_worst < 1e-10 && family_ok,
        format!(
            "counterexample {counter:e}; bell planes max {bell_worst:e}; family commutes at {commuting:?}"
        ),
    ))
}

fn dominance_checks(samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for (name, ch) in [
        ("dominance_two_pauli", two_pauli(0.5)?),
        ("dominance_amplitude_damping", amplitude_damping(0.6)?),
    ] {
        let optimum = parallel_seesaw(&ch, &SeesawOptions::default(), seed).search;
        let r = dominance_check_against(&ch, &optimum, samples, seed);
        out.push(Check {
            name,
            passed: r.violations == 0,
            value: r.violations as f64,
            limit: 0.0,
            detail: format!(
                "{} samples, reference {}, worst margin {:e}",
                r.samples,
                full(r.reference_pe),
                r.worst_margin
            ),
        });
    }
    Ok(out)
}

fn depolarizing_check(points: &[f64], restarts: usize, seed: u64) -> Result<Check, CliError> {
    let opts = SearchOptions {
        restarts,
        hops: 2,
        ..SearchOptions::default()
    };
    let mut worst: f64 = 0.0;
    for p in points {
        let found = parallel_search(&depolarizing(*p)?, &opts, seed).best_pe;
        worst = worst.max((found - 0.5 * p).abs());
    }
    Ok(Check::at_most(
        "depolarizing_no_benefit",
        worst,
        1e-6,
        format!("p in {points:?}, baseline p/2"),
    ))
}

fn damping_check(points: &[f64], restarts: usize, seed: u64) -> Result<Check, CliError> {
    let opts = SearchOptions {
        restarts,
        hops: 3,
        ..SearchOptions::default()
    };
    let mut best_gap = f64::NEG_INFINITY;
    let mut at = f64::NAN;
    for x in points {
        let ch = amplitude_damping(*x)?;
        let entangled = parallel_search(&ch, &opts, seed).best_pe;
        let product =
            qdiscrim_core::optimizer::search_product_inputs_with(&ch, &opts, seed).best_pe;
        if product - entangled > best_gap {
            best_gap = product - entangled;
            at = *x;
        }
    }
    Ok(Check::flag(
        "amplitude_damping_advantage",
        best_gap > 0.0,
        format!("largest product-minus-entangled gap {best_gap:e} at x={at}"),
    ))
}

fn concordance_check(restarts: usize, seed: u64) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut max_decrease: f64 = 0.0;
    for x in [0.4, 0.5, 0.7, 0.9] {
        let ch = two_pauli(x)?;
        let exact = optimal_entangled(x)?.pe;
        let search = parallel_search(&ch, &search_options(restarts), seed).best_pe;
        let seesaw = parallel_seesaw(
            &ch,
            &SeesawOptions {
                restarts,
                ..SeesawOptions::default()
            },
            seed,
        );
        worst = worst
            .max((search - exact).abs())
            .max((seesaw.search.best_pe - exact).abs());
        max_decrease = max_decrease.max(seesaw.max_decrease);
    }
    let mut c = Check::at_most(
        "optimizer_concordance",
        worst,
        1e-6,
        format!("{restarts} restarts; largest seesaw objective decrease {max_decrease:e}"),
    );
    c.passed &= max_decrease <= 1e-12;
    Ok(c)
}

fn monte_carlo_check(trials: u64, seed: u64) -> Result<Vec<Check>, CliError> {
    let optimal = optimal_entangled(0.5)?;
    let cases = [
        ("monte_carlo_entangled", ansatz_states(optimal.alpha), 0.5),
        ("monte_carlo_product", product_baseline_states(0.8)?, 0.8),
    ];
    let mut out = Vec::new();
    for (name, pair, x) in cases {
        let exp = Experiment::new(&pair, &two_pauli(x)?, trials, seed)?;
        let est = run_experiment(&exp)?;
        let z = (est.pe - exp.analytic_pe).abs() / est.standard_error;
        out.push(Check::at_most(
            name,
            z,
            4.0,
            format!(
                "empirical {} +- {} vs {}",
                full(est.pe),
                full(est.standard_error),
                full(exp.analytic_pe)
            ),
        ));
    }
    Ok(out)
}

fn information_check() -> Result<Check, CliError> {
    let e = |k: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); 2];
        v[k] = Complex64::new(1.0, 0.0);
        DensityMatrix::from_pure(&v).expect("basis state")
    };
    let z = qdiscrim_core::discrimination::Povm::projective(&ComplexMatrix::identity(2))?;
    let one = mutual_information(&Ensemble::uniform(vec![e(0), e(1)])?, &z)?;
    let zero = mutual_information(&Ensemble::uniform(vec![e(0), e(0)])?, &z)?;
    let opt = optimal_entangled(0.5)?;
    let (r0, r1) = ansatz_states(opt.alpha).through_two_uses(&two_pauli(0.5)?)?;
    let h = helstrom_error(&r0, &r1, Priors::equal())?;
    let bsc = mutual_information(&Ensemble::uniform(vec![r0, r1])?, &h.measurement)?;
    let expected = 1.0 - binary_entropy(opt.pe);
    let dev = (bsc - expected).abs();
    Ok(Check::flag(
        "mutual_information",
        one == 1.0 && zero == 0.0 && dev < 1e-6,
        format!(
            "orthogonal {one}; identical {zero}; helstrom {} vs {}",
            full(bsc),
            full(expected)
        ),
    ))
}

fn channel_file_check(path: &std::path::Path) -> Result<Check, CliError> {
    let (_, v) = channel_file::read_unchecked(path)?;
    Ok(Check::at_most(
        "channel_file_completeness",
        v.residual,
        qdiscrim_core::channels::COMPLETENESS_TOL,
        format!("{} residual {:e}", path.display(), v.residual),
    ))
}

/// Runs every check. `progress` sees each result as soon as it is available.
pub fn run_battery(
    cfg: &RunConfig,
    mut progress: impl FnMut(&Check),
) -> Result<Vec<Check>, CliError> {
    let b = Budget::new(cfg.quick, cfg.restarts.max(1));
    let seed = cfg.seed;
    let mut checks = Vec::new();
    let mut push = |c: Check, checks: &mut Vec<Check>| {
        progress(&c);
        checks.push(c);
    };
    if let ChannelSpec::File(path) = &cfg.channel {
        push(channel_file_check(path)?, &mut checks);
    }
    push(table_check()?, &mut checks);
    push(threshold_check(), &mut checks);
    push(closed_form_check(b.grid)?, &mut checks);
    push(bell_output_check(b.bell_cases, seed)?, &mut checks);
    push(advantage_check()?, &mut checks);
    push(commutation_check(b.commutation_cases, seed)?, &mut checks);
    for c in dominance_checks(b.dominance_samples, seed)? {
        push(c, &mut checks);
    }
    push(
        depolarizing_check(b.depolarizing_points, b.side_restarts, seed)?,
        &mut checks,
    );
    push(
        damping_check(b.damping_points, b.side_restarts, seed)?,
        &mut checks,
    );
    push(concordance_check(b.search_restarts, seed)?, &mut checks);
    for c in monte_carlo_check(b.trials, seed)? {
        push(c, &mut checks);
    }
    push(information_check()?, &mut checks);
    Ok(checks)
}

pub fn checks_table(checks: &[Check], seed: u64, quick: bool) -> Table {
    let mut t = Table::new(&[
        "check", "passed", "value", "limit", "detail", "seed", "quick",
    ]);
    for c in checks {
        t.push(vec![
            c.name.to_string(),
            c.passed.to_string(),
            format!("{:e}", c.value),
            format!("{:e}", c.limit),
            c.detail.clone(),
            seed.to_string(),
            quick.to_string(),
        ]);
    }
    t
}
