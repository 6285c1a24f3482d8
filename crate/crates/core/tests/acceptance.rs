//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//!
//! Criteria 1-6 are judged on the figure reproductions at the default
//! master seed; 7 and 8 run directly. Tolerances are the constants below.

use std::path::Path;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swarmtrust_core::detection::{classify, DetectorSpec};
use swarmtrust_core::engine::{
    filter_candidates, filter_pmf, genbest_binary, genbest_hyperbolic, update_velocity,
};
use swarmtrust_core::harness::reproduce::{figure_plan, run_figure};
use swarmtrust_core::harness::run_single;
use swarmtrust_core::scenario::DEFAULT_MASTER_SEED;
use swarmtrust_core::trust::{penalize, reward, update_trust, UpdateMode};
use swarmtrust_core::{
    run_scenario, AttackModel, AttackSpec, Candidate, EngineKind, Figure, GenBestPolicy,
    MetricsTable, Position, Scenario, Simulation, SwarmBest, TrustStrategy, Velocity,
};

const RUNS: usize = 1000;
const BASELINE_BAND: (f64, f64) = (3.0, 7.0);
const THREAT_FACTOR_HIGH: f64 = 3.0;
const THREAT_FACTOR_LOW: f64 = 2.0;
const RFA_BAND: f64 = 0.01;
const P_FA: f64 = 0.05;
const RFA_TARGET: f64 = 0.01;
const RFA_BY: usize = 10;
const RMD_FLOOR_LOW_RATE: f64 = 0.85;
const RECOVERY_FACTOR: f64 = 2.0;
/// Sigma multiple for the frequency checks.
const Z: f64 = 4.5;

struct Report {
    failed: usize,
    total: usize,
}

impl Report {
    fn check(&mut self, id: &str, pass: bool, detail: impl AsRef<str>) {
        self.total += 1;
        if !pass {
            self.failed += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:<34} {}", detail.as_ref());
    }
}

fn find<'a>(tables: &'a [MetricsTable], name: &str) -> &'a MetricsTable {
    tables
        .iter()
        .find(|t| t.scenario.name == name)
        .unwrap_or_else(|| panic!("scenario {name} missing from plan"))
}

fn d50(tables: &[MetricsTable], name: &str) -> f64 {
    find(tables, name).last().mean_honest_distance
}

fn criteria_1_2(r: &mut Report, fig2: &[MetricsTable]) -> f64 {
    let base_hi = d50(fig2, "fig2a-none");
    let base_lo = d50(fig2, "fig2b-none");
    for (label, b) in [("fig2a", base_hi), ("fig2b", base_lo)] {
        r.check(
            &format!("1 baseline convergence {label}"),
            (BASELINE_BAND.0..=BASELINE_BAND.1).contains(&b),
            format!(
                "d(50) = {b:.3} m, band [{}, {}]",
                BASELINE_BAND.0, BASELINE_BAND.1
            ),
        );
    }
    for (panel, base, factor) in [
        ("fig2a", base_hi, THREAT_FACTOR_HIGH),
        ("fig2b", base_lo, THREAT_FACTOR_LOW),
    ] {
        for model in ["zero-distance", "random-distance"] {
            let d = d50(fig2, &format!("{panel}-{model}"));
            let ratio = d / base;
            r.check(
                &format!("2 threat {panel} {model}"),
                ratio >= factor,
                format!("d(50) = {d:.3} m, {ratio:.3}x baseline, need >= {factor}x"),
            );
        }
    }
    base_hi
}

fn criteria_3_4(r: &mut Report, fig3: &[MetricsTable]) {
    for prefix in ["fig3ab", "fig3cd"] {
        let bb = find(fig3, &format!("{prefix}-binary-binary"));
        let worst = bb
            .rows
            .iter()
            .map(|m| (m.r_fa - P_FA).abs())
            .fold(0.0, f64::max);
        r.check(
            &format!("3 binary-binary r_fa {prefix}"),
            worst <= RFA_BAND,
            format!("max |r_fa - {P_FA}| = {worst:.4}, tolerance {RFA_BAND}"),
        );
    }

    for prefix in ["fig3ab", "fig3cd"] {
        for name in ["linear-linear", "exp-exp", "exp-linear", "linear-exp"] {
            let rfa = find(fig3, &format!("{prefix}-{name}")).at(RFA_BY).r_fa;
            r.check(
                &format!("4 r_fa by t={RFA_BY} {prefix} {name}"),
                rfa < RFA_TARGET,
                format!("r_fa({RFA_BY}) = {rfa:.4}, need < {RFA_TARGET}"),
            );
        }
    }

    let le = find(fig3, "fig3ab-linear-exp").last().r_md;
    let bb = find(fig3, "fig3ab-binary-binary").last().r_md;
    r.check(
        "4 r_md linear-exp < binary 50%",
        le < bb,
        format!("r_md(50) = {le:.4} vs {bb:.4}"),
    );

    for name in TrustStrategy::PRESETS {
        let rmd = find(fig3, &format!("fig3cd-{name}")).last().r_md;
        r.check(
            &format!("4 r_md at 10% {name}"),
            rmd > RMD_FLOOR_LOW_RATE,
            format!("r_md(50) = {rmd:.4}, need > {RMD_FLOOR_LOW_RATE}"),
        );
    }
}

fn criteria_5_6(r: &mut Report, fig4: &[MetricsTable], baseline: f64) {
    for panel in ["fig4a", "fig4b"] {
        let conv = d50(fig4, &format!("{panel}-conventional"));
        for policy in GenBestPolicy::ALL {
            let d = d50(fig4, &format!("{panel}-{}", policy.name()));
            r.check(
                &format!("5 recovery {panel} {}", policy.name()),
                d <= RECOVERY_FACTOR * baseline,
                format!(
                    "d(50) = {d:.3} m, limit {:.3} m (conventional {conv:.3} m)",
                    RECOVERY_FACTOR * baseline
                ),
            );
        }
        r.check(
            &format!("5 conventional fails {panel}"),
            conv > RECOVERY_FACTOR * baseline,
            format!(
                "d(50) = {conv:.3} m, limit {:.3} m",
                RECOVERY_FACTOR * baseline
            ),
        );
    }

    for panel in ["fig4c", "fig4d"] {
        let s = d50(fig4, &format!("{panel}-stochastic"));
        let h = d50(fig4, &format!("{panel}-hyperbolic"));
        let b = d50(fig4, &format!("{panel}-binary-rejection"));
        r.check(
            &format!("6 ordering {panel}"),
            s < h && h <= b,
            format!(
                "stochastic {s:.3} < hyperbolic {h:.3} <= binary {b:.3} (margins {:.3}, {:.3})",
                h - s,
                b - h
            ),
        );
    }
}

fn trust_invariants(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200_000 {
        let mode = UpdateMode::ALL[rng.random_range(0..3)];
        let a: f64 = rng.random();
        let b: f64 = rng.random();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (up, down) = (reward(mode, a), penalize(mode, a));
        if !(0.0..=1.0).contains(&up) || !(0.0..=1.0).contains(&down) || down > a || up < a {
            return Err(format!("{mode:?} at {a}: reward {up}, penalty {down}"));
        }
        if reward(mode, lo) > reward(mode, hi) || penalize(mode, lo) > penalize(mode, hi) {
            return Err(format!("{mode:?} not monotone on [{lo}, {hi}]"));
        }
    }
    // long random trajectories stay in range for every preset
    for s in TrustStrategy::presets() {
        let mut rho = s.rho_init;
        for _ in 0..10_000 {
            rho = update_trust(&s, rng.random_bool(0.5), rho);
            if !(0.0..=1.0).contains(&rho) {
                return Err(format!("{} left [0, 1]: {rho}", s.name()));
            }
        }
    }
    Ok(())
}

fn velocity_clamp(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut p = || {
        Position::new(
            rng.random_range(-200.0..200.0),
            rng.random_range(-200.0..200.0),
        )
    };
    let samples: Vec<_> = (0..50_000).map(|_| (p(), p(), p(), p())).collect();
    for (i, (pos, pb, sb, v)) in samples.into_iter().enumerate() {
        let s_max = 0.1 + (i % 50) as f64 * 0.2;
        let v = Velocity::new(v.x, v.y);
        let out = update_velocity(v, pos, pb, sb, 0.5, 0.5, (i % 7) as f64 / 7.0, 0.3, s_max);
        if out.norm().is_nan() || out.norm() > s_max * (1.0 + 1e-12) {
            return Err(format!("|v| = {} exceeds {s_max}", out.norm()));
        }
    }
    Ok(())
}

fn personal_best_monotone() -> Result<(), String> {
    for (engine, model) in [
        (EngineKind::Conventional, AttackModel::ZeroDistance),
        (EngineKind::TrustAware, AttackModel::RandomDistance),
        (EngineKind::TrustAware, AttackModel::BiasedDistance),
    ] {
        let scenario = Scenario {
            engine,
            attack: AttackSpec::new(model, 0.5),
            ..Scenario::default()
        };
        for run in 0..20 {
            let mut sim = Simulation::new(&scenario, run).map_err(|e| e.to_string())?;
            let mut prev: Vec<f64> = sim
                .agents()
                .iter()
                .map(|a| a.personal_best.distance)
                .collect();
            for _ in 0..scenario.world.horizon {
                sim.step().map_err(|e| e.to_string())?;
                for (a, p) in sim.agents().iter().zip(prev.iter_mut()) {
                    if a.personal_best.distance > *p {
                        return Err(format!("agent {} personal best rose in run {run}", a.id));
                    }
                    *p = a.personal_best.distance;
                }
            }
        }
    }
    Ok(())
}

fn random_candidates(rng: &mut ChaCha8Rng, trust: f64) -> Vec<Candidate> {
    let n = rng.random_range(0..8);
    (0..n)
        .map(|id| Candidate {
            // coarse grid so ties actually occur
            distance: f64::from(rng.random_range(0..6u8)) * 2.5,
            position: Position::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)),
            trust,
            id,
        })
        .collect()
}

fn hyperbolic_matches_binary(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..50_000 {
        let trust = rng.random_range(0.01..=1.0);
        let cands = random_candidates(rng, trust);
        let best = if rng.random_bool(0.3) {
            SwarmBest::default()
        } else {
            SwarmBest {
                distance: f64::from(rng.random_range(0..6u8)) * 2.5,
                position: Some(Position::new(50.0, 50.0)),
                source: 99,
            }
        };
        let b = genbest_binary(&cands, best);
        let h = genbest_hyperbolic(&cands, best, trust);
        if b != h {
            return Err(format!("differ on {cands:?}: {b:?} vs {h:?}"));
        }
    }
    Ok(())
}

fn pmf_checks(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..10_000 {
        let n = rng.random_range(1..12);
        let cands: Vec<Candidate> = (0..n)
            .map(|id| Candidate {
                distance: 1.0,
                position: Position::new(0.0, 0.0),
                trust: rng.random_range(0.001..=1.0),
                id,
            })
            .collect();
        let pmf = filter_pmf(&cands).map_err(|e| e.to_string())?;
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(format!("pmf sums to {sum}"));
        }
    }
    let trusts = [0.1, 0.25, 0.5, 1.0, 0.05];
    let cands: Vec<Candidate> = trusts
        .iter()
        .enumerate()
        .map(|(id, &trust)| Candidate {
            distance: 1.0,
            position: Position::new(0.0, 0.0),
            trust,
            id,
        })
        .collect();
    let pmf = filter_pmf(&cands).map_err(|e| e.to_string())?;
    let mut counts = [0usize; 5];
    let mut draws = 0usize;
    for _ in 0..40_000 {
        for k in filter_candidates(&cands, rng).map_err(|e| e.to_string())? {
            counts[k] += 1;
            draws += 1;
        }
    }
    for (k, &p) in pmf.iter().enumerate() {
        let f = counts[k] as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        if (f - p).abs() > Z * se {
            return Err(format!("candidate {k}: frequency {f:.5}, pmf {p:.5}"));
        }
    }
    Ok(())
}

fn detector_frequencies(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = 200_000;
    for spec in [
        DetectorSpec::default(),
        DetectorSpec {
            p_md: 0.1,
            p_fa: 0.3,
        },
    ] {
        for (attacked, p) in [(true, 1.0 - spec.p_md), (false, spec.p_fa)] {
            let f = (0..n).filter(|_| classify(attacked, &spec, rng)).count() as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            if (f - p).abs() > Z * se {
                return Err(format!("{spec:?} attacked={attacked}: {f:.5} vs {p}"));
            }
        }
    }
    for attacked in [true, false] {
        let flagged = classify(attacked, &DetectorSpec::PERFECT, rng);
        if flagged != attacked {
            return Err("perfect detector erred".into());
        }
    }
    Ok(())
}

fn paired_scenario(engine: EngineKind, policy: GenBestPolicy) -> Scenario {
    Scenario {
        name: format!("paired-{}", policy.name()),
        engine,
        policy,
        attack: AttackSpec::disabled(),
        detector: DetectorSpec::PERFECT,
        runs: RUNS,
        ..Scenario::default()
    }
}

fn paired_exact(policy: GenBestPolicy) -> Result<(), String> {
    let conv = paired_scenario(EngineKind::Conventional, GenBestPolicy::BinaryRejection);
    let ta = paired_scenario(EngineKind::TrustAware, policy);
    for run in 0..200 {
        let mut a = Simulation::new(&conv, run).map_err(|e| e.to_string())?;
        let mut b = Simulation::new(&ta, run).map_err(|e| e.to_string())?;
        for t in 1..=conv.world.horizon {
            let (ma, mb) = (a.step(), b.step());
            let same_pos = a
                .agents()
                .iter()
                .zip(b.agents())
                .all(|(x, y)| x.position == y.position);
            if ma.map_err(|e| e.to_string())? != mb.map_err(|e| e.to_string())? || !same_pos {
                return Err(format!("run {run} diverges at t={t}"));
            }
        }
    }
    Ok(())
}

/// Stochastic filtering may skip the best report, so only the statistics agree.
fn paired_stochastic() -> Result<String, String> {
    let conv = paired_scenario(EngineKind::Conventional, GenBestPolicy::BinaryRejection);
    let ta = paired_scenario(EngineKind::TrustAware, GenBestPolicy::StochasticFiltering);
    let diffs: Vec<f64> = (0..RUNS as u64)
        .map(|run| {
            let a = run_single(&conv, run)?;
            let b = run_single(&ta, run)?;
            Ok(b.last().unwrap().mean_honest_distance - a.last().unwrap().mean_honest_distance)
        })
        .collect::<swarmtrust_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    let detail = format!("paired d(50) difference {mean:+.4} m, SE {se:.4}");
    if mean.abs() <= Z * se.max(1e-9) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_MASTER_SEED);
    let record = |r: &mut Report, id: &str, res: Result<String, String>| match res {
        Ok(d) => r.check(id, true, d),
        Err(d) => r.check(id, false, d),
    };
    let ok = |res: Result<(), String>, what: &str| res.map(|_| what.to_owned());

    let res = ok(
        trust_invariants(&mut rng),
        "200000 random updates, 5 long trajectories",
    );
    record(r, "7 trust bounds/monotonicity", res);
    let res = ok(velocity_clamp(&mut rng), "50000 random velocity updates");
    record(r, "7 velocity clamp", res);
    let res = ok(personal_best_monotone(), "60 runs x 50 iterations");
    record(r, "7 personal-best monotonicity", res);
    let res = ok(
        hyperbolic_matches_binary(&mut rng),
        "50000 random lists, equal trust",
    );
    record(r, "7 hyperbolic == binary argmin", res);
    let res = ok(pmf_checks(&mut rng), "10000 pmfs, 200000 filter draws");
    record(r, "7 filtering pmf/frequency", res);
    let res = ok(detector_frequencies(&mut rng), "4 branches x 200000 draws");
    record(r, "7 detector branch frequencies", res);
    for policy in [
        GenBestPolicy::BinaryRejection,
        GenBestPolicy::HyperbolicScaling,
    ] {
        let res = ok(paired_exact(policy), "200 runs identical step by step");
        record(r, &format!("7 paired runs {}", policy.name()), res);
    }
    record(r, "7 paired runs stochastic", paired_stochastic());
}

fn cli_run(config: &Path, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_swarmtrust"))
        .args(["run", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--seed", "7", "--runs", "200"])
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    std::fs::read(out.join("determinism.csv")).map_err(|e| e.to_string())
}

fn criterion_8(r: &mut Report) {
    let scenario = Scenario {
        name: "determinism".into(),
        engine: EngineKind::TrustAware,
        policy: GenBestPolicy::StochasticFiltering,
        attack: AttackSpec::new(AttackModel::ExtraDistanceError, 0.5),
        runs: 200,
        ..Scenario::default()
    };
    let a = run_scenario(&scenario).map(|t| t.to_csv());
    let b = run_scenario(&scenario).map(|t| t.to_csv());
    let same = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    r.check(
        "8 determinism library",
        same,
        "same scenario twice, CSV text compared",
    );

    let dir = tempfile::tempdir().expect("temp dir");
    let config = dir.path().join("determinism.json");
    std::fs::write(
        &config,
        r#"{"name": "determinism", "engine": "trust-aware", "policy": "hyperbolic",
            "attack_model": "biased-distance", "attack_rate": 0.1}"#,
    )
    .expect("write config");
    let first = cli_run(&config, &dir.path().join("a"));
    let second = cli_run(&config, &dir.path().join("b"));
    match (first, second) {
        (Ok(x), Ok(y)) => r.check(
            "8 determinism cli",
            x == y && !x.is_empty(),
            format!("two invocations, {} bytes each", x.len()),
        ),
        (Err(e), _) | (_, Err(e)) => r.check("8 determinism cli", false, e),
    }
}

fn main() {
    let mut r = Report {
        failed: 0,
        total: 0,
    };
    let run = |fig| {
        let plan = figure_plan(fig, RUNS, DEFAULT_MASTER_SEED);
        run_figure(&plan, None).expect("figure run")
    };

    let fig2 = run(Figure::Fig2);
    let baseline = criteria_1_2(&mut r, &fig2);
    let fig3 = run(Figure::Fig3);
    criteria_3_4(&mut r, &fig3);
    let fig4 = run(Figure::Fig4);
    criteria_5_6(&mut r, &fig4, baseline);
    criterion_7(&mut r);
    criterion_8(&mut r);

    println!(
        "\nacceptance: {} checks, {} passed, {} failed",
        r.total,
        r.total - r.failed,
        r.failed
    );
    if r.failed > 0 {
        std::process::exit(1);
    }
}
