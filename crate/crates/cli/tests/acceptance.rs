//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p hybridcp-cli --test acceptance -- --nocapture`
//! to see the report.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    binary_violations, brute_force_alldiff, check_fd_spec, check_instance, check_oracle,
    random_alldiff_domains, random_box, random_fd_spec, random_relation, random_trace,
    unary_violations, SoundnessReport, MAX_ULPS,
};
use hybridcp::fd::{alldiff, IntDomain};
use hybridcp::interval::{BinaryOp, UnaryOp};
use hybridcp::real::{bounds_of, update_bounds};
use hybridcp::{ContractStatus, ContractorRegistry, Model, RealTerm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Function, input bounds, expected status, expected output bounds.
type Vector = (
    &'static str,
    &'static [f64],
    ContractStatus,
    Option<&'static [f64]>,
);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn santa_claus() -> Outcome {
    let model = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/santa_claus.json");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hybridcp"))
        .arg("solve")
        .arg(&model)
        .arg("--json")
        .output()
        .expect("run hybridcp");
    let wall = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let Some(r) = text
        .lines()
        .last()
        .and_then(|l| serde_json::from_str::<serde_json::Value>(l).ok())
    else {
        return outcome(
            false,
            format!("no JSON record (exit {:?})", out.status.code()),
        );
    };
    let total = r["assignments"]["total cost"].as_i64();
    let mut prices: Vec<i64> = (0..3)
        .filter_map(|i| r["assignments"][format!("p2k[{i}]")].as_i64())
        .collect();
    prices.sort_unstable();
    let mid = |name: &str| {
        let b = &r["real_bounds"][name];
        (b[0].as_f64().unwrap_or(f64::NAN) + b[1].as_f64().unwrap_or(f64::NAN)) / 2.0
    };
    let (avg, dev) = (mid("average"), mid("average_deviation"));
    let pass = out.status.code() == Some(0)
        && r["status"] == "OPTIMAL"
        && total == Some(64)
        && prices == [17, 23, 24]
        && (avg - 21.333333).abs() <= 1e-4
        && (dev - 2.8888888888888866).abs() <= 1e-4
        && wall < Duration::from_secs(1);
    outcome(
        pass,
        format!("total {total:?}, prices {prices:?}, average {avg}, deviation {dev}, {wall:.1?}"),
    )
}

fn interval_containment() -> Outcome {
    let mut violations = 0;
    for (i, op) in UnaryOp::ALL.into_iter().enumerate() {
        violations += unary_violations(op, 100_000, 1_000 + i as u64);
    }
    for (i, op) in BinaryOp::ALL.into_iter().enumerate() {
        violations += binary_violations(op, 100_000, 2_000 + i as u64);
    }
    let data: serde_json::Value =
        serde_json::from_str(include_str!("../../core/tests/data/interval_oracle.json")).unwrap();
    let oracle = check_oracle(&data);
    outcome(
        violations == 0 && oracle.failures.is_empty() && oracle.worst_ulps <= MAX_ULPS,
        format!(
            "{} ops x 1e5 trials: {violations} violations; oracle {} cases, worst {} ulps, {} failures",
            UnaryOp::ALL.len() + BinaryOp::ALL.len(),
            oracle.cases,
            oracle.worst_ulps,
            oracle.failures.len()
        ),
    )
}

fn contract_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2013);
    let mut total = SoundnessReport::default();
    for _ in 0..200 {
        let arity = rng.gen_range(1..=3);
        let depth = rng.gen_range(1..=4);
        let r = random_relation(&mut rng, arity, depth);
        let input = random_box(&mut rng, arity);
        total.merge(&check_instance(&mut rng, &r, &input, 10_000));
    }
    outcome(
        total.violations() == 0,
        format!(
            "removed {}, FAIL with solution {}, ENTAILED violated {}, grew {}; witnesses {}; statuses {:?}",
            total.removed,
            total.fail_with_solution,
            total.entailed_violated,
            total.grew,
            total.witnesses,
            total.status
        ),
    )
}

fn status_vectors() -> Outcome {
    let cases: [Vector; 4] = [
        (
            "{0}<{1}",
            &[0.0, 1.0, 2.0, 3.0],
            ContractStatus::Entailed,
            Some(&[0.0, 1.0, 2.0, 3.0]),
        ),
        ("{0}={1}", &[0.0, 1.0, 2.0, 3.0], ContractStatus::Fail, None),
        (
            "{0}+{1}=10",
            &[0.0, 10.0, 0.0, 3.0],
            ContractStatus::Contract,
            Some(&[7.0, 10.0, 0.0, 3.0]),
        ),
        ("{0}={0}", &[1.0, 2.0], ContractStatus::Entailed, None),
    ];
    let mut reg = ContractorRegistry::new();
    let mut bad = Vec::new();
    for (f, bounds, status, expected) in cases {
        let id = reg.create_contractor(&[f], bounds.len() / 2).unwrap();
        let mut b = bounds.to_vec();
        let got = reg.contract(id, &mut b).unwrap();
        if got != status || expected.is_some_and(|e| e != b.as_slice()) {
            bad.push(format!("{f}: {} {b:?}", got.name()));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "4/4 vectors".into()
        } else {
            bad.join("; ")
        },
    )
}

fn fd_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1994);
    let mut failures = Vec::new();
    let mut sat = 0;
    for i in 0..100 {
        let spec = random_fd_spec(&mut rng);
        let obj = rng.gen_range(0..spec.domains.len());
        sat += !spec.brute_force().is_empty() as usize;
        if let Err(e) = check_fd_spec(&spec, obj) {
            failures.push(format!("model {i}: {e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 models ({sat} satisfiable), {} mismatches {}",
            failures.len(),
            failures.join("; ")
        ),
    )
}

fn alldifferent_ac() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1978);
    let mut bad = 0;
    let n = 5_000;
    for _ in 0..n {
        let doms = random_alldiff_domains(&mut rng);
        let input: Vec<IntDomain> = doms
            .iter()
            .map(|d| IntDomain::from_values(d.iter().copied()))
            .collect();
        let agree = match (alldiff::filter(&input), brute_force_alldiff(&doms)) {
            (Ok(got), Some(want)) => got == want,
            (Err(_), None) => true,
            _ => false,
        };
        bad += !agree as usize;
    }
    outcome(
        bad == 0,
        format!("{n} instances (n<=6, |dom|<=8), {bad} differ from enumeration"),
    )
}

fn backtrack_integrity() -> Outcome {
    let bad: usize = (0..300).map(|seed| random_trace(seed, 2_000)).sum();
    outcome(
        bad == 0,
        format!("300 traces x 2000 steps, {bad} snapshot mismatches"),
    )
}

fn view_rounding() -> Outcome {
    let mut m = Model::new();
    let x = m.int_var("x", 5, 24).unwrap();
    let y = m.int_var("y", 5, 5).unwrap();
    let r = m.real_var("r", 5.0, 24.0, 1e-4).unwrap();
    let mut st = m.store().clone();
    let view_ok = update_bounds(&mut st, RealTerm::View(x), 16.2, 23.7).is_ok()
        && (st.lb(x), st.ub(x)) == (17, 23)
        && bounds_of(&st, RealTerm::View(x)) == hybridcp::Interval::new(17.0, 23.0);
    let empty_ok = update_bounds(&mut st, RealTerm::View(y), 5.2, 5.9).is_err();
    let real_ok = update_bounds(&mut st, RealTerm::Var(r), 16.2, 23.7).is_ok()
        && st.real(r) == hybridcp::Interval::new(16.2, 23.7);
    outcome(
        view_ok && empty_ok && real_ok,
        format!(
            "view [17,23]: {view_ok}, view contradiction: {empty_ok}, real [16.2,23.7]: {real_ok}"
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("santa-claus-optimum", santa_claus),
        ("interval-containment", interval_containment),
        ("contract-soundness", contract_soundness),
        ("contract-status-vectors", status_vectors),
        ("fd-oracle-equivalence", fd_equivalence),
        ("alldifferent-arc-consistency", alldifferent_ac),
        ("backtrack-integrity", backtrack_integrity),
        ("view-rounding", view_rounding),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let o = run();
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
