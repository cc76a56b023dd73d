//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mesoacc::analysis::{
    brake_suite, partition_suite, switch_suite, OracleGrid, SuiteReport, CHECK_ALPHAS,
    PARTITION_SAMPLES,
};
use mesoacc::automaton::{
    derivative, reset_lane_exit, reset_midline, reset_new_leader, ContinuousState, HighMode, LaneChange,
};
use mesoacc::cluster::{run, FiredEvent, RunOutput};
use mesoacc::scenario::{compare, trace_to_string, Scenario};
use mesoacc::VehicleParams;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn run_ok(sc: &Scenario) -> RunOutput {
    run(sc).unwrap_or_else(|e| panic!("scenario {} failed to run: {e}", sc.name))
}

fn c1_table2_no_collision() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for meso in [true, false] {
        let sc = Scenario::table2().with_mesoscopic(meso);
        let (out, took) = timed(|| run_ok(&sc));
        let s = &out.summary;
        let gap = s.min_same_lane_gap();
        let ok = s.collision_count == 0 && gap > 5.0 && took < Duration::from_secs(5);
        passed &= ok;
        parts.push(format!(
            "{}: {} collisions, min gap {:.3} m, {:.2} s",
            if meso { "meso" } else { "micro" },
            s.collision_count,
            gap,
            took.as_secs_f64()
        ));
    }
    Outcome::new(passed, parts.join("; "))
}

fn c2_anticipation() -> Outcome {
    let c = compare(&Scenario::table2()).expect("table2 runs");
    let v = c.vehicle(5).expect("vehicle 5");
    let (Some(meso), Some(micro)) = (v.onset_meso, v.onset_micro) else {
        return Outcome::new(false, format!("missing onset: meso {:?}, micro {:?}", v.onset_meso, v.onset_micro));
    };
    let passed = meso < micro && (meso - 45.0).abs() <= 5.0 && (micro - 55.0).abs() <= 5.0;
    Outcome::new(passed, format!("vehicle 5 onset meso {meso:.2} s, micro {micro:.2} s (targets 45 and 55, +-5)"))
}

fn c3_alpha_bounds() -> Outcome {
    let p = VehicleParams::default();
    let mut passed = true;
    let mut parts = Vec::new();
    for sc in [Scenario::table2(), Scenario::table3()] {
        let out = run_ok(&sc);
        let (lo, hi) = out
            .trace
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.alpha), hi.max(r.alpha)));
        let ok = lo >= p.alpha_t_min && hi <= p.alpha_t_max;
        passed &= ok;
        parts.push(format!("{}: alpha in [{lo:.3}, {hi:.3}]", sc.name));
        if sc.name == "table2" {
            let v2_fixed = out.trace.iter().filter(|r| r.id == 2).all(|r| r.alpha == 1.0);
            passed &= v2_fixed;
            parts.push(format!("vehicle 2 constant 1: {v2_fixed}"));
        }
    }
    Outcome::new(passed, parts.join("; "))
}

fn c4_oscillations() -> Outcome {
    let c = compare(&Scenario::table2()).expect("table2 runs");
    let v = c.vehicle(5).expect("vehicle 5");
    Outcome::new(
        v.sign_changes_meso <= v.sign_changes_micro,
        format!(
            "vehicle 5 acceleration sign changes: meso {}, micro {}",
            v.sign_changes_meso, v.sign_changes_micro
        ),
    )
}

fn c5_overtaking() -> Outcome {
    let sc = Scenario::table3();
    let out = run_ok(&sc);
    let recs: Vec<_> = out.trace.iter().filter(|r| r.id == 11).collect();
    let exit_t = recs
        .iter()
        .find(|r| r.events.contains(&FiredEvent::Exit(LaneChange::ToLeft)))
        .map(|r| r.t);
    let mut phases: Vec<HighMode> = Vec::new();
    for r in &recs {
        if phases.last() != Some(&r.hmode) {
            phases.push(r.hmode);
        }
    }
    let phases_ok = phases == [HighMode::R, HighMode::R2l, HighMode::L2l, HighMode::L];
    let (y0, y1) = (recs.first().map_or(f64::NAN, |r| r.py), recs.last().map_or(f64::NAN, |r| r.py));
    let lateral_ok = (y0 - 2.0).abs() < 1e-9 && (y1 - 7.0).abs() <= 0.05;
    let s = &out.summary;
    let unconverged: Vec<String> = s
        .vehicles
        .iter()
        .filter(|v| v.convergence_time.is_none())
        .map(|v| v.id.to_string())
        .collect();
    let passed = exit_t.is_some_and(|t| t > 20.0)
        && phases_ok
        && lateral_ok
        && s.collision_count == 0
        && unconverged.is_empty();
    let names: Vec<&str> = phases.iter().map(|h| h.as_str()).collect();
    Outcome::new(
        passed,
        format!(
            "exit at {}, phases {}, py {y0:.2} -> {y1:.2}, {} collisions, unconverged [{}]",
            exit_t.map_or("never".to_owned(), |t| format!("{t:.2} s")),
            names.join(">"),
            s.collision_count,
            unconverged.join(",")
        ),
    )
}

fn c6_partition() -> Outcome {
    let report = partition_suite(0x5eed, PARTITION_SAMPLES);
    Outcome::new(report.passed(), report.headline())
}

fn c7_brake_oracle() -> Outcome {
    let grid = OracleGrid::default();
    let (report, took) = timed(|| brake_suite(&grid));
    let SuiteReport::Brake { runs, .. } = &report else {
        unreachable!()
    };
    let enough = grid.states() >= 15_625 && runs.len() == CHECK_ALPHAS.len();
    let fast = took < Duration::from_secs(60);
    let mut detail = format!("{}; {:.1} s", report.headline(), took.as_secs_f64());
    if let Some(w) = runs.iter().filter_map(|r| r.worst).min_by(|a, b| a.min_gap.total_cmp(&b.min_gap)) {
        detail += &format!("; worst start (x1, x2, x3) = {:?}", w.initial);
    }
    Outcome::new(report.passed() && enough && fast, detail)
}

fn c8_determinism() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for sc in [Scenario::table2(), Scenario::table3()] {
        let a = trace_to_string(&run_ok(&sc).trace);
        let b = trace_to_string(&run_ok(&sc).trace);
        passed &= a == b;
        parts.push(format!("{}: {} bytes, identical {}", sc.name, a.len(), a == b));
    }
    Outcome::new(passed, parts.join("; "))
}

fn c9_non_zeno() -> Outcome {
    let report = switch_suite().expect("bundled scenarios run");
    Outcome::new(report.passed(), report.headline())
}

fn c10_reset_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let p = VehicleParams::default();
    let (mut momentum, mut round_trip, mut new_leader) = (0.0f64, 0.0f64, 0.0f64);
    let cases = 100_000;
    for _ in 0..cases {
        let own = rng.random_range(0.0..=p.v_max);
        let lead = rng.random_range(0.0..=p.v_max);
        let x = ContinuousState {
            lateral_pos: 2.0,
            ..ContinuousState::longitudinal(rng.random_range(1.0..600.0), lead - own, lead)
        };

        let lateral = rng.random_range(-5.0..5.0);
        let mid = ContinuousState {
            lateral_speed: lateral,
            ..x
        };
        let after = reset_midline(&mid);
        let lhs = (after.leader_speed - after.rel_speed).powi(2);
        let rhs = (mid.leader_speed - mid.rel_speed).powi(2) + lateral * lateral;
        momentum = momentum.max((lhs - rhs).abs());

        let dir = if rng.random_bool(0.5) {
            LaneChange::ToLeft
        } else {
            LaneChange::ToRight
        };
        let mut y = reset_lane_exit(&x, &p, dir).expect("lane keeping state");
        // Free flight without control or leader disturbance.
        for _ in 0..50 {
            let dx = derivative(&y, 0.0, 0.0);
            let mut a = y.to_array();
            for (xi, di) in a.iter_mut().zip(dx) {
                *xi += 0.01 * di;
            }
            y = ContinuousState::from_array(a);
        }
        let back = reset_midline(&y);
        round_trip = round_trip.max((back.own_speed() - own).abs());

        let switched = reset_new_leader(&x, rng.random_range(0.1..500.0), rng.random_range(0.0..=p.v_max))
            .expect("positive gap");
        new_leader = new_leader.max((switched.own_speed() - own).abs());
    }
    let passed = momentum <= 1e-9 && round_trip <= 1e-9 && new_leader <= 1e-9;
    Outcome::new(
        passed,
        format!(
            "{cases} random states: momentum residual {momentum:.2e}, exit/midline speed drift {round_trip:.2e}, new-leader speed drift {new_leader:.2e}"
        ),
    )
}

fn c11_micro_equivalence() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for base in [Scenario::table2(), Scenario::table3()] {
        let off = base.clone().with_mesoscopic(false);
        let mut forced = off.clone();
        forced.flags.alpha_forced = Some(1.0);
        let a = trace_to_string(&run_ok(&off).trace);
        let b = trace_to_string(&run_ok(&forced).trace);
        passed &= a == b;
        parts.push(format!("{}: identical {}", base.name, a == b));
    }
    Outcome::new(passed, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Table 2 has no collision in either variant within 5 s", c1_table2_no_collision),
        ("mesoscopic headways advance the deceleration onset", c2_anticipation),
        ("flow factor stays within its saturation bounds", c3_alpha_bounds),
        ("mesoscopic run oscillates no more than the microscopic one", c4_oscillations),
        ("Table 3 overtaking maneuver", c5_overtaking),
        ("random states fall in exactly one domain", c6_partition),
        ("worst-case brake oracle keeps the gap above s", c7_brake_oracle),
        ("bundled traces are byte-identical across runs", c8_determinism),
        (
            "switch rate and edge conformance (limit per vehicle-second)",
            c9_non_zeno,
        ),
        ("reset algebra identities", c10_reset_algebra),
        ("microscopic run equals flow factor pinned to 1", c11_micro_equivalence),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let (outcome, took) = timed(check);
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {:>2}: {title} ({:.1} s)\n         {}",
            k + 1,
            took.as_secs_f64(),
            outcome.detail
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
