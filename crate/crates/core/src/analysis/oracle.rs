use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::{
    classify_domain, compute_thresholds, control_accel, ContinuousState, HighMode, LowMode, Mode, Q4Law,
};
use crate::params::VehicleParams;

/// Grid of initial states and stepping controls of the brake oracle.
///
/// States are spanned by own speed and leader speed, both in `[0, v_max]`,
/// and by the gap from the emergency distance of that state to `gap_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleGrid {
    pub gap_max: f64,
    pub gap_points: usize,
    pub own_speed_points: usize,
    pub leader_speed_points: usize,
    /// Sub-grid points per axis around each refined state.
    pub refine: usize,
    /// Number of worst states that get a refined neighborhood.
    pub refine_worst: usize,
    /// States whose minimum gap is within this margin of `s` are candidates
    /// for refinement.
    pub near_margin: f64,
    pub dt: f64,
    pub horizon: f64,
    pub q4: Q4Law,
    /// Locate the onset of full braking inside a step.
    pub locate_braking: bool,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            gap_max: 600.0,
            gap_points: 25,
            own_speed_points: 25,
            leader_speed_points: 25,
            refine: 5,
            refine_worst: 64,
            near_margin: 0.5,
            dt: 0.01,
            horizon: 120.0,
            q4: Q4Law::Corrected,
            locate_braking: true,
        }
    }
}

impl OracleGrid {
    pub fn states(&self) -> usize {
        self.gap_points * self.own_speed_points * self.leader_speed_points
    }
}

/// Outcome of one worst-case braking trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleCase {
    pub initial: [f64; 3],
    pub min_gap: f64,
    pub final_gap: f64,
    /// Steps in which the follower was in the unsafe domain (and braked fully).
    pub unsafe_steps: u32,
    /// Both vehicles ended at rest exactly at the collision distance.
    pub stationary_equality: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrakeOracleResult {
    pub alpha: f64,
    pub grid: OracleGrid,
    pub states: usize,
    pub refined_states: usize,
    pub min_gap: f64,
    pub worst: Option<OracleCase>,
    pub violation_count: usize,
    /// First violating cases (at most 32), worst first.
    pub violations: Vec<OracleCase>,
    pub stationary_equalities: usize,
    pub unsafe_steps: u64,
}

impl BrakeOracleResult {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| if n == 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 })
}

/// Emergency distance of the state with the given speeds.
fn emergency_gap(own: f64, leader: f64, p: &VehicleParams) -> f64 {
    let x = ContinuousState::longitudinal(1.0, leader - own, leader);
    compute_thresholds(&x, p, 1.0).emergency
}

/// Runs the grid at flow factor `alpha`, then refines around the worst
/// near-violations.
pub fn worst_case_brake_oracle(grid: &OracleGrid, p: &VehicleParams, alpha: f64) -> BrakeOracleResult {
    let mut initial = Vec::with_capacity(grid.states());
    for own in linspace(0.0, p.v_max, grid.own_speed_points) {
        for lead in linspace(0.0, p.v_max, grid.leader_speed_points) {
            let e = emergency_gap(own, lead, p);
            for gap in linspace(e, grid.gap_max.max(e), grid.gap_points) {
                initial.push([gap, lead - own, lead]);
            }
        }
    }
    let mut cases: Vec<OracleCase> = initial
        .par_iter()
        .map(|&[x1, x2, x3]| simulate_brake(ContinuousState::longitudinal(x1, x2, x3), p, alpha, grid))
        .collect();

    let s = p.s();
    let mut near: Vec<&OracleCase> = cases.iter().filter(|c| c.min_gap < s + grid.near_margin).collect();
    near.sort_by(|a, b| a.min_gap.total_cmp(&b.min_gap));
    near.truncate(grid.refine_worst);
    let d_speed = p.v_max / (grid.own_speed_points.max(2) - 1) as f64;
    let d_lead = p.v_max / (grid.leader_speed_points.max(2) - 1) as f64;
    let mut refined = Vec::new();
    for c in near {
        let [x1, x2, x3] = c.initial;
        let own = x3 - x2;
        for o in linspace(own - 0.5 * d_speed, own + 0.5 * d_speed, grid.refine) {
            for l in linspace(x3 - 0.5 * d_lead, x3 + 0.5 * d_lead, grid.refine) {
                if !(0.0..=p.v_max).contains(&o) || !(0.0..=p.v_max).contains(&l) {
                    continue;
                }
                let e = emergency_gap(o, l, p);
                let d_gap = (grid.gap_max - e) / (grid.gap_points.max(2) - 1) as f64;
                let lo = (x1 - 0.5 * d_gap).max(e);
                for g in linspace(lo, (x1 + 0.5 * d_gap).max(lo), grid.refine) {
                    refined.push([g, l - o, l]);
                }
            }
        }
    }
    let refined_cases: Vec<OracleCase> = refined
        .par_iter()
        .map(|&[x1, x2, x3]| simulate_brake(ContinuousState::longitudinal(x1, x2, x3), p, alpha, grid))
        .collect();
    let refined_states = refined_cases.len();
    cases.extend(refined_cases);

    let states = cases.len();
    let worst = cases.iter().copied().min_by(|a, b| a.min_gap.total_cmp(&b.min_gap));
    let mut violations: Vec<OracleCase> = cases.iter().copied().filter(|c| !c.passed).collect();
    violations.sort_by(|a, b| a.min_gap.total_cmp(&b.min_gap));
    let violation_count = violations.len();
    violations.truncate(32);
    BrakeOracleResult {
        alpha,
        grid: *grid,
        states,
        refined_states,
        min_gap: worst.map_or(f64::INFINITY, |w| w.min_gap),
        worst,
        violation_count,
        violations,
        stationary_equalities: cases.iter().filter(|c| c.stationary_equality).count(),
        unsafe_steps: cases.iter().map(|c| u64::from(c.unsafe_steps)).sum(),
    }
}

/// Position travelled and final speed over `tau` from speed `v` under
/// constant acceleration `a`, stopping at 0 and saturating at `v_max`.
fn travel(v: f64, a: f64, tau: f64, v_max: f64) -> (f64, f64) {
    if a < 0.0 {
        let stop = v / -a;
        if stop <= tau {
            return (v * stop + 0.5 * a * stop * stop, 0.0);
        }
    } else if a > 0.0 {
        let cap = (v_max - v).max(0.0) / a;
        if cap <= tau {
            return (v * cap + 0.5 * a * cap * cap + v_max * (tau - cap), v_max);
        }
    }
    (v * tau + 0.5 * a * tau * tau, v + a * tau)
}

/// Gap and speeds after `tau` of one constant-control segment, and the
/// smallest gap inside it.
fn segment(gap: f64, lead: f64, own: f64, u: f64, tau: f64, p: &VehicleParams) -> (f64, f64, f64, f64) {
    let a = p.a_max;
    let gap_at = |t: f64| gap + travel(lead, -a, t, p.v_max).0 - travel(own, u, t, p.v_max).0;
    // The gap is piecewise quadratic with kinks where a speed crosses the
    // other or reaches zero; its minimum lies at one of these instants.
    let mut candidates = [tau, f64::NAN, lead / a, f64::NAN];
    if u + a != 0.0 {
        candidates[1] = (lead - own) / (u + a);
    }
    if u < 0.0 {
        candidates[3] = own / -u;
    }
    let min_gap = candidates
        .into_iter()
        .filter(|&t| t > 0.0 && t <= tau)
        .map(gap_at)
        .fold(gap, f64::min);
    (
        gap_at(tau),
        travel(lead, -a, tau, p.v_max).1,
        travel(own, u, tau, p.v_max).1,
        min_gap,
    )
}

fn brakes_fully(low: LowMode) -> bool {
    matches!(low, LowMode::Danger | LowMode::Unsafe)
}

/// Leader brakes at `-a_max` to standstill while the follower runs the
/// automaton in lane-keeping mode with a fixed flow factor. Kinematics are
/// exact under zero-order hold. With `grid.locate_braking` a step that ends
/// in a full-braking domain is split at the first instant the trajectory
/// enters it, so the onset of braking is not delayed to the next step.
pub fn simulate_brake(x0: ContinuousState, p: &VehicleParams, alpha: f64, grid: &OracleGrid) -> OracleCase {
    let a = p.a_max;
    let mut gap = x0.gap;
    let mut lead = x0.leader_speed;
    let mut own = x0.own_speed();
    let mut min_gap = gap;
    let mut unsafe_steps = 0u32;
    let classify = |gap: f64, lead: f64, own: f64| {
        let x = ContinuousState::longitudinal(gap, lead - own, lead);
        (x, classify_domain(&x, &compute_thresholds(&x, p, alpha)))
    };
    let steps = (grid.horizon / grid.dt).ceil() as usize;
    for _ in 0..steps {
        if lead == 0.0 && own == 0.0 {
            break;
        }
        let (x, low) = classify(gap, lead, own);
        let u = if low == LowMode::Unsafe {
            unsafe_steps += 1;
            -a
        } else {
            control_accel(Mode::new(HighMode::R, low), &x, p, grid.q4).expect("safe mode has a law")
        };
        let dt = grid.dt;
        let mut end = segment(gap, lead, own, u, dt, p);
        if grid.locate_braking && !brakes_fully(low) && u > -a && brakes_fully(classify(end.0, end.1, end.2).1) {
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..48 {
                let mid = 0.5 * (lo + hi);
                let (g, l, o, _) = segment(gap, lead, own, u, mid, p);
                if brakes_fully(classify(g, l, o).1) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let first = segment(gap, lead, own, u, hi, p);
            let rest = segment(first.0, first.1, first.2, -a, dt - hi, p);
            end = (rest.0, rest.1, rest.2, first.3.min(rest.3));
        }
        (gap, lead, own) = (end.0, end.1, end.2);
        min_gap = min_gap.min(end.3);
    }
    let s = p.s();
    let at_rest = lead == 0.0 && own == 0.0;
    OracleCase {
        initial: [x0.gap, x0.rel_speed, x0.leader_speed],
        min_gap,
        final_gap: gap,
        unsafe_steps,
        stationary_equality: at_rest && (gap - s).abs() <= 1e-6,
        passed: min_gap > s - 1e-6,
    }
}
