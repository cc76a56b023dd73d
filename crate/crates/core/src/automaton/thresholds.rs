use serde::{Deserialize, Serialize};

use super::{ContinuousState, LowMode, Mode};
use crate::params::VehicleParams;

/// Stopping-time headways, raw and scaled by the flow factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadwaySet {
    /// T_E = |x2| / a_max.
    pub emergency: f64,
    /// T_R = |x3 - x2| / a_max.
    pub risky: f64,
    /// T_S = lambda * T_R.
    pub safe: f64,
}

impl HeadwaySet {
    /// Scaled headways. The emergency headway is never scaled.
    pub fn scaled(&self, alpha_t: f64) -> HeadwaySet {
        HeadwaySet {
            emergency: self.emergency,
            risky: alpha_t * self.risky,
            safe: alpha_t * self.safe,
        }
    }
}

pub fn compute_headways(x: &ContinuousState, p: &VehicleParams) -> HeadwaySet {
    let own = (x.leader_speed - x.rel_speed).abs();
    HeadwaySet {
        emergency: x.rel_speed.abs() / p.a_max,
        risky: own / p.a_max,
        safe: p.lambda * own / p.a_max,
    }
}

/// Gap thresholds on x1 (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub emergency: f64,
    pub risky: f64,
    pub safe: f64,
    pub interaction: f64,
    pub approaching: f64,
}

/// Thresholds at flow factor `alpha_t` (1 in the microscopic model).
pub fn compute_thresholds(x: &ContinuousState, p: &VehicleParams, alpha_t: f64) -> ThresholdSet {
    let s = p.s();
    let raw = compute_headways(x, p);
    let h = raw.scaled(alpha_t);
    let x2 = x.rel_speed;
    let x3 = x.leader_speed;
    if x2 > 0.0 {
        let safe = s + p.c_s * h.safe * x3;
        ThresholdSet {
            emergency: s,
            risky: s + p.c_r * h.risky * x3,
            safe,
            interaction: safe,
            approaching: safe,
        }
    } else {
        let braking = 0.5 * p.a_max * h.emergency * h.emergency;
        let safe_core = s + p.c_s * h.safe * x3;
        ThresholdSet {
            emergency: s + braking,
            risky: s + p.c_r * h.risky * x3 + braking,
            safe: safe_core + braking,
            interaction: s + p.c_d * alpha_t * p.t_d * (x3 - x2),
            approaching: safe_core + p.c_c * (-x2).sqrt(),
        }
    }
}

/// Membership of `x` in the domain of low mode `w`.
///
/// With `relaxed` the strict inequalities on x1 become non-strict; this is
/// only used to place states that fall into a measure-zero seam between
/// domains.
pub fn in_domain(w: LowMode, x: &ContinuousState, th: &ThresholdSet, relaxed: bool) -> bool {
    let lt = |a: f64, b: f64| if relaxed { a <= b } else { a < b };
    let x1 = x.gap;
    let x2 = x.rel_speed;
    let ThresholdSet {
        emergency: e,
        risky: r,
        safe: s,
        interaction: d,
        approaching: c,
    } = *th;
    match w {
        LowMode::FreeDriving => (lt(s, x1) && x2 >= 0.0) || (lt(d.max(s), x1) && x2 < 0.0),
        LowMode::FollowingI => x2 < 0.0 && lt(s.max(c), x1) && x1 <= d,
        LowMode::FollowingII => {
            (x2 <= 0.0 && lt(s, x1) && lt(x1, d.min(c))) || (x2 > 0.0 && lt(r, x1) && x1 <= s)
        }
        LowMode::ClosingIn => (x2 <= 0.0 && lt(r, x1) && x1 <= s) || (x2 == 0.0 && x1 == r),
        LowMode::Danger => e <= x1 && x1 <= r && !(x2 == 0.0 && x1 == r),
        LowMode::Unsafe => lt(x1, e),
    }
}

/// Seam precedence, most critical first.
const PRECEDENCE: [LowMode; 6] = [
    LowMode::Unsafe,
    LowMode::Danger,
    LowMode::ClosingIn,
    LowMode::FollowingI,
    LowMode::FollowingII,
    LowMode::FreeDriving,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub mode: LowMode,
    /// Number of domains that literally contain the state.
    pub matches: u8,
}

impl Classification {
    pub fn resolved_by_precedence(&self) -> bool {
        self.matches != 1
    }
}

pub fn classify_detailed(x: &ContinuousState, th: &ThresholdSet) -> Classification {
    let mut matches = 0u8;
    let mut found = None;
    for w in LowMode::ALL {
        if in_domain(w, x, th, false) {
            matches += 1;
            found = Some(w);
        }
    }
    if matches == 1 {
        return Classification {
            mode: found.unwrap(),
            matches,
        };
    }
    let relaxed = matches == 0;
    let mode = PRECEDENCE
        .into_iter()
        .find(|&w| in_domain(w, x, th, relaxed))
        // Unreachable for finite input: the relaxed domains cover the half-line.
        .unwrap_or(LowMode::Unsafe);
    Classification { mode, matches }
}

pub fn classify_domain(x: &ContinuousState, th: &ThresholdSet) -> LowMode {
    classify_detailed(x, th).mode
}

/// True iff `mode` is admissible initially and `x` lies in its domain.
pub fn init_check(mode: Mode, x: &ContinuousState, th: &ThresholdSet) -> bool {
    mode.low != LowMode::Unsafe && in_domain(mode.low, x, th, false)
}
