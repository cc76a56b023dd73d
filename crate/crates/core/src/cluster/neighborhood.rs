use crate::automaton::{HighMode, Lane};
use crate::maneuver::LaneGeometry;

/// Longitudinal and lateral state of one vehicle as seen by the others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub p: f64,
    pub v: f64,
    pub py: f64,
    pub vy: f64,
    pub phi: f64,
    pub high: HighMode,
}

impl Kinematics {
    pub fn lane(&self) -> Lane {
        self.high.lane()
    }

    /// Lanes physically occupied. A changing vehicle counts in both lanes
    /// while it is within half a lane spacing of the separation line.
    pub fn occupies(&self, lane: Lane, g: &LaneGeometry) -> bool {
        if self.lane() == lane {
            return true;
        }
        self.high.is_lane_changing() && (self.py - g.y_sep).abs() < 0.5 * g.lane_spacing()
    }
}

/// Indices of the relevant neighbors of one vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Neighborhood {
    /// Closest vehicle strictly ahead in the own lane.
    pub m: Option<usize>,
    /// Closest vehicle strictly behind in the other lane.
    pub i: Option<usize>,
    /// Closest vehicle ahead (or level) in the other lane.
    pub j: Option<usize>,
}

/// Neighbors of vehicle `n` at position `p_n` in `lane`, among `snap`,
/// within `radius`. Ties go to the lower index.
pub fn neighborhood(snap: &[Kinematics], n: usize, p_n: f64, lane: Lane, radius: f64) -> Neighborhood {
    let mut out = Neighborhood::default();
    let mut best = [f64::INFINITY; 3];
    for (k, other) in snap.iter().enumerate() {
        if k == n {
            continue;
        }
        let d = other.p - p_n;
        if d.abs() > radius {
            continue;
        }
        let (slot, dist) = if other.lane() == lane {
            if d <= 0.0 {
                continue;
            }
            (0, d)
        } else if d >= 0.0 {
            (2, d)
        } else {
            (1, -d)
        };
        if dist < best[slot] {
            best[slot] = dist;
            let target = match slot {
                0 => &mut out.m,
                1 => &mut out.i,
                _ => &mut out.j,
            };
            *target = Some(k);
        }
    }
    out
}

/// The vehicle a follower reacts to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leader {
    /// No real leader in range: a virtual one far ahead at the desired speed.
    Fictitious,
    Vehicle(usize),
}

/// Picks the closer of `m` and a lane-changing `j`.
///
/// A lane-changing `j` is also taken when the own lane is empty ahead, so a
/// vehicle merging in front of an unobstructed follower is still seen. `j`
/// level with `n` (zero gap) is never a leader.
pub fn resolve_leader(snap: &[Kinematics], n: usize, p_n: f64, lane: Lane, radius: f64) -> Leader {
    let nb = neighborhood(snap, n, p_n, lane, radius);
    let merging = nb
        .j
        .filter(|&j| snap[j].high.is_lane_changing() && snap[j].p - p_n > 0.0);
    match (nb.m, merging) {
        (Some(m), Some(j)) if snap[j].p < snap[m].p => Leader::Vehicle(j),
        (Some(m), _) => Leader::Vehicle(m),
        (None, Some(j)) => Leader::Vehicle(j),
        (None, None) => Leader::Fictitious,
    }
}

/// Pairs `(a, b, |p_a - p_b|)` sharing a lane with distance at most `s`.
pub fn collision_check(snap: &[Kinematics], s: &[f64], g: &LaneGeometry) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for a in 0..snap.len() {
        for b in a + 1..snap.len() {
            let shared = [Lane::Right, Lane::Left]
                .into_iter()
                .any(|lane| snap[a].occupies(lane, g) && snap[b].occupies(lane, g));
            let gap = (snap[a].p - snap[b].p).abs();
            if shared && gap <= s[a].max(s[b]) {
                out.push((a, b, gap));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kin(p: f64, high: HighMode) -> Kinematics {
        let py = if high.lane() == Lane::Right { 2.0 } else { 7.0 };
        Kinematics {
            p,
            v: 20.0,
            py,
            vy: 0.0,
            phi: 0.0,
            high,
        }
    }

    #[test]
    fn figure_one_configuration() {
        let snap = [
            kin(0.0, HighMode::R),
            kin(50.0, HighMode::R),
            kin(-20.0, HighMode::L),
            kin(30.0, HighMode::L),
        ];
        let nb = neighborhood(&snap, 0, 0.0, Lane::Right, 500.0);
        assert_eq!(nb, Neighborhood { m: Some(1), i: Some(2), j: Some(3) });
    }

    #[test]
    fn lone_vehicle_has_no_neighbors() {
        let snap = [kin(0.0, HighMode::R)];
        assert_eq!(neighborhood(&snap, 0, 0.0, Lane::Right, 500.0), Neighborhood::default());
        assert_eq!(resolve_leader(&snap, 0, 0.0, Lane::Right, 500.0), Leader::Fictitious);
    }

    #[test]
    fn radius_is_inclusive() {
        let snap = [kin(0.0, HighMode::R), kin(501.0, HighMode::R)];
        assert_eq!(neighborhood(&snap, 0, 0.0, Lane::Right, 500.0).m, None);
        let snap = [kin(0.0, HighMode::R), kin(500.0, HighMode::R)];
        assert_eq!(neighborhood(&snap, 0, 0.0, Lane::Right, 500.0).m, Some(1));
    }

    #[test]
    fn leader_resolution_examples() {
        let changing = [kin(0.0, HighMode::L), kin(40.0, HighMode::L), kin(30.0, HighMode::R2l)];
        assert_eq!(resolve_leader(&changing, 0, 0.0, Lane::Left, 500.0), Leader::Vehicle(2));
        let keeping = [kin(0.0, HighMode::L), kin(40.0, HighMode::L), kin(30.0, HighMode::R)];
        assert_eq!(resolve_leader(&keeping, 0, 0.0, Lane::Left, 500.0), Leader::Vehicle(1));
    }

    #[test]
    fn collision_boundary() {
        let g = LaneGeometry::default();
        let s = [5.0, 5.0];
        let snap = [kin(0.0, HighMode::R), kin(5.0, HighMode::R)];
        assert_eq!(collision_check(&snap, &s, &g).len(), 1);
        let snap = [kin(0.0, HighMode::R), kin(5.01, HighMode::R)];
        assert!(collision_check(&snap, &s, &g).is_empty());
        let snap = [kin(0.0, HighMode::R), kin(3.0, HighMode::L)];
        assert!(collision_check(&snap, &s, &g).is_empty());
    }

    #[test]
    fn changing_vehicle_occupies_both_lanes_near_separation() {
        let g = LaneGeometry::default();
        let mut k = kin(0.0, HighMode::R2l);
        k.py = 4.0;
        assert!(k.occupies(Lane::Left, &g) && k.occupies(Lane::Right, &g));
        k.py = 2.0;
        assert!(!k.occupies(Lane::Left, &g));
    }
}
