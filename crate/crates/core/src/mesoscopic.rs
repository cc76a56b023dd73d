//! Variance-driven time headways: the flow factor `alpha_T` derived from the
//! spread of speeds ahead.

use crate::params::VehicleParams;
use crate::window::TimeWindow;

/// Population standard deviation over mean; 0 for an empty set or zero mean.
pub fn variation_coefficient(speeds: &[f64]) -> f64 {
    if speeds.is_empty() {
        return 0.0;
    }
    let n = speeds.len() as f64;
    let mean = speeds.iter().sum::<f64>() / n;
    if mean <= 0.0 {
        return 0.0;
    }
    let var = speeds.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt() / mean
}

/// `gamma` times the windowed integral of the signed variation coefficient.
pub fn z_value(samples: &TimeWindow, gamma: f64) -> f64 {
    gamma * samples.integral().unwrap_or(0.0)
}

pub fn alpha_t(z: f64, min: f64, max: f64) -> f64 {
    (1.0 + z).clamp(min, max)
}

/// Running flow factor of one lane as seen from one vehicle.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowStatistic {
    pub alpha: f64,
    pub z: f64,
    pub variation: f64,
    samples: TimeWindow,
}

impl FlowStatistic {
    pub fn new(window: f64) -> Self {
        Self {
            alpha: 1.0,
            z: 0.0,
            variation: 0.0,
            samples: TimeWindow::new(window),
        }
    }

    /// Adds the sample at time `t` from the speeds of the vehicles ahead and
    /// the observer's own speed, then refreshes `alpha`.
    pub fn update(&mut self, t: f64, ahead: &[f64], own_speed: f64, p: &VehicleParams) -> f64 {
        self.variation = variation_coefficient(ahead);
        let signed = if ahead.is_empty() {
            0.0
        } else {
            let mean = ahead.iter().sum::<f64>() / ahead.len() as f64;
            self.variation * crate::automaton::sign(own_speed - mean)
        };
        self.samples.push(t, signed);
        self.z = z_value(&self.samples, p.gamma);
        self.alpha = alpha_t(self.z, p.alpha_t_min, p.alpha_t_max);
        self.alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variation_examples() {
        assert!((variation_coefficient(&[20.0, 30.0]) - 0.2).abs() < 1e-12);
        assert_eq!(variation_coefficient(&[25.0, 25.0, 25.0]), 0.0);
        assert_eq!(variation_coefficient(&[17.0]), 0.0);
        assert_eq!(variation_coefficient(&[]), 0.0);
        assert_eq!(variation_coefficient(&[0.0, 0.0]), 0.0);
    }

    fn window_of(value: f64) -> TimeWindow {
        let mut w = TimeWindow::new(10.0);
        for k in 0..=1000 {
            w.push(k as f64 * 0.01, value);
        }
        w
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_value(&window_of(0.0), 4.0), 0.0);
        assert!((z_value(&window_of(0.2), 4.0) - 8.0).abs() < 1e-9);
        assert!((z_value(&window_of(-0.2), 4.0) + 8.0).abs() < 1e-9);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_t(0.0, 0.2, 2.2), 1.0);
        assert_eq!(alpha_t(8.0, 0.2, 2.2), 2.2);
        assert_eq!(alpha_t(-8.0, 0.2, 2.2), 0.2);
        assert_eq!(alpha_t(0.5, 0.2, 2.2), 1.5);
    }

    #[test]
    fn singleton_ahead_set_keeps_alpha_neutral() {
        let p = VehicleParams::default();
        let mut f = FlowStatistic::new(p.window);
        for k in 0..500 {
            let t = k as f64 * 0.01;
            assert_eq!(f.update(t, &[18.0 + t], 30.0, &p), 1.0);
        }
    }

    #[test]
    fn faster_than_a_spread_platoon_raises_alpha() {
        let p = VehicleParams::default();
        let mut f = FlowStatistic::new(p.window);
        let mut alpha = 1.0;
        for k in 0..200 {
            alpha = f.update(k as f64 * 0.01, &[20.0, 30.0], 36.0, &p);
        }
        assert!(alpha > 1.0);
    }
}
