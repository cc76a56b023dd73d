//! Sliding time window with trapezoidal integration.

use std::collections::VecDeque;

/// Timestamped samples covering at most `span` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeWindow {
    span: f64,
    samples: VecDeque<(f64, f64)>,
}

impl TimeWindow {
    pub fn new(span: f64) -> Self {
        assert!(span > 0.0, "window span must be positive");
        Self {
            span,
            samples: VecDeque::new(),
        }
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples.iter().copied()
    }

    /// Appends a sample. Timestamps must be strictly increasing.
    pub fn push(&mut self, t: f64, value: f64) {
        if let Some(&(last, _)) = self.samples.back() {
            assert!(t > last, "window timestamps must increase ({t} after {last})");
        }
        self.samples.push_back((t, value));
        let horizon = t - self.span - 1e-9;
        while self.samples.front().is_some_and(|&(ts, _)| ts < horizon) {
            self.samples.pop_front();
        }
    }

    /// Integral over the stored samples, rescaled to the full span while the
    /// window is still warming up. `None` when empty.
    pub fn integral(&self) -> Option<f64> {
        self.integral_of(|v| v)
    }

    /// Like [`integral`](Self::integral) with `f` applied to every sample.
    pub fn integral_of(&self, f: impl Fn(f64) -> f64) -> Option<f64> {
        let (&(t0, v0), &(t1, _)) = (self.samples.front()?, self.samples.back()?);
        let covered = t1 - t0;
        if covered <= 0.0 {
            return Some(f(v0) * self.span);
        }
        let area: f64 = self
            .samples
            .iter()
            .zip(self.samples.iter().skip(1))
            .map(|(&(ta, va), &(tb, vb))| 0.5 * (f(va) + f(vb)) * (tb - ta))
            .sum();
        if covered + 1e-9 < self.span {
            Some(area * self.span / covered)
        } else {
            Some(area)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_over_full_window() {
        let mut w = TimeWindow::new(10.0);
        for k in 0..=200 {
            w.push(k as f64 * 0.1, 2.0);
        }
        assert!((w.integral().unwrap() - 20.0).abs() < 1e-9);
        assert!(w.len() <= 102);
    }

    #[test]
    fn warm_up_is_scaled() {
        let mut w = TimeWindow::new(10.0);
        assert_eq!(w.integral(), None);
        w.push(0.0, 3.0);
        assert_eq!(w.integral(), Some(30.0));
        w.push(1.0, 3.0);
        assert!((w.integral().unwrap() - 30.0).abs() < 1e-12);
    }

    #[test]
    fn linear_integrand_is_exact() {
        let mut w = TimeWindow::new(4.0);
        for k in 0..=40 {
            let t = k as f64 * 0.1;
            w.push(t, t);
        }
        assert!((w.integral().unwrap() - 8.0).abs() < 1e-9);
    }

    #[test]
    #[should_panic]
    fn rejects_non_increasing_time() {
        let mut w = TimeWindow::new(1.0);
        w.push(1.0, 0.0);
        w.push(1.0, 0.0);
    }
}
