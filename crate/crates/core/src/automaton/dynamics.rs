use super::ContinuousState;

/// Flow field f_q(x, d) for control input `u` and leader acceleration `d`.
pub fn derivative(x: &ContinuousState, u: f64, d: f64) -> [f64; 6] {
    let (sin, cos) = x.steering.sin_cos();
    [
        x.rel_speed,
        d - u * cos,
        d,
        x.lateral_speed,
        -u * sin,
        0.0,
    ]
}
