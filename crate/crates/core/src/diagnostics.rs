//! Invariant drift diagnostics.

/// Relative secular change `|slope| * T / |H0|` above which a run is classified as drifting.
pub const DRIFT_THRESHOLD: f64 = 1e-3;

/// Least-squares line `y = slope * x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantDrift {
    pub name: String,
    pub initial: f64,
    /// `max_n |I_n - I_0| / |I_0|` (absolute when `I_0 = 0`).
    pub max_relative_deviation: f64,
    /// Slope of the least-squares line through `I(t)`.
    pub slope: f64,
    /// `|slope| * T / |I_0|`.
    pub relative_drift: f64,
    pub drifting: bool,
}

fn scale_of(v0: f64) -> f64 {
    if v0 == 0.0 {
        1.0
    } else {
        v0.abs()
    }
}

/// Drift statistics of one invariant sampled at `times`.
pub fn invariant_drift(name: &str, times: &[f64], values: &[f64]) -> InvariantDrift {
    let v0 = values[0];
    let scale = scale_of(v0);
    let max_dev = values.iter().map(|v| (v - v0).abs()).fold(0.0, f64::max) / scale;
    let (slope, _) = linear_fit(times, values);
    let span = times[times.len() - 1] - times[0];
    let relative_drift = slope.abs() * span / scale;
    InvariantDrift {
        name: name.to_string(),
        initial: v0,
        max_relative_deviation: max_dev,
        slope,
        relative_drift,
        drifting: relative_drift > DRIFT_THRESHOLD,
    }
}
