use std::io::Write;

use crate::error::Result;
use crate::spectral::{homogeneous_sobolev_norm, sobolev_norm};

use super::decomposition::DecompositionState;

/// One sampled row of a run's energy diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub w_l2: f64,
    pub w_low_l2: f64,
    pub w_low_h1: f64,
    /// `||w_high||_{H^{1 - 2 kappa}}`.
    pub w_high_h: f64,
    pub lambda: f64,
    pub r_lambda: f64,
    pub noise_n: f64,
    /// Backward difference of `||w_low||^2` since the previous record.
    pub dlow_dt: Option<f64>,
}

impl DiagnosticRecord {
    pub fn new(
        state: &DecompositionState,
        kappa: f64,
        r_lambda: f64,
        noise_n: f64,
        prev: Option<&DiagnosticRecord>,
    ) -> Self {
        let w_low_l2 = state.w_low.l2_norm();
        let dlow_dt = prev.and_then(|p| {
            let dt = state.t - p.t;
            (dt > 0.0).then(|| (w_low_l2 * w_low_l2 - p.w_low_l2 * p.w_low_l2) / dt)
        });
        Self {
            t: state.t,
            w_l2: state.w.l2_norm(),
            w_low_l2,
            w_low_h1: homogeneous_sobolev_norm(&state.w_low, 1.0),
            w_high_h: sobolev_norm(&state.w_high, 1.0 - 2.0 * kappa),
            lambda: state.lambda,
            r_lambda,
            noise_n,
            dlow_dt,
        }
    }
}

pub fn write_trajectory_csv(records: &[DiagnosticRecord], out: impl Write) -> Result<()> {
    let mut out = out;
    writeln!(out, "# schema=1")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t", "w_l2", "w_low_l2", "w_low_h1", "w_high_h", "lambda", "r_lambda", "noise_n", "dlow_dt",
    ])?;
    for r in records {
        w.write_record([
            r.t.to_string(),
            r.w_l2.to_string(),
            r.w_low_l2.to_string(),
            r.w_low_h1.to_string(),
            r.w_high_h.to_string(),
            r.lambda.to_string(),
            r.r_lambda.to_string(),
            r.noise_n.to_string(),
            r.dlow_dt.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Envelope `e^{mu (t - T_i)} (2 ||w_low(T_i)||^2 + c3)` for the growth of
/// `||w_low||^2` on a schedule interval starting at `T_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallEnvelope {
    pub mu: f64,
    pub c3: f64,
}

impl GronwallEnvelope {
    pub fn bound(&self, t: f64, t_start: f64, low_sq_start: f64) -> f64 {
        (self.mu * (t - t_start)).exp() * (2.0 * low_sq_start + self.c3)
    }

    /// Smallest `c3 >= 0` that keeps every record below the envelope for a
    /// given `mu`. `stops` are the interval start times.
    pub fn fit(records: &[DiagnosticRecord], stops: &[f64], mu: f64) -> Self {
        let mut c3: f64 = 0.0;
        for_each_interval(records, stops, |start, r| {
            let need = r.w_low_l2.powi(2) * (-mu * (r.t - start.t)).exp() - 2.0 * start.w_low_l2.powi(2);
            c3 = c3.max(need);
        });
        Self { mu, c3 }
    }

    /// Records that lie above the envelope.
    pub fn violations(&self, records: &[DiagnosticRecord], stops: &[f64]) -> usize {
        let mut count = 0;
        for_each_interval(records, stops, |start, r| {
            if r.w_low_l2.powi(2) > self.bound(r.t, start.t, start.w_low_l2.powi(2)) {
                count += 1;
            }
        });
        count
    }
}

fn for_each_interval(
    records: &[DiagnosticRecord],
    stops: &[f64],
    mut visit: impl FnMut(&DiagnosticRecord, &DiagnosticRecord),
) {
    let mut start: Option<&DiagnosticRecord> = None;
    let mut interval = usize::MAX;
    for r in records {
        let idx = stops.partition_point(|&s| s <= r.t);
        if start.is_none() || idx != interval {
            start = Some(r);
            interval = idx;
        }
        visit(start.expect("set above"), r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64, low: f64) -> DiagnosticRecord {
        DiagnosticRecord {
            t,
            w_l2: low,
            w_low_l2: low,
            w_low_h1: 0.0,
            w_high_h: 0.0,
            lambda: 1.0,
            r_lambda: 0.0,
            noise_n: 1.0,
            dlow_dt: None,
        }
    }

    #[test]
    fn fitted_envelope_has_no_violations() {
        let records: Vec<_> = (0..20).map(|i| rec(i as f64 * 0.1, 1.0 + (i as f64 * 0.7).sin())).collect();
        let env = GronwallEnvelope::fit(&records, &[0.0, 1.05], 0.5);
        assert_eq!(env.violations(&records, &[0.0, 1.05]), 0);
        let tight = GronwallEnvelope { c3: env.c3 * 0.5 - 1.0, ..env };
        assert!(tight.violations(&records, &[0.0, 1.05]) > 0);
    }
}
