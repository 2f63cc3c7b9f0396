//! Parameter sweeps over one-parameter channel families.

use rayon::prelude::*;
use serde::Serialize;

use memweight_core::channel::{ChannelDescriptor, ChannelKind};
use memweight_core::weight::{
    analytic_weight, lower_bound_eig, lower_bound_qubit_t, robustness_sdp, weight_sdp,
    AnalyticKind, Exactness, WeightOptions,
};

use crate::commands::exactness_str;
use crate::{CliError, CliResult};

pub const DEFAULT_STEP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Weight,
    Robustness,
    EigBound,
    #[value(name = "qubit-t-bound")]
    QubitTBound,
    Analytic,
}

pub const ALL_MEASURES: [Measure; 5] = [
    Measure::Weight,
    Measure::Robustness,
    Measure::EigBound,
    Measure::QubitTBound,
    Measure::Analytic,
];

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub channel_kind: ChannelKind,
    pub p_start: f64,
    pub p_end: f64,
    pub p_step: f64,
    pub measures: Vec<Measure>,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        let ok = 0.0 <= self.p_start
            && self.p_start <= self.p_end
            && self.p_end <= 1.0
            && self.p_step > 0.0
            && self.p_step.is_finite();
        if !ok {
            return Err(CliError::Input(format!(
                "need 0 ≤ start ≤ end ≤ 1 and step > 0, got start {} end {} step {}",
                self.p_start, self.p_end, self.p_step
            )));
        }
        if analytic_kind(self.channel_kind).is_none() {
            return Err(CliError::Input(format!(
                "{:?} is not a one-parameter family; use depolarizing, damping or erasure",
                self.channel_kind
            )));
        }
        Ok(())
    }

    /// Grid points `start + k·step`, rounded to 12 decimals so printed
    /// values do not carry accumulated binary noise.
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.p_end - self.p_start) / self.p_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| {
                let p = self.p_start + k as f64 * self.p_step;
                ((p * 1e12).round() / 1e12).min(1.0)
            })
            .collect()
    }

    fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

fn analytic_kind(kind: ChannelKind) -> Option<AnalyticKind> {
    match kind {
        ChannelKind::Depolarizing => Some(AnalyticKind::Depolarizing),
        ChannelKind::Damping => Some(AnalyticKind::Damping),
        ChannelKind::Erasure => Some(AnalyticKind::Erasure),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub weight_sdp: Option<f64>,
    pub analytic: Option<f64>,
    pub eig_bound: Option<f64>,
    #[serde(rename = "qubit_T_bound_clamped")]
    pub qubit_t_bound_clamped: Option<f64>,
    pub robustness: Option<f64>,
    pub exactness: Exactness,
    pub iterations: Option<usize>,
    pub gap: Option<f64>,
}

pub const CSV_HEADER: &str =
    "p,weight_sdp,analytic,eig_bound,qubit_T_bound_clamped,robustness,exactness";

fn row(spec: &SweepSpec, p: f64, opts: WeightOptions) -> CliResult<SweepRow> {
    let n = ChannelDescriptor::simple(spec.channel_kind, p).to_channel()?;
    let qubit = n.dim_in() == 2 && n.dim_out() == 2;
    let mut out = SweepRow {
        p,
        weight_sdp: None,
        analytic: None,
        eig_bound: None,
        qubit_t_bound_clamped: None,
        robustness: None,
        exactness: Exactness::for_shape(n.shape()),
        iterations: None,
        gap: None,
    };
    if spec.wants(Measure::Weight) {
        let w = weight_sdp(&n, opts)?;
        out.weight_sdp = Some(w.value);
        out.iterations = Some(w.iterations);
        out.gap = Some(w.gap);
    }
    if spec.wants(Measure::Analytic) {
        let kind = analytic_kind(spec.channel_kind).expect("validated");
        out.analytic = Some(analytic_weight(kind, p)?);
    }
    if spec.wants(Measure::EigBound) {
        out.eig_bound = Some(lower_bound_eig(&n));
    }
    if spec.wants(Measure::QubitTBound) && qubit {
        out.qubit_t_bound_clamped = Some(lower_bound_qubit_t(&n)?.clamped);
    }
    if spec.wants(Measure::Robustness) {
        out.robustness = Some(robustness_sdp(&n, opts.solver)?.value);
    }
    Ok(out)
}

/// Solves every grid point in parallel; rows come back in grid order.
pub fn run(spec: &SweepSpec, opts: WeightOptions) -> CliResult<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid()
        .into_par_iter()
        .map(|p| row(spec, p, opts))
        .collect()
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.10}")).unwrap_or_default()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{:.6},{},{},{},{},{},{}\n",
            r.p,
            cell(r.weight_sdp),
            cell(r.analytic),
            cell(r.eig_bound),
            cell(r.qubit_t_bound_clamped),
            cell(r.robustness),
            exactness_str(r.exactness)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: ChannelKind, step: f64) -> SweepSpec {
        SweepSpec {
            channel_kind: kind,
            p_start: 0.0,
            p_end: 1.0,
            p_step: step,
            measures: ALL_MEASURES.to_vec(),
        }
    }

    #[test]
    fn grid_endpoints() {
        let g = spec(ChannelKind::Depolarizing, 0.05).grid();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 1.0);
        assert_eq!(g[7], 0.35);
        assert_eq!(
            spec(ChannelKind::Depolarizing, DEFAULT_STEP).grid().len(),
            51
        );
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec(ChannelKind::Depolarizing, 0.1);
        s.p_end = 1.5;
        assert!(s.validate().is_err());
        let mut s = spec(ChannelKind::Depolarizing, 0.0);
        assert!(s.validate().is_err());
        s.p_step = 0.1;
        s.channel_kind = ChannelKind::Kraus;
        assert!(s.validate().is_err());
    }

    #[test]
    fn depolarizing_rows() {
        let rows = run(
            &spec(ChannelKind::Depolarizing, 0.25),
            WeightOptions::default(),
        )
        .unwrap();
        for r in &rows {
            let a = ((3.0 * r.p - 1.0) / 2.0).max(0.0);
            assert!((r.analytic.unwrap() - a).abs() < 1e-15);
            assert!((r.weight_sdp.unwrap() - a).abs() < 1e-6);
            assert!(r.qubit_t_bound_clamped.is_some());
        }
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn erasure_has_no_qubit_column() {
        let rows = run(&spec(ChannelKind::Erasure, 0.5), WeightOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.qubit_t_bound_clamped.is_none()));
        assert!(rows
            .iter()
            .all(|r| (r.weight_sdp.unwrap() - r.p).abs() < 1e-6));
    }
}
