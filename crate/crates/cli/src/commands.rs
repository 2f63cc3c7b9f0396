//! Single-run reports behind the `weight`, `game` and `bounds` subcommands.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use memweight_core::channel::{ChannelDescriptor, ChannelKind};
use memweight_core::games::{max_payoff_check, payoff_report, MaxPayoffCheck};
use memweight_core::sdp::SolveStatus;
use memweight_core::weight::{
    analytic_weight, bound_report, weight_sdp, AnalyticKind, BoundReport, Exactness, WeightOptions,
};

use crate::{load_channel, load_game, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub input: ChannelDescriptor,
    pub dim_in: usize,
    pub dim_out: usize,
    pub enforce_marginal: bool,
    pub value: f64,
    pub exactness: Exactness,
    /// `1 − Tr[W J_N]` for the returned witness.
    pub witness_objective: f64,
    pub witness_deviation: f64,
    pub status: SolveStatus,
    pub gap: f64,
    pub iterations: usize,
    pub wall_time_s: f64,
}

impl WeightReport {
    pub const CSV_HEADER: &'static str =
        "value,exactness,witness_objective,witness_deviation,status,gap,iterations,wall_time_s";

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{:.10},{},{:.10},{:.3e},{},{:.3e},{},{:.3}\n",
            Self::CSV_HEADER,
            self.value,
            exactness_str(self.exactness),
            self.witness_objective,
            self.witness_deviation,
            status_str(self.status),
            self.gap,
            self.iterations,
            self.wall_time_s
        )
    }
}

pub fn exactness_str(e: Exactness) -> &'static str {
    match e {
        Exactness::Exact => "exact",
        Exactness::PptLowerBound => "ppt_lower_bound",
    }
}

fn status_str(s: SolveStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| format!("{s:?}"))
}

pub fn weight(path: &Path, opts: WeightOptions) -> CliResult<WeightReport> {
    let (desc, n) = load_channel(path)?;
    let start = Instant::now();
    let r = weight_sdp(&n, opts)?;
    let witness_objective = 1.0 - r.witness.trace_with(n.choi().matrix());
    Ok(WeightReport {
        input: desc,
        dim_in: n.dim_in(),
        dim_out: n.dim_out(),
        enforce_marginal: opts.enforce_marginal,
        value: r.value,
        exactness: r.exactness,
        witness_objective,
        witness_deviation: (witness_objective - r.value).abs(),
        status: r.status,
        gap: r.gap,
        iterations: r.iterations,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GameRunReport {
    pub channel: ChannelDescriptor,
    pub payoff: f64,
    pub classical_max: f64,
    /// Exactness of `classical_max`, which optimizes over the PPT cone.
    pub exactness: Exactness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advantage_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub weight_check: MaxPayoffCheck,
    pub wall_time_s: f64,
}

pub fn game(channel: &Path, game: &Path) -> CliResult<GameRunReport> {
    let (desc, n) = load_channel(channel)?;
    let g = load_game(game)?;
    let start = Instant::now();
    let r = payoff_report(&n, &g)?;
    let warning = r.advantage_ratio.is_none().then(|| {
        "game is outside the classical-normalized set; advantage ratio omitted".to_string()
    });
    Ok(GameRunReport {
        channel: desc,
        payoff: r.payoff,
        classical_max: r.classical_max,
        exactness: Exactness::for_shape(n.shape()),
        advantage_ratio: r.advantage_ratio,
        warning,
        weight_check: max_payoff_check(&n)?,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsRunReport {
    pub channel: ChannelDescriptor,
    pub bounds: BoundReport,
    /// Lower bounds sit below the SDP value (checked only when exact).
    pub ordering_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    pub wall_time_s: f64,
}

fn analytic_for(desc: &ChannelDescriptor) -> Option<f64> {
    let kind = match desc.kind {
        ChannelKind::Depolarizing if desc.dim_in.unwrap_or(2) == 2 => AnalyticKind::Depolarizing,
        ChannelKind::Damping => AnalyticKind::Damping,
        ChannelKind::Erasure => AnalyticKind::Erasure,
        ChannelKind::Unitary => return Some(1.0),
        _ => return None,
    };
    analytic_weight(kind, desc.p?).ok()
}

pub fn bounds(path: &Path, opts: WeightOptions) -> CliResult<BoundsRunReport> {
    let (desc, n) = load_channel(path)?;
    let start = Instant::now();
    let b = bound_report(&n, analytic_for(&desc), opts)?;
    let notice = b.qubit_t_lower.is_none().then(|| {
        format!(
            "qubit_T bound skipped: needs a 2→2 channel, got {}→{}",
            n.dim_in(),
            n.dim_out()
        )
    });
    Ok(BoundsRunReport {
        channel: desc,
        ordering_ok: b.consistent(1e-6),
        bounds: b,
        notice,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
