//! Verification suite: eleven numbered criteria with fixed seeds.
//!
//! Each criterion returns its largest measured deviation next to the
//! pass/fail verdict, so a run doubles as a record of the margins.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use memweight_core::channel::{
    apply_free_superchannel, depolarizing, erasure, identity_channel, maximal_replacement, mix,
    stochastic_damping, tensor, unitary, ChoiMatrix, QuantumChannel,
};
use memweight_core::games::{game_operator, payoff_choi, payoff_direct, Game};
use memweight_core::linalg::{
    hermitian_part, identity, ketbra, kron, max_eig_trace_bound_check, max_entangled,
    schmidt_max_overlap, ComplexMatrix, DensityOperator, HermitianOperator,
};
use memweight_core::random::{
    ginibre, haar_unitary, random_channel, random_density, random_free_superchannel,
    random_measure_prepare, seeded,
};
use memweight_core::weight::{
    analytic_weight, lower_bound_eig, lower_bound_qubit_t, robustness_sdp,
    tensor_subadditivity_bound, weight_sdp, AnalyticKind, WeightOptions, WeightResult,
};
use memweight_core::Result;

/// Threshold separating zero from positive weight in the regime scan. Not
/// affected by `--tol`.
pub const ZERO_WEIGHT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Deviations of solver values from closed forms, bounds and properties.
    pub deviation: f64,
    /// Replacement channel weight.
    pub replacement: f64,
    /// Algebraic identities with no solver in the loop.
    pub identity: f64,
    /// Qubit-T bound of the identity channel.
    pub qubit_t: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            deviation: 1e-6,
            replacement: 1e-8,
            identity: 1e-10,
            qubit_t: 1e-9,
        }
    }
}

impl Tolerances {
    /// Every deviation tolerance set to `t`; runtime limits and the
    /// zero-weight threshold stay fixed.
    pub fn uniform(t: f64) -> Self {
        Self {
            deviation: t,
            replacement: t,
            identity: t,
            qubit_t: t,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation measured against the criterion's tolerance.
    pub max_deviation: f64,
    pub checks: usize,
    pub elapsed_s: f64,
    pub note: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<28} max dev {:.3e} over {} checks ({:.2} s){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.max_deviation,
            self.checks,
            self.elapsed_s,
            if self.note.is_empty() {
                String::new()
            } else {
                format!("; {}", self.note)
            }
        )
    }
}

pub const CRITERIA: [(usize, &str); 11] = [
    (1, "depolarizing closed form"),
    (2, "erasure closed form"),
    (3, "unitary channels"),
    (4, "maximal replacement"),
    (5, "stochastic damping"),
    (6, "duality"),
    (7, "payoff identities"),
    (8, "bounds"),
    (9, "properties"),
    (10, "lemmas"),
    (11, "capacity regimes"),
];

struct Outcome {
    passed: bool,
    max_deviation: f64,
    checks: usize,
    note: String,
}

pub fn run_criterion(id: usize, tol: &Tolerances, opts: WeightOptions) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let start = Instant::now();
    let outcome = match id {
        1 => depolarizing_grid(tol, opts),
        2 => erasure_grid(tol, opts),
        3 => unitaries(tol, opts),
        4 => replacement(tol, opts),
        5 => damping(tol, opts),
        6 => duality(tol, opts),
        7 => payoffs(tol),
        8 => bounds(tol, opts),
        9 => properties(tol, opts),
        10 => lemmas(tol),
        11 => regimes(opts),
        _ => Err(memweight_core::Error::InvalidParameter(format!(
            "no criterion {id}"
        ))),
    };
    let elapsed = start.elapsed();
    let mut out = match outcome {
        Ok(o) => o,
        Err(e) => Outcome {
            passed: false,
            max_deviation: f64::NAN,
            checks: 0,
            note: format!("error: {e}"),
        },
    };
    if let Some(limit) = runtime_limit(id) {
        if elapsed > limit {
            out.passed = false;
            out.note = join(&out.note, &format!("runtime over {} s", limit.as_secs()));
        }
    }
    CriterionResult {
        id,
        name,
        passed: out.passed,
        max_deviation: out.max_deviation,
        checks: out.checks,
        elapsed_s: elapsed.as_secs_f64(),
        note: out.note,
    }
}

pub fn run_all(tol: &Tolerances, opts: WeightOptions) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, tol, opts))
        .collect()
}

fn runtime_limit(id: usize) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(5)),
        2 => Some(Duration::from_secs(10)),
        _ => None,
    }
}

fn join(a: &str, b: &str) -> String {
    if a.is_empty() {
        b.to_string()
    } else {
        format!("{a}; {b}")
    }
}

fn grid(step_count: usize) -> Vec<f64> {
    (0..=step_count)
        .map(|k| k as f64 / step_count as f64)
        .collect()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn weights(channels: &[QuantumChannel], opts: WeightOptions) -> Result<Vec<WeightResult>> {
    channels.par_iter().map(|n| weight_sdp(n, opts)).collect()
}

fn closed_form(
    channels: Vec<QuantumChannel>,
    ps: &[f64],
    kind: AnalyticKind,
    tol: f64,
    opts: WeightOptions,
) -> Result<Outcome> {
    let ws = weights(&channels, opts)?;
    let mut dev = 0.0;
    for (w, &p) in ws.iter().zip(ps) {
        dev = f64::max(dev, (w.value - analytic_weight(kind, p)?).abs());
    }
    Ok(Outcome {
        passed: dev <= tol,
        max_deviation: dev,
        checks: ps.len(),
        note: String::new(),
    })
}

fn depolarizing_channels(ps: &[f64]) -> Result<Vec<QuantumChannel>> {
    ps.iter().map(|&p| depolarizing(2, p)).collect()
}

fn depolarizing_grid(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let ps = grid(20);
    closed_form(
        depolarizing_channels(&ps)?,
        &ps,
        AnalyticKind::Depolarizing,
        tol.deviation,
        opts,
    )
}

fn erasure_grid(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let ps = grid(10);
    let ns = ps.iter().map(|&p| erasure(p)).collect::<Result<Vec<_>>>()?;
    closed_form(ns, &ps, AnalyticKind::Erasure, tol.deviation, opts)
}

fn haar_unitaries() -> Result<Vec<QuantumChannel>> {
    let mut rng = seeded(3);
    (0..20)
        .map(|_| unitary(haar_unitary(2, &mut rng)))
        .collect()
}

fn unitaries(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let ws = weights(&haar_unitaries()?, opts)?;
    let dev = max_of(ws.iter().map(|w| 1.0 - w.value));
    Ok(Outcome {
        passed: dev <= tol.deviation,
        max_deviation: dev,
        checks: ws.len(),
        note: String::new(),
    })
}

fn replacement(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let w = weight_sdp(&maximal_replacement(2, 2), opts)?.value;
    Ok(Outcome {
        passed: w <= tol.replacement,
        max_deviation: w,
        checks: 1,
        note: String::new(),
    })
}

fn damping_channels(ps: &[f64]) -> Result<Vec<QuantumChannel>> {
    ps.iter().map(|&p| stochastic_damping(p)).collect()
}

fn damping(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let ps = grid(10);
    let ws = weights(&damping_channels(&ps)?, opts)?;
    let mut excess = f64::NEG_INFINITY;
    let mut worst = 0.0;
    let mut slack_min = f64::INFINITY;
    for (w, &p) in ws.iter().zip(&ps) {
        let formula = analytic_weight(AnalyticKind::DampingUpper, p)?;
        let e = w.value - formula;
        if e > excess {
            excess = e;
            worst = p;
        }
        slack_min = slack_min.min(formula - w.value);
    }
    let exact_dev = max_of(ws.iter().zip(&ps).map(|(w, &p)| (w.value - p).abs()));
    let note = if excess > 0.0 {
        format!(
            "sdp exceeds formula by up to {excess:.4} (p = {worst}); sdp matches p within {exact_dev:.1e}"
        )
    } else {
        format!("tightness: smallest formula − sdp gap {slack_min:.3e}")
    };
    let dev = excess.max(0.0);
    Ok(Outcome {
        passed: dev <= tol.deviation,
        max_deviation: dev,
        checks: ps.len(),
        note,
    })
}

/// Random Choi states of both sample families for one shape.
fn random_chois(din: usize, dout: usize, seed: u64) -> (Vec<ChoiMatrix>, Vec<ChoiMatrix>) {
    let mut rng = seeded(seed);
    let sep = (0..200)
        .map(|i| random_measure_prepare(din, dout, 2 + i % 4, &mut rng).choi())
        .collect();
    let cptp = (0..200)
        .map(|i| random_channel(din, dout, 1 + i % (din * dout), &mut rng).choi())
        .collect();
    (sep, cptp)
}

fn duality(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let mut channels = depolarizing_channels(&grid(20))?;
    let qubit_count = {
        channels.extend(haar_unitaries()?);
        channels.push(maximal_replacement(2, 2));
        channels.extend(damping_channels(&grid(10))?);
        channels.len()
    };
    for p in grid(10) {
        channels.push(erasure(p)?);
    }
    let ws = weights(&channels, opts)?;
    let (sep2, cptp2) = random_chois(2, 2, 61);
    let (sep3, cptp3) = random_chois(2, 3, 62);

    let mut gap = 0.0_f64;
    let mut sep_short = 0.0_f64;
    let mut cptp_short = 0.0_f64;
    for (k, (n, w)) in channels.iter().zip(&ws).enumerate() {
        let wit = &w.witness;
        let objective = 1.0 - wit.trace_with(n.choi().matrix());
        gap = gap.max((objective - w.value).abs());
        let (sep, cptp) = if k < qubit_count {
            (&sep2, &cptp2)
        } else {
            (&sep3, &cptp3)
        };
        for j in sep {
            sep_short = sep_short.max(1.0 - wit.trace_with(j.matrix()));
        }
        for j in cptp {
            cptp_short = cptp_short.max(-wit.trace_with(j.matrix()));
        }
    }
    let dev = gap.max(sep_short).max(cptp_short);
    Ok(Outcome {
        passed: dev <= tol.deviation,
        max_deviation: dev,
        checks: channels.len() * 401,
        note: format!(
            "objective gap {gap:.1e}, separable shortfall {sep_short:.1e}, cptp shortfall {cptp_short:.1e}"
        ),
    })
}

/// `2I − 2Ψ⁺` on 2⊗2.
pub fn depolarizing_witness() -> HermitianOperator {
    let w = identity(4).scale(2.0) - max_entangled(2).scale(2.0);
    HermitianOperator::from_hermitian_part(&w)
}

/// `2I − 2Ψ⁺ − I⊗|2⟩⟨2|` on 2⊗3, `Ψ⁺` supported on the first two output levels.
pub fn erasure_witness() -> HermitianOperator {
    let mut psi = ComplexMatrix::zeros(6, 6);
    for (a, b) in [(0, 0), (0, 4), (4, 0), (4, 4)] {
        psi[(a, b)] = 0.5.into();
    }
    let flag = kron(&identity(2), &ketbra(3, 2, 2));
    HermitianOperator::from_hermitian_part(&(identity(6).scale(2.0) - psi.scale(2.0) - flag))
}

fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> HermitianOperator {
    let g = ginibre(d, d, rng);
    HermitianOperator::from_hermitian_part(&(&g + g.adjoint()))
}

fn random_game<R: Rng>(din: usize, dout: usize, rng: &mut R) -> Result<Game> {
    let states: Vec<DensityOperator> = (0..1 + rng.random_range(1..4))
        .map(|_| random_density(din, rng))
        .collect();
    let observables: Vec<HermitianOperator> = (0..1 + rng.random_range(1..4))
        .map(|_| random_hermitian(dout, rng))
        .collect();
    let alpha = nalgebra::DMatrix::from_fn(states.len(), observables.len(), |_, _| {
        rng.random_range(-1.0..1.0)
    });
    Game::new(states, observables, alpha)
}

fn payoffs(tol: &Tolerances) -> Result<Outcome> {
    let mut dev = 0.0_f64;
    let mut checks = 0;
    let wd = depolarizing_witness();
    let we = erasure_witness();
    for p in grid(20) {
        dev = dev.max((payoff_choi(&depolarizing(2, p)?, &wd)? - 1.5 * (1.0 - p)).abs());
        dev = dev.max((payoff_choi(&erasure(p)?, &we)? - (1.0 - p)).abs());
        checks += 2;
    }
    let mut rng = seeded(71);
    for i in 0..100 {
        let (din, dout) = [(2, 2), (2, 3), (3, 2), (3, 3)][i % 4];
        let g = random_game(din, dout, &mut rng)?;
        // an isometry into dout·rank needs dout·rank ≥ din
        let rank = (1 + i % 3).max(din.div_ceil(dout));
        let n = random_channel(din, dout, rank, &mut rng);
        let direct = payoff_direct(&n, &g)?;
        let via_choi = payoff_choi(&n, &game_operator(&g, din)?)?;
        dev = dev.max((direct - via_choi).abs());
        checks += 1;
    }
    Ok(Outcome {
        passed: dev <= tol.identity,
        max_deviation: dev,
        checks,
        note: String::new(),
    })
}

fn bounds(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let mut rng = seeded(81);
    let channels: Vec<QuantumChannel> = (0..100)
        .map(|i| random_channel(2, 2, 1 + i % 4, &mut rng))
        .collect();
    let rows = channels
        .par_iter()
        .map(|n| {
            let w = weight_sdp(n, opts)?.value;
            let r = robustness_sdp(n, opts.solver)?.value;
            Ok((lower_bound_eig(n) - w, r / 3.0 - w))
        })
        .collect::<Result<Vec<_>>>()?;
    let eig_excess = max_of(rows.iter().map(|r| r.0));
    let rel_excess = max_of(rows.iter().map(|r| r.1));
    let t = lower_bound_qubit_t(&identity_channel(2))?;
    let t_dev = (t.raw - 1.0).abs();
    Ok(Outcome {
        passed: eig_excess <= tol.deviation && rel_excess <= tol.deviation && t_dev <= tol.qubit_t,
        max_deviation: eig_excess.max(rel_excess).max(t_dev),
        checks: 2 * rows.len() + 1,
        note: format!(
            "eig excess {eig_excess:.1e}, robustness excess {rel_excess:.1e}, identity qubit-T {:.12}",
            t.raw
        ),
    })
}

fn properties(tol: &Tolerances, opts: WeightOptions) -> Result<Outcome> {
    let w = |n: &QuantumChannel| weight_sdp(n, opts).map(|r| r.value);

    let mut rng = seeded(91);
    let pairs: Vec<(f64, QuantumChannel, QuantumChannel)> = (0..50)
        .map(|i| {
            let l = rng.random_range(0.0..1.0);
            let a = random_channel(2, 2, 1 + i % 4, &mut rng);
            let b = random_channel(2, 2, 1 + (i / 4) % 4, &mut rng);
            (l, a, b)
        })
        .collect();
    let convexity = pairs
        .par_iter()
        .map(|(l, a, b)| Ok(w(&mix(*l, a, b)?)? - (l * w(a)? + (1.0 - l) * w(b)?)))
        .collect::<Result<Vec<f64>>>()?;

    let mut rng = seeded(92);
    let products: Vec<(QuantumChannel, QuantumChannel)> = (0..20)
        .map(|i| {
            (
                random_channel(2, 2, 1 + i % 4, &mut rng),
                random_channel(2, 2, 1 + (i + 1) % 4, &mut rng),
            )
        })
        .collect();
    let subadditivity = products
        .par_iter()
        .map(|(a, b)| Ok(w(&tensor(a, b))? - tensor_subadditivity_bound(w(a)?, w(b)?)?))
        .collect::<Result<Vec<f64>>>()?;

    let mut rng = seeded(93);
    let supers: Vec<_> = (0..50)
        .map(|i| {
            let n = random_channel(2, 2, 1 + i % 4, &mut rng);
            let s = random_free_superchannel(2, 2, 2, 2, 1 + i % 2, &mut rng);
            (n, s)
        })
        .collect();
    let monotonicity = supers
        .par_iter()
        .map(|(n, s)| Ok(w(&apply_free_superchannel(s, n)?)? - w(n)?))
        .collect::<Result<Vec<f64>>>()?;

    let c = max_of(convexity.iter().copied());
    let s = max_of(subadditivity.iter().copied());
    let m = max_of(monotonicity.iter().copied());
    let violations = convexity
        .iter()
        .chain(&subadditivity)
        .chain(&monotonicity)
        .filter(|&&x| x > tol.deviation)
        .count();
    Ok(Outcome {
        passed: violations == 0,
        max_deviation: c.max(s).max(m),
        checks: convexity.len() + subadditivity.len() + monotonicity.len(),
        note: format!(
            "{violations} violations; excess convexity {c:.1e}, subadditivity {s:.1e} (ppt relaxation), monotonicity {m:.1e}"
        ),
    })
}

fn lemmas(tol: &Tolerances) -> Result<Outcome> {
    let mut dev = 0.0_f64;
    for d in 2..=4 {
        let mut psi = nalgebra::DVector::zeros(d * d);
        for i in 0..d {
            psi[i * d + i] = (1.0 / (d as f64).sqrt()).into();
        }
        dev = dev.max((schmidt_max_overlap(&psi, d, d)? - 1.0 / d as f64).abs());
    }
    let mut rng = seeded(101);
    let mut failures = 0;
    for i in 0..1000 {
        let d = 2 + i % 4;
        let a = random_hermitian(d, &mut rng);
        let scale = rng.random_range(0.1..5.0);
        let b = HermitianOperator::from_hermitian_part(&hermitian_part(
            &random_density(d, &mut rng).matrix().scale(scale),
        ));
        if !max_eig_trace_bound_check(&a, &b)? {
            failures += 1;
        }
    }
    Ok(Outcome {
        passed: dev <= tol.identity && failures == 0,
        max_deviation: dev,
        checks: 1003,
        note: format!("{failures} trace-bound failures in 1000 pairs"),
    })
}

fn regimes(opts: WeightOptions) -> Result<Outcome> {
    let ps = [0.2, 1.0 / 3.0, 0.34, 0.5, 0.9];
    let ws = weights(&depolarizing_channels(&ps)?, opts)?;
    let mut flags = Vec::new();
    let mut mismatches = 0;
    let mut dev = 0.0_f64;
    for (w, &p) in ws.iter().zip(&ps) {
        let positive = w.value > ZERO_WEIGHT_THRESHOLD;
        if positive != (p > 1.0 / 3.0) {
            mismatches += 1;
        }
        dev = dev.max((w.value - analytic_weight(AnalyticKind::Depolarizing, p)?).abs());
        flags.push(format!(
            "{p:.3}:{}",
            if positive { "positive" } else { "zero" }
        ));
    }
    Ok(Outcome {
        passed: mismatches == 0,
        max_deviation: dev,
        checks: ps.len(),
        note: flags.join(" "),
    })
}
