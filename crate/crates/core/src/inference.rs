//! Latent assignment solvers.
//!
//! All three solvers maximize the same objective over assignments `k` whose
//! entries are pairwise at least `t_eff + 1` frames apart:
//!
//! * [`infer_greedy`] fires the templates one at a time in index order, each
//!   on its best remaining frame, suppressing `[k_i - t, k_i + t]` after every
//!   pick. Approximate, `O(N d M)`.
//! * [`infer_dp`] is exact. For each of the `M!` orders it solves a chain DP
//!   over increasing positions with suffix maxima, `O(N d M + M! N M)`.
//! * [`infer_brute`] enumerates every feasible tuple. Test oracle only.
//!
//! Ties are broken deterministically: greedy prefers the smallest frame; the
//! exact solvers prefer the smallest order rank and then the lexicographically
//! smallest sorted position vector.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::dot;
use crate::perm::{factorial, invert, pattern_from_rank};
use crate::score::{assemble, check_dims, global_score};
use crate::{perm_rank, Error, LatentAssignment, Model, Result, SequenceSample};

/// Upper bound on `N^M` accepted by the brute-force solver.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Solver {
    #[default]
    Greedy,
    Dp,
    Brute,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Greedy => "greedy",
            Solver::Dp => "dp",
            Solver::Brute => "brute",
        }
    }
}

impl core::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Solver::Greedy),
            "dp" => Ok(Solver::Dp),
            "brute" => Ok(Solver::Brute),
            other => Err(Error::InvalidConfig(alloc::format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferenceConfig {
    pub solver: Solver,
    pub coverage_t: usize,
    /// Shrink `coverage_t` per sequence so an assignment always exists. When
    /// false, a radius that does not fit the sequence is an error.
    pub clamp: bool,
}

impl InferenceConfig {
    pub fn for_model(model: &Model, solver: Solver) -> Self {
        InferenceConfig { solver, coverage_t: model.coverage(), clamp: true }
    }
}

/// Suppression radius actually used for a sequence of `n` frames and `m`
/// events when `t` was requested.
///
/// `t` is first capped at `floor(n / m)`; if `m` frames spaced `t + 1` apart
/// still do not fit, it drops to the largest radius that does.
pub fn effective_t(n: usize, m: usize, t: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidConfig("number of events must be >= 1".into()));
    }
    if n < m {
        return Err(Error::SequenceTooShort { frames: n, events: m });
    }
    let capped = t.min(n / m);
    if m == 1 {
        return Ok(capped);
    }
    if (m - 1) * (capped + 1) + 1 > n {
        Ok((n - m) / (m - 1))
    } else {
        Ok(capped)
    }
}

fn radius(model: &Model, sample: &SequenceSample, config: &InferenceConfig) -> Result<usize> {
    let (n, m, t) = (sample.len(), model.events(), config.coverage_t);
    if config.clamp {
        return effective_t(n, m, t);
    }
    if n < m {
        return Err(Error::SequenceTooShort { frames: n, events: m });
    }
    if (m - 1) * (t + 1) + 1 > n {
        return Err(Error::Infeasible(alloc::format!(
            "{m} events with coverage {t} do not fit in {n} frames"
        )));
    }
    Ok(t)
}

/// Runs the configured solver.
pub fn infer(model: &Model, sample: &SequenceSample, config: &InferenceConfig) -> Result<LatentAssignment> {
    check_dims(model, sample)?;
    let t_eff = radius(model, sample, config)?;
    let k = match config.solver {
        Solver::Greedy => greedy_positions(model, sample, t_eff)?,
        Solver::Dp => dp_positions(model, sample, t_eff)?,
        Solver::Brute => brute_positions(model, sample, t_eff)?,
    };
    Ok(assemble(model, sample, &k, global_score(model, sample)))
}

/// Greedy suppression solver at the model's coverage radius.
pub fn infer_greedy(model: &Model, sample: &SequenceSample) -> Result<LatentAssignment> {
    infer(model, sample, &InferenceConfig::for_model(model, Solver::Greedy))
}

/// Exact dynamic-programming solver at the model's coverage radius.
pub fn infer_dp(model: &Model, sample: &SequenceSample) -> Result<LatentAssignment> {
    infer(model, sample, &InferenceConfig::for_model(model, Solver::Dp))
}

/// Exhaustive solver at the model's coverage radius.
pub fn infer_brute(model: &Model, sample: &SequenceSample) -> Result<LatentAssignment> {
    infer(model, sample, &InferenceConfig::for_model(model, Solver::Brute))
}

/// Most points pairwise `gap` apart that fit in a run of `len` frames.
#[inline]
fn run_capacity(len: usize, gap: usize) -> usize {
    if len == 0 {
        0
    } else {
        (len - 1) / gap + 1
    }
}

fn greedy_positions(model: &Model, sample: &SequenceSample, t_eff: usize) -> Result<Vec<usize>> {
    let n = sample.len();
    let m = model.events();
    let gap = t_eff + 1;
    let mut available = vec![true; n];
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut k = Vec::with_capacity(m);

    for i in 0..m {
        runs.clear();
        let mut f = 0;
        while f < n {
            if available[f] {
                let start = f;
                while f < n && available[f] {
                    f += 1;
                }
                runs.push((start, f - start));
            } else {
                f += 1;
            }
        }
        let capacity: usize = runs.iter().map(|&(_, len)| run_capacity(len, gap)).sum();
        let still_needed = m - i - 1;
        let template = model.template(i);

        let mut best: Option<(f64, usize)> = None;
        for &(start, len) in &runs {
            let others = capacity - run_capacity(len, gap);
            for offset in 0..len {
                // A pick must leave room for the templates still to be placed.
                if still_needed > 0 {
                    let left = offset.saturating_sub(t_eff);
                    let right = (len - 1 - offset).saturating_sub(t_eff);
                    if others + run_capacity(left, gap) + run_capacity(right, gap) < still_needed {
                        continue;
                    }
                }
                let frame = start + offset;
                let response = dot(template, sample.frame(frame));
                if best.map_or(true, |(b, _)| response > b) {
                    best = Some((response, frame));
                }
            }
        }
        let (_, frame) = best.ok_or(Error::CandidatesExhausted { picked: i, events: m })?;
        k.push(frame);
        let lo = frame.saturating_sub(t_eff);
        let hi = (frame + t_eff).min(n - 1);
        available[lo..=hi].iter_mut().for_each(|a| *a = false);
    }
    Ok(k)
}

/// `responses[i * n + f] = <w_i, x_f>`
fn response_table(model: &Model, sample: &SequenceSample) -> Vec<f64> {
    let n = sample.len();
    let mut table = Vec::with_capacity(model.events() * n);
    for i in 0..model.events() {
        let w = model.template(i);
        table.extend(sample.frames().map(|x| dot(w, x)));
    }
    table
}

fn dp_positions(model: &Model, sample: &SequenceSample, t_eff: usize) -> Result<Vec<usize>> {
    let n = sample.len();
    let m = model.events();
    let gap = t_eff + 1;
    let local_weight = 1.0 - model.gamma_g();
    // With no weight on the local term every assignment ties; fall back to
    // the tie-breaking order alone.
    let responses = if local_weight == 0.0 { vec![0.0; m * n] } else { response_table(model, sample) };

    // best[j][q]: best value of stages j..m over positions >= q, and the
    // smallest position attaining it for stage j. Row width n + 1, the last
    // column is the empty suffix.
    let width = n + 1;
    let mut best = vec![f64::NEG_INFINITY; m * width];
    let mut arg = vec![usize::MAX; m * width];

    let mut winner: Option<(f64, Vec<usize>)> = None;
    for rank in 1..=factorial(m) {
        let order = invert(&pattern_from_rank(m, rank)?);
        for j in (0..m).rev() {
            let row = j * width;
            let template = order[j];
            best[row + n] = f64::NEG_INFINITY;
            arg[row + n] = usize::MAX;
            for p in (0..n).rev() {
                let tail = if j + 1 == m {
                    0.0
                } else if p + gap < n {
                    best[(j + 1) * width + p + gap]
                } else {
                    f64::NEG_INFINITY
                };
                let here = responses[template * n + p] + tail;
                if here > f64::NEG_INFINITY && here >= best[row + p + 1] {
                    best[row + p] = here;
                    arg[row + p] = p;
                } else {
                    best[row + p] = best[row + p + 1];
                    arg[row + p] = arg[row + p + 1];
                }
            }
        }
        let chain = best[0];
        if chain == f64::NEG_INFINITY {
            continue;
        }
        let value = local_weight * (chain / m as f64 + model.ordering_cost(rank));
        if winner.as_ref().map_or(true, |(v, _)| value > *v) {
            let mut k = vec![0; m];
            let mut p = arg[0];
            k[order[0]] = p;
            for j in 1..m {
                p = arg[j * width + p + gap];
                k[order[j]] = p;
            }
            winner = Some((value, k));
        }
    }
    winner
        .map(|(_, k)| k)
        .ok_or_else(|| Error::Infeasible(alloc::format!("no feasible assignment with radius {t_eff}")))
}

fn brute_positions(model: &Model, sample: &SequenceSample, t_eff: usize) -> Result<Vec<usize>> {
    let n = sample.len();
    let m = model.events();
    match (n as u64).checked_pow(m as u32) {
        Some(count) if count <= BRUTE_FORCE_LIMIT => {}
        _ => return Err(Error::BruteForceTooLarge),
    }
    let responses = response_table(model, sample);
    let mut search = BruteSearch {
        model,
        n,
        gap: t_eff + 1,
        global: global_score(model, sample),
        responses,
        current: Vec::with_capacity(m),
        best: None,
    };
    search.descend(0.0);
    search
        .best
        .map(|b| b.k)
        .ok_or_else(|| Error::Infeasible(alloc::format!("no feasible assignment with radius {t_eff}")))
}

struct BruteBest {
    total: f64,
    rank: usize,
    sorted: Vec<usize>,
    k: Vec<usize>,
}

struct BruteSearch<'a> {
    model: &'a Model,
    n: usize,
    gap: usize,
    global: f64,
    responses: Vec<f64>,
    current: Vec<usize>,
    best: Option<BruteBest>,
}

impl BruteSearch<'_> {
    fn descend(&mut self, partial: f64) {
        let m = self.model.events();
        let i = self.current.len();
        if i == m {
            self.leaf(partial);
            return;
        }
        for f in 0..self.n {
            if self.current.iter().any(|&c| c.abs_diff(f) < self.gap) {
                continue;
            }
            self.current.push(f);
            self.descend(partial + self.responses[i * self.n + f]);
            self.current.pop();
        }
    }

    fn leaf(&mut self, sum: f64) {
        let m = self.model.events();
        let template_score = sum / m as f64;
        let rank = perm_rank(&self.current).expect("distinct by construction");
        let gamma = self.model.gamma_g();
        let total =
            gamma * self.global + (1.0 - gamma) * (template_score + self.model.ordering_cost(rank));
        let mut sorted = self.current.clone();
        sorted.sort_unstable();
        let better = match &self.best {
            None => true,
            Some(b) => {
                total > b.total || (total == b.total && (rank, &sorted) < (b.rank, &b.sorted))
            }
        };
        if better {
            self.best = Some(BruteBest { total, rank, sorted, k: self.current.clone() });
        }
    }
}
