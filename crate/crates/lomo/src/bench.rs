//! Timing and score comparison of the inference solvers on random instances.

use std::time::{Duration, Instant};

use lomo_core::inference::BRUTE_FORCE_LIMIT;
use lomo_core::{factorial, infer, InferenceConfig, Model, ModelParts, Pooling, SequenceSample, Solver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub frames: Vec<usize>,
    pub events: Vec<usize>,
    pub coverage: Vec<usize>,
    pub dim: usize,
    pub instances: usize,
    pub solvers: Vec<Solver>,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            frames: vec![50, 100, 300],
            events: vec![2, 3],
            coverage: vec![3],
            dim: 100,
            instances: 20,
            solvers: vec![Solver::Greedy, Solver::Dp, Solver::Brute],
            seed: 0,
        }
    }
}

/// One CSV row. The dp-greedy gap columns describe the whole cell and are
/// repeated on each solver's row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub solver: &'static str,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub d: usize,
    pub instances: usize,
    pub status: &'static str,
    pub total_seconds: Option<f64>,
    pub mean_ms: Option<f64>,
    pub mean_score: Option<f64>,
    pub dp_greedy_gap_mean: f64,
    pub dp_greedy_gap_min: f64,
}

/// A random model and sequence; all entries uniform on `[-1, 1]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, t: usize, d: usize) -> (Model, SequenceSample) {
    let mut draw = |k: usize| -> Vec<f64> { (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect() };
    let templates = draw(m * d);
    let ordering_costs = draw(factorial(m));
    let frames = draw(n * d);
    let model = Model::from_parts(ModelParts {
        events: m,
        dim: d,
        templates,
        ordering_costs,
        global_template: None,
        gamma_g: 0.0,
        pooling: Pooling::Mean,
        coverage: t,
    })
    .expect("valid random model");
    let sample = SequenceSample::new("bench", 1, None, d, frames).expect("valid random sample");
    (model, sample)
}

fn brute_fits(n: usize, m: usize) -> bool {
    (n as u64).checked_pow(m as u32).is_some_and(|v| v <= BRUTE_FORCE_LIMIT)
}

/// Runs every `(n, m, t)` cell. Returns the rows plus a notice for each
/// skipped solver.
pub fn run_bench(config: &BenchConfig) -> Result<(Vec<BenchRow>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut notices = Vec::new();
    let mut cell = 0u64;
    for &n in &config.frames {
        for &m in &config.events {
            for &t in &config.coverage {
                cell += 1;
                let runnable: Vec<Solver> = config
                    .solvers
                    .iter()
                    .copied()
                    .filter(|&s| {
                        let ok = s != Solver::Brute || brute_fits(n, m);
                        if !ok {
                            notices.push(format!("brute force skipped at N={n}, M={m}: N^M exceeds {BRUTE_FORCE_LIMIT}"));
                        }
                        ok
                    })
                    .collect();
                let mut measured = vec![Solver::Greedy, Solver::Dp];
                if runnable.contains(&Solver::Brute) {
                    measured.push(Solver::Brute);
                }

                let mut time = vec![Duration::ZERO; measured.len()];
                let mut sums = vec![0.0; measured.len()];
                let (mut gap_sum, mut gap_min) = (0.0, f64::INFINITY);
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(cell.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
                for _ in 0..config.instances {
                    let (model, sample) = random_instance(&mut rng, n, m, t, config.dim);
                    let mut totals = vec![0.0; measured.len()];
                    for (i, &solver) in measured.iter().enumerate() {
                        let cfg = InferenceConfig { solver, coverage_t: t, clamp: true };
                        let start = Instant::now();
                        let a = std::hint::black_box(infer(&model, &sample, &cfg)?);
                        time[i] += start.elapsed();
                        totals[i] = a.total;
                        sums[i] += a.total;
                    }
                    let gap = totals[1] - totals[0];
                    gap_sum += gap;
                    gap_min = gap_min.min(gap);
                }
                let count = config.instances.max(1) as f64;
                for &solver in &config.solvers {
                    let row = match measured.iter().position(|&s| s == solver).filter(|_| runnable.contains(&solver)) {
                        Some(i) => BenchRow {
                            solver: solver.name(),
                            n,
                            m,
                            t,
                            d: config.dim,
                            instances: config.instances,
                            status: "ok",
                            total_seconds: Some(time[i].as_secs_f64()),
                            mean_ms: Some(time[i].as_secs_f64() * 1e3 / count),
                            mean_score: Some(sums[i] / count),
                            dp_greedy_gap_mean: gap_sum / count,
                            dp_greedy_gap_min: gap_min,
                        },
                        None => BenchRow {
                            solver: solver.name(),
                            n,
                            m,
                            t,
                            d: config.dim,
                            instances: config.instances,
                            status: "skipped",
                            total_seconds: None,
                            mean_ms: None,
                            mean_score: None,
                            dp_greedy_gap_mean: gap_sum / count,
                            dp_greedy_gap_min: gap_min,
                        },
                    };
                    rows.push(row);
                }
            }
        }
    }
    Ok((rows, notices))
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_row_per_solver_and_cell() {
        let config = BenchConfig {
            frames: vec![8, 400],
            events: vec![3],
            coverage: vec![0, 1],
            dim: 3,
            instances: 4,
            solvers: vec![Solver::Greedy, Solver::Dp, Solver::Brute],
            seed: 1,
        };
        let (rows, notices) = run_bench(&config).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        assert_eq!(notices.len(), 2);
        assert!(rows.iter().all(|r| r.dp_greedy_gap_min >= 0.0));
        let skipped: Vec<_> = rows.iter().filter(|r| r.status == "skipped").collect();
        assert_eq!(skipped.len(), 2);
        assert!(skipped.iter().all(|r| r.solver == "brute" && r.n == 400 && r.total_seconds.is_none()));
        for chunk in rows.chunks(3).filter(|c| c[0].n == 8) {
            let (dp, brute) = (chunk[1].mean_score.unwrap(), chunk[2].mean_score.unwrap());
            assert!((dp - brute).abs() < 1e-9);
        }
        let mut csv = Vec::new();
        write_csv(&rows, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), rows.len() + 1);
        assert!(text.starts_with("solver,n,m,t,d,instances,status,"));
    }
}
