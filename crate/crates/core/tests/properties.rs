use lomo_core::eval::{auc, average_precision, make_folds, roc_eer_rate, FoldPolicy};
use lomo_core::pipeline::{late_fusion, train_binary, FusionMode, ScoreTable};
use lomo_core::synth::{generate_synthetic, NegativeMode, SynthConfig};
use lomo_core::training::{fixed_assignment_gradient, fixed_assignment_loss};
use lomo_core::{
    effective_t, factorial, infer, pattern_from_rank, perm_rank, score_fixed, InferenceConfig, Model, ModelKind, ModelParts,
    ModelSpec, Pooling, SequenceSample, Solver, TrainConfig,
};
use proptest::prelude::*;

fn model_from(events: usize, dim: usize, coverage: usize, values: &[f64], gamma: f64) -> Model {
    let n = events * dim;
    let c = factorial(events);
    Model::from_parts(ModelParts {
        events,
        dim,
        templates: values[..n].to_vec(),
        ordering_costs: values[n..n + c].to_vec(),
        global_template: (gamma > 0.0).then(|| values[n + c..n + c + dim].to_vec()),
        gamma_g: gamma,
        pooling: Pooling::Mean,
        coverage,
    })
    .unwrap()
}

/// Instance of `n` frames, `m` events, dimension `d`, coverage `t`.
fn instance() -> impl Strategy<Value = (Model, SequenceSample)> {
    (1usize..=3, 1usize..=5, 0usize..=3, 1usize..=12).prop_flat_map(|(m, d, t, extra)| {
        let n = m + extra;
        let params = m * d + factorial(m) + d;
        (
            prop::collection::vec(-1.0f64..1.0, params),
            prop::collection::vec(-1.0f64..1.0, n * d),
            0.0f64..=1.0,
            any::<bool>(),
        )
            .prop_map(move |(p, x, g, global)| {
                let gamma = if global { g } else { 0.0 };
                let model = model_from(m, d, t, &p, gamma);
                let sample = SequenceSample::new("s", 1, None, d, x).unwrap();
                (model, sample)
            })
    })
}

/// Independent oracle: enumerate every tuple and score it from scratch.
fn oracle_best(model: &Model, sample: &SequenceSample) -> f64 {
    let (n, m, d) = (sample.len(), model.events(), model.dim());
    let t = effective_t(n, m, model.coverage()).unwrap();
    let pooled: Vec<f64> = (0..d).map(|j| (0..n).map(|f| sample.frame(f)[j]).sum::<f64>() / n as f64).collect();
    let global = model.global_template().map_or(0.0, |g| g.iter().zip(&pooled).map(|(a, b)| a * b).sum());
    let mut best = f64::NEG_INFINITY;
    let mut k = vec![0usize; m];
    loop {
        let ok = (0..m).all(|i| (i + 1..m).all(|j| k[i].abs_diff(k[j]) > t));
        if ok {
            let mut local = 0.0;
            for (i, &f) in k.iter().enumerate() {
                local += model.template(i).iter().zip(sample.frame(f)).map(|(a, b)| a * b).sum::<f64>();
            }
            // rank by enumerating patterns in lexicographic order
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&i| k[i]);
            let mut pattern = vec![0usize; m];
            for (pos, &i) in order.iter().enumerate() {
                pattern[i] = pos;
            }
            let rank = (1..=factorial(m)).find(|&r| pattern_from_rank(m, r).unwrap() == pattern).unwrap();
            let g = model.gamma_g();
            let total = g * global + (1.0 - g) * (local / m as f64 + model.ordering_cost(rank));
            best = best.max(total);
        }
        let mut i = 0;
        while i < m {
            k[i] += 1;
            if k[i] < n {
                break;
            }
            k[i] = 0;
            i += 1;
        }
        if i == m {
            return best;
        }
    }
}

fn feasible(k: &[usize], t: usize) -> bool {
    (0..k.len()).all(|i| (i + 1..k.len()).all(|j| k[i].abs_diff(k[j]) > t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dp_and_brute_reach_the_oracle_optimum((model, sample) in instance()) {
        let expected = oracle_best(&model, &sample);
        for solver in [Solver::Dp, Solver::Brute] {
            let a = infer(&model, &sample, &InferenceConfig::for_model(&model, solver)).unwrap();
            prop_assert!((a.total - expected).abs() <= 1e-9, "{:?}: {} vs {}", solver, a.total, expected);
        }
    }

    #[test]
    fn every_solver_is_feasible_and_consistent((model, sample) in instance()) {
        let t = effective_t(sample.len(), model.events(), model.coverage()).unwrap();
        let dp = infer(&model, &sample, &InferenceConfig::for_model(&model, Solver::Dp)).unwrap();
        for solver in [Solver::Greedy, Solver::Dp, Solver::Brute] {
            let a = infer(&model, &sample, &InferenceConfig::for_model(&model, solver)).unwrap();
            prop_assert!(feasible(&a.k, t));
            prop_assert!(a.k.iter().all(|&f| f < sample.len()));
            prop_assert_eq!(a.perm_rank, perm_rank(&a.k).unwrap());
            let again = score_fixed(&model, &sample, &a.k).unwrap();
            prop_assert_eq!(again.total, a.total);
            prop_assert!(dp.total >= a.total - 1e-12);
        }
    }

    #[test]
    fn subgradient_matches_finite_differences((model, sample) in instance(), label in prop::bool::ANY, l1 in 0.0f64..0.1, l2 in 0.0f64..0.1) {
        let sample = sample.with_label(if label { 1 } else { -1 });
        let config = TrainConfig { events: model.events(), lambda1: l1, lambda2: l2, ..TrainConfig::default() };
        let k = infer(&model, &sample, &InferenceConfig::for_model(&model, Solver::Dp)).unwrap().k;
        let y = sample.label() as f64;
        let s = score_fixed(&model, &sample, &k).unwrap().total;
        // stay away from the hinge kink
        prop_assume!((1.0 - y * s).abs() > 1e-3);
        let grad = fixed_assignment_gradient(&model, &sample, &k, &config).unwrap();
        let parts = model.clone().into_parts();
        let h = 1e-5;
        let loss_at = |p: &ModelParts| fixed_assignment_loss(&Model::from_parts(p.clone()).unwrap(), &sample, &k, &config).unwrap();
        let check = |analytic: f64, bump: &dyn Fn(&mut ModelParts, f64)| {
            let mut plus = parts.clone();
            bump(&mut plus, h);
            let mut minus = parts.clone();
            bump(&mut minus, -h);
            let numeric = (loss_at(&plus) - loss_at(&minus)) / (2.0 * h);
            assert!((numeric - analytic).abs() <= 1e-4 * numeric.abs().max(analytic.abs()).max(1e-2), "{numeric} vs {analytic}");
        };
        for i in 0..parts.templates.len() {
            check(grad.templates[i], &|p, e| p.templates[i] += e);
        }
        for j in 0..parts.ordering_costs.len() {
            check(grad.ordering_costs[j], &|p, e| p.ordering_costs[j] += e);
        }
        if let Some(g) = &grad.global_template {
            for (j, &gj) in g.iter().enumerate() {
                check(gj, &|p, e| p.global_template.as_mut().unwrap()[j] += e);
            }
        }
    }

    #[test]
    fn mean_pooled_global_score_ignores_frame_order(
        (model, sample) in instance(),
        seed in any::<u64>(),
    ) {
        let mut p = model.clone().into_parts();
        p.gamma_g = 1.0;
        p.global_template = Some(p.templates[..p.dim].to_vec());
        let gtp = Model::from_parts(p).unwrap();
        let mut order: Vec<usize> = (0..sample.len()).collect();
        let mut state = seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let shuffled = sample.permuted(&order).unwrap();
        let a = infer(&gtp, &sample, &InferenceConfig::for_model(&gtp, Solver::Greedy)).unwrap().total;
        let b = infer(&gtp, &shuffled, &InferenceConfig::for_model(&gtp, Solver::Greedy)).unwrap().total;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn ranking_metrics_are_bounded_and_symmetric(
        scores in prop::collection::vec(-3i32..3, 2..40),
        flags in prop::collection::vec(any::<bool>(), 40),
    ) {
        let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
        let positives: Vec<bool> = flags[..scores.len()].to_vec();
        let p = positives.iter().filter(|&&b| b).count();
        prop_assume!(p > 0 && p < positives.len());
        let a = auc(&scores, &positives).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        prop_assert!((auc(&flipped, &positives).unwrap() - (1.0 - a)).abs() < 1e-12);
        let squashed: Vec<f64> = scores.iter().map(|s| s.tanh() * 5.0 + 1.0).collect();
        prop_assert_eq!(auc(&squashed, &positives).unwrap(), a);
        let ap = average_precision(&scores, &positives).unwrap();
        prop_assert!(ap > 0.0 && ap <= 1.0);
        let eer = roc_eer_rate(&scores, &positives).unwrap();
        prop_assert!((0.0..=1.0).contains(&eer));
        prop_assert_eq!(roc_eer_rate(&squashed, &positives).unwrap(), eer);
    }

    #[test]
    fn fusion_invariances(
        a in prop::collection::vec(-5.0f64..5.0, 3..20),
        b_seed in prop::collection::vec(-5.0f64..5.0, 20),
        scale in 0.01f64..100.0,
        shift in -50.0f64..50.0,
    ) {
        let n = a.len();
        let ids: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let ta = ScoreTable::new(ids.clone(), 1, a.clone()).unwrap();
        let tb = ScoreTable::new(ids.clone(), 1, b_seed[..n].to_vec()).unwrap();
        let ab = late_fusion(&[ta.clone(), tb.clone()], FusionMode::EqualMean, None).unwrap();
        let ba = late_fusion(&[tb.clone(), ta.clone()], FusionMode::EqualMean, None).unwrap();
        for (x, y) in ab.values.iter().zip(&ba.values) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let rescaled = ScoreTable::new(ids, 1, a.iter().map(|v| scale * v + shift).collect()).unwrap();
        let z1 = late_fusion(&[ta, tb.clone()], FusionMode::ZscoreWeighted, Some(&[0.5, 1.0])).unwrap();
        let z2 = late_fusion(&[rescaled, tb], FusionMode::ZscoreWeighted, Some(&[0.5, 1.0])).unwrap();
        for (x, y) in z1.values.iter().zip(&z2.values) {
            prop_assert!((x - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn group_folds_partition_without_splitting_groups(
        groups in prop::collection::vec(0u8..6, 4..40),
        k in 2usize..4,
        seed in any::<u64>(),
    ) {
        let data: Vec<SequenceSample> = groups
            .iter()
            .enumerate()
            .map(|(i, g)| SequenceSample::new(format!("s{i}"), 1, Some(format!("g{g}")), 1, vec![0.0]).unwrap())
            .collect();
        let distinct = groups.iter().collect::<std::collections::BTreeSet<_>>().len();
        prop_assume!(distinct >= k);
        let folds = make_folds(&data, FoldPolicy::GroupKFold, k, seed).unwrap();
        prop_assert!(folds.respects_groups(&data));
        let mut seen = vec![0usize; data.len()];
        for f in 0..folds.folds {
            let (train, test) = folds.split(&data, f).unwrap();
            prop_assert_eq!(train.len() + test.len(), data.len());
            prop_assert!(!test.is_empty());
            for i in test {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let logo = make_folds(&data, FoldPolicy::LeaveOneGroupOut, 0, seed).unwrap();
        prop_assert_eq!(logo.folds, distinct);
    }

    #[test]
    fn synthetic_sequences_fit_their_plants(seed in any::<u64>(), events in 1usize..4, gap in 0usize..4, absent in any::<bool>()) {
        prop_assume!(absent || events >= 2);
        let n_min = events * (gap + 1) + 2;
        let config = SynthConfig {
            dim: 6,
            n_min,
            n_max: n_min + 5,
            events,
            n_pos: 6,
            n_neg: 6,
            noise_sigma: 0.1,
            neg_mode: if absent { NegativeMode::EventsAbsent } else { NegativeMode::ShuffledOrder },
            min_gap: gap,
            seed,
        };
        let data = generate_synthetic(&config).unwrap();
        prop_assert_eq!(data.train.len() + data.test.len(), 12);
        for r in &data.records {
            prop_assert!(r.frames >= events * (gap + 1));
            for w in r.positions.windows(2) {
                prop_assert!(w[0].abs_diff(w[1]) > gap);
            }
            if r.label == 1 {
                prop_assert_eq!(r.perm_rank, 1);
            }
        }
        prop_assert_eq!(generate_synthetic(&config).unwrap(), data);
    }
}

fn toy_dataset() -> Vec<SequenceSample> {
    let config = SynthConfig { n_pos: 12, n_neg: 12, n_min: 16, n_max: 16, dim: 6, seed: 3, ..SynthConfig::default() };
    generate_synthetic(&config).unwrap().train
}

#[test]
fn adaptive_model_reduces_to_its_endpoints() {
    let data = toy_dataset();
    let config = TrainConfig { maxiter: 400, coverage_t: 2, seed: 11, ..TrainConfig::default() };
    let alomo = |gamma: f64| {
        let spec = ModelSpec::new(ModelKind::Alomo, TrainConfig { gamma_g: gamma, ..config.clone() });
        train_binary(&data, &spec).unwrap().model
    };
    let lomo = train_binary(&data, &ModelSpec::new(ModelKind::Lomo, config.clone())).unwrap().model;
    let gtp = train_binary(&data, &ModelSpec::new(ModelKind::Gtp, config.clone())).unwrap().model;
    for s in &data {
        for (a, b) in [(&alomo(0.0), &lomo), (&alomo(1.0), &gtp)] {
            let sa = infer(a, s, &InferenceConfig::for_model(a, Solver::Greedy)).unwrap().total;
            let sb = infer(b, s, &InferenceConfig::for_model(b, Solver::Greedy)).unwrap().total;
            assert_eq!(sa, sb);
        }
    }
}

#[test]
fn trained_mil_scores_are_the_best_frame_response() {
    let data = toy_dataset();
    let spec = ModelSpec::new(ModelKind::Mil, TrainConfig { events: 4, maxiter: 300, ..TrainConfig::default() });
    let model = train_binary(&data, &spec).unwrap().model;
    assert_eq!(model.events(), 1);
    assert!(model.ordering_costs().iter().all(|&c| c == 0.0));
    for s in &data {
        let best = s.frames().map(|f| f.iter().zip(model.template(0)).map(|(a, b)| a * b).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max);
        for solver in [Solver::Greedy, Solver::Dp, Solver::Brute] {
            assert_eq!(infer(&model, s, &InferenceConfig::for_model(&model, solver)).unwrap().total, best);
        }
    }
}
