use super::*;
use crate::hierarchy::{build_dendrogram, candidate_merges, candidate_splits};
use crate::model::{Attribute, Embedding, Linkage};
use crate::stats::fit_prior;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (Dataset, Embedding) {
    let schema: Vec<Attribute> = (0..m)
        .map(|j| {
            let kind = if j % 3 == 2 {
                AttributeType::Boolean
            } else {
                AttributeType::Real
            };
            Attribute::new(format!("a{j}"), kind)
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            schema
                .iter()
                .map(|a| match a.kind {
                    AttributeType::Boolean => f64::from(u8::from(rng.random_bool(0.4))),
                    AttributeType::Real => rng.random_range(-3.0..3.0),
                })
                .collect()
        })
        .collect();
    let coords = (0..n)
        .map(|_| [rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)])
        .collect();
    (
        Dataset::from_rows(&rows, schema).unwrap(),
        Embedding::new(coords).unwrap(),
    )
}

fn setup(seed: u64, n: usize) -> (Dataset, PriorModel, Dendrogram) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (data, emb) = random_instance(&mut rng, n, 6);
    let prior = fit_prior(&data, 1e-4).unwrap();
    let d = build_dendrogram(&emb, Linkage::Average).unwrap();
    (data, prior, d)
}

fn random_cut(rng: &mut ChaCha8Rng, d: &Dendrogram, splits: usize) -> CutSet {
    let mut cut = CutSet::root(d);
    for _ in 0..splits {
        let c = candidate_splits(d, &cut, 1);
        if c.is_empty() {
            break;
        }
        cut = cut.with_split(c[rng.random_range(0..c.len())]);
    }
    cut
}

#[test]
fn evaluate_matches_direct_selection() {
    let (data, prior, d) = setup(1, 40);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::new(20.0, 1.4);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for splits in 0..8 {
        let cut = random_cut(&mut rng, &d, splits);
        let sol = ctx.evaluate(&cut, &hp).unwrap();
        let partition = clusters_from_cutset(&d, &cut).unwrap();
        let direct = select_attributes(&partition, &data, &prior, &hp).unwrap();
        let direct_score = subjective_interestingness(&direct, &prior, &hp).unwrap();
        assert!((sol.si - direct_score.si).abs() <= 1e-9 * direct_score.si.max(1.0));
        let rescored = rescore(&sol, &prior, &hp).unwrap();
        assert_eq!(rescored.si, sol.si);
        assert_eq!(sol.patterns.len(), cut.len());
    }
}

#[test]
fn incremental_moves_match_fresh_state() {
    let (data, prior, d) = setup(3, 50);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::new(5.0, 1.2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut state = ctx.state(&CutSet::root(&d)).unwrap();
    for _ in 0..25 {
        let merges = candidate_merges(&d, &state.cut);
        let splits = candidate_splits(&d, &state.cut, 1);
        let merge = !merges.is_empty() && (splits.is_empty() || rng.random_bool(0.35));
        let (predicted, next) = if merge {
            let w = merges[rng.random_range(0..merges.len())];
            (ctx.merge_score(&state, w, &hp), ctx.apply_merge(&state, w))
        } else if !splits.is_empty() {
            let v = splits[rng.random_range(0..splits.len())];
            let host = ctx.merge_host(&state, v);
            (ctx.split_score(&state, host, v, &hp), ctx.apply_split(&state, v))
        } else {
            break;
        };
        let fresh = ctx.state(&next.cut).unwrap();
        assert_eq!(fresh.maximal, next.maximal);
        assert_eq!(ctx.score_state(&fresh, &hp).score.si, predicted);
        assert_eq!(ctx.score_state(&next, &hp).score.si, predicted);
        state = next;
    }
}

#[test]
fn greedy_trace_grows_one_cluster_per_iteration() {
    let (data, prior, d) = setup(5, 30);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::new(10.0, 1.5);
    let (sol, trace) = ctx.greedy_search(&hp, &SearchBudget::unlimited()).unwrap();
    assert!(!trace.expired);
    assert_eq!(trace.records.len(), 30);
    for (i, r) in trace.records.iter().enumerate() {
        assert_eq!(r.k, i + 1);
    }
    let best = trace.records.iter().map(|r| r.si).fold(f64::MIN, f64::max);
    assert_eq!(sol.si, best);
    assert_eq!(sol.iterations_completed, 30);
}

#[test]
fn iteration_cap_limits_trace() {
    let (data, prior, d) = setup(6, 30);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::new(10.0, 1.5);
    let (_, trace) = ctx.greedy_search(&hp, &SearchBudget::iterations(4)).unwrap();
    assert_eq!(trace.records.len(), 4);
    assert!(!trace.expired);
}

#[test]
fn expired_budget_keeps_first_iteration() {
    let (data, prior, d) = setup(7, 30);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::new(10.0, 1.5);
    let (sol, trace) = ctx.greedy_search(&hp, &SearchBudget::time(Duration::ZERO)).unwrap();
    assert!(trace.expired);
    assert_eq!(trace.records.len(), 1);
    assert_eq!(sol.k(), 1);
}

#[test]
fn refine_reaches_local_optimum() {
    let (data, prior, d) = setup(8, 40);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::new(30.0, 1.6);
    let (sol, _) = ctx.greedy_search(&hp, &SearchBudget::unlimited()).unwrap();
    let hp2 = Hyperparameters::new(5.0, 1.3);
    let (refined, trace) = ctx.refine(&sol, &hp2, &SearchBudget::unlimited()).unwrap();
    let before = ctx.evaluate(&sol.cut_set, &hp2).unwrap().si;
    assert!(refined.si >= before);
    for w in trace.records.windows(2) {
        assert!(w[1].si > w[0].si);
    }
    let state = ctx.state(&refined.cut_set).unwrap();
    for w in candidate_merges(&d, &refined.cut_set) {
        assert!(ctx.merge_score(&state, w, &hp2) <= refined.si);
    }
    for v in candidate_splits(&d, &refined.cut_set, 1) {
        let host = ctx.merge_host(&state, v);
        assert!(ctx.split_score(&state, host, v, &hp2) <= refined.si);
    }
    let (again, _) = ctx.refine(&refined, &hp2, &SearchBudget::unlimited()).unwrap();
    assert_eq!(again.cut_set, refined.cut_set);
}

#[test]
fn refine_rejects_foreign_solution() {
    let (data, prior, d) = setup(9, 20);
    let ctx = SearchContext::new(&data, &prior, &d).unwrap();
    let hp = Hyperparameters::default();
    let mut sol = ctx.evaluate(&CutSet::root(&d), &hp).unwrap();
    sol.cut_set = CutSet::root(&d).with_split(0);
    assert!(matches!(
        ctx.refine(&sol, &hp, &SearchBudget::unlimited()),
        Err(Error::SolutionMismatch(_))
    ));
}

#[test]
fn select_attributes_rejects_overlap() {
    let (data, prior, _) = setup(10, 10);
    let hp = Hyperparameters::default();
    let bad = vec![(0..6).collect::<Vec<_>>(), (5..10).collect()];
    assert!(matches!(
        select_attributes(&bad, &data, &prior, &hp),
        Err(Error::NotAPartition(_))
    ));
    let gap = vec![(0..5).collect::<Vec<_>>(), (6..10).collect()];
    assert!(select_attributes(&gap, &data, &prior, &hp).is_err());
}
