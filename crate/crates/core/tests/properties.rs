use proptest::prelude::*;

use xclust_core::hierarchy::{candidate_merges, candidate_splits};
use xclust_core::info::subjective_interestingness;
use xclust_core::{
    build_dendrogram, clusters_from_cutset, fit_cluster_statistics, fit_prior, select_attributes,
    Attribute, AttributeType, BiclusterPattern, CutSet, Dataset, Embedding, Hyperparameters,
    Linkage, SearchBudget, SearchContext,
};

#[derive(Debug, Clone)]
struct Instance {
    dataset: Dataset,
    embedding: Embedding,
    linkage: Linkage,
}

fn instance() -> impl Strategy<Value = Instance> {
    (6usize..40, 1usize..6)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(any::<bool>(), m),
                prop::collection::vec(prop::collection::vec(-5.0f64..5.0, m), n),
                prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n),
                prop_oneof![
                    Just(Linkage::Single),
                    Just(Linkage::Complete),
                    Just(Linkage::Average)
                ],
            )
        })
        .prop_map(|(kinds, rows, coords, linkage)| {
            let schema: Vec<Attribute> = kinds
                .iter()
                .enumerate()
                .map(|(j, &b)| {
                    let kind = if b {
                        AttributeType::Boolean
                    } else {
                        AttributeType::Real
                    };
                    Attribute::new(format!("a{j}"), kind)
                })
                .collect();
            let rows: Vec<Vec<f64>> = rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .zip(&kinds)
                        .map(|(v, &b)| if b { f64::from(u8::from(v > 0.0)) } else { v })
                        .collect()
                })
                .collect();
            Instance {
                dataset: Dataset::from_rows(&rows, schema).unwrap(),
                embedding: Embedding::new(coords.into_iter().map(|(x, y)| [x, y]).collect()).unwrap(),
                linkage,
            }
        })
}

fn random_cut(d: &xclust_core::Dendrogram, picks: &[usize]) -> CutSet {
    let mut cut = CutSet::root(d);
    for &p in picks {
        let c = candidate_splits(d, &cut, 1);
        if c.is_empty() {
            break;
        }
        cut = cut.with_split(c[p % c.len()]);
    }
    cut
}

fn hyper() -> impl Strategy<Value = Hyperparameters> {
    (0.0f64..200.0, 1.0f64..2.0).prop_map(|(a, b)| Hyperparameters::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cutset_clusters_partition_points(inst in instance(), picks in prop::collection::vec(0usize..100, 0..10)) {
        let d = build_dendrogram(&inst.embedding, inst.linkage).unwrap();
        let cut = random_cut(&d, &picks);
        let clusters = clusters_from_cutset(&d, &cut).unwrap();
        prop_assert_eq!(clusters.len(), cut.len());
        let mut seen = vec![0u32; inst.dataset.n()];
        for c in &clusters {
            prop_assert!(!c.is_empty());
            for &i in c {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn every_cluster_keeps_an_attribute_and_no_single_add_helps(
        inst in instance(),
        picks in prop::collection::vec(0usize..100, 0..5),
        hp in hyper(),
    ) {
        let prior = fit_prior(&inst.dataset, 1e-4).unwrap();
        let d = build_dendrogram(&inst.embedding, inst.linkage).unwrap();
        let partition = clusters_from_cutset(&d, &random_cut(&d, &picks)).unwrap();
        let patterns = select_attributes(&partition, &inst.dataset, &prior, &hp).unwrap();
        let si = subjective_interestingness(&patterns, &prior, &hp).unwrap().si;
        for (c, p) in patterns.iter().enumerate() {
            prop_assert!(!p.attributes().is_empty());
            for j in (0..inst.dataset.m()).filter(|j| !p.attributes().contains(j)) {
                let mut attrs = p.attributes().to_vec();
                attrs.push(j);
                let stats = fit_cluster_statistics(&inst.dataset, &prior, p.points(), &attrs).unwrap();
                let mut more = patterns.clone();
                more[c] = BiclusterPattern::new(p.points().to_vec(), attrs, stats).unwrap();
                let s = subjective_interestingness(&more, &prior, &hp).unwrap().si;
                prop_assert!(s <= si * (1.0 + 1e-12) + 1e-300);
            }
        }
    }

    #[test]
    fn greedy_returns_best_recorded_iteration(inst in instance(), hp in hyper(), cap in 1usize..12) {
        let prior = fit_prior(&inst.dataset, 1e-4).unwrap();
        let d = build_dendrogram(&inst.embedding, inst.linkage).unwrap();
        let ctx = SearchContext::new(&inst.dataset, &prior, &d).unwrap();
        let (s, trace) = ctx.greedy_search(&hp, &SearchBudget::iterations(cap)).unwrap();
        prop_assert!(trace.iterations() <= cap);
        prop_assert!(trace.iterations() >= 1);
        let best = trace.records.iter().map(|r| r.si).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(s.si, best);
        prop_assert_eq!(s.iterations_completed, trace.iterations());
        for (i, r) in trace.records.iter().enumerate() {
            prop_assert_eq!(r.k, i + 1);
        }
        let again = ctx.evaluate(&s.cut_set, &hp).unwrap();
        prop_assert_eq!(again.si, s.si);
    }

    #[test]
    fn capped_greedy_is_deterministic(inst in instance(), hp in hyper(), cap in 1usize..8) {
        let prior = fit_prior(&inst.dataset, 1e-4).unwrap();
        let d = build_dendrogram(&inst.embedding, inst.linkage).unwrap();
        let hp = hp.with_iteration_cap(cap);
        let (a, _) = xclust_core::greedy_search(&d, &inst.dataset, &prior, &hp).unwrap();
        let d2 = build_dendrogram(&inst.embedding, inst.linkage).unwrap();
        let (b, _) = xclust_core::greedy_search(&d2, &inst.dataset, &prior, &hp).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn refine_never_scores_below_rescored_start(
        inst in instance(),
        picks in prop::collection::vec(0usize..100, 0..6),
        first in hyper(),
        second in hyper(),
    ) {
        let prior = fit_prior(&inst.dataset, 1e-4).unwrap();
        let d = build_dendrogram(&inst.embedding, inst.linkage).unwrap();
        let ctx = SearchContext::new(&inst.dataset, &prior, &d).unwrap();
        let start = ctx.evaluate(&random_cut(&d, &picks), &first).unwrap();
        let rescored = ctx.evaluate(&start.cut_set, &second).unwrap();
        let (refined, _) = ctx.refine(&start, &second, &SearchBudget::unlimited()).unwrap();
        prop_assert!(refined.si >= rescored.si);
        for v in candidate_splits(&d, &refined.cut_set, 1) {
            prop_assert!(ctx.evaluate(&refined.cut_set.with_split(v), &second).unwrap().si <= refined.si);
        }
        for w in candidate_merges(&d, &refined.cut_set) {
            prop_assert!(ctx.evaluate(&refined.cut_set.without(w), &second).unwrap().si <= refined.si);
        }
        let (again, _) = ctx.refine(&refined, &second, &SearchBudget::unlimited()).unwrap();
        prop_assert_eq!(again.cut_set, refined.cut_set);
    }
}
