use std::collections::{HashMap, HashSet};

use gsnmf::graph::{build_interaction_matrix, degrees, symmetric_normalize, InteractionEvent};
use gsnmf::metrics::{ari, nmi, purity, LabeledPartition};
use gsnmf::opinion::{
    attribute_sentiment, build_opinion_matrix, extract_key_expressions, filter_matrix,
    message_events, tokenize, HeuristicTagger, Lexicon, Message, NameIndex, Tagger,
};
use gsnmf::profile::{community_sentiment_words, extract_profiles};
use gsnmf::solver::{hard_assign, objective};
use gsnmf::synthetic::{generate, PlantedConfig};
use ndarray::Array2;
use proptest::prelude::*;
use proptest::sample::select;

const WORDS: &[&str] = &[
    "Trump",
    "Hillary",
    "Clinton",
    "#MAGA",
    "#ImWithHer",
    "@POTUS",
    "tax",
    "plan",
    "economy",
    "jobs",
    "great",
    "angry",
    "unfit",
    "love",
    "weak",
    "the",
    "is",
    "and",
    "I",
    "so",
    "Texas.",
    "bad!",
    "GOP",
    "good",
    "very",
];
const USERS: &[&str] = &["ann", "ben", "cat", "dan"];

fn lexicon() -> Lexicon {
    Lexicon::from_pairs([
        ("great", 3),
        ("angry", -3),
        ("unfit", -4),
        ("love", 4),
        ("weak", -2),
        ("bad", -3),
        ("good", 2),
    ])
    .unwrap()
}

fn tagger() -> HeuristicTagger {
    HeuristicTagger::new(["tax", "plan", "economy", "jobs"])
}

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec(select(WORDS), 1..14).prop_map(|w| w.join(" "))
}

fn messages() -> impl Strategy<Value = Vec<Message>> {
    prop::collection::vec((select(USERS), text()), 1..12).prop_map(|v| {
        v.into_iter()
            .map(|(u, t)| Message::new(u, t).unwrap())
            .collect()
    })
}

fn events(text: &str, window: usize) -> Vec<(String, i32)> {
    message_events(text, &tagger(), &lexicon(), window, &HashSet::new())
}

fn build(msgs: &[Message]) -> gsnmf::opinion::OpinionMatrix {
    gsnmf::opinion::build_opinion_matrix_with(msgs, &tagger(), &lexicon(), 3, &HashSet::new())
        .unwrap()
}

fn sym_weights(n: usize) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..5.0f64], n * n).prop_map(move |v| {
        let mut w = Array2::zeros((n, n));
        for i in 0..n {
            for j in (i + 1)..n {
                w[[i, j]] = v[i * n + j];
                w[[j, i]] = v[i * n + j];
            }
        }
        w
    })
}

fn partition(n: usize, k: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..k, n)
}

fn part(labels: &[i64]) -> LabeledPartition {
    LabeledPartition::new(labels.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opinion_matrix_is_deterministic(msgs in messages()) {
        prop_assert_eq!(build(&msgs), build(&msgs));
    }

    #[test]
    fn message_order_does_not_change_values(msgs in messages(), seed in any::<u64>()) {
        let mut shuffled = msgs.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.reverse();
        let a = build(&msgs);
        let b = build(&shuffled);
        for e in a.expressions.names() {
            for u in a.users.names() {
                prop_assert_eq!(a.get(e, u), b.get(e, u));
            }
        }
        prop_assert_eq!(a.nnz(), b.nnz());
    }

    #[test]
    fn cells_equal_event_sums(msgs in messages()) {
        let x = build(&msgs);
        let mut sums: HashMap<(String, String), i64> = HashMap::new();
        for m in &msgs {
            for (e, s) in events(&m.text, 3) {
                *sums.entry((e, m.user_id.clone())).or_insert(0) += i64::from(s);
            }
        }
        for ((e, u), s) in &sums {
            prop_assert_eq!(x.get(e, u), *s as f64);
        }
        let listed: usize = sums.values().filter(|&&s| s != 0).count();
        prop_assert_eq!(x.nnz(), listed);
    }

    #[test]
    fn larger_window_never_loses_events(t in text(), w in 1usize..6) {
        prop_assert!(events(&t, w + 1).len() >= events(&t, w).len());
    }

    #[test]
    fn filter_is_a_fixpoint(msgs in messages(), a in 0usize..4, b in 0usize..4) {
        let x = build(&msgs);
        let (once, _) = filter_matrix(&x, a, b);
        let (twice, report) = filter_matrix(&once, a, b);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(report.removed_expressions + report.removed_users, 0);
    }

    #[test]
    fn attributions_target_extracted_expressions(t in text()) {
        let lex = lexicon();
        let mut tokens = tokenize(&t);
        tagger().tag(&mut tokens);
        let occ = extract_key_expressions(&tokens);
        let names: HashSet<&str> = occ.iter().map(|o| o.canonical.as_str()).collect();
        for (e, s) in attribute_sentiment(&tokens, &occ, &lex, 3) {
            prop_assert!(names.contains(e.as_str()));
            prop_assert!(s != 0 && s.abs() <= 5);
        }
    }

    #[test]
    fn normalization_is_symmetric_and_bounded(w in sym_weights(7)) {
        let norm = symmetric_normalize(&w).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                prop_assert_eq!(norm[[i, j]].to_bits(), norm[[j, i]].to_bits());
            }
        }
        // Power iteration on W̃² estimates the squared spectral radius.
        let sq = norm.dot(&norm);
        let mut v = ndarray::Array1::from_elem(7, 1.0);
        let mut rho = 0.0;
        for _ in 0..500 {
            let next = sq.dot(&v);
            let len = next.iter().map(|a| a * a).sum::<f64>().sqrt();
            if len == 0.0 {
                break;
            }
            rho = len / v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v = next / len;
        }
        prop_assert!(rho.sqrt() <= 1.0 + 1e-9, "spectral radius {}", rho.sqrt());
    }

    #[test]
    fn regular_graph_normalizes_to_scaled_copy(n in 3usize..12, c in 1u32..6) {
        let mut w = Array2::zeros((n, n));
        for i in 0..n {
            let j = (i + 1) % n;
            w[[i, j]] = f64::from(c);
            w[[j, i]] = f64::from(c);
        }
        let d = degrees(&w)[0];
        prop_assert_eq!(symmetric_normalize(&w).unwrap(), w.mapv(|v| v / d));
    }

    #[test]
    fn interaction_matrix_ignores_event_order(
        edges in prop::collection::vec((0usize..5, 0usize..6, 0u32..4), 0..30),
    ) {
        let users = NameIndex::from_names(["a", "b", "c", "d", "e"]).unwrap();
        let names = ["a", "b", "c", "d", "e", "zz"];
        let evs: Vec<InteractionEvent> = edges
            .iter()
            .map(|&(i, j, c)| InteractionEvent::new(names[i], names[j], f64::from(c)))
            .collect();
        let mut rev = evs.clone();
        rev.reverse();
        let (w1, r1) = build_interaction_matrix(&evs, &users);
        let (w2, r2) = build_interaction_matrix(&rev, &users);
        prop_assert_eq!(&w1, &w2);
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(&w1, &w1.t().to_owned());
    }

    #[test]
    fn metrics_ignore_relabeling(a in partition(30, 4), b in partition(30, 3), shift in 1i64..50) {
        let relabeled: Vec<i64> = a.iter().map(|x| (3 - x) * 7 + shift).collect();
        let (pa, pb, pr) = (part(&a), part(&b), part(&relabeled));
        prop_assert_eq!(nmi(&pa, &pb).unwrap(), nmi(&pr, &pb).unwrap());
        prop_assert_eq!(ari(&pa, &pb).unwrap(), ari(&pr, &pb).unwrap());
        prop_assert_eq!(purity(&pa, &pb).unwrap(), purity(&pr, &pb).unwrap());
    }

    #[test]
    fn metrics_symmetry_and_ranges(a in partition(25, 4), b in partition(25, 5)) {
        let (pa, pb) = (part(&a), part(&b));
        let (n1, n2) = (nmi(&pa, &pb).unwrap(), nmi(&pb, &pa).unwrap());
        prop_assert_eq!(n1, n2);
        prop_assert_eq!(ari(&pa, &pb).unwrap(), ari(&pb, &pa).unwrap());
        prop_assert!((0.0..=1.0).contains(&n1));
        prop_assert!((-1.0..=1.0).contains(&ari(&pa, &pb).unwrap()));
        let p = purity(&pa, &pb).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert_eq!(nmi(&pa, &pa).unwrap(), 1.0);
        prop_assert_eq!(ari(&pa, &pa).unwrap(), 1.0);
        prop_assert_eq!(purity(&pa, &pa).unwrap(), 1.0);
    }

    #[test]
    fn profiles_respect_signs_and_limits(
        vals in prop::collection::vec(prop_oneof![Just(0.0), -3.0..3.0f64, Just(1.5)], 24),
        top in 1usize..8,
    ) {
        let v = Array2::from_shape_vec((8, 3), vals).unwrap();
        let names: Vec<String> = (0..8).map(|i| format!("e{i}")).collect();
        let profiles = extract_profiles(&v, &names, top).unwrap();
        prop_assert_eq!(&profiles, &extract_profiles(&v, &names, top).unwrap());
        for prof in &profiles {
            prop_assert!(prof.positive.len() + prof.negative.len() <= 2 * top);
            prop_assert!(prof.positive.iter().all(|e| e.strength > 0.0));
            prop_assert!(prof.negative.iter().all(|e| e.strength < 0.0));
            let pos: HashSet<&str> = prof.positive.iter().map(|e| e.expression.as_str()).collect();
            prop_assert!(prof.negative.iter().all(|e| !pos.contains(e.expression.as_str())));
            prop_assert!(prof.positive.windows(2).all(|p| p[0].strength >= p[1].strength));
            prop_assert!(prof.negative.windows(2).all(|p| p[0].strength <= p[1].strength));
        }
    }

    #[test]
    fn sentiment_word_counts_match_events(msgs in messages(), pick in 0usize..4) {
        let assignments: HashMap<String, usize> = USERS
            .iter()
            .enumerate()
            .map(|(i, u)| (u.to_string(), i % 2))
            .collect();
        let target = ["trump", "hillary clinton", "maga", "tax plan"][pick];
        let counts = community_sentiment_words(&msgs, &assignments, &tagger(), &lexicon(), 3, target);
        let mut expected = [0usize; 2];
        for m in &msgs {
            let hits = events(&m.text, 3).into_iter().filter(|(e, _)| e == target).count();
            expected[assignments[&m.user_id]] += hits;
        }
        for (c, want) in expected.iter().enumerate() {
            let total: usize = counts.get(&c).map_or(0, |w| w.iter().map(|x| x.frequency).sum());
            prop_assert_eq!(total, *want);
        }
    }

    #[test]
    fn planted_instances_are_reproducible(seed in 0u64..500, k in 2usize..5) {
        let cfg = PlantedConfig { n: 40, m: 12, k, seed, ..PlantedConfig::default() };
        let a = generate(&cfg).unwrap();
        prop_assert_eq!(&a, &generate(&cfg).unwrap());
        for i in 0..40 {
            prop_assert_eq!(a.w[[i, i]], 0.0);
            for j in 0..40 {
                prop_assert_eq!(a.w[[i, j]], a.w[[j, i]]);
            }
        }
        let mut sizes = vec![0usize; k];
        for &l in &a.labels {
            sizes[l] += 1;
        }
        let expect = 40.0 / k as f64;
        let sigma = (40.0 * (1.0 / k as f64) * (1.0 - 1.0 / k as f64)).sqrt();
        prop_assert!(sizes.iter().all(|&s| (s as f64 - expect).abs() <= 3.0 * sigma));
    }

    #[test]
    fn column_permutation_permutes_assignment(
        u in prop::collection::vec(0.0..1.0f64, 30),
        v in prop::collection::vec(-1.0..1.0f64, 15),
    ) {
        let u = Array2::from_shape_vec((10, 3), u).unwrap();
        let v = Array2::from_shape_vec((5, 3), v).unwrap();
        let x = Array2::from_shape_fn((5, 10), |(i, j)| ((i * 10 + j) % 7) as f64 - 3.0);
        let w = Array2::from_shape_fn((10, 10), |(i, j)| if i != j && (i + j) % 3 == 0 { 0.2 } else { 0.0 });
        let perm = [1usize, 2, 0];
        let pu = Array2::from_shape_fn(u.dim(), |(i, j)| u[[i, perm[j]]]);
        let pv = Array2::from_shape_fn(v.dim(), |(i, j)| v[[i, perm[j]]]);
        let f = objective(&x, &u, &v, &w, 10.0).unwrap();
        let g = objective(&x, &pu, &pv, &w, 10.0).unwrap();
        prop_assert!((f - g).abs() <= 1e-12 * f.abs().max(1.0));
        let before = hard_assign(&u).labels;
        let after = hard_assign(&pu).labels;
        for (b, a) in before.iter().zip(&after) {
            prop_assert_eq!(perm[*a], *b);
        }
    }
}

#[test]
fn default_builder_matches_explicit_default_tagger() {
    let msgs = vec![Message::new("ann", "Trump is great. I love #MAGA").unwrap()];
    let a = build_opinion_matrix(&msgs, &lexicon(), 3, &HashSet::new()).unwrap();
    let b = gsnmf::opinion::build_opinion_matrix_with(
        &msgs,
        &HeuristicTagger::default(),
        &lexicon(),
        3,
        &HashSet::new(),
    )
    .unwrap();
    assert_eq!(a, b);
}
