use std::collections::BTreeSet;

use proptest::prelude::*;

use itlex::extraction::{align, extract_samples, CategoryMap, SamplePair};
use itlex::fstructure::{FStructure, Item, ParseError};
use itlex::itnet::{
    merge_counts, oracle_ranking, posterior_oracle, train, update_counts, CountStore, Network,
    TIE_TOLERANCE,
};

fn label() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_-]{0,6}"
}

fn token() -> impl Strategy<Value = String> {
    "[a-z0-9'.,-]{1,6}"
}

fn structure() -> impl Strategy<Value = FStructure> {
    let leaf = (label(), prop::collection::vec(token(), 0..4)).prop_map(|(l, ts)| {
        FStructure::new(&l, ts.into_iter().map(Item::Token).collect()).unwrap()
    });
    leaf.prop_recursive(4, 64, 4, |inner| {
        (
            label(),
            prop::collection::vec(
                prop_oneof![token().prop_map(Item::Token), inner.prop_map(Item::Sub)],
                0..5,
            ),
        )
            .prop_map(|(l, items)| FStructure::new(&l, items).unwrap())
    })
}

fn sample() -> impl Strategy<Value = SamplePair> {
    (prop::collection::btree_set(0..12u8, 1..4), 0..6u8).prop_map(|(ins, out)| {
        SamplePair::new("x", ins.iter().map(|i| format!("i{i}")), &format!("o{out}"))
    })
}

fn samples() -> impl Strategy<Value = Vec<SamplePair>> {
    prop::collection::vec(sample(), 1..30)
}

fn lambda() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(1.0), 0.01f64..3.0]
}

fn query() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec((0..14u8).prop_map(|i| format!("i{i}")), 0..5)
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(fs in structure()) {
        let text = fs.serialize();
        let back = FStructure::parse(&text).unwrap();
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back, fs);
    }

    #[test]
    fn parse_is_case_and_space_insensitive(fs in structure(), pad in "[ \t\n]{1,3}") {
        let text = fs.serialize();
        let loud = text.to_uppercase().replace(' ', &pad);
        prop_assert_eq!(FStructure::parse(&loud).unwrap().serialize(), text);
    }

    #[test]
    fn dropping_a_bracket_is_rejected(fs in structure(), pick in any::<prop::sample::Index>()) {
        let text = fs.serialize();
        let brackets: Vec<usize> =
            text.char_indices().filter(|&(_, c)| c == '[' || c == ']').map(|(i, _)| i).collect();
        let at = brackets[pick.index(brackets.len())];
        let mut broken = text.clone();
        broken.remove(at);
        let err = FStructure::parse(&broken).unwrap_err();
        if text.as_bytes()[at] == b']' {
            prop_assert!(matches!(err, ParseError::UnbalancedBrackets(_)), "{:?} -> {:?}", broken, err);
        } else {
            prop_assert!(FStructure::parse(&broken).is_err());
        }
    }

    #[test]
    fn head_is_the_last_own_token(fs in structure()) {
        let last = fs.tokens().last().map(str::to_string);
        prop_assert_eq!(fs.head().ok().map(|h| h.into_string()), last);
    }

    #[test]
    fn extraction_is_deterministic_and_bounded(src in structure(), tgt in structure()) {
        let cmap = CategoryMap::default();
        let alignment = align(&src, &tgt);
        // the roots are paired whatever their labels
        for (s, t) in alignment.pairs.iter().skip(1) {
            prop_assert_eq!(s.label(), t.label());
        }
        let (a, _) = extract_samples(&alignment.pairs, &cmap);
        prop_assert_eq!(&a, &extract_samples(&align(&src, &tgt).pairs, &cmap).0);
        let src_heads: BTreeSet<String> =
            src.all_heads().into_iter().map(|h| h.into_string()).collect();
        let tgt_heads: BTreeSet<String> =
            tgt.all_heads().into_iter().map(|h| h.into_string()).collect();
        for s in &a {
            prop_assert!(s.inputs.is_subset(&src_heads));
            prop_assert!(tgt_heads.contains(&s.output));
        }
    }

    #[test]
    fn self_alignment_yields_identity_samples(fs in structure()) {
        let cmap = CategoryMap::default();
        let alignment = align(&fs, &fs);
        prop_assert_eq!(alignment.diagnostics.skipped, 0);
        for s in extract_samples(&alignment.pairs, &cmap).0 {
            prop_assert!(s.inputs.contains(&s.output));
        }
    }

    #[test]
    fn training_order_does_not_matter(mut xs in samples(), l in lambda(), seed in any::<u64>()) {
        let forward = train("x", l, &xs).unwrap();
        let n = xs.len();
        xs.rotate_left((seed as usize) % n);
        xs.reverse();
        prop_assert_eq!(forward, train("x", l, &xs).unwrap());
    }

    #[test]
    fn merge_matches_batch(xs in samples(), cut in any::<prop::sample::Index>(), l in lambda()) {
        let cut = cut.index(xs.len() + 1);
        let (a, b) = xs.split_at(cut);
        let merged = merge_counts(&train("x", l, a).unwrap(), &train("x", l, b).unwrap()).unwrap();
        let whole = train("x", l, &xs).unwrap();
        prop_assert_eq!(merged.to_model_string(), whole.to_model_string());
        prop_assert_eq!(merged, whole);
    }

    #[test]
    fn counts_stay_consistent(xs in samples(), l in lambda()) {
        let mut store = CountStore::new("x", l).unwrap();
        for s in &xs {
            store = update_counts(store, s).unwrap();
            prop_assert!(store.check_invariants().is_ok());
        }
        let doubled = merge_counts(&store, &store).unwrap();
        prop_assert!(doubled.check_invariants().is_ok());
        prop_assert_eq!(doubled.n_samples(), 2 * store.n_samples());
        let outs: u64 = store.outputs().map(|(_, c)| c).sum();
        prop_assert_eq!(outs, xs.len() as u64);
    }

    #[test]
    fn smoothed_parameters_are_finite(xs in samples(), l in lambda()) {
        let net = Network::new(train("x", l, &xs).unwrap());
        for j in net.out_vocab() {
            let b = net.bias(j).unwrap();
            prop_assert!(b.is_finite());
            let several = net.out_vocab().len() >= 2;
            prop_assert!((several && b < 0.0) || (!several && b == 0.0));
            for i in net.in_vocab() {
                prop_assert!(net.weight(i, j).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn scores_decompose_into_weights(xs in samples(), l in lambda(), q in query(), extra in 0..12u8) {
        let net = Network::new(train("x", l, &xs).unwrap());
        let extra = format!("i{extra}");
        prop_assume!(net.in_vocab().contains(&extra));
        let base: BTreeSet<String> = q.into_iter().filter(|i| *i != extra).collect();
        let mut more = base.clone();
        more.insert(extra.clone());
        let (a, b) = (net.activate(&base), net.activate(&more));
        for j in net.out_vocab() {
            let w = net.weight(&extra, j).unwrap();
            prop_assert!((b.scores[j] - a.scores[j] - w).abs() < 1e-9);
        }
    }

    #[test]
    fn network_agrees_with_oracle(xs in samples(), l in lambda(), q in query()) {
        let store = train("x", l, &xs).unwrap();
        let net = Network::new(store.clone());
        let ranked: Vec<String> = net.activate(&q).ranking().into_iter().map(|(t, _)| t).collect();
        let oracle: Vec<String> =
            oracle_ranking(&store, &q).unwrap().into_iter().map(|(t, _)| t).collect();
        prop_assert_eq!(&ranked, &oracle);
        prop_assert_eq!(&net.select(&q).unwrap(), &oracle[0]);

        let post = posterior_oracle(&store, &q).unwrap();
        let mass: f64 = post.values().sum();
        prop_assert!((mass - 1.0).abs() < 1e-9);
        let best = post.values().cloned().fold(0.0, f64::max);
        prop_assert!(post[&oracle[0]] >= best * (1.0 - TIE_TOLERANCE));
    }

    #[test]
    fn unknown_inputs_do_not_change_scores(xs in samples(), l in lambda(), q in query()) {
        let net = Network::new(train("x", l, &xs).unwrap());
        let mut noisy = q.clone();
        noisy.push("never-seen".into());
        let (a, b) = (net.activate(&q), net.activate(&noisy));
        prop_assert_eq!(a.scores, b.scores);
        prop_assert!(b.unknown_inputs.contains("never-seen"));
    }

    #[test]
    fn model_text_round_trips(xs in samples(), l in lambda()) {
        let store = train("x", l, &xs).unwrap();
        let text = store.to_model_string();
        let back = CountStore::from_model_str(&text).unwrap();
        prop_assert_eq!(back.to_model_string(), text);
        prop_assert_eq!(back, store);
    }
}

#[test]
fn c0_split_merges_to_the_whole() {
    let c0 = [
        SamplePair::new("vp", ["eat", "apple"], "essen"),
        SamplePair::new("vp", ["eat", "bread"], "essen"),
        SamplePair::new("vp", ["drink", "water"], "trinken"),
    ];
    let a = train("vp", 0.5, &c0[..1]).unwrap();
    let b = train("vp", 0.5, &c0[1..]).unwrap();
    let merged = merge_counts(&a, &b).unwrap();
    assert_eq!(merged, train("vp", 0.5, &c0).unwrap());
    assert_eq!(merged.c_in("eat"), 2);
    assert_eq!(merged.c_joint("eat", "essen"), 2);
    assert_eq!(merged.n_samples(), 3);
}
