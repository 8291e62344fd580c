use std::sync::Arc;

use dupsub::blocks::{count_blocks_upto, BlockCounter};
use dupsub::channel::{Channel, ChannelConfig};
use dupsub::dup::{
    deduplicate_at, descendants_up_to, duplicate, is_irreducible, repeats, root, root_by_scan,
    root_diff,
};
use dupsub::eigen::graph_eigenvalue;
use dupsub::graph::IrrGraph;
use dupsub::oracle::{blocks_by_filter, irreducible_words};
use dupsub::rates::log2_big;
use dupsub::Word;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn word(q: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..q, 0..=max_len)
}

fn dups(max: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((any::<usize>(), 1usize..=3), 0..=max)
}

/// Applies duplications with positions reduced modulo the valid range.
fn apply_all(mut x: Vec<u8>, ops: &[(usize, usize)]) -> Vec<u8> {
    for &(p, len) in ops {
        if len <= x.len() {
            let pos = p % (x.len() - len + 1);
            x = duplicate(&x, pos, len);
        }
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn root_is_irreducible_and_idempotent(x in word(4, 60)) {
        let r = root(&x);
        prop_assert!(is_irreducible(&r));
        prop_assert_eq!(root(&r), r.clone());
        prop_assert_eq!(root_by_scan(&x), r);
    }

    #[test]
    fn any_collapse_order_gives_the_root(x in word(3, 40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = x.clone();
        loop {
            let reps = repeats(&w);
            if reps.is_empty() {
                break;
            }
            let (i, a) = reps[rng.gen_range(0..reps.len())];
            deduplicate_at(&mut w, i, a);
        }
        prop_assert_eq!(w, root(&x));
    }

    #[test]
    fn duplications_preserve_the_root(x in word(4, 30), ops in dups(12)) {
        let y = apply_all(x.clone(), &ops);
        prop_assert_eq!(root(&y), root(&x));
    }

    #[test]
    fn split_survives_duplications(
        x in prop::collection::vec(0u8..4, 5..=20),
        cut in any::<(usize, usize)>(),
        ops in dups(10),
    ) {
        // x = r ab t de s with t nonempty
        let n = x.len();
        let i = cut.0 % (n - 4);
        let j = i + 3 + cut.1 % (n - 4 - i);
        let (ab, de) = (x[i..i + 2].to_vec(), x[j..j + 2].to_vec());
        let mut parts = [x[..i + 2].to_vec(), x[i..j + 2].to_vec(), x[j..].to_vec()];
        let mut whole = x.clone();
        for &(p, len) in &ops {
            if len > whole.len() {
                continue;
            }
            let pos = p % (whole.len() - len + 1);
            let target = duplicate(&whole, pos, len);
            let starts = [0, parts[0].len() - 2, parts[0].len() + parts[1].len() - 4];
            let mut placed = false;
            for k in 0..3 {
                if pos < starts[k] || pos + len > starts[k] + parts[k].len() {
                    continue;
                }
                let local = duplicate(&parts[k], pos - starts[k], len);
                let keeps = match k {
                    0 => local.ends_with(&ab),
                    1 => local.starts_with(&ab) && local.ends_with(&de),
                    _ => local.starts_with(&de),
                };
                if !keeps {
                    continue;
                }
                let mut trial = parts.clone();
                trial[k] = local;
                let mut joined = trial[0].clone();
                joined.extend_from_slice(&trial[1][2..]);
                joined.extend_from_slice(&trial[2][2..]);
                if joined == target {
                    parts = trial;
                    placed = true;
                    break;
                }
            }
            prop_assert!(placed, "no part absorbs duplication at {} of length {}", pos, len);
            whole = target;
        }
    }

    #[test]
    fn root_change_fits_the_window(x in word(4, 30), seed in any::<u64>()) {
        prop_assume!(!x.is_empty());
        let x = Word::new(4, x).unwrap();
        let mut ch = Channel::new(ChannelConfig {
            max_duplications: 8,
            seed,
            ..ChannelConfig::default()
        })
        .unwrap();
        let (y, _) = ch.sample(&x);
        let (rx, ry) = (x.root(), y.root());
        let d = root_diff(&rx, &ry).unwrap();
        prop_assert!(d.removed.len() <= 17 && d.inserted.len() <= 17);
        let rebuild = |mid: &Word| {
            let mut v = d.prefix.symbols().to_vec();
            v.extend_from_slice(mid.symbols());
            v.extend_from_slice(d.suffix.symbols());
            v
        };
        prop_assert_eq!(rebuild(&d.removed), rx.symbols().to_vec());
        prop_assert_eq!(rebuild(&d.inserted), ry.symbols().to_vec());
    }

    #[test]
    fn bounded_descendants_share_the_root(x in word(3, 6), extra in 0usize..5) {
        let cap = x.len() + extra;
        let r = root(&x);
        for d in descendants_up_to(&x, cap) {
            prop_assert!(d.len() <= cap);
            prop_assert_eq!(root(&d), r.clone());
        }
    }
}

fn markers(q: u8) -> Vec<Word> {
    irreducible_words(q, 5)
        .into_iter()
        .map(|s| Word::new(q, s).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_tables_agree_with_filter(pick in any::<usize>(), q in 3u8..=4, m in 1usize..=6) {
        let all = markers(q);
        let sigma = &all[pick % all.len()];
        let graph = Arc::new(IrrGraph::build(q).unwrap());
        let bc = BlockCounter::new(graph, sigma, m).unwrap();
        let brute = blocks_by_filter(sigma, m);
        prop_assert_eq!(bc.count().clone(), brute.len().into());
        for (i, b) in brute.iter().enumerate() {
            prop_assert_eq!(bc.unrank_u64(i as u64).unwrap().into_symbols(), b.clone());
            prop_assert_eq!(bc.rank_u64(b).unwrap(), Some(i as u64));
        }
    }

    #[test]
    fn unranked_blocks_are_valid(rank in any::<u64>(), m in 18usize..=40) {
        let sigma = Word::parse(4, "01201").unwrap();
        let graph = Arc::new(IrrGraph::build(4).unwrap());
        let bc = BlockCounter::new(graph, &sigma, m).unwrap();
        let r = num_bigint::BigUint::from(rank) % bc.count();
        let b = bc.unrank(&r).unwrap();
        let mut framed = sigma.symbols().to_vec();
        framed.extend_from_slice(b.symbols());
        framed.extend_from_slice(sigma.symbols());
        prop_assert!(is_irreducible(&framed));
        prop_assert_eq!(dupsub::oracle::count_occurrences(&framed, sigma.symbols()), 2);
        prop_assert_eq!(bc.rank(b.symbols()).unwrap(), r);
    }
}

#[test]
fn count_ratio_approaches_the_eigenvalue() {
    let graph = IrrGraph::build(4).unwrap();
    let sigma = Word::parse(4, "01201").unwrap();
    let counts = count_blocks_upto(&graph, &sigma, 61).unwrap();
    let ratio = 2f64.powf(log2_big(&counts[60]) - log2_big(&counts[59]));
    let lambda = graph_eigenvalue(&graph, Some(&sigma)).unwrap().value;
    assert!((ratio - lambda).abs() < 1e-3, "{ratio} vs {lambda}");
}

#[test]
fn rate_trend_stays_above_log_q_minus_two() {
    for q in 3u8..=5 {
        let graph = IrrGraph::build(q).unwrap();
        let sigma = Word::parse(q, "01201").unwrap();
        let counts = count_blocks_upto(&graph, &sigma, 60).unwrap();
        for m in 30..=60 {
            let rate = log2_big(&counts[m - 1]) / (m + 5) as f64;
            assert!(
                rate >= ((q - 2) as f64).log2() - 0.05,
                "q={q} m={m} rate={rate}"
            );
        }
    }
}

#[test]
fn growth_bound_for_the_marker_01020() {
    for q in [4u8, 5] {
        let r = dupsub::verify::graph_report(q, "01020", 40).unwrap();
        assert!(r.reaches_marker);
        assert_eq!(r.c, Some(1));
        assert!(r.bound_failures.is_empty(), "q={q}: {:?}", r.bound_failures);
    }
    // Over three symbols no block of length 1..=4 exists for this marker, so
    // (q-2)^(m-c) = 1 cannot be met there for any c; from m = 5 on it holds.
    let r = dupsub::verify::graph_report(3, "01020", 40).unwrap();
    assert!(r.reaches_marker);
    assert_eq!(r.c, Some(3));
    assert_eq!(r.bound_failures, vec![1, 2, 3, 4]);
    assert!(r.counts[..4].iter().all(|c| *c == 0u32.into()));
}
