//! Computational checks shared by the command line and the test suites.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::blocks::count_blocks_upto;
use crate::channel::{Channel, ChannelConfig, ChannelTrace};
use crate::codec::{decode, decode_root, encode, CodeParams};
use crate::dup::{
    descendants_up_to, duplicate, max_root_after_one_sub, root, root_diff, RootGrowth, RootStack,
    MAX_DUP_LEN,
};
use crate::error::Result;
use crate::gf::FieldElement;
use crate::graph::{parse_marker, predicted_out_degree, IrrGraph, TUPLE_LEN};
use crate::rs::{ReedSolomon, PARITY};
use crate::word::{Symbol, Word};

/// Largest root reachable from `base` with one substitution, over
/// descendants of length at most `cap`.
pub fn lemma1(base: &Word, cap: usize) -> Result<RootGrowth> {
    max_root_after_one_sub(base, cap)
}

/// True if `target` is one substitution away from a descendant of `base` of
/// length at most `cap`.
pub fn reachable_with_one_sub(base: &Word, target: &Word, cap: usize) -> bool {
    if target.len() > cap || target.q() != base.q() {
        return false;
    }
    let descendants = descendants_up_to(base.symbols(), cap);
    let t = target.symbols();
    (0..t.len()).any(|pos| {
        (0..base.q()).filter(|&c| c != t[pos]).any(|c| {
            let mut v = t.to_vec();
            v[pos] = c;
            descendants.contains(&v)
        })
    })
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub trials: usize,
    pub max_removed: usize,
    pub max_inserted: usize,
    /// Trials whose root change exceeded the bound, with input and trace.
    pub violations: Vec<(Word, ChannelTrace)>,
}

/// Random words over `Σ_q` of length `1..=max_len` pass through a channel
/// with at most `max_dups` duplications and one substitution; the root change
/// is measured against `bound`.
pub fn theorem1(
    trials: usize,
    q: u8,
    max_len: usize,
    max_dups: usize,
    bound: usize,
    seed: u64,
) -> Result<Theorem1Report> {
    let results: Vec<(usize, usize, Option<(Word, ChannelTrace)>)> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<_> {
            let trial_seed = seed ^ trial as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let len = rng.gen_range(1..=max_len);
            let x = Word::new(q, (0..len).map(|_| rng.gen_range(0..q)).collect())?;
            let mut channel = Channel::new(ChannelConfig {
                max_duplications: max_dups,
                substitution: true,
                seed: trial_seed.wrapping_add(0x9e37_79b9_7f4a_7c15),
                ..ChannelConfig::default()
            })?;
            let (y, trace) = channel.sample(&x);
            let diff = root_diff(&x.root(), &y.root())?;
            let (r, i) = (diff.removed.len(), diff.inserted.len());
            let bad = (r > bound || i > bound).then_some((x, trace));
            Ok((r, i, bad))
        })
        .collect::<Result<_>>()?;
    Ok(Theorem1Report {
        trials,
        max_removed: results.iter().map(|r| r.0).max().unwrap_or(0),
        max_inserted: results.iter().map(|r| r.1).max().unwrap_or(0),
        violations: results.into_iter().filter_map(|r| r.2).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct GraphReport {
    pub q: u8,
    pub vertices: usize,
    pub edges: usize,
    /// Vertices whose out-degree differs from the formula.
    pub degree_mismatches: Vec<Word>,
    pub marker: Word,
    pub reaches_marker: bool,
    /// Longest shortest path to the marker, minus 5.
    pub c: Option<isize>,
    /// `M^(m)` for `m = 1..=max_m`.
    pub counts: Vec<BigUint>,
    /// Block lengths `m` at which `M^(m) >= (q-2)^(m-c)` fails.
    pub bound_failures: Vec<usize>,
}

/// `M >= (q-2)^(m-c)` in exact arithmetic.
pub fn growth_bound_holds(q: u8, c: isize, m: usize, count: &BigUint) -> bool {
    let exp = m as isize - c;
    if exp >= 0 {
        *count >= BigUint::from(q - 2).pow(exp as u32)
    } else {
        // (q-2)^exp lies in (0, 1] and M is an integer.
        *count >= BigUint::from(1u32)
    }
}

/// Out-degree formula, reachability of the marker, and the growth bound for
/// the marker's block counts up to `max_m`.
pub fn graph_report(q: u8, marker: &str, max_m: usize) -> Result<GraphReport> {
    let graph = IrrGraph::build(q)?;
    let sigma = parse_marker(q, marker)?;
    let target = graph.marker_id(&sigma)?;
    let degree_mismatches = (0..graph.vertex_count())
        .filter(|&v| graph.out_degree(v) != predicted_out_degree(q, graph.vertex(v)))
        .map(|v| Word::from_raw(q, graph.vertex(v).to_vec()))
        .collect();
    let reaches_marker = graph.reaches(target);
    let c = graph
        .max_distance_to(target)
        .map(|d| d as isize - TUPLE_LEN as isize);
    let counts = count_blocks_upto(&graph, &sigma, max_m)?;
    let bound_failures = match c {
        Some(c) => counts
            .iter()
            .enumerate()
            .filter(|(i, m_count)| !growth_bound_holds(q, c, i + 1, m_count))
            .map(|(i, _)| i + 1)
            .collect(),
        None => (1..=max_m).collect(),
    };
    Ok(GraphReport {
        q,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        degree_mismatches,
        marker: sigma,
        reaches_marker,
        c,
        counts,
        bound_failures,
    })
}

#[derive(Clone, Debug)]
pub struct SimFailure {
    pub trial: usize,
    pub message: Vec<FieldElement>,
    pub trace: ChannelTrace,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct SimReport {
    pub trials: usize,
    pub successes: usize,
    pub failures: Vec<SimFailure>,
}

impl SimReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

/// Random messages through encode, channel and decode. Trial `i` uses seed
/// `seed ^ i` for both the message and the channel.
pub fn simulate(
    params: &CodeParams,
    trials: usize,
    max_dups: usize,
    substitution: bool,
    seed: u64,
) -> Result<SimReport> {
    let size = params.outer_code().field().size() as u32;
    let outcomes: Vec<Option<SimFailure>> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<_> {
            let trial_seed = seed ^ trial as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let field = params.outer_code().field();
            let message = (0..params.message_len())
                .map(|_| field.element(rng.gen_range(0..size)))
                .collect::<Result<Vec<_>>>()?;
            let x = encode(params, &message)?;
            let mut channel = Channel::new(ChannelConfig {
                max_duplications: max_dups,
                substitution,
                seed: rng.gen(),
                ..ChannelConfig::default()
            })?;
            let (y, trace) = channel.sample(&x);
            let error = match decode(params, &y) {
                Ok(r) if r.message == message => return Ok(None),
                Ok(_) => "decoded to a different message".to_string(),
                Err(e) => e.to_string(),
            };
            Ok(Some(SimFailure {
                trial,
                message,
                trace,
                error,
            }))
        })
        .collect::<Result<_>>()?;
    let failures: Vec<SimFailure> = outcomes.into_iter().flatten().collect();
    Ok(SimReport {
        trials,
        successes: trials - failures.len(),
        failures,
    })
}

#[derive(Clone, Debug)]
pub struct ExhaustiveReport {
    /// Distinct words reachable with the duplication budget alone.
    pub descendants: usize,
    /// Distinct roots over all outputs, substitutions included.
    pub distinct_roots: usize,
    /// Roots that failed to decode to the message.
    pub failures: Vec<Vec<Symbol>>,
}

/// Every word within `max_dups` duplications of `x`.
pub fn duplication_ball(x: &[Symbol], max_dups: usize) -> HashSet<Vec<Symbol>> {
    let mut all: HashSet<Vec<Symbol>> = HashSet::from([x.to_vec()]);
    let mut frontier = vec![x.to_vec()];
    for _ in 0..max_dups {
        let mut next = Vec::new();
        for w in &frontier {
            for len in 1..=MAX_DUP_LEN.min(w.len()) {
                for pos in 0..=w.len() - len {
                    let d = duplicate(w, pos, len);
                    if all.insert(d.clone()) {
                        next.push(d);
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

/// Roots of every single substitution of `d`.
///
/// Uses `root(u ŵ z) = root(root(u) ŵ root(z))` with the prefix roots built
/// left to right and the suffix roots right to left. Once five symbols of the
/// irreducible `root(z)` sit on the stack untouched, no later symbol can
/// complete a repeat, so the rest is copied.
pub fn substitution_roots(d: &[Symbol], q: u8, out: &mut HashSet<Vec<Symbol>>) {
    let n = d.len();
    // suffix[p] = root(d[p+1..]), stored reversed.
    let mut suffix: Vec<Vec<Symbol>> = vec![Vec::new(); n];
    let mut rev = RootStack::with_capacity(n);
    for p in (0..n).rev() {
        suffix[p] = rev.as_slice().to_vec();
        rev.push(d[p]);
    }
    let mut prefix = RootStack::with_capacity(n);
    for p in 0..n {
        let tail: Vec<Symbol> = suffix[p].iter().rev().copied().collect();
        for sym in (0..q).filter(|&c| c != d[p]) {
            let mut stack = prefix.clone();
            stack.push(sym);
            let mut quiet = 0;
            let mut k = 0;
            while k < tail.len() && quiet < 2 * MAX_DUP_LEN - 1 {
                quiet = if stack.push(tail[k]) { 0 } else { quiet + 1 };
                k += 1;
            }
            let mut r = stack.into_vec();
            r.extend_from_slice(&tail[k..]);
            out.insert(r);
        }
        prefix.push(d[p]);
    }
}

/// Decodes every root reachable from codeword `x` with at most `max_dups`
/// duplications and one substitution, in any order.
///
/// Only the root of an output matters to the decoder, and duplications
/// applied after the substitution leave the root unchanged, so the roots of
/// all event orders are covered by substituting last into every word of the
/// duplication ball.
pub fn exhaustive_codeword(
    params: &CodeParams,
    x: &Word,
    message: &[FieldElement],
    max_dups: usize,
) -> ExhaustiveReport {
    let ball: Vec<Vec<Symbol>> = duplication_ball(x.symbols(), max_dups)
        .into_iter()
        .collect();
    let q = x.q();
    let mut roots: HashSet<Vec<Symbol>> = ball
        .par_iter()
        .fold(HashSet::new, |mut acc, d| {
            substitution_roots(d, q, &mut acc);
            acc
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    roots.insert(root(x.symbols()));
    let failures = roots
        .par_iter()
        .filter(|y| !matches!(decode_root(params, y), Ok(r) if r.message == message))
        .cloned()
        .collect();
    ExhaustiveReport {
        descendants: ball.len(),
        distinct_roots: roots.len(),
        failures,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RsExhaustiveReport {
    pub codewords: usize,
    pub min_distance: usize,
    pub error_patterns: usize,
    pub error_failures: usize,
    pub erasure_patterns: usize,
    pub erasure_failures: usize,
    /// Words whose zero-syndrome status disagrees with code membership.
    pub syndrome_mismatches: usize,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every codeword of the outer code over GF(2^degree) against every pattern
/// of at most two errors and every set of at most four erasures (erased
/// values zeroed), plus the minimum distance and, over all `2^(t N)` words,
/// agreement of zero syndromes with membership. Practical for degree 3.
pub fn rs_exhaustive(degree: u32) -> Result<RsExhaustiveReport> {
    let rs = ReedSolomon::new(degree)?;
    let field = rs.field();
    let (n, k, size) = (rs.len(), rs.dimension(), field.size());
    let mut codewords = Vec::with_capacity(size.pow(k as u32));
    let mut msg = vec![FieldElement::ZERO; k];
    loop {
        codewords.push(rs.encode(&msg)?);
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            let v = msg[i].value() as u32 + 1;
            if (v as usize) < size {
                msg[i] = field.element(v)?;
                break;
            }
            msg[i] = FieldElement::ZERO;
        }
        if msg.iter().all(|c| c.is_zero()) {
            break;
        }
    }
    let min_distance = codewords
        .iter()
        .map(|c| c.iter().filter(|e| !e.is_zero()).count())
        .filter(|&w| w > 0)
        .min()
        .unwrap_or(0);

    let mut error_sets = vec![Vec::new()];
    error_sets.extend(combinations(n, 1));
    error_sets.extend(combinations(n, 2));
    let erasure_sets: Vec<Vec<usize>> = (0..=PARITY).flat_map(|f| combinations(n, f)).collect();
    let nonzero: Vec<FieldElement> = field.elements().skip(1).collect();

    let per_codeword: Vec<(usize, usize, usize, usize)> = codewords
        .par_iter()
        .map(|c| {
            let message = &c[..k];
            let (mut ep, mut ef) = (0, 0);
            for set in &error_sets {
                let patterns = nonzero.len().pow(set.len() as u32);
                for idx in 0..patterns {
                    let mut r = c.clone();
                    let mut rest = idx;
                    for &pos in set {
                        r[pos] = field.add(r[pos], nonzero[rest % nonzero.len()]);
                        rest /= nonzero.len();
                    }
                    ep += 1;
                    if !matches!(rs.decode(&r, &[]), Ok(d) if d.message == message) {
                        ef += 1;
                    }
                }
            }
            let (mut sp, mut sf) = (0, 0);
            for set in &erasure_sets {
                let mut r = c.clone();
                for &pos in set {
                    r[pos] = FieldElement::ZERO;
                }
                sp += 1;
                if !matches!(rs.decode(&r, set), Ok(d) if d.message == message) {
                    sf += 1;
                }
            }
            (ep, ef, sp, sf)
        })
        .collect();

    let members: HashSet<&Vec<FieldElement>> = codewords.iter().collect();
    let total = size.pow(n as u32);
    let syndrome_mismatches = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let mut rest = idx;
            let w: Vec<FieldElement> = (0..n)
                .map(|_| {
                    let v = rest % size;
                    rest /= size;
                    field.element(v as u32).expect("below the field size")
                })
                .collect();
            rs.is_codeword(&w) != members.contains(&w)
        })
        .count();

    Ok(RsExhaustiveReport {
        codewords: codewords.len(),
        min_distance,
        error_patterns: per_codeword.iter().map(|r| r.0).sum(),
        error_failures: per_codeword.iter().map(|r| r.1).sum(),
        erasure_patterns: per_codeword.iter().map(|r| r.2).sum(),
        erasure_failures: per_codeword.iter().map(|r| r.3).sum(),
        syndrome_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_roots_match_direct_roots() {
        let d: Vec<Symbol> = vec![0, 1, 2, 0, 1, 0, 3, 2, 1, 2, 0, 1, 2, 2, 0, 1];
        let mut fast = HashSet::new();
        substitution_roots(&d, 4, &mut fast);
        let mut slow = HashSet::new();
        for p in 0..d.len() {
            for c in (0..4).filter(|&c| c != d[p]) {
                let mut v = d.clone();
                v[p] = c;
                slow.insert(root(&v));
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(duplication_ball(&[0, 1, 2], 0).len(), 1);
        assert_eq!(duplication_ball(&[0, 1, 2], 1).len(), 7);
    }

    #[test]
    fn growth_bound_arithmetic() {
        assert!(growth_bound_holds(4, 1, 1, &BigUint::from(1u32)));
        assert!(!growth_bound_holds(4, 1, 3, &BigUint::from(3u32)));
        assert!(growth_bound_holds(4, 3, 1, &BigUint::from(1u32)));
        assert!(!growth_bound_holds(3, 3, 1, &BigUint::from(0u32)));
    }
}
