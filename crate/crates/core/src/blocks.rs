//! Counting, ranking and unranking message blocks.
//!
//! A block for marker `σ` is a word `B` of length `m` such that `σBσ` is
//! irreducible and contains `σ` exactly twice. Such blocks are exactly the
//! walks of `m + 5` edges from `σ` back to `σ` that do not pass through `σ`
//! in between, so they can be counted, and put in lexicographic bijection
//! with `0..M`, by dynamic programming over `(vertex, remaining edges)`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{param, Error, Result};
use crate::graph::{IrrGraph, TUPLE_LEN};
use crate::word::{Symbol, Word};

#[derive(Clone, Debug)]
pub struct BlockCounter {
    graph: Arc<IrrGraph>,
    sigma: Word,
    sigma_id: usize,
    m: usize,
    /// `ways[k][v]`: walks of `k` edges from `v` that end at `σ` and touch
    /// `σ` only at the end. `ways[0]` is the indicator of `σ`, and for
    /// `k >= 1` the `σ` entry is zero.
    ways: Vec<Vec<BigUint>>,
    /// Same table when every entry, and the total, fit in 128 bits.
    ways_small: Option<Vec<Vec<u128>>>,
    count: BigUint,
}

impl BlockCounter {
    pub fn new(graph: Arc<IrrGraph>, sigma: &Word, m: usize) -> Result<Self> {
        let sigma_id = graph.marker_id(sigma)?;
        if m == 0 {
            return Err(param("block length must be at least 1"));
        }
        let walk_len = m + TUPLE_LEN;
        let n = graph.vertex_count();
        let mut ways: Vec<Vec<BigUint>> = Vec::with_capacity(walk_len);
        let mut base = vec![BigUint::zero(); n];
        base[sigma_id] = BigUint::one();
        ways.push(base);
        for k in 1..walk_len {
            let prev = &ways[k - 1];
            let row: Vec<BigUint> = (0..n)
                .map(|v| {
                    if v == sigma_id {
                        return BigUint::zero();
                    }
                    graph
                        .successors(v)
                        .iter()
                        .fold(BigUint::zero(), |acc, &(_, w)| acc + &prev[w])
                })
                .collect();
            ways.push(row);
        }
        let count = graph
            .successors(sigma_id)
            .iter()
            .fold(BigUint::zero(), |acc, &(_, w)| acc + &ways[walk_len - 1][w]);
        let ways_small = count.to_u128().and_then(|_| {
            ways.iter()
                .map(|row| row.iter().map(|c| c.to_u128()).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
        });
        Ok(BlockCounter {
            graph,
            sigma: sigma.clone(),
            sigma_id,
            m,
            ways,
            ways_small,
            count,
        })
    }

    pub fn graph(&self) -> &Arc<IrrGraph> {
        &self.graph
    }

    pub fn sigma(&self) -> &Word {
        &self.sigma
    }

    pub fn block_len(&self) -> usize {
        self.m
    }

    /// Number of blocks, `M`.
    pub fn count(&self) -> &BigUint {
        &self.count
    }

    fn walk_len(&self) -> usize {
        self.m + TUPLE_LEN
    }

    /// The `rank`-th block in lexicographic order.
    pub fn unrank(&self, rank: &BigUint) -> Result<Word> {
        if rank >= &self.count {
            return Err(param(format!(
                "rank {rank} out of range for {} blocks",
                self.count
            )));
        }
        let labels = match (&self.ways_small, rank.to_u128()) {
            (Some(table), Some(r)) => self.unrank_with(table, r),
            _ => self.unrank_with(&self.ways, rank.clone()),
        };
        Ok(Word::from_raw(self.graph.q(), labels))
    }

    /// Convenience for machine-size ranks.
    pub fn unrank_u64(&self, rank: u64) -> Result<Word> {
        self.unrank(&BigUint::from(rank))
    }

    fn unrank_with<T: Counter>(&self, table: &[Vec<T>], mut rank: T) -> Vec<Symbol> {
        let mut v = self.sigma_id;
        let mut labels = Vec::with_capacity(self.m);
        for remaining in (1..=self.walk_len()).rev() {
            let row = &table[remaining - 1];
            let mut chosen = None;
            for &(a, w) in self.graph.successors(v) {
                let c = &row[w];
                if rank.below(c) {
                    chosen = Some((a, w));
                    break;
                }
                rank.take(c);
            }
            let (a, w) = chosen.expect("rank below count selects an edge");
            if labels.len() < self.m {
                labels.push(a);
            }
            v = w;
        }
        debug_assert_eq!(v, self.sigma_id);
        labels
    }

    /// Position of `block` in lexicographic order, or [`Error::NotABlock`].
    pub fn rank(&self, block: &[Symbol]) -> Result<BigUint> {
        match &self.ways_small {
            Some(table) => self.rank_with(table, block).map(BigUint::from),
            None => self.rank_with(&self.ways, block),
        }
    }

    /// Rank as a machine integer when it fits.
    pub fn rank_u64(&self, block: &[Symbol]) -> Result<Option<u64>> {
        match &self.ways_small {
            Some(table) => Ok(self.rank_with(table, block)?.to_u64()),
            None => Ok(self.rank_with(&self.ways, block)?.to_u64()),
        }
    }

    fn rank_with<T: Counter>(&self, table: &[Vec<T>], block: &[Symbol]) -> Result<T> {
        if block.len() != self.m {
            return Err(Error::NotABlock);
        }
        let sigma = self.sigma.symbols();
        let mut rank = T::zero_count();
        let mut v = self.sigma_id;
        let walk_len = self.walk_len();
        for (step, &label) in block.iter().chain(sigma).enumerate() {
            let remaining = walk_len - step;
            let row = &table[remaining - 1];
            let mut next = None;
            for &(a, w) in self.graph.successors(v) {
                if a == label {
                    next = Some(w);
                    break;
                }
                rank.put(&row[w]);
            }
            let w = next.ok_or(Error::NotABlock)?;
            // Interior vertices must avoid σ.
            if (w == self.sigma_id) != (remaining == 1) {
                return Err(Error::NotABlock);
            }
            v = w;
        }
        Ok(rank)
    }

    /// True iff `block` is a member of the block set.
    pub fn contains(&self, block: &[Symbol]) -> bool {
        self.rank(block).is_ok()
    }
}

trait Counter: Clone {
    fn zero_count() -> Self;
    fn below(&self, other: &Self) -> bool;
    fn take(&mut self, other: &Self);
    fn put(&mut self, other: &Self);
}

impl Counter for u128 {
    fn zero_count() -> Self {
        0
    }
    fn below(&self, other: &Self) -> bool {
        self < other
    }
    fn take(&mut self, other: &Self) {
        *self -= other;
    }
    fn put(&mut self, other: &Self) {
        *self += other;
    }
}

impl Counter for BigUint {
    fn zero_count() -> Self {
        Zero::zero()
    }
    fn below(&self, other: &Self) -> bool {
        self < other
    }
    fn take(&mut self, other: &Self) {
        *self -= other;
    }
    fn put(&mut self, other: &Self) {
        *self += other;
    }
}

/// `M` for marker `σ` and block length `m`.
pub fn count_blocks(graph: &Arc<IrrGraph>, sigma: &Word, m: usize) -> Result<BigUint> {
    Ok(BlockCounter::new(Arc::clone(graph), sigma, m)?
        .count()
        .clone())
}

/// `M` for every block length `1..=max_m` in one pass.
///
/// Entry `i` holds the count for `m = i + 1`.
pub fn count_blocks_upto(graph: &IrrGraph, sigma: &Word, max_m: usize) -> Result<Vec<BigUint>> {
    let sigma_id = graph.marker_id(sigma)?;
    let n = graph.vertex_count();
    // Forward: walks from σ that have avoided σ since leaving it.
    let mut reach = vec![BigUint::zero(); n];
    reach[sigma_id] = BigUint::one();
    let mut out = Vec::with_capacity(max_m);
    for steps in 1..=max_m + TUPLE_LEN {
        let mut next = vec![BigUint::zero(); n];
        let mut returned = BigUint::zero();
        for (v, r) in reach.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            for &(_, w) in graph.successors(v) {
                if w == sigma_id {
                    returned += r;
                } else {
                    next[w] += r;
                }
            }
        }
        if steps > TUPLE_LEN {
            out.push(returned);
        }
        reach = next;
    }
    Ok(out)
}

/// `log2 M` computed with rescaled floating point, usable for block lengths
/// far beyond what exact counting affords. Returns `-inf` when `M = 0`.
pub fn log2_count_blocks(graph: &IrrGraph, sigma: &Word, m: usize) -> Result<f64> {
    let sigma_id = graph.marker_id(sigma)?;
    let n = graph.vertex_count();
    let mut reach = vec![0f64; n];
    reach[sigma_id] = 1.0;
    let mut log_scale = 0f64;
    let mut returned = 0f64;
    for _ in 0..m + TUPLE_LEN {
        let mut next = vec![0f64; n];
        returned = 0.0;
        for (v, &r) in reach.iter().enumerate() {
            if r == 0.0 {
                continue;
            }
            for &(_, w) in graph.successors(v) {
                if w == sigma_id {
                    returned += r;
                } else {
                    next[w] += r;
                }
            }
        }
        let peak = next.iter().cloned().fold(returned, f64::max);
        if peak > 0.0 {
            for x in &mut next {
                *x /= peak;
            }
            returned /= peak;
            log_scale += peak.log2();
        }
        reach = next;
    }
    // `returned` shares the scale of `reach`.
    Ok(if returned > 0.0 {
        returned.log2() + log_scale
    } else {
        f64::NEG_INFINITY
    })
}
