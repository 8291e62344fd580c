//! String algebra of tandem duplications of length at most 3.
//!
//! A duplication copies a substring of length 1, 2 or 3 and inserts the copy
//! right after the original. Exhaustively undoing such copies (collapsing a
//! repeat `aa` to `a`, `|a| <= 3`) yields the duplication root, which is
//! unique for this duplication length bound.

use std::collections::{HashSet, VecDeque};

use crate::error::{param, Result};
use crate::word::{Symbol, Word};

/// Longest duplication the channel applies.
pub const MAX_DUP_LEN: usize = 3;

/// Returns `w[..pos+len] ++ w[pos..pos+len] ++ w[pos+len..]`.
pub fn apply_duplication(w: &Word, pos: usize, len: usize) -> Result<Word> {
    check_duplication(w.len(), pos, len)?;
    Ok(Word::from_raw(w.q(), duplicate(w.symbols(), pos, len)))
}

pub(crate) fn check_duplication(word_len: usize, pos: usize, len: usize) -> Result<()> {
    if !(1..=MAX_DUP_LEN).contains(&len) {
        return Err(param(format!("duplication length {len} not in 1..=3")));
    }
    if pos + len > word_len {
        return Err(param(format!(
            "duplication [{pos}, {}) exceeds word length {word_len}",
            pos + len
        )));
    }
    Ok(())
}

/// Slice-level duplication without validation.
pub fn duplicate(s: &[Symbol], pos: usize, len: usize) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(s.len() + len);
    out.extend_from_slice(&s[..pos + len]);
    out.extend_from_slice(&s[pos..pos + len]);
    out.extend_from_slice(&s[pos + len..]);
    out
}

/// Replaces the symbol at `pos`. A substitution must change the symbol.
pub fn apply_substitution(w: &Word, pos: usize, sym: Symbol) -> Result<Word> {
    check_substitution(w.symbols(), w.q(), pos, sym)?;
    let mut symbols = w.symbols().to_vec();
    symbols[pos] = sym;
    Ok(Word::from_raw(w.q(), symbols))
}

pub(crate) fn check_substitution(s: &[Symbol], q: u8, pos: usize, sym: Symbol) -> Result<()> {
    if pos >= s.len() {
        return Err(param(format!(
            "substitution position {pos} outside word of length {}",
            s.len()
        )));
    }
    if sym >= q {
        return Err(param(format!("symbol {sym} is not below q = {q}")));
    }
    if s[pos] == sym {
        return Err(param(format!(
            "substitution at {pos} keeps symbol {sym} unchanged"
        )));
    }
    Ok(())
}

/// True if `s[i..i+a] == s[i+a..i+2a]`.
#[inline]
pub fn has_repeat_at(s: &[Symbol], i: usize, a: usize) -> bool {
    i + 2 * a <= s.len() && s[i..i + a] == s[i + a..i + 2 * a]
}

/// True iff `s` contains no repeat `aa` with `1 <= |a| <= 3`.
pub fn is_irreducible(s: &[Symbol]) -> bool {
    (0..s.len()).all(|i| (1..=MAX_DUP_LEN).all(|a| !has_repeat_at(s, i, a)))
}

/// Every repeat `(start, half_length)` in `s`.
pub fn repeats(s: &[Symbol]) -> Vec<(usize, usize)> {
    (0..s.len())
        .flat_map(|i| (1..=MAX_DUP_LEN).map(move |a| (i, a)))
        .filter(|&(i, a)| has_repeat_at(s, i, a))
        .collect()
}

/// Removes the second half of the repeat at `(i, a)`.
pub fn deduplicate_at(s: &mut Vec<Symbol>, i: usize, a: usize) {
    debug_assert!(has_repeat_at(s, i, a));
    s.drain(i + a..i + 2 * a);
}

/// Incremental root computation.
///
/// Invariant: the stack is irreducible. Pushing a symbol can create repeats
/// only at the top, and collapsing the shortest one leaves a prefix of the
/// previous (irreducible) stack, so at most one deduplication per push.
#[derive(Clone, Debug, Default)]
pub struct RootStack {
    stack: Vec<Symbol>,
}

impl RootStack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        RootStack {
            stack: Vec::with_capacity(cap),
        }
    }

    /// Starts from a word that is already irreducible.
    pub fn from_irreducible(s: &[Symbol]) -> Self {
        debug_assert!(is_irreducible(s));
        RootStack { stack: s.to_vec() }
    }

    /// Pushes a symbol; returns true if a deduplication happened.
    #[inline]
    pub fn push(&mut self, sym: Symbol) -> bool {
        self.stack.push(sym);
        let n = self.stack.len();
        for a in 1..=MAX_DUP_LEN {
            if n >= 2 * a && self.stack[n - 2 * a..n - a] == self.stack[n - a..] {
                self.stack.truncate(n - a);
                return true;
            }
        }
        false
    }

    pub fn extend(&mut self, syms: &[Symbol]) {
        for &s in syms {
            self.push(s);
        }
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.stack
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.stack
    }
}

/// Duplication root of `s`.
pub fn root(s: &[Symbol]) -> Vec<Symbol> {
    let mut stack = RootStack::with_capacity(s.len());
    stack.extend(s);
    stack.into_vec()
}

/// Root by the leftmost, shortest-repeat-first scan: collapse the first repeat
/// found, then resume a few positions back. Quadratic in the worst case; kept
/// as an independent route for cross-checking [`root`].
pub fn root_by_scan(s: &[Symbol]) -> Vec<Symbol> {
    let mut w = s.to_vec();
    let mut i = 0;
    while i < w.len() {
        match (1..=MAX_DUP_LEN).find(|&a| has_repeat_at(&w, i, a)) {
            Some(a) => {
                deduplicate_at(&mut w, i, a);
                // A new repeat must overlap the splice point, and spans at
                // most 6 symbols.
                i = i.saturating_sub(2 * MAX_DUP_LEN - 1);
            }
            None => i += 1,
        }
    }
    w
}

impl Word {
    pub fn is_irreducible(&self) -> bool {
        is_irreducible(self.symbols())
    }

    pub fn root(&self) -> Word {
        Word::from_raw(self.q(), root(self.symbols()))
    }
}

/// All descendants of `s` (including `s`) of length at most `max_len`.
///
/// Breadth-first closure under single duplications with a visited set.
pub fn descendants_up_to(s: &[Symbol], max_len: usize) -> HashSet<Vec<Symbol>> {
    let mut seen = HashSet::new();
    if s.len() > max_len {
        return seen;
    }
    let mut queue = VecDeque::new();
    seen.insert(s.to_vec());
    queue.push_back(s.to_vec());
    while let Some(w) = queue.pop_front() {
        for len in 1..=MAX_DUP_LEN {
            if w.len() + len > max_len {
                break;
            }
            for pos in 0..=w.len().saturating_sub(len) {
                if pos + len > w.len() {
                    break;
                }
                let child = duplicate(&w, pos, len);
                if !seen.contains(&child) {
                    seen.insert(child.clone());
                    queue.push_back(child);
                }
            }
        }
    }
    seen
}

/// `{ y in D*(w) : |y| <= max_len }`, sorted.
pub fn bounded_descendants(w: &Word, max_len: usize) -> Result<Vec<Word>> {
    if max_len < w.len() {
        return Err(param(format!(
            "length cap {max_len} is below the word length {}",
            w.len()
        )));
    }
    let mut out: Vec<Word> = descendants_up_to(w.symbols(), max_len)
        .into_iter()
        .map(|s| Word::from_raw(w.q(), s))
        .collect();
    out.sort();
    Ok(out)
}

/// Result of the one-substitution root-growth search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootGrowth {
    pub max_root_len: usize,
    /// Lexicographically least word attaining the maximum.
    pub witness: Word,
    /// Number of descendants examined.
    pub descendants: usize,
}

/// Over every descendant `x'` of `w` with `|x'| <= max_len` and every single
/// substitution `x''` of `x'`, the largest `|root(x'')|`.
///
/// Substitutions range over all positions and all `q - 1` replacement
/// symbols of `w`'s alphabet.
pub fn max_root_after_one_sub(w: &Word, max_len: usize) -> Result<RootGrowth> {
    if w.is_empty() {
        return Err(param("a substitution needs a nonempty word"));
    }
    if max_len < w.len() {
        return Err(param(format!(
            "length cap {max_len} is below the word length {}",
            w.len()
        )));
    }
    let q = w.q();
    let descendants = descendants_up_to(w.symbols(), max_len);
    let mut best: Option<(usize, Vec<Symbol>)> = None;
    let mut buf = Vec::with_capacity(max_len);
    for d in &descendants {
        for pos in 0..d.len() {
            for sym in (0..q).filter(|&c| c != d[pos]) {
                buf.clear();
                buf.extend_from_slice(d);
                buf[pos] = sym;
                let r = root(&buf).len();
                let better = match &best {
                    None => true,
                    Some((len, wit)) => r > *len || (r == *len && buf < *wit),
                };
                if better {
                    best = Some((r, buf.clone()));
                }
            }
        }
    }
    let (max_root_len, witness) = best.expect("nonempty word has a substitution");
    Ok(RootGrowth {
        max_root_len,
        witness: Word::from_raw(q, witness),
        descendants: descendants.len(),
    })
}

/// Decomposition `r1 = prefix removed suffix`, `r2 = prefix inserted suffix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDiff {
    pub prefix: Word,
    pub removed: Word,
    pub inserted: Word,
    pub suffix: Word,
}

impl RootDiff {
    pub fn window(&self) -> usize {
        self.removed.len().max(self.inserted.len())
    }
}

/// Longest common prefix, then the longest common suffix clipped so the two
/// never overlap in the shorter word.
pub fn root_diff(r1: &Word, r2: &Word) -> Result<RootDiff> {
    if r1.q() != r2.q() {
        return Err(param("words over different alphabets"));
    }
    let (p, s) = diff_bounds(r1.symbols(), r2.symbols());
    let (a, b) = (r1.symbols(), r2.symbols());
    let q = r1.q();
    Ok(RootDiff {
        prefix: Word::from_raw(q, a[..p].to_vec()),
        removed: Word::from_raw(q, a[p..a.len() - s].to_vec()),
        inserted: Word::from_raw(q, b[p..b.len() - s].to_vec()),
        suffix: Word::from_raw(q, a[a.len() - s..].to_vec()),
    })
}

/// `(prefix_len, suffix_len)` of the clipped decomposition.
pub fn diff_bounds(a: &[Symbol], b: &[Symbol]) -> (usize, usize) {
    let p = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let room = a.len().min(b.len()) - p;
    let s = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take(room)
        .take_while(|(x, y)| x == y)
        .count();
    (p, s)
}
