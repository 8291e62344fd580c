//! Brute-force references for the counting machinery.

use crate::dup::is_irreducible;
use crate::word::{Symbol, Word};

/// Occurrences of `pat` in `s`, overlaps included.
pub fn count_occurrences(s: &[Symbol], pat: &[Symbol]) -> usize {
    if s.len() < pat.len() {
        return 0;
    }
    s.windows(pat.len()).filter(|w| *w == pat).count()
}

/// All `B` in `Σ_q^m` with `σBσ` irreducible and containing `σ` exactly
/// twice, in lexicographic order.
pub fn blocks_by_filter(sigma: &Word, m: usize) -> Vec<Vec<Symbol>> {
    let q = sigma.q() as usize;
    let s = sigma.symbols();
    let mut out = Vec::new();
    let mut block = vec![0 as Symbol; m];
    let mut buf = Vec::with_capacity(m + 2 * s.len());
    loop {
        buf.clear();
        buf.extend_from_slice(s);
        buf.extend_from_slice(&block);
        buf.extend_from_slice(s);
        if is_irreducible(&buf) && count_occurrences(&buf, s) == 2 {
            out.push(block.clone());
        }
        // Odometer increment, last position fastest.
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            block[i] += 1;
            if (block[i] as usize) < q {
                break;
            }
            block[i] = 0;
        }
    }
}

/// All irreducible words of length `n` over `Σ_q`.
pub fn irreducible_words(q: u8, n: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut w = Vec::with_capacity(n);
    extend_irreducible(q, n, &mut w, &mut out);
    out
}

fn extend_irreducible(q: u8, n: usize, w: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
    if w.len() == n {
        out.push(w.clone());
        return;
    }
    for a in 0..q {
        w.push(a);
        let k = w.len();
        let repeat = (1..=3).any(|h| k >= 2 * h && w[k - 2 * h..k - h] == w[k - h..]);
        if !repeat {
            extend_irreducible(q, n, w, out);
        }
        w.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_filters() {
        let sigma = Word::parse(3, "01020").unwrap();
        assert!(blocks_by_filter(&sigma, 1).is_empty());
        let sigma = Word::parse(4, "01020").unwrap();
        assert_eq!(blocks_by_filter(&sigma, 1), vec![vec![3]]);
        assert_eq!(irreducible_words(3, 2).len(), 6);
        assert_eq!(count_occurrences(&[0, 1, 0, 1, 0], &[0, 1, 0]), 2);
    }
}
