//! The channel: any number of tandem duplications of length at most 3 and at
//! most one substitution, applied in any order.
//!
//! The sampler draws `D ~ Uniform[0, max_duplications]` duplications with
//! weighted lengths at uniform positions, and if enabled one substitution in
//! a uniformly chosen slot among the `D + 1` gaps between them. Every run is
//! recorded as a [`ChannelTrace`] that replays to the same output.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dup::{check_duplication, check_substitution, duplicate, MAX_DUP_LEN};
use crate::error::{param, Error, Result};
use crate::word::{Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    /// Copy `[pos, pos + len)` and insert the copy right after it.
    Duplication {
        pos: usize,
        len: usize,
    },
    Substitution {
        pos: usize,
        symbol: Symbol,
    },
}

impl Event {
    pub fn apply(&self, w: &mut Vec<Symbol>, q: u8) -> Result<()> {
        match *self {
            Event::Duplication { pos, len } => {
                check_duplication(w.len(), pos, len)?;
                *w = duplicate(w, pos, len);
            }
            Event::Substitution { pos, symbol } => {
                check_substitution(w, q, pos, symbol)?;
                w[pos] = symbol;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Duplication { pos, len } => write!(f, "D {pos} {len}"),
            Event::Substitution { pos, symbol } => write!(f, "S {pos} {symbol}"),
        }
    }
}

/// Ordered list of channel events; at most one substitution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChannelTrace {
    events: Vec<Event>,
}

impl ChannelTrace {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        let subs = events
            .iter()
            .filter(|e| matches!(e, Event::Substitution { .. }))
            .count();
        if subs > 1 {
            return Err(param(format!(
                "trace has {subs} substitutions, at most 1 allowed"
            )));
        }
        Ok(ChannelTrace { events })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn duplications(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Duplication { .. }))
            .count()
    }

    pub fn has_substitution(&self) -> bool {
        self.events.len() > self.duplications()
    }

    /// Applies the events to `x` in order.
    pub fn replay(&self, x: &Word) -> Result<Word> {
        let mut w = x.symbols().to_vec();
        for e in &self.events {
            e.apply(&mut w, x.q())?;
        }
        x.with_symbols(w)
    }
}

impl fmt::Display for ChannelTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for ChannelTrace {
    type Err = Error;

    /// One event per line; blank lines and `#` comments are skipped.
    fn from_str(text: &str) -> Result<Self> {
        let mut events = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |column: usize, message: String| Error::Parse {
                line: idx + 1,
                column,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(bad(
                    1,
                    format!("expected `D <pos> <len>` or `S <pos> <sym>`, got `{line}`"),
                ));
            }
            let number = |k: usize| -> Result<usize> {
                fields[k].parse().map_err(|_| {
                    let column = raw.find(fields[k]).map_or(1, |c| c + 1);
                    bad(
                        column,
                        format!("`{}` is not a nonnegative integer", fields[k]),
                    )
                })
            };
            let (pos, arg) = (number(1)?, number(2)?);
            let event = match fields[0] {
                "D" => Event::Duplication { pos, len: arg },
                "S" => Event::Substitution {
                    pos,
                    symbol: Symbol::try_from(arg)
                        .map_err(|_| bad(1, format!("symbol {arg} out of range")))?,
                },
                other => {
                    let column = raw.find(other).map_or(1, |c| c + 1);
                    return Err(bad(column, format!("unknown event kind `{other}`")));
                }
            };
            events.push(event);
        }
        ChannelTrace::new(events)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    pub max_duplications: usize,
    /// Relative weights of duplication lengths 1, 2 and 3.
    pub length_weights: [f64; MAX_DUP_LEN],
    pub substitution: bool,
    pub seed: u64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            max_duplications: 20,
            length_weights: [1.0; MAX_DUP_LEN],
            substitution: true,
            seed: 0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self
            .length_weights
            .iter()
            .any(|w| !w.is_finite() || *w < 0.0)
        {
            return Err(param(
                "duplication length weights must be finite and nonnegative",
            ));
        }
        if self.length_weights.iter().all(|&w| w == 0.0) {
            return Err(param("duplication length weights are all zero"));
        }
        Ok(())
    }
}

/// A sampler owning its random state.
#[derive(Clone, Debug)]
pub struct Channel {
    cfg: ChannelConfig,
    rng: ChaCha8Rng,
}

impl Channel {
    pub fn new(cfg: ChannelConfig) -> Result<Self> {
        cfg.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Channel { cfg, rng })
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.cfg
    }

    /// Draws one channel output for `x`.
    pub fn sample(&mut self, x: &Word) -> (Word, ChannelTrace) {
        let q = x.q();
        let dups = self.rng.gen_range(0..=self.cfg.max_duplications);
        let sub_slot = self.cfg.substitution.then(|| self.rng.gen_range(0..=dups));
        let mut w = x.symbols().to_vec();
        let mut events = Vec::with_capacity(dups + 1);
        for slot in 0..=dups {
            if sub_slot == Some(slot) && !w.is_empty() {
                let pos = self.rng.gen_range(0..w.len());
                // Uniform over the q - 1 symbols that differ from w[pos].
                let mut symbol = self.rng.gen_range(0..q - 1);
                if symbol >= w[pos] {
                    symbol += 1;
                }
                w[pos] = symbol;
                events.push(Event::Substitution { pos, symbol });
            }
            if slot == dups {
                break;
            }
            let feasible: Vec<(usize, f64)> = (1..=MAX_DUP_LEN)
                .filter(|&len| len <= w.len())
                .map(|len| (len, self.cfg.length_weights[len - 1]))
                .filter(|&(_, wt)| wt > 0.0)
                .collect();
            if feasible.is_empty() {
                continue;
            }
            let pick = WeightedIndex::new(feasible.iter().map(|f| f.1))
                .expect("weights are positive")
                .sample(&mut self.rng);
            let len = feasible[pick].0;
            let pos = self.rng.gen_range(0..=w.len() - len);
            w = duplicate(&w, pos, len);
            events.push(Event::Duplication { pos, len });
        }
        (Word::from_raw(q, w), ChannelTrace { events })
    }
}

/// One output from a fresh sampler seeded with `cfg.seed`.
pub fn sample_output(cfg: &ChannelConfig, x: &Word) -> Result<(Word, ChannelTrace)> {
    Ok(Channel::new(cfg.clone())?.sample(x))
}

/// Every output reachable from `x` with at most `max_dups` duplications and,
/// if `with_sub`, at most one substitution placed anywhere in the sequence.
pub fn exhaustive_outputs(x: &Word, max_dups: usize, with_sub: bool) -> HashSet<Word> {
    let q = x.q();
    let start = (x.symbols().to_vec(), 0usize, false);
    let mut seen: HashSet<(Vec<Symbol>, usize, bool)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((w, used, subbed)) = queue.pop_front() {
        let mut visit = |state: (Vec<Symbol>, usize, bool)| {
            if seen.insert(state.clone()) {
                queue.push_back(state);
            }
        };
        if used < max_dups {
            for len in 1..=MAX_DUP_LEN.min(w.len()) {
                for pos in 0..=w.len() - len {
                    visit((duplicate(&w, pos, len), used + 1, subbed));
                }
            }
        }
        if with_sub && !subbed {
            for pos in 0..w.len() {
                for symbol in (0..q).filter(|&s| s != w[pos]) {
                    let mut v = w.clone();
                    v[pos] = symbol;
                    visit((v, used, true));
                }
            }
        }
    }
    seen.into_iter()
        .map(|(w, _, _)| Word::from_raw(q, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(4, s).unwrap()
    }

    #[test]
    fn identity_channel() {
        let cfg = ChannelConfig {
            max_duplications: 0,
            substitution: false,
            ..ChannelConfig::default()
        };
        let (y, trace) = sample_output(&cfg, &w("0123")).unwrap();
        assert_eq!(y, w("0123"));
        assert!(trace.events().is_empty());
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let cfg = ChannelConfig {
            seed: 99,
            ..ChannelConfig::default()
        };
        let a = sample_output(&cfg, &w("012")).unwrap();
        let b = sample_output(&cfg, &w("012")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.to_string(), b.1.to_string());
    }

    #[test]
    fn trace_text_round_trip() {
        let t = ChannelTrace::new(vec![
            Event::Duplication { pos: 3, len: 2 },
            Event::Substitution { pos: 0, symbol: 2 },
            Event::Duplication { pos: 0, len: 1 },
        ])
        .unwrap();
        let text = t.to_string();
        assert_eq!(text, "D 3 2\nS 0 2\nD 0 1\n");
        assert_eq!(text.parse::<ChannelTrace>().unwrap(), t);
    }

    #[test]
    fn trace_parse_errors() {
        assert!(matches!(
            "D 1 1\nX 2 2".parse::<ChannelTrace>(),
            Err(Error::Parse {
                line: 2,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            "D 1 z".parse::<ChannelTrace>(),
            Err(Error::Parse {
                line: 1,
                column: 5,
                ..
            })
        ));
        assert!("S 0 1\nS 1 1".parse::<ChannelTrace>().is_err());
    }

    #[test]
    fn single_duplications_of_012() {
        let out = exhaustive_outputs(&w("012"), 1, false);
        let mut got: Vec<String> = out.iter().map(|x| x.to_string()).collect();
        got.sort();
        let mut want = vec!["012", "0012", "0112", "0122", "01012", "01212", "012012"];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn zero_budget_is_the_input() {
        let out = exhaustive_outputs(&w("012"), 0, false);
        assert_eq!(out, HashSet::from([w("012")]));
    }

    #[test]
    fn replay_rejects_invalid_events() {
        let t = ChannelTrace::new(vec![Event::Duplication { pos: 2, len: 3 }]).unwrap();
        assert!(t.replay(&w("0123")).is_err());
        let t = ChannelTrace::new(vec![Event::Substitution { pos: 1, symbol: 1 }]).unwrap();
        assert!(t.replay(&w("0123")).is_err());
    }
}
