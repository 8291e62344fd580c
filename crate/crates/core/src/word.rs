//! Words over the alphabet `{0, 1, ..., q-1}`.

use std::fmt;

use crate::error::{param, Error, Result};

pub type Symbol = u8;

/// Smallest supported alphabet.
pub const MIN_ALPHABET: u8 = 3;
/// Largest supported alphabet. Symbols render as a single hex digit.
pub const MAX_ALPHABET: u8 = 16;

/// A finite sequence of symbols together with the alphabet size it lives in.
///
/// The empty word is allowed. Ordering is lexicographic on the symbols (words
/// over different alphabets compare by alphabet size first).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u8,
    symbols: Vec<Symbol>,
}

pub(crate) fn check_alphabet(q: u8) -> Result<()> {
    if !(MIN_ALPHABET..=MAX_ALPHABET).contains(&q) {
        return Err(param(format!(
            "alphabet size {q} outside [{MIN_ALPHABET}, {MAX_ALPHABET}]"
        )));
    }
    Ok(())
}

impl Word {
    pub fn new(q: u8, symbols: Vec<Symbol>) -> Result<Self> {
        check_alphabet(q)?;
        if let Some(pos) = symbols.iter().position(|&s| s >= q) {
            return Err(param(format!(
                "symbol {} at position {pos} is not below q = {q}",
                symbols[pos]
            )));
        }
        Ok(Word { q, symbols })
    }

    /// Caller guarantees every symbol is below `q` and `q` is supported.
    pub(crate) fn from_raw(q: u8, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        Word { q, symbols }
    }

    pub fn empty(q: u8) -> Result<Self> {
        Word::new(q, Vec::new())
    }

    /// Parses a digit string such as `"0120103212012"`. Symbols 10..15 use
    /// hex digits `a`..`f`.
    pub fn parse(q: u8, text: &str) -> Result<Self> {
        check_alphabet(q)?;
        let mut symbols = Vec::with_capacity(text.len());
        for (i, ch) in text.chars().enumerate() {
            match ch.to_digit(16) {
                Some(d) if (d as u8) < q => symbols.push(d as u8),
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        column: i + 1,
                        message: format!("'{ch}' is not a symbol of the {q}-ary alphabet"),
                    })
                }
            }
        }
        Ok(Word { q, symbols })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    /// Same alphabet, different content. Symbols are validated.
    pub fn with_symbols(&self, symbols: Vec<Symbol>) -> Result<Self> {
        Word::new(self.q, symbols)
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.q, other.q);
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Word::from_raw(self.q, symbols)
    }
}

pub(crate) fn render(symbols: &[Symbol]) -> String {
    symbols
        .iter()
        .map(|&s| char::from_digit(u32::from(s), 16).unwrap_or('?'))
        .collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("Λ");
        }
        f.write_str(&render(&self.symbols))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(q={}, {})", self.q, self)
    }
}

impl AsRef<[Symbol]> for Word {
    fn as_ref(&self) -> &[Symbol] {
        &self.symbols
    }
}
