//! Sequence files: one word per line, as digits or, for q = 4, as ACGT.
//! Blank lines and lines starting with `#` are skipped.

use dupsub::{Error, Symbol, Word};

use crate::Failure;

const DNA: [char; 4] = ['A', 'C', 'G', 'T'];

pub fn is_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

pub fn check_dna(q: u8, dna: bool) -> Result<(), Failure> {
    if dna && q != 4 {
        return Err(Failure::Usage(format!("DNA mode needs q = 4, got q = {q}")));
    }
    Ok(())
}

pub fn render(symbols: &[Symbol], dna: bool) -> String {
    symbols
        .iter()
        .map(|&s| {
            if dna {
                DNA[s as usize]
            } else {
                char::from_digit(s as u32, 16).expect("symbols are below 16")
            }
        })
        .collect()
}

fn symbol(c: char, q: u8, dna: bool) -> Option<Symbol> {
    let s = if dna {
        DNA.iter().position(|&d| d == c.to_ascii_uppercase())? as u32
    } else {
        c.to_digit(16)?
    };
    (s < q as u32).then_some(s as Symbol)
}

/// Words with their 1-based line numbers.
pub fn parse(text: &str, q: u8, dna: bool) -> Result<Vec<(usize, Word)>, Error> {
    let mut words = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if is_blank(line) {
            continue;
        }
        let lead = line.len() - line.trim_start().len();
        let mut symbols = Vec::with_capacity(line.len());
        for (col, c) in line.trim().chars().enumerate() {
            match symbol(c, q, dna) {
                Some(s) => symbols.push(s),
                None => {
                    return Err(Error::Parse {
                        line: i + 1,
                        column: lead + col + 1,
                        message: format!("invalid symbol {c:?} for q = {q}"),
                    })
                }
            }
        }
        words.push((i + 1, Word::new(q, symbols)?));
    }
    Ok(words)
}
