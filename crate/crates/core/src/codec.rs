//! The marker code: Reed–Solomon symbols mapped to message blocks and
//! separated by the marker,
//!
//! ```text
//! x = ζ(c_1) σ ζ(c_2) σ ... σ ζ(c_N),   |x| = n = N (m + l) - l,
//! ```
//!
//! and its decoder. The decoder takes the duplication root `y` of the
//! received word, pads it as `σ y σ`, and compares marker positions with the
//! codeword layout. If every marker is in place the blocks are read as they
//! are and the outer code corrects at most two wrong symbols. Otherwise the
//! first marker not followed by another marker one period later locates the
//! damage, and the blocks around it are erased.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::blocks::BlockCounter;
use crate::dup::{is_irreducible, root};
use crate::error::{param, DecodeFailure, Error, Result};
use crate::gf::{FieldElement, MAX_DEGREE, MIN_DEGREE};
use crate::graph::{IrrGraph, TUPLE_LEN};
use crate::rs::{ReedSolomon, PARITY};
use crate::word::{Symbol, Word};

/// Marker length `l`.
pub const MARKER_LEN: usize = TUPLE_LEN;

/// Window bound `𝓛`: a substitution followed by duplications changes the
/// root by deleting at most this many symbols and inserting at most this many.
pub const WINDOW_BOUND: usize = 17;

#[derive(Clone, Debug)]
pub struct CodeParams {
    blocks: Arc<BlockCounter>,
    rs: ReedSolomon,
}

/// Validates parameters and builds the block tables.
pub fn make_params(q: u8, sigma: &Word, m: usize, field_degree: u32) -> Result<CodeParams> {
    if sigma.q() != q {
        return Err(param(format!(
            "marker alphabet {} differs from q = {q}",
            sigma.q()
        )));
    }
    let graph = Arc::new(IrrGraph::build(q)?);
    CodeParams::with_graph(graph, sigma, m, field_degree)
}

impl CodeParams {
    /// As [`make_params`], reusing a prebuilt graph.
    pub fn with_graph(
        graph: Arc<IrrGraph>,
        sigma: &Word,
        m: usize,
        field_degree: u32,
    ) -> Result<Self> {
        graph.marker_id(sigma)?;
        if m <= WINDOW_BOUND {
            return Err(Error::WindowBound {
                m,
                bound: WINDOW_BOUND,
            });
        }
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&field_degree) {
            return Err(param(format!(
                "field degree {field_degree} outside [{MIN_DEGREE}, {MAX_DEGREE}]"
            )));
        }
        let blocks = BlockCounter::new(graph, sigma, m)?;
        if BigUint::from(1u32) << field_degree > *blocks.count() {
            return Err(Error::FieldTooLarge {
                degree: field_degree,
                count: blocks.count().to_string(),
            });
        }
        Ok(CodeParams {
            blocks: Arc::new(blocks),
            rs: ReedSolomon::new(field_degree)?,
        })
    }

    pub fn q(&self) -> u8 {
        self.blocks.graph().q()
    }

    pub fn sigma(&self) -> &Word {
        self.blocks.sigma()
    }

    /// Block length `m`.
    pub fn m(&self) -> usize {
        self.blocks.block_len()
    }

    /// Marker length `l`.
    pub fn l(&self) -> usize {
        MARKER_LEN
    }

    pub fn field_degree(&self) -> u32 {
        self.rs.field().degree()
    }

    /// Number of blocks `N = 2^t - 1`.
    pub fn outer_len(&self) -> usize {
        self.rs.len()
    }

    /// Message length `N - 4` in field symbols.
    pub fn message_len(&self) -> usize {
        self.rs.dimension()
    }

    /// Codeword length `n = N (m + l) - l`.
    pub fn codeword_len(&self) -> usize {
        self.outer_len() * self.period() - MARKER_LEN
    }

    /// Block count `M`.
    pub fn block_count(&self) -> &BigUint {
        self.blocks.count()
    }

    pub fn window_bound(&self) -> usize {
        WINDOW_BOUND
    }

    pub fn blocks(&self) -> &BlockCounter {
        &self.blocks
    }

    pub fn outer_code(&self) -> &ReedSolomon {
        &self.rs
    }

    fn period(&self) -> usize {
        self.m() + MARKER_LEN
    }

    /// `ζ`: the block with rank equal to the symbol's value.
    pub fn zeta(&self, c: FieldElement) -> Word {
        self.blocks
            .unrank_u64(c.value() as u64)
            .expect("2^t <= M, so every field element has a block")
    }

    /// `ζ⁻¹`, or `None` if the word is not an image of `ζ`.
    pub fn zeta_inv(&self, block: &[Symbol]) -> Option<FieldElement> {
        match self.blocks.rank_u64(block) {
            Ok(Some(r)) if r < self.rs.field().size() as u64 => {
                Some(self.rs.field().element(r as u32).expect("rank below 2^t"))
            }
            _ => None,
        }
    }
}

pub fn encode(params: &CodeParams, message: &[FieldElement]) -> Result<Word> {
    let symbols = params.rs.encode(message)?;
    let sigma = params.sigma().symbols();
    let mut out = Vec::with_capacity(params.codeword_len());
    for (i, &c) in symbols.iter().enumerate() {
        if i > 0 {
            out.extend_from_slice(sigma);
        }
        out.extend_from_slice(params.zeta(c).symbols());
    }
    debug_assert_eq!(out.len(), params.codeword_len());
    debug_assert!(is_irreducible(&out));
    debug_assert_eq!(marker_positions(&out, sigma).len(), params.outer_len() - 1);
    Ok(Word::from_raw(params.q(), out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Every marker at its codeword position.
    MarkersAligned,
    /// Some marker displaced; blocks around the first anomaly erased.
    MarkersShifted,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::MarkersAligned => "aligned",
            CaseTag::MarkersShifted => "shifted",
        })
    }
}

/// Output of the marker stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub case: CaseTag,
    /// `n - |y|`.
    pub delta: isize,
    /// Position of the first anomalous marker in `σ y σ`.
    pub anomaly: Option<usize>,
    /// Window removed from `σ y σ`, half-open.
    pub window: Option<(usize, usize)>,
    /// Erased block indices (0-based, consecutive, at most 4).
    pub erased: Vec<usize>,
    /// Block contents; `None` for erased blocks.
    pub blocks: Vec<Option<Vec<Symbol>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeReport {
    pub case: CaseTag,
    pub delta: isize,
    pub anomaly: Option<usize>,
    pub window: Option<(usize, usize)>,
    pub erased: Vec<usize>,
    /// Blocks whose content is not a `ζ` image.
    pub candidates: Vec<usize>,
    /// Outer-code positions changed by error correction.
    pub corrected: Vec<usize>,
    pub message: Vec<FieldElement>,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for DecodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case: {}", self.case)?;
        writeln!(f, "delta: {}", self.delta)?;
        match self.anomaly {
            Some(s) => writeln!(f, "anomaly: {s}")?,
            None => writeln!(f, "anomaly: -")?,
        }
        match self.window {
            Some((a, b)) => writeln!(f, "window: {a}..{b}")?,
            None => writeln!(f, "window: -")?,
        }
        writeln!(f, "erased: {}", join(&self.erased))?;
        writeln!(f, "candidates: {}", join(&self.candidates))?;
        writeln!(f, "corrected: {}", join(&self.corrected))?;
        writeln!(f, "message: {}", join(&self.message))
    }
}

/// Start positions of (possibly overlapping) occurrences of `sigma`.
pub fn marker_positions(s: &[Symbol], sigma: &[Symbol]) -> Vec<usize> {
    if s.len() < sigma.len() {
        return Vec::new();
    }
    (0..=s.len() - sigma.len())
        .filter(|&i| &s[i..i + sigma.len()] == sigma)
        .collect()
}

/// Splits a duplication root into blocks, erasing around a displaced marker.
pub fn localize(params: &CodeParams, y: &[Symbol]) -> Result<Localization> {
    let sigma = params.sigma().symbols();
    let (l, m, p) = (MARKER_LEN, params.m(), params.period());
    let big_n = params.outer_len();
    let n = params.codeword_len();

    let mut padded = Vec::with_capacity(y.len() + 2 * l);
    padded.extend_from_slice(sigma);
    padded.extend_from_slice(y);
    padded.extend_from_slice(sigma);
    let len = padded.len();
    let marker_at = |i: usize| i + l <= len && &padded[i..i + l] == sigma;

    if y.len() == n && (0..=big_n).all(|i| marker_at(i * p)) {
        let blocks = (0..big_n)
            .map(|j| Some(padded[j * p + l..(j + 1) * p].to_vec()))
            .collect();
        return Ok(Localization {
            case: CaseTag::MarkersAligned,
            delta: 0,
            anomaly: None,
            window: None,
            erased: Vec::new(),
            blocks,
        });
    }

    let delta = n as isize - y.len() as isize;
    if delta.unsigned_abs() > WINDOW_BOUND {
        return Err(DecodeFailure::ShiftTooLarge { delta }.into());
    }
    // The appended final marker never counts as an anomaly.
    let s = marker_positions(&padded, sigma)
        .into_iter()
        .filter(|&s| s + l < len)
        .find(|&s| !marker_at(s + p))
        .ok_or(DecodeFailure::NoAnomaly {
            got: y.len(),
            expected: n,
        })?;
    let k = WINDOW_BOUND as isize - delta.max(0) - 1;
    let w0 = (s as isize - k).max(0);
    let w1 = ((s + m + 2 * l) as isize + k).min(len as isize);
    // Window end in padded-codeword coordinates.
    let x_end = w1 + delta;

    let erased: Vec<usize> = (0..big_n)
        .filter(|&j| ((j * p + l) as isize) < x_end && ((j * p + p) as isize) > w0)
        .collect();
    if erased.len() > PARITY {
        return Err(DecodeFailure::TooManyErasures(erased.len()).into());
    }
    let mut blocks = Vec::with_capacity(big_n);
    for j in 0..big_n {
        if erased.contains(&j) {
            blocks.push(None);
            continue;
        }
        let start = (j * p + l) as isize;
        let start = if start + m as isize <= w0 {
            start
        } else {
            start - delta
        };
        if start < 0 || start as usize + m > len {
            return Err(DecodeFailure::Uncorrectable.into());
        }
        let start = start as usize;
        blocks.push(Some(padded[start..start + m].to_vec()));
    }
    Ok(Localization {
        case: CaseTag::MarkersShifted,
        delta,
        anomaly: Some(s),
        window: Some((w0 as usize, w1 as usize)),
        erased,
        blocks,
    })
}

/// Decodes a channel output.
pub fn decode(params: &CodeParams, output: &Word) -> Result<DecodeReport> {
    if output.q() != params.q() {
        return Err(param(format!(
            "received alphabet {} differs from q = {}",
            output.q(),
            params.q()
        )));
    }
    decode_root(params, &root(output.symbols()))
}

/// Decodes a word that is already a duplication root.
pub fn decode_root(params: &CodeParams, y: &[Symbol]) -> Result<DecodeReport> {
    let loc = localize(params, y)?;
    let mut received = Vec::with_capacity(loc.blocks.len());
    let mut candidates = Vec::new();
    for (j, block) in loc.blocks.iter().enumerate() {
        let Some(block) = block else {
            received.push(FieldElement::ZERO);
            continue;
        };
        match params.zeta_inv(block) {
            Some(c) => received.push(c),
            None => {
                candidates.push(j);
                received.push(FieldElement::ZERO);
            }
        }
    }
    let decoded = params.rs.decode(&received, &loc.erased)?;
    Ok(DecodeReport {
        case: loc.case,
        delta: loc.delta,
        anomaly: loc.anomaly,
        window: loc.window,
        erased: loc.erased,
        candidates,
        corrected: decoded.corrected,
        message: decoded.message,
    })
}

/// Message files: one message per line, symbols in hex. Symbols are written
/// as single digits when the field has at most 16 elements, otherwise as
/// space-separated tokens. Both forms are accepted on input.
pub fn parse_message(params: &CodeParams, line: &str, line_no: usize) -> Result<Vec<FieldElement>> {
    let field = params.rs.field();
    let tokens: Vec<(usize, &str)> = if line.split_whitespace().count() == 1 && field.degree() <= 4
    {
        let t = line.trim_start();
        let offset = line.len() - t.len();
        t.trim_end()
            .char_indices()
            .map(|(i, c)| (offset + i, &t[i..i + c.len_utf8()]))
            .collect()
    } else {
        let mut out = Vec::new();
        let mut rest = line;
        let mut base = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push((base + start, &tail[..end]));
            base += start + end;
            rest = &tail[end..];
        }
        out
    };
    let mut symbols = Vec::with_capacity(tokens.len());
    for (col, tok) in tokens {
        let bad = |message: String| Error::Parse {
            line: line_no,
            column: col + 1,
            message,
        };
        let v = u32::from_str_radix(tok, 16)
            .map_err(|_| bad(format!("`{tok}` is not a hex number")))?;
        symbols.push(
            field
                .element(v)
                .map_err(|_| bad(format!("{tok} exceeds GF(2^{})", field.degree())))?,
        );
    }
    if symbols.len() != params.message_len() {
        return Err(Error::Parse {
            line: line_no,
            column: 1,
            message: format!(
                "message has {} symbols, expected {}",
                symbols.len(),
                params.message_len()
            ),
        });
    }
    Ok(symbols)
}

pub fn render_message(params: &CodeParams, message: &[FieldElement]) -> String {
    if params.field_degree() <= 4 {
        message.iter().map(|c| format!("{c}")).collect()
    } else {
        message
            .iter()
            .map(|c| format!("{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
