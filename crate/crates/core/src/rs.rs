//! Systematic Reed–Solomon code `[N, N-4, 5]` over GF(2^t), `N = 2^t - 1`.
//!
//! Position `i` of a codeword is the coefficient of `x^(N-1-i)`; the message
//! occupies the first `N - 4` positions. The generator polynomial has roots
//! `α^1..α^4`. Decoding handles any mix of `e` errors and `f` erasures with
//! `2e + f <= 4`: erasure locator, Berlekamp–Massey for the unknown errors,
//! Chien search and Forney's formula.

use crate::error::{param, DecodeFailure, Error, Result};
use crate::gf::{FieldElement, GaloisField};

/// Number of parity symbols (`d - 1` for `d = 5`).
pub const PARITY: usize = 4;

#[derive(Clone, Debug)]
pub struct ReedSolomon {
    field: GaloisField,
    /// Monic generator, highest degree first.
    generator: Vec<FieldElement>,
}

/// Decoder output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsDecoded {
    pub message: Vec<FieldElement>,
    /// Positions whose value changed during correction.
    pub corrected: Vec<usize>,
}

impl ReedSolomon {
    pub fn new(field_degree: u32) -> Result<Self> {
        let field = GaloisField::new(field_degree)?;
        let mut generator = vec![FieldElement::ONE];
        for j in 1..=PARITY {
            let root = field.alpha_pow(j);
            let mut next = generator.clone();
            next.push(FieldElement::ZERO);
            for i in 1..next.len() {
                next[i] = field.add(next[i], field.mul(root, generator[i - 1]));
            }
            generator = next;
        }
        Ok(ReedSolomon { field, generator })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Code length `N`.
    pub fn len(&self) -> usize {
        self.field.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension `N - 4`.
    pub fn dimension(&self) -> usize {
        self.len() - PARITY
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let k = self.dimension();
        if message.len() != k {
            return Err(param(format!(
                "message has {} symbols, expected {k}",
                message.len()
            )));
        }
        if let Some(bad) = message
            .iter()
            .find(|e| e.value() as usize >= self.field.size())
        {
            return Err(param(format!("{bad} is not a field element")));
        }
        let mut buf = message.to_vec();
        buf.resize(self.len(), FieldElement::ZERO);
        for i in 0..k {
            let coef = buf[i];
            if coef.is_zero() {
                continue;
            }
            for (j, &g) in self.generator.iter().enumerate().skip(1) {
                buf[i + j] = self.field.add(buf[i + j], self.field.mul(coef, g));
            }
        }
        let mut codeword = message.to_vec();
        codeword.extend_from_slice(&buf[k..]);
        Ok(codeword)
    }

    /// `S_j = c(α^j)` for `j = 1..=4`.
    pub fn syndromes(&self, word: &[FieldElement]) -> [FieldElement; PARITY] {
        let f = &self.field;
        let mut s = [FieldElement::ZERO; PARITY];
        for (j, slot) in s.iter_mut().enumerate() {
            let a = f.alpha_pow(j + 1);
            *slot = word
                .iter()
                .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, a), c));
        }
        s
    }

    pub fn is_codeword(&self, word: &[FieldElement]) -> bool {
        word.len() == self.len() && self.syndromes(word).iter().all(|s| s.is_zero())
    }

    /// Locator of position `i`, `X_i = α^(N-1-i)`.
    fn locator(&self, i: usize) -> FieldElement {
        self.field.alpha_pow(self.len() - 1 - i)
    }

    /// Corrects `e` errors and `f = erasures.len()` erasures when
    /// `2e + f <= 4`. Values at erased positions are ignored.
    pub fn decode(&self, received: &[FieldElement], erasures: &[usize]) -> Result<RsDecoded> {
        let n = self.len();
        if received.len() != n {
            return Err(param(format!(
                "received word has {} symbols, expected {n}",
                received.len()
            )));
        }
        let mut erasures = erasures.to_vec();
        erasures.sort_unstable();
        erasures.dedup();
        if erasures.len() > PARITY {
            return Err(param(format!(
                "{} erasures exceed the {PARITY} the code can fill",
                erasures.len()
            )));
        }
        if let Some(&bad) = erasures.iter().find(|&&p| p >= n) {
            return Err(param(format!("erasure position {bad} outside length {n}")));
        }
        let f = &self.field;
        let mut word = received.to_vec();
        for &p in &erasures {
            word[p] = FieldElement::ZERO;
        }
        let synd = self.syndromes(&word);
        if synd.iter().all(|s| s.is_zero()) {
            return Ok(RsDecoded {
                message: word[..self.dimension()].to_vec(),
                corrected: changed(received, &word),
            });
        }
        let uncorrectable = || Error::Decode(DecodeFailure::Uncorrectable);

        // Erasure locator Γ(x) = Π (1 + X_e x), lowest degree first.
        let mut gamma = vec![FieldElement::ONE];
        for &p in &erasures {
            gamma = poly_mul(f, &gamma, &[FieldElement::ONE, self.locator(p)]);
        }

        // Berlekamp–Massey seeded with the erasure locator.
        let nf = erasures.len();
        let mut lambda = gamma.clone();
        let mut prev = gamma;
        let mut l = nf;
        for r in nf + 1..=PARITY {
            let delta = lambda
                .iter()
                .enumerate()
                .filter(|&(i, _)| i < r)
                .fold(FieldElement::ZERO, |acc, (i, &c)| {
                    f.add(acc, f.mul(c, synd[r - i - 1]))
                });
            let shifted: Vec<FieldElement> = std::iter::once(FieldElement::ZERO)
                .chain(prev.iter().copied())
                .collect();
            if delta.is_zero() {
                prev = shifted;
                continue;
            }
            let next = poly_add(f, &lambda, &poly_scale(f, &shifted, delta));
            if 2 * l < r + nf {
                let inv = f.inv(delta)?;
                prev = poly_scale(f, &lambda, inv);
                l = r + nf - l;
            } else {
                prev = shifted;
            }
            lambda = next;
        }
        trim(&mut lambda);
        let degree = lambda.len() - 1;
        if degree != l || 2 * (l - nf) + nf > PARITY {
            return Err(uncorrectable());
        }

        // Chien search.
        let roots: Vec<usize> = (0..n)
            .filter(|&i| {
                let xinv = f.inv(self.locator(i)).expect("locators are nonzero");
                poly_eval(f, &lambda, xinv).is_zero()
            })
            .collect();
        if roots.len() != degree {
            return Err(uncorrectable());
        }

        // Forney: e_i = Ω(X_i^-1) / Λ'(X_i^-1), Ω = S Λ mod x^4.
        let mut omega = poly_mul(f, &synd, &lambda);
        omega.truncate(PARITY);
        let derivative: Vec<FieldElement> = lambda
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| if k % 2 == 1 { c } else { FieldElement::ZERO })
            .collect();
        for &i in &roots {
            let xinv = f.inv(self.locator(i))?;
            let den = poly_eval(f, &derivative, xinv);
            if den.is_zero() {
                return Err(uncorrectable());
            }
            let magnitude = f.div(poly_eval(f, &omega, xinv), den)?;
            word[i] = f.add(word[i], magnitude);
        }
        if !self.is_codeword(&word) {
            return Err(uncorrectable());
        }
        Ok(RsDecoded {
            message: word[..self.dimension()].to_vec(),
            corrected: changed(received, &word),
        })
    }
}

fn changed(a: &[FieldElement], b: &[FieldElement]) -> Vec<usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, _)| i)
        .collect()
}

fn trim(p: &mut Vec<FieldElement>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_add(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    out
}

fn poly_scale(f: &GaloisField, a: &[FieldElement], s: FieldElement) -> Vec<FieldElement> {
    a.iter().map(|&c| f.mul(c, s)).collect()
}

fn poly_mul(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Lowest-degree-first evaluation.
fn poly_eval(f: &GaloisField, p: &[FieldElement], x: FieldElement) -> FieldElement {
    p.iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(rs: &ReedSolomon, vals: &[u32]) -> Vec<FieldElement> {
        vals.iter()
            .map(|&v| rs.field().element(v).unwrap())
            .collect()
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let rs = ReedSolomon::new(4).unwrap();
        let c = rs.encode(&[FieldElement::ZERO; 11]).unwrap();
        assert!(c.iter().all(|e| e.is_zero()));
    }

    #[test]
    fn systematic_and_valid() {
        let rs = ReedSolomon::new(4).unwrap();
        let m = msg(&rs, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]);
        let c = rs.encode(&m).unwrap();
        assert_eq!(&c[..11], &m[..]);
        assert!(rs.is_codeword(&c));
        assert_eq!(rs.decode(&c, &[]).unwrap().message, m);
    }

    #[test]
    fn wrong_lengths_rejected() {
        let rs = ReedSolomon::new(3).unwrap();
        assert!(rs.encode(&msg(&rs, &[1, 2])).is_err());
        let c = rs.encode(&msg(&rs, &[1, 2, 3])).unwrap();
        assert!(matches!(
            rs.decode(&c, &[0, 1, 2, 3, 4]),
            Err(Error::Parameter(_))
        ));
        assert!(rs.decode(&c[..6], &[]).is_err());
    }

    #[test]
    fn mixed_error_and_erasures() {
        let rs = ReedSolomon::new(5).unwrap();
        let m: Vec<FieldElement> = (0..27).map(|v| rs.field().element(v).unwrap()).collect();
        let c = rs.encode(&m).unwrap();
        let mut r = c.clone();
        r[3] = rs.field().element(17).unwrap();
        r[10] = FieldElement::ZERO;
        r[29] = rs.field().element(1).unwrap();
        let d = rs.decode(&r, &[10, 29]).unwrap();
        assert_eq!(d.message, m);
    }

    #[test]
    fn three_errors_do_not_decode_silently_to_the_sent_word_claim() {
        // 2e + f = 6 is outside the guarantee; the decoder may fail or land on
        // another codeword, but whatever it returns must be a codeword.
        let rs = ReedSolomon::new(3).unwrap();
        let c = rs.encode(&msg(&rs, &[1, 2, 3])).unwrap();
        let mut r = c.clone();
        for p in [0, 2, 4] {
            r[p] = rs.field().add(r[p], FieldElement::ONE);
        }
        if let Ok(d) = rs.decode(&r, &[]) {
            let re = rs.encode(&d.message).unwrap();
            assert!(rs.is_codeword(&re));
        }
    }
}
