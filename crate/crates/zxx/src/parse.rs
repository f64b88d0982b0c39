//! Text input for polynomials. Two forms are accepted:
//!
//! * term syntax: signed terms `[int][x[^exp]]`, e.g. `4 + 8x + 3x^2`,
//!   `-x^3+2`, with insignificant whitespace and repeated exponents summed;
//! * a bracketed coefficient list, lowest degree first: `[4, 8, 3]`.
//!
//! Errors carry the byte position of the offending character.

use crate::polyring::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Largest exponent the parser accepts.
pub const MAX_EXPONENT: usize = 1_000_000;

struct Scanner<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    _src: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            chars: src.char_indices().collect(),
            pos: 0,
            len: src.len(),
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn byte_pos(&self) -> usize {
        self.chars.get(self.pos).map(|&(b, _)| b).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.byte_pos(),
            message: message.into(),
        })
    }

    /// An unsigned decimal integer; `None` when the next char is not a digit.
    fn digits(&mut self) -> Option<String> {
        let mut s = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        if s.is_empty() {
            None
        } else {
            Some(s)
        }
    }
}

/// Parses either term syntax or a bracketed coefficient list.
pub fn parse_poly(input: &str) -> Result<IntPoly> {
    let mut sc = Scanner::new(input);
    sc.skip_ws();
    match sc.peek() {
        None => sc.error("empty input"),
        Some('[') => parse_bracketed(&mut sc),
        _ => parse_terms(&mut sc),
    }
}

/// Canonical text for a polynomial; `parse_poly` accepts the output.
pub fn render_poly(f: &IntPoly) -> String {
    f.to_string()
}

fn parse_signed_int(sc: &mut Scanner) -> Result<BigInt> {
    sc.skip_ws();
    let negative = match sc.peek() {
        Some('-') => {
            sc.bump();
            true
        }
        Some('+') => {
            sc.bump();
            false
        }
        _ => false,
    };
    sc.skip_ws();
    let Some(digits) = sc.digits() else {
        return sc.error("expected an integer");
    };
    let value: BigInt = digits.parse().expect("digit runs always parse");
    Ok(if negative { -value } else { value })
}

fn parse_bracketed(sc: &mut Scanner) -> Result<IntPoly> {
    sc.bump(); // consume '['
    sc.skip_ws();
    let mut coeffs = Vec::new();
    if sc.peek() == Some(']') {
        sc.bump();
    } else {
        loop {
            coeffs.push(parse_signed_int(sc)?);
            sc.skip_ws();
            match sc.bump() {
                Some(',') => {
                    if coeffs.len() > MAX_EXPONENT {
                        return sc.error(format!("more than {} coefficients", MAX_EXPONENT + 1));
                    }
                }
                Some(']') => break,
                _ => {
                    sc.pos = sc.pos.saturating_sub(1);
                    return sc.error("expected ',' or ']'");
                }
            }
        }
    }
    sc.skip_ws();
    if sc.peek().is_some() {
        return sc.error("trailing input after ']'");
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

fn parse_terms(sc: &mut Scanner) -> Result<IntPoly> {
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    let mut first = true;
    loop {
        sc.skip_ws();
        if sc.peek().is_none() {
            if first {
                return sc.error("expected a term");
            }
            break;
        }
        let negative = match sc.peek() {
            Some('+') => {
                sc.bump();
                false
            }
            Some('-') => {
                sc.bump();
                true
            }
            _ if first => false,
            _ => return sc.error("expected '+' or '-' between terms"),
        };
        first = false;
        sc.skip_ws();
        let coeff = sc.digits().map(|d| d.parse::<BigInt>().expect("digits"));
        sc.skip_ws();
        let exponent = if sc.peek() == Some('x') {
            sc.bump();
            sc.skip_ws();
            if sc.peek() == Some('^') {
                sc.bump();
                sc.skip_ws();
                let at = sc.byte_pos();
                let Some(digits) = sc.digits() else {
                    return sc.error("expected an exponent after '^'");
                };
                let exp: usize = digits.parse().map_err(|_| Error::Parse {
                    position: at,
                    message: "exponent out of range".into(),
                })?;
                if exp > MAX_EXPONENT {
                    return Err(Error::Parse {
                        position: at,
                        message: format!("exponent {exp} exceeds the cap {MAX_EXPONENT}"),
                    });
                }
                exp
            } else {
                1
            }
        } else {
            if coeff.is_none() {
                return sc.error("expected a coefficient or 'x'");
            }
            0
        };
        let mut c = coeff.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        *acc.entry(exponent).or_insert_with(BigInt::zero) += c;
    }
    let degree = acc.keys().next_back().copied().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for (e, c) in acc {
        coeffs[e] = c;
    }
    Ok(IntPoly::from_coeffs(coeffs))
}
