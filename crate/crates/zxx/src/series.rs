//! Arithmetic in `Z[[x]]` truncated at a fixed order `N`: multiplication,
//! inversion of units, and congruence mod `x^N`. The representation is an
//! eager dense coefficient vector of length exactly `N`.

use crate::polyring::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series of order `coeffs.len()`; zeros are stored explicitly.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::NotApplicable("series order must be at least 1".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        TruncatedSeries {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); order.max(1)],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Embeds a polynomial, truncating or zero-padding to `order`.
    pub fn from_poly(f: &IntPoly, order: usize) -> Self {
        let order = order.max(1);
        let coeffs = (0..order).map(|i| f.coeff(i)).collect();
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Reinterprets the coefficients as a polynomial (trailing zeros drop).
    pub fn to_poly(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.clone())
    }

    /// Shortens or zero-pads to a new order.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.max(1);
        let coeffs = (0..order).map(|i| self.coeff(i)).collect();
        TruncatedSeries { coeffs }
    }

    /// Cauchy product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); order];
        for (i, a) in self.coeffs.iter().take(order).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// True iff the constant term is `±1`, i.e. the series is invertible.
    pub fn is_unit(&self) -> bool {
        is_unit_constant(&self.coeffs[0])
    }

    /// Inverse of a unit series: `v_0 = u_0` and
    /// `v_k = -u_0 * sum_{i=1..k} u_i v_{k-i}` (using `u_0^2 = 1`).
    pub fn invert_unit(&self) -> Result<TruncatedSeries> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let n = self.order();
        let u0 = self.coeffs[0].clone();
        let mut v = vec![BigInt::zero(); n];
        v[0] = u0.clone();
        for k in 1..n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &v[k - i];
            }
            v[k] = -&u0 * acc;
        }
        Ok(TruncatedSeries { coeffs: v })
    }

    /// Coefficientwise equality on indices `0..n`.
    pub fn equal_mod(&self, other: &TruncatedSeries, n: usize) -> bool {
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }

    /// JSON array of decimal strings, lowest degree first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }

    /// Parses the serialization produced by [`to_json`](Self::to_json);
    /// plain JSON numbers are accepted as well.
    pub fn from_json(v: &serde_json::Value) -> Result<TruncatedSeries> {
        let arr = v.as_array().ok_or_else(|| Error::Parse {
            position: 0,
            message: "expected a JSON array of coefficients".into(),
        })?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for (i, item) in arr.iter().enumerate() {
            let c = match item {
                serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|_| Error::Parse {
                    position: i,
                    message: format!("invalid integer literal {s:?}"),
                })?,
                serde_json::Value::Number(n) => {
                    n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse {
                        position: i,
                        message: "numeric coefficient out of range; use a decimal string".into(),
                    })?
                }
                _ => {
                    return Err(Error::Parse {
                        position: i,
                        message: "coefficients must be strings or integers".into(),
                    })
                }
            };
            coeffs.push(c);
        }
        TruncatedSeries::new(coeffs)
    }
}

/// Unit test on a constant term, shared with the polynomial view.
pub fn is_unit_constant(c: &BigInt) -> bool {
    c.is_one() || (-c).is_one()
}

/// `is_unit` for a polynomial viewed as an element of `Z[[x]]`.
pub fn poly_is_unit(f: &IntPoly) -> bool {
    is_unit_constant(&f.constant_term())
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(x^{})", self.to_poly(), self.order())
    }
}
