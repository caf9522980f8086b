//! Truncated Poincaré series and closed forms `Σ c·t^a/(1-t^b)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::Generator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("cannot parse series expression at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Integer coefficients for degrees `0..len`. Every stored coefficient is
/// known; nothing beyond `len` is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    coeffs: Vec<i64>,
    /// Coefficients pushed below degree 0 by negative shifts, nearest first.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    dropped: Vec<i64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<i64>) -> Self {
        TruncatedSeries {
            coeffs,
            dropped: Vec::new(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0; len])
    }

    /// Length of the reliable range: coefficients are known for `0..len`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> Option<i64> {
        self.coeffs.get(n).copied()
    }

    pub fn dropped(&self) -> &[i64] {
        &self.dropped
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn truncate(&self, len: usize) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs[..len.min(self.len())].to_vec(),
            dropped: self.dropped.clone(),
        }
    }

    fn zip_with(&self, other: &TruncatedSeries, f: impl Fn(i64, i64) -> i64) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(other, |a, b| a - b)
    }

    /// Multiplies by `t^k`. Positive `k` prepends zeros (which are known), so
    /// the reliable range grows by `k`; negative `k` drops the lowest `|k|`
    /// coefficients into [`Self::dropped`].
    pub fn shift(&self, k: i64) -> TruncatedSeries {
        if k >= 0 {
            let mut coeffs = vec![0; k as usize];
            coeffs.extend_from_slice(&self.coeffs);
            TruncatedSeries {
                coeffs,
                dropped: self.dropped.clone(),
            }
        } else {
            let k = (-k) as usize;
            let cut = k.min(self.len());
            let mut dropped: Vec<i64> = self.coeffs[..cut].iter().rev().copied().collect();
            dropped.extend_from_slice(&self.dropped);
            TruncatedSeries {
                coeffs: self.coeffs[cut..].to_vec(),
                dropped,
            }
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        write!(f, "{} (+ O(t^{}))", parts.join(","), self.len())
    }
}

/// One term `coeff · t^power / (1 - t^period)`; `period = None` is a bare monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExprTerm {
    pub coeff: i64,
    pub power: u32,
    pub period: Option<u32>,
}

impl ExprTerm {
    pub fn geometric(coeff: i64, power: u32, period: u32) -> Self {
        assert!(period >= 1, "period must be positive");
        ExprTerm {
            coeff,
            power,
            period: Some(period),
        }
    }

    pub fn monomial(coeff: i64, power: u32) -> Self {
        ExprTerm {
            coeff,
            power,
            period: None,
        }
    }

    fn coefficient_at(&self, n: usize) -> i64 {
        let a = self.power as usize;
        if n < a {
            return 0;
        }
        match self.period {
            Some(b) if (n - a).is_multiple_of(b as usize) => self.coeff,
            Some(_) => 0,
            None if n == a => self.coeff,
            None => 0,
        }
    }
}

/// A finite sum of [`ExprTerm`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RationalExpr {
    pub terms: Vec<ExprTerm>,
}

impl RationalExpr {
    pub fn new(terms: Vec<ExprTerm>) -> Self {
        RationalExpr { terms }
    }

    pub fn plus(mut self, other: &RationalExpr) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    pub fn expand(&self, cap: usize) -> TruncatedSeries {
        TruncatedSeries::new(
            (0..cap)
                .map(|n| self.terms.iter().map(|t| t.coefficient_at(n)).sum())
                .collect(),
        )
    }

    /// Parses `c*t^a/(1-t^b)` terms joined by `+`/`-`. Whitespace is ignored;
    /// `c`, `t^a` and the denominator are each optional (but a term needs a
    /// coefficient or a power of `t`). The empty string and `0` are zero.
    pub fn parse(text: &str) -> Result<RationalExpr, SeriesError> {
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut p = ExprParser { chars, pos: 0 };
        p.expr()
    }
}

pub fn expand(e: &RationalExpr, cap: usize) -> TruncatedSeries {
    e.expand(cap)
}

/// True when `s` agrees with the expansion of `e` on the reliable range of `s`.
pub fn equals_expr(s: &TruncatedSeries, e: &RationalExpr) -> bool {
    e.expand(s.len()).coeffs == s.coeffs
}

/// Expansion of `Π_even 1/(1-t^deg) · Π_odd (1+t^deg)`, the Hilbert series
/// of the free graded-commutative algebra on `generators`.
pub fn algebra_generating_function(generators: &[Generator], cap: usize) -> TruncatedSeries {
    let mut c = vec![0i64; cap];
    if cap > 0 {
        c[0] = 1;
    }
    for g in generators {
        let d = g.degree as usize;
        if d == 0 || d >= cap {
            continue;
        }
        if g.is_odd() {
            for n in (d..cap).rev() {
                c[n] += c[n - d];
            }
        } else {
            for n in d..cap {
                c[n] += c[n - d];
            }
        }
    }
    TruncatedSeries::new(c)
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = if k == 0 {
                if t.coeff < 0 {
                    write!(f, "-")?;
                }
                t.coeff.abs()
            } else {
                write!(f, " {} ", if t.coeff < 0 { '-' } else { '+' })?;
                t.coeff.abs()
            };
            let numerator = match (c, t.power) {
                (c, 0) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, a) => format!("t^{a}"),
                (c, 1) => format!("{c}*t"),
                (c, a) => format!("{c}*t^{a}"),
            };
            write!(f, "{numerator}")?;
            if let Some(b) = t.period {
                if b == 1 {
                    write!(f, "/(1-t)")?;
                } else {
                    write!(f, "/(1-t^{b})")?;
                }
            }
        }
        Ok(())
    }
}

struct ExprParser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(
            || self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()),
            |&(i, _)| i,
        )
    }

    fn err(&self, message: &str) -> SeriesError {
        SeriesError::Parse {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SeriesError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> Result<u64, SeriesError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn t_power(&mut self) -> Result<u32, SeriesError> {
        self.expect('t')?;
        if self.eat('^') {
            let a = self.int()?;
            u32::try_from(a).map_err(|_| self.err("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, SeriesError> {
        let mut terms = Vec::new();
        if self.peek().is_none() {
            return Ok(RationalExpr::default());
        }
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            if t.coeff != 0 {
                terms.push(t);
            }
            match self.peek() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return Err(self.err("expected `+`, `-` or end of input")),
            }
            self.pos += 1;
        }
        Ok(RationalExpr { terms })
    }

    fn term(&mut self) -> Result<ExprTerm, SeriesError> {
        let mut coeff: i64 = 1;
        let mut power = 0;
        let mut saw_any = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = i64::try_from(self.int()?).map_err(|_| self.err("coefficient out of range"))?;
            saw_any = true;
            if self.eat('*') {
                power = self.t_power()?;
            }
        } else if self.peek() == Some('t') {
            power = self.t_power()?;
            saw_any = true;
        }
        if !saw_any {
            return Err(self.err("expected coefficient or power of t"));
        }
        let mut period = None;
        if self.eat('/') {
            self.expect('(')?;
            let one = self.int()?;
            if one != 1 {
                return Err(self.err("denominator must have the form (1-t^b)"));
            }
            self.expect('-')?;
            let b = self.t_power()?;
            if b == 0 {
                return Err(self.err("period must be positive"));
            }
            self.expect(')')?;
            period = Some(b);
        }
        Ok(ExprTerm { coeff, power, period })
    }
}
