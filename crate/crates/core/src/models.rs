//! Minimal models and the differential graded algebras built from them.
//!
//! A [`MinimalModel`] `(ΛV, d)` is read from a small line-oriented text
//! format. From it we build the free loop space model `(Λ(V, V̄), δ)` and
//! the S¹-Borel model `(Λ(α, V, V̄), D)` carrying the loop-reversal
//! involution. Every construction re-verifies `D² = 0` (and, for the Borel
//! model, compatibility of the involution) before it is handed out.

use std::fmt;

use thiserror::Error;

use crate::algebra::{
    check_differential, parse_rational, AlgebraError, AlgebraMap, Derivation, Generator, GradedAlgebra, Polynomial,
};
use crate::linalg::Rational;
use num_traits::One;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("DegreeMismatch: d({generator}) has a term of degree {found}, expected {expected}")]
    DegreeMismatch {
        generator: String,
        expected: i64,
        found: i64,
    },
    #[error("NotSquareZero: d(d({generator})) = {residual}")]
    NotSquareZero { generator: String, residual: String },
    #[error("SimpleConnectivity: generator `{generator}` has degree {degree}, minimal models of simply-connected spaces need degree >= 2")]
    SimpleConnectivity { generator: String, degree: u32 },
    #[error("BorelSquareZeroFailure: D(D({generator})) = {residual} in the Borel model")]
    BorelSquareZeroFailure { generator: String, residual: String },
    #[error("InvolutionIncompatible: {reason} (generator `{generator}`)")]
    InvolutionIncompatible { generator: String, reason: String },
    #[error("degree cap {0} is too small")]
    CapTooSmall(u32),
    #[error(transparent)]
    Algebra(AlgebraError),
}

impl ModelError {
    /// Short category name used in CLI messages.
    pub fn category(&self) -> &'static str {
        match self {
            ModelError::Syntax { .. } => "SyntaxError",
            ModelError::DegreeMismatch { .. } => "DegreeMismatch",
            ModelError::NotSquareZero { .. } => "NotSquareZero",
            ModelError::SimpleConnectivity { .. } => "SimpleConnectivity",
            ModelError::BorelSquareZeroFailure { .. } => "BorelSquareZeroFailure",
            ModelError::InvolutionIncompatible { .. } => "InvolutionIncompatible",
            ModelError::CapTooSmall(_) => "CapTooSmall",
            ModelError::Algebra(_) => "AlgebraError",
        }
    }
}

impl From<AlgebraError> for ModelError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::DegreeMismatch {
                generator,
                expected,
                found,
            } => ModelError::DegreeMismatch {
                generator,
                expected,
                found,
            },
            AlgebraError::NotSquareZero { generator, residual } => ModelError::NotSquareZero { generator, residual },
            other => ModelError::Algebra(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelWarning {
    /// `d(g)` has a linear term, so the model is not minimal.
    NotMinimal { generator: String },
}

impl fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelWarning::NotMinimal { generator } => {
                write!(f, "NotMinimal: d({generator}) has a linear term")
            }
        }
    }
}

/// `(ΛV, d)`: generators of degree >= 2 and a square-zero differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalModel {
    algebra: GradedAlgebra,
    differential: Derivation,
}

fn max_check_degree(algebra: &GradedAlgebra) -> u32 {
    algebra.generators().iter().map(|g| g.degree + 2).max().unwrap_or(2)
}

impl MinimalModel {
    pub fn new(algebra: GradedAlgebra, differential: Derivation) -> Result<Self, ModelError> {
        for g in algebra.generators() {
            if g.degree < 2 {
                return Err(ModelError::SimpleConnectivity {
                    generator: g.name.clone(),
                    degree: g.degree,
                });
            }
        }
        // Re-validate degrees even if the derivation was built elsewhere.
        let differential = Derivation::new(&algebra, differential.shift(), differential.values().to_vec())?;
        check_differential(&algebra, &differential, max_check_degree(&algebra))?;
        Ok(MinimalModel { algebra, differential })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn differential(&self) -> &Derivation {
        &self.differential
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn warnings(&self) -> Vec<ModelWarning> {
        self.algebra
            .generators()
            .iter()
            .zip(self.differential.values())
            .filter(|(_, v)| v.min_word_length() == Some(1))
            .map(|(g, _)| ModelWarning::NotMinimal {
                generator: g.name.clone(),
            })
            .collect()
    }

    /// The model itself as a DGA without involution.
    pub fn base_dga(&self) -> DgaModel {
        DgaModel {
            algebra: self.algebra.clone(),
            differential: self.differential.clone(),
            involution: None,
        }
    }

    pub fn dga(&self, space: Space, cap: u32) -> Result<DgaModel, ModelError> {
        match space {
            Space::Base => Ok(self.base_dga()),
            Space::Loop => loop_model(self),
            Space::Borel => borel_model(self, cap),
        }
    }

    /// Writes the model back in the text format accepted by [`parse_model`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in self.algebra.generators() {
            s.push_str(&format!("gen {} {}\n", g.name, g.degree));
        }
        for (g, v) in self.algebra.generators().iter().zip(self.differential.values()) {
            if !v.is_zero() {
                s.push_str(&format!("d {} = {}\n", g.name, self.algebra.format(v)));
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// `(ΛV, d)`, computing `H*(M; Q)`.
    Base,
    /// `(Λ(V, V̄), δ)`, computing `H*(LM; Q)`.
    Loop,
    /// `(Λ(α, V, V̄), D)`, computing `H*_{S¹}(LM; Q)`.
    Borel,
}

/// A free graded-commutative DGA with an optional involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgaModel {
    algebra: GradedAlgebra,
    differential: Derivation,
    involution: Option<AlgebraMap>,
}

impl DgaModel {
    pub fn new(
        algebra: GradedAlgebra,
        differential: Derivation,
        involution: Option<AlgebraMap>,
        cap: u32,
    ) -> Result<Self, ModelError> {
        check_differential(&algebra, &differential, cap)?;
        let model = DgaModel {
            algebra,
            differential,
            involution,
        };
        model.check_involution(cap)?;
        Ok(model)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn differential(&self) -> &Derivation {
        &self.differential
    }

    pub fn involution(&self) -> Option<&AlgebraMap> {
        self.involution.as_ref()
    }

    /// Checks `T² = id` on generators and `T∘D = D∘T` on generators of degree
    /// below `cap`. Both sides of the second identity are T-twisted
    /// derivations, so agreement on generators suffices.
    pub fn check_involution(&self, cap: u32) -> Result<(), ModelError> {
        let Some(t) = &self.involution else { return Ok(()) };
        let a = &self.algebra;
        for (i, g) in a.generators().iter().enumerate() {
            let tt = t.apply(a, t.value(i));
            if tt != a.generator(i) {
                return Err(ModelError::InvolutionIncompatible {
                    generator: g.name.clone(),
                    reason: format!("T(T(g)) = {}", a.format(&tt)),
                });
            }
            if g.degree + 1 > cap {
                continue;
            }
            let td = t.apply(a, self.differential.value(i));
            let dt = self.differential.apply(a, t.value(i));
            if td != dt {
                return Err(ModelError::InvolutionIncompatible {
                    generator: g.name.clone(),
                    reason: format!("T(D g) = {} but D(T g) = {}", a.format(&td), a.format(&dt)),
                });
            }
        }
        Ok(())
    }
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Generator layout shared by the loop and Borel constructions.
struct Doubled {
    algebra: GradedAlgebra,
    /// position of `v_i` in the new algebra
    plain: Vec<usize>,
    /// position of `v̄_i`
    barred: Vec<usize>,
    alpha: Option<usize>,
    /// degree -1 derivation with `s(v) = v̄`, `s(v̄) = 0`, `s(α) = 0`
    suspension: Derivation,
}

fn double(m: &MinimalModel, with_alpha: bool) -> Result<Doubled, ModelError> {
    let base = m.generators();
    let k = base.len();
    let mut gens: Vec<Generator> = Vec::with_capacity(2 * k + 1);
    let offset = usize::from(with_alpha);
    let mut taken: Vec<String> = base.iter().map(|g| g.name.clone()).collect();
    if with_alpha {
        let name = fresh_name("alpha", &taken);
        taken.push(name.clone());
        gens.push(Generator::new(name, 2));
    }
    gens.extend(base.iter().cloned());
    for g in base {
        let name = fresh_name(&format!("{}_bar", g.name), &taken);
        taken.push(name.clone());
        gens.push(Generator::new(name, g.degree - 1));
    }
    let algebra = GradedAlgebra::new(gens)?;
    let plain: Vec<usize> = (0..k).map(|i| i + offset).collect();
    let barred: Vec<usize> = (0..k).map(|i| i + offset + k).collect();
    let mut s_values = vec![algebra.zero(); algebra.len()];
    for i in 0..k {
        s_values[plain[i]] = algebra.generator(barred[i]);
    }
    let suspension = Derivation::new(&algebra, -1, s_values)?;
    Ok(Doubled {
        algebra,
        plain,
        barred,
        alpha: with_alpha.then_some(0),
        suspension,
    })
}

/// `δ(v) = d(v)`, `δ(v̄) = -s(d(v))` on the doubled algebra.
fn loop_values(m: &MinimalModel, layout: &Doubled) -> Vec<Polynomial> {
    let a = &layout.algebra;
    let mut values = vec![a.zero(); a.len()];
    for i in 0..m.generators().len() {
        let dv = m.differential().value(i).reindex(&layout.plain, a.len());
        values[layout.barred[i]] = layout.suspension.apply(a, &dv).neg();
        values[layout.plain[i]] = dv;
    }
    values
}

/// The free loop space model `(Λ(V, V̄), δ)` with `deg v̄ = deg v - 1`.
pub fn loop_model(m: &MinimalModel) -> Result<DgaModel, ModelError> {
    let layout = double(m, false)?;
    let values = loop_values(m, &layout);
    let a = &layout.algebra;
    let differential = Derivation::new(a, 1, values)?;
    let cap = max_check_degree(a);
    DgaModel::new(layout.algebra, differential, None, cap)
}

/// The Borel model `(Λ(α, V, V̄), D)` with `D = δ + α·s` and involution
/// `α ↦ -α`, `v ↦ v`, `v̄ ↦ -v̄`. Fails if `D² = 0` or the involution
/// checks do not hold through degree `cap`.
pub fn borel_model(m: &MinimalModel, cap: u32) -> Result<DgaModel, ModelError> {
    if cap < 2 {
        return Err(ModelError::CapTooSmall(cap));
    }
    let layout = double(m, true)?;
    let a = &layout.algebra;
    let alpha_idx = layout.alpha.expect("Borel layout has alpha");
    let alpha = a.generator(alpha_idx);
    let mut values = loop_values(m, &layout);
    for (i, v) in values.iter_mut().enumerate() {
        let s = layout.suspension.value(i);
        if !s.is_zero() {
            v.add_assign(&a.multiply(&alpha, s));
        }
    }
    let differential = Derivation::new(a, 1, values)?;
    if let Err(e) = check_differential(a, &differential, cap) {
        return Err(match e {
            AlgebraError::NotSquareZero { generator, residual } => {
                ModelError::BorelSquareZeroFailure { generator, residual }
            }
            other => other.into(),
        });
    }
    let mut flips = vec![false; a.len()];
    flips[alpha_idx] = true;
    for &b in &layout.barred {
        flips[b] = true;
    }
    let involution = AlgebraMap::diagonal_signs(a, &flips);
    let model = DgaModel {
        algebra: layout.algebra,
        differential,
        involution: Some(involution),
    };
    model.check_involution(cap)?;
    Ok(model)
}

/// `Λ(α)` with zero differential and `α ↦ -α`: the Borel model of a point.
pub fn point_borel_model() -> DgaModel {
    let algebra = GradedAlgebra::new(vec![Generator::new("alpha", 2)]).expect("valid generator");
    let differential = Derivation::zero(&algebra, 1);
    let involution = AlgebraMap::diagonal_signs(&algebra, &[true]);
    DgaModel {
        algebra,
        differential,
        involution: Some(involution),
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Equals,
}

struct Lexed {
    tok: Tok,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(line_no: usize, text: &str) -> Result<Vec<Lexed>, ModelError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Lexed { tok, column });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Int(chars[start..i].iter().collect()),
                column,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else {
            return Err(syntax(line_no, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct PolyParser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_column: usize,
    algebra: &'a GradedAlgebra,
}

impl PolyParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn err(&self, message: impl Into<String>) -> ModelError {
        syntax(self.line, self.column(), message)
    }

    fn poly(&mut self) -> Result<Polynomial, ModelError> {
        let mut p = self.algebra.zero();
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            negative = true;
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            if negative {
                p = p.sub(&t);
            } else {
                p.add_assign(&t);
            }
            match self.peek() {
                None => return Ok(p),
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                Some(_) => return Err(self.err("expected `+`, `-` or end of line")),
            }
            self.pos += 1;
        }
    }

    fn rational(&mut self) -> Result<Rational, ModelError> {
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(self.err("expected integer"));
        };
        self.pos += 1;
        let mut literal = n;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let Some(Tok::Int(d)) = self.peek().cloned() else {
                return Err(self.err("expected positive integer denominator"));
            };
            literal = format!("{literal}/{d}");
            self.pos += 1;
        }
        parse_rational(&literal).ok_or_else(|| syntax(self.line, self.column(), "invalid rational literal"))
    }

    fn term(&mut self) -> Result<Polynomial, ModelError> {
        let a = self.algebra;
        let mut coeff = Rational::one();
        let mut result_coeff_only = false;
        if let Some(Tok::Int(_)) = self.peek() {
            coeff = self.rational()?;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                result_coeff_only = true;
            }
        }
        let mut acc = a.constant(coeff);
        if result_coeff_only {
            return Ok(acc);
        }
        loop {
            let column = self.column();
            let Some(Tok::Ident(name)) = self.peek().cloned() else {
                return Err(self.err("expected generator name"));
            };
            self.pos += 1;
            let idx = a
                .index_of(&name)
                .ok_or_else(|| syntax(self.line, column, format!("unknown generator `{name}`")))?;
            let mut exp = 1u32;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                let Some(Tok::Int(e)) = self.peek().cloned() else {
                    return Err(self.err("expected positive exponent"));
                };
                exp = e
                    .parse::<u32>()
                    .ok()
                    .filter(|&e| e > 0)
                    .ok_or_else(|| self.err("expected positive exponent"))?;
                self.pos += 1;
            }
            acc = a.multiply(&acc, &a.power(&a.generator(idx), exp));
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parses the model text format:
///
/// ```text
/// # comment
/// gen <name> <degree>
/// d <name> = <poly>
/// ```
///
/// Generators keep their declaration order. Missing `d` lines mean `d = 0`.
pub fn parse_model(text: &str) -> Result<MinimalModel, ModelError> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut diff_lines: Vec<(usize, String, usize, Vec<Lexed>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let toks = lex(line_no, content)?;
        let end_column = content.chars().count() + 1;
        match toks.first().map(|t| &t.tok) {
            Some(Tok::Ident(kw)) if kw == "gen" => {
                let name = match toks.get(1) {
                    Some(Lexed {
                        tok: Tok::Ident(n), ..
                    }) => n.clone(),
                    other => {
                        return Err(syntax(
                            line_no,
                            other.map_or(end_column, |t| t.column),
                            "expected generator name",
                        ))
                    }
                };
                let degree = match toks.get(2) {
                    Some(Lexed { tok: Tok::Int(d), column }) => d
                        .parse::<u32>()
                        .map_err(|_| syntax(line_no, *column, "degree out of range"))?,
                    other => {
                        return Err(syntax(
                            line_no,
                            other.map_or(end_column, |t| t.column),
                            "expected generator degree",
                        ))
                    }
                };
                if let Some(extra) = toks.get(3) {
                    return Err(syntax(line_no, extra.column, "unexpected trailing input"));
                }
                if gens.iter().any(|g| g.name == name) {
                    return Err(syntax(line_no, toks[1].column, format!("duplicate generator `{name}`")));
                }
                gens.push(Generator::new(name, degree));
            }
            Some(Tok::Ident(kw)) if kw == "d" => {
                let (name, name_col) = match toks.get(1) {
                    Some(Lexed {
                        tok: Tok::Ident(n),
                        column,
                    }) => (n.clone(), *column),
                    other => {
                        return Err(syntax(
                            line_no,
                            other.map_or(end_column, |t| t.column),
                            "expected generator name",
                        ))
                    }
                };
                match toks.get(2) {
                    Some(Lexed { tok: Tok::Equals, .. }) => {}
                    other => {
                        return Err(syntax(line_no, other.map_or(end_column, |t| t.column), "expected `=`"));
                    }
                }
                if toks.len() == 3 {
                    return Err(syntax(line_no, end_column, "expected polynomial"));
                }
                let rest: Vec<Lexed> = toks.into_iter().skip(3).collect();
                diff_lines.push((line_no, name, name_col, rest));
            }
            Some(_) => {
                let col = toks[0].column;
                return Err(syntax(line_no, col, "expected `gen` or `d`"));
            }
            None => {}
        }
    }

    for g in &gens {
        if g.degree < 2 {
            return Err(ModelError::SimpleConnectivity {
                generator: g.name.clone(),
                degree: g.degree,
            });
        }
    }
    let algebra = GradedAlgebra::new(gens)?;
    let mut values: Vec<Option<Polynomial>> = vec![None; algebra.len()];
    for (line_no, name, name_col, toks) in diff_lines {
        let idx = algebra
            .index_of(&name)
            .ok_or_else(|| syntax(line_no, name_col, format!("unknown generator `{name}`")))?;
        if values[idx].is_some() {
            return Err(syntax(line_no, name_col, format!("differential of `{name}` given twice")));
        }
        let mut parser = PolyParser {
            toks: &toks,
            pos: 0,
            line: line_no,
            end_column: toks.last().map_or(1, |t| t.column + 1),
            algebra: &algebra,
        };
        values[idx] = Some(parser.poly()?);
    }
    let values: Vec<Polynomial> = values.into_iter().map(|v| v.unwrap_or_else(|| algebra.zero())).collect();
    let differential = Derivation::new(&algebra, 1, values)?;
    MinimalModel::new(algebra, differential)
}
