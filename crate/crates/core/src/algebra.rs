//! Free graded-commutative algebras over Q.
//!
//! An algebra is fixed by an ordered list of generators. Even-degree
//! generators are polynomial, odd-degree ones exterior. Monomials are stored
//! as exponent vectors in generator order, and that order is the canonical
//! order of factors: every product is sorted back into it, picking up a sign
//! for each transposition of two odd factors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("generator `{name}` has degree 0; generators must have positive degree")]
    ZeroDegree { name: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("expected {expected} generator values, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("value on `{generator}` has a term of degree {found}, expected {expected}")]
    DegreeMismatch {
        generator: String,
        expected: i64,
        found: i64,
    },
    #[error("differential must raise degree by 1, this one shifts by {0}")]
    WrongDegreeShift(i32),
    #[error("differential does not square to zero: D(D({generator})) = {residual}")]
    NotSquareZero { generator: String, residual: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Exponent vector, one entry per generator of the owning algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn generator(len: usize, index: usize) -> Self {
        let mut e = vec![0; len];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// A finite Q-linear combination of monomials with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    len: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(len: usize) -> Self {
        Polynomial {
            len,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(len: usize) -> Self {
        Self::term(Monomial::unit(len), Rational::one())
    }

    pub fn term(m: Monomial, coeff: Rational) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, coeff);
        p
    }

    pub fn generator(len: usize, index: usize) -> Self {
        Self::term(Monomial::generator(len, index), Rational::one())
    }

    /// Number of generators of the algebra this polynomial lives in.
    pub fn arity(&self) -> usize {
        self.len
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Rational) {
        debug_assert_eq!(m.0.len(), self.len);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (m, c) in other.terms() {
            p.add_term(m.clone(), -c);
        }
        p
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.len);
        }
        Polynomial {
            len: self.len,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Moves the polynomial into a larger algebra: generator `i` becomes
    /// generator `positions[i]` of an algebra with `len` generators.
    pub fn reindex(&self, positions: &[usize], len: usize) -> Polynomial {
        assert_eq!(positions.len(), self.len);
        let mut p = Polynomial::zero(len);
        for (m, c) in self.terms() {
            let mut e = vec![0; len];
            for (i, &x) in m.0.iter().enumerate() {
                e[positions[i]] = x;
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Smallest word length over all terms, `None` for the zero polynomial.
    pub fn min_word_length(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::word_length).min()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    generators: Vec<Generator>,
}

impl GradedAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree { name: g.name.clone() });
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(GradedAlgebra { generators })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, index: usize) -> u32 {
        self.generators[index].degree
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(&e, g)| e * g.degree)
            .sum()
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.len())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.len())
    }

    pub fn generator(&self, index: usize) -> Polynomial {
        Polynomial::generator(self.len(), index)
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        Polynomial::term(Monomial::unit(self.len()), c)
    }

    /// The single degree shared by every term, `None` if the polynomial is
    /// zero or mixes degrees.
    pub fn homogeneous_degree(&self, p: &Polynomial) -> Option<u32> {
        let mut degrees = p.terms().map(|(m, _)| self.monomial_degree(m));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// All monomials of total degree `n`, ascending lexicographically in
    /// their exponent vectors. Degree 0 yields the unit alone.
    pub fn monomial_basis(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.len()];
        self.enumerate(0, n, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, idx: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == self.len() {
            if remaining == 0 {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let g = &self.generators[idx];
        let max_e = if g.is_odd() { 1 } else { remaining / g.degree };
        for e in 0..=max_e.min(remaining / g.degree) {
            exps[idx] = e;
            self.enumerate(idx + 1, remaining - e * g.degree, exps, out);
        }
        exps[idx] = 0;
    }

    /// Product of two monomials in canonical order, with its Koszul sign.
    /// `None` when an odd generator would appear twice.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut negative = false;
        // Each odd factor of `b` must move left past the odd factors of `a`
        // that come later in generator order.
        let mut odd_in_a_after = 0u32;
        for i in (0..self.len()).rev() {
            let odd = self.generators[i].is_odd();
            if odd && b.0[i] == 1 {
                if a.0[i] == 1 {
                    return None;
                }
                if odd_in_a_after % 2 == 1 {
                    negative = !negative;
                }
            }
            if odd && a.0[i] == 1 {
                odd_in_a_after += 1;
            }
        }
        let e = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        Some((Monomial(e), negative))
    }

    pub fn multiply(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut out = self.zero();
        for (ma, ca) in p.terms() {
            for (mb, cb) in q.terms() {
                if let Some((m, negative)) = self.multiply_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        out
    }

    pub fn power(&self, p: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, p);
        }
        acc
    }

    /// Human-readable form such as `a^2 - 2*a*b_bar + 1/2*c`.
    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = &self.generators[i].name;
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

fn parity_sign(odd: bool) -> Rational {
    if odd {
        rat(-1)
    } else {
        Rational::one()
    }
}

/// A graded derivation of fixed degree, determined by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    shift: i32,
    values: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(algebra: &GradedAlgebra, shift: i32, values: Vec<Polynomial>) -> Result<Self, AlgebraError> {
        if values.len() != algebra.len() {
            return Err(AlgebraError::WrongArity {
                expected: algebra.len(),
                found: values.len(),
            });
        }
        for (g, v) in algebra.generators().iter().zip(&values) {
            let expected = g.degree as i64 + shift as i64;
            for (m, _) in v.terms() {
                let found = algebra.monomial_degree(m) as i64;
                if found != expected {
                    return Err(AlgebraError::DegreeMismatch {
                        generator: g.name.clone(),
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(Derivation { shift, values })
    }

    pub fn zero(algebra: &GradedAlgebra, shift: i32) -> Self {
        Derivation {
            shift,
            values: vec![algebra.zero(); algebra.len()],
        }
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn value(&self, index: usize) -> &Polynomial {
        &self.values[index]
    }

    pub fn values(&self) -> &[Polynomial] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Polynomial::is_zero)
    }

    fn shift_is_odd(&self) -> bool {
        self.shift.rem_euclid(2) == 1
    }

    /// Leibniz expansion on one monomial `g_1^{e_1} ... g_k^{e_k}`:
    /// the derivation hits one factor at a time and passes the factors to its
    /// left with sign `(-1)^{shift * deg(prefix)}`.
    pub fn apply_monomial(&self, algebra: &GradedAlgebra, m: &Monomial) -> Polynomial {
        let len = algebra.len();
        let mut out = algebra.zero();
        let mut prefix = vec![0u32; len];
        let mut prefix_degree = 0u32;
        for i in 0..len {
            let e = m.0[i];
            if e > 0 && !self.values[i].is_zero() {
                let mut rest = vec![0u32; len];
                rest[i] = e - 1;
                rest[i + 1..].copy_from_slice(&m.0[i + 1..]);
                let sign = parity_sign(self.shift_is_odd() && prefix_degree % 2 == 1);
                let coeff = sign * rat(e as i64);
                let left = Polynomial::term(Monomial(prefix.clone()), coeff);
                let right = Polynomial::term(Monomial(rest), Rational::one());
                let t = algebra.multiply(&algebra.multiply(&left, &self.values[i]), &right);
                out.add_assign(&t);
            }
            prefix[i] = e;
            prefix_degree += e * algebra.degree_of(i);
        }
        out
    }

    pub fn apply(&self, algebra: &GradedAlgebra, p: &Polynomial) -> Polynomial {
        let mut out = algebra.zero();
        for (m, c) in p.terms() {
            out.add_assign(&self.apply_monomial(algebra, m).scale(c));
        }
        out
    }
}

pub fn apply_derivation(algebra: &GradedAlgebra, d: &Derivation, p: &Polynomial) -> Polynomial {
    d.apply(algebra, p)
}

/// Verifies `D(D(g)) = 0` for every generator with `deg(g) + 2 <= max_degree`.
/// Because `D^2 = [D, D] / 2` is itself a derivation, vanishing on generators
/// is equivalent to vanishing on the whole algebra.
pub fn check_differential(algebra: &GradedAlgebra, d: &Derivation, max_degree: u32) -> Result<(), AlgebraError> {
    if d.shift != 1 {
        return Err(AlgebraError::WrongDegreeShift(d.shift));
    }
    for (i, g) in algebra.generators().iter().enumerate() {
        if g.degree + 2 > max_degree {
            continue;
        }
        let dd = d.apply(algebra, d.value(i));
        if !dd.is_zero() {
            return Err(AlgebraError::NotSquareZero {
                generator: g.name.clone(),
                residual: algebra.format(&dd),
            });
        }
    }
    Ok(())
}

/// A degree-preserving algebra endomorphism given by its generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    values: Vec<Polynomial>,
}

impl AlgebraMap {
    pub fn new(algebra: &GradedAlgebra, values: Vec<Polynomial>) -> Result<Self, AlgebraError> {
        let d = Derivation::new(algebra, 0, values)?;
        Ok(AlgebraMap { values: d.values })
    }

    pub fn identity(algebra: &GradedAlgebra) -> Self {
        AlgebraMap {
            values: (0..algebra.len()).map(|i| algebra.generator(i)).collect(),
        }
    }

    /// `g_i -> sign_i * g_i`, with `true` meaning a sign flip.
    pub fn diagonal_signs(algebra: &GradedAlgebra, flips: &[bool]) -> Self {
        assert_eq!(flips.len(), algebra.len());
        AlgebraMap {
            values: flips
                .iter()
                .enumerate()
                .map(|(i, &f)| algebra.generator(i).scale(&parity_sign(f)))
                .collect(),
        }
    }

    pub fn value(&self, index: usize) -> &Polynomial {
        &self.values[index]
    }

    pub fn apply_monomial(&self, algebra: &GradedAlgebra, m: &Monomial) -> Polynomial {
        let mut acc = algebra.one();
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                acc = algebra.multiply(&acc, &algebra.power(&self.values[i], e));
            }
        }
        acc
    }

    pub fn apply(&self, algebra: &GradedAlgebra, p: &Polynomial) -> Polynomial {
        let mut out = algebra.zero();
        for (m, c) in p.terms() {
            out.add_assign(&self.apply_monomial(algebra, m).scale(c));
        }
        out
    }
}

pub fn apply_map(algebra: &GradedAlgebra, f: &AlgebraMap, p: &Polynomial) -> Polynomial {
    f.apply(algebra, p)
}

/// Parses a rational literal `int` or `int/posint`.
pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = match d {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if !d.is_positive() {
        return None;
    }
    Some(Rational::new(n, d))
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.degree)
    }
}
