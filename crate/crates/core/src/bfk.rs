//! Nontrivial rational homotopy in spaces of nonnegatively curved metrics on
//! `TS^{2d} × S^m`.
//!
//! Two pieces: a checker for the kernel bound on
//! `π_i(ι_{E×S^m}): π_i 𝒫(∂E) -> π_i Diff(E × S^m)` and its hypotheses, and
//! an enumerator for the degrees `(i, m)` where the disk bundle `E` of
//! `TS^{2d}` satisfies them. A nonzero kernel in degree `i` gives
//! `π_{i+1} ℛ_{K≥0}(TS^{2d} × S^m) ⊗ Q ≠ 0`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::Rational;
use crate::models::MinimalModel;
use crate::pseudoisotopy::{pseudoisotopy_table, PseudoisotopyError, PseudoisotopyTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BfkError {
    #[error("d = {0} is not allowed; the sphere bundle family needs d >= 2")]
    DegreeTooSmall(i64),
    #[error("InvariantViolation: dim_inv_plus + dim_inv_minus = {sum} but dim_P = {dim_p}")]
    InvariantViolation { dim_p: u64, sum: u64 },
    #[error(transparent)]
    Pseudoisotopy(#[from] PseudoisotopyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A hypothesis of the kernel bound or of the sphere-bundle condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `m >= 0`
    NonNegativeM,
    /// `i >= 1`
    PositiveIndex,
    /// `dim ∂E + m >= max{3i+7, 2i+9}`
    DimensionRange,
    /// `dim π_i 𝒫(∂E) / 2 <= dim Inv^± π_i 𝒫(∂E)`, sign by parity of `dim ∂E + m`
    EigenInequality,
    /// `i = 8d-5 + (4d-2)j` for odd `j >= 1`
    IndexForm,
    /// `3i + 9 < 4d + m`
    StableRange,
    /// `m + i >= 4d`
    LowerRange,
    /// `m ≡ 3` or `m ≡ 2d (mod 4)`
    Congruence,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::NonNegativeM => "m >= 0",
            Clause::PositiveIndex => "i >= 1",
            Clause::DimensionRange => "dim dE + m >= max{3i+7, 2i+9}",
            Clause::EigenInequality => "dim P/2 <= dim Inv^(+/-) P",
            Clause::IndexForm => "i = 8d-5+(4d-2)j with j odd, j >= 1",
            Clause::StableRange => "3i+9 < 4d+m",
            Clause::LowerRange => "m+i >= 4d",
            Clause::Congruence => "m = 3 or 2d mod 4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotApplicable {
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NotApplicable({}): {}", self.clause, self.detail)
    }
}

/// Hypothesis data for the kernel bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BfkInputs {
    pub i: i64,
    pub m: i64,
    /// `dim ∂E`
    pub dim_boundary: i64,
    /// `dim π_i 𝒫(∂E) ⊗ Q`
    pub dim_p: u64,
    pub dim_inv_plus: u64,
    pub dim_inv_minus: u64,
    /// `dim π_i Diff(E × D^m, ∂) ⊗ Q`
    pub dim_diff: u64,
}

/// Outcome of the bound: either every hypothesis holds and
/// `dim ker π_i(ι) >= bound`, or the first failing clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applicability {
    Applicable { bound: Rational },
    NotApplicable(NotApplicable),
}

impl Applicability {
    /// The bound is positive, so the kernel is nonzero.
    pub fn nontrivial_kernel(&self) -> bool {
        matches!(self, Applicability::Applicable { bound } if *bound > Rational::from_integer(BigInt::from(0)))
    }
}

fn fail(clause: Clause, detail: String) -> Applicability {
    Applicability::NotApplicable(NotApplicable { clause, detail })
}

/// Checks `dim_P/2 <= Inv⁺` (even `total`) or `dim_P/2 <= Inv⁻` (odd `total`).
/// Compared as `dim_P <= 2 * available` to stay in integers.
fn eigen_inequality(dim_p: u64, plus: u64, minus: u64, parity: Parity) -> Result<(), String> {
    let (available, sign) = match parity {
        Parity::Even => (plus, '+'),
        Parity::Odd => (minus, '-'),
    };
    if dim_p <= 2 * available {
        Ok(())
    } else {
        Err(format!("dim P/2 = {dim_p}/2 exceeds dim Inv{sign} = {available}"))
    }
}

/// Lower bound `dim_P/2 - dim_diff` on `dim ker π_i(ι_{E×S^m})`, kept as an
/// exact rational.
pub fn kernel_bound(inp: &BfkInputs) -> Result<Applicability, BfkError> {
    let sum = inp.dim_inv_plus + inp.dim_inv_minus;
    if sum != inp.dim_p {
        return Err(BfkError::InvariantViolation { dim_p: inp.dim_p, sum });
    }
    if inp.m < 0 {
        return Ok(fail(Clause::NonNegativeM, format!("m = {}", inp.m)));
    }
    if inp.i < 1 {
        return Ok(fail(Clause::PositiveIndex, format!("i = {}", inp.i)));
    }
    let total = inp.dim_boundary + inp.m;
    let required = (3 * inp.i + 7).max(2 * inp.i + 9);
    if total < required {
        return Ok(fail(
            Clause::DimensionRange,
            format!("dim dE + m = {total} < {required}"),
        ));
    }
    if let Err(detail) = eigen_inequality(inp.dim_p, inp.dim_inv_plus, inp.dim_inv_minus, Parity::of(total)) {
        return Ok(fail(Clause::EigenInequality, detail));
    }
    let bound = Rational::new(BigInt::from(inp.dim_p), BigInt::from(2)) - Rational::from_integer(BigInt::from(inp.dim_diff));
    Ok(Applicability::Applicable { bound })
}

/// `i = 8d-5 + (4d-2)j` for some odd `j >= 1`; returns `j`.
pub fn index_parameter(d: i64, i: i64) -> Option<i64> {
    let rest = i - (8 * d - 5);
    let step = 4 * d - 2;
    (rest > 0 && rest % step == 0)
        .then_some(rest / step)
        .filter(|j| j % 2 == 1)
}

/// Eigenspace dimensions of `π_i 𝒫(∂E) ⊗ Q` at one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenData {
    pub dim_p: u64,
    pub inv_plus: u64,
    pub inv_minus: u64,
}

impl EigenData {
    pub fn from_table(table: &PseudoisotopyTable, i: usize) -> Result<EigenData, PseudoisotopyError> {
        let row = table.row(i).ok_or(PseudoisotopyError::OutOfRange {
            i,
            max: table.reliable_max_i,
        })?;
        Ok(EigenData {
            dim_p: row.total_p() as u64,
            inv_plus: row.inv_plus_p as u64,
            inv_minus: row.inv_minus_p as u64,
        })
    }
}

/// The full sufficient condition for `ker π_i(ι_{E×S^m}) ≠ 0` with `E` the
/// disk bundle of `TS^{2d}` (so `dim ∂E = 4d - 1`). Clauses are checked in
/// the order index form, stable range, lower range, congruence, eigenspace
/// inequality; the first failure is reported.
pub fn sufficient_condition(d: i64, i: i64, m: i64, eigen: EigenData) -> Result<Option<NotApplicable>, BfkError> {
    if d < 2 {
        return Err(BfkError::DegreeTooSmall(d));
    }
    let failed = |clause, detail| Ok(Some(NotApplicable { clause, detail }));
    if index_parameter(d, i).is_none() {
        return failed(Clause::IndexForm, format!("i = {i} is not 8d-5+(4d-2)j for odd j"));
    }
    if 3 * i + 9 >= 4 * d + m {
        return failed(Clause::StableRange, format!("3i+9 = {} >= 4d+m = {}", 3 * i + 9, 4 * d + m));
    }
    if m + i < 4 * d {
        return failed(Clause::LowerRange, format!("m+i = {} < 4d = {}", m + i, 4 * d));
    }
    let r = m.rem_euclid(4);
    if r != 3 && r != (2 * d).rem_euclid(4) {
        return failed(Clause::Congruence, format!("m = {r} mod 4"));
    }
    let total = 4 * d - 1 + m;
    if let Err(detail) = eigen_inequality(eigen.dim_p, eigen.inv_plus, eigen.inv_minus, Parity::of(total)) {
        return failed(Clause::EigenInequality, detail);
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BfkPair {
    pub j: i64,
    pub i: i64,
    /// Smallest `m > 20d-6 + (12d-6)j` with `m ≡ 2d (mod 4)`.
    pub m_min: i64,
    /// Degree of the nonvanishing `π_* ℛ_{K≥0}` group, `i + 1`.
    pub conclusion_degree: i64,
}

/// Lower bound that `m` must exceed for the pair with parameter `j`.
pub fn m_threshold(d: i64, j: i64) -> i64 {
    20 * d - 6 + (12 * d - 6) * j
}

/// One pair per odd `j` in `1..=j_max`.
pub fn enumerate_pairs(d: i64, j_max: i64) -> Result<Vec<BfkPair>, BfkError> {
    if d < 2 {
        return Err(BfkError::DegreeTooSmall(d));
    }
    let residue = (2 * d).rem_euclid(4);
    Ok((1..=j_max)
        .step_by(2)
        .map(|j| {
            let i = 8 * d - 5 + (4 * d - 2) * j;
            let mut m = m_threshold(d, j) + 1;
            while m.rem_euclid(4) != residue {
                m += 1;
            }
            BfkPair {
                j,
                i,
                m_min: m,
                conclusion_degree: i + 1,
            }
        })
        .collect())
}

/// Reads the eigenspace inequality at degree `i` off a pseudoisotopy table.
pub fn eigen_condition(table: &PseudoisotopyTable, i: usize, parity: Parity) -> Result<bool, BfkError> {
    let e = EigenData::from_table(table, i)?;
    Ok(eigen_inequality(e.dim_p, e.inv_plus, e.inv_minus, parity).is_ok())
}

/// Same as [`eigen_condition`], computing the table from a minimal model of `∂E`.
pub fn eigen_condition_from_model(model: &MinimalModel, i: usize, parity: Parity) -> Result<bool, BfkError> {
    let table = pseudoisotopy_table(model, i as u32 + 3)?;
    eigen_condition(&table, i, parity)
}
