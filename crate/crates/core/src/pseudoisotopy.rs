//! Dimensions of the involution eigenspaces of the rational homotopy of the
//! stable pseudoisotopy space `𝒫(M)` and of `A(M)`.
//!
//! For simply-connected compact `M` and `i >= 0`:
//!
//! ```text
//! dim Inv⁺ π_i 𝒫(M) = dim Inv⁻ π_{i+2} A(M) = δ_i + dim Inv⁺ H^{S¹}_{i+1}(LM, *)
//! dim Inv⁻ π_i 𝒫(M) = dim Inv⁺ π_{i+2} A(M) - dim H_{i+2}(M)
//!                   = dim Inv⁻ H^{S¹}_{i+1}(LM, *) - dim H_{i+2}(M)
//! ```
//!
//! with `δ_i = 1` for `i ≡ 3 (mod 4)`. The relative groups come from
//! subtracting the point's eigenspaces from the absolute ones, and homology
//! dimensions are read off the cohomology of the models.

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{eigen_table, CohomologyError};
use crate::models::{borel_model, point_borel_model, MinimalModel, ModelError};
use crate::series::TruncatedSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PseudoisotopyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("degree cap {0} is too small; need at least 3")]
    CapTooSmall(u32),
    #[error("NegativeDimension: {quantity} at i = {i} would be {value}; the model does not satisfy the hypotheses")]
    NegativeDimension { quantity: &'static str, i: usize, value: i64 },
    #[error("i = {i} is outside the reliable range (max {max:?})")]
    OutOfRange { i: usize, max: Option<usize> },
}

pub fn delta(i: usize) -> u32 {
    u32::from(i % 4 == 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PseudoisotopyRow {
    pub i: usize,
    /// `dim Inv⁺ π_i 𝒫(M)`
    pub inv_plus_p: usize,
    /// `dim Inv⁻ π_i 𝒫(M)`
    pub inv_minus_p: usize,
    /// `dim Inv⁺ π_{i+2} A(M)`
    pub inv_plus_a: usize,
    /// `dim Inv⁻ π_{i+2} A(M)`
    pub inv_minus_a: usize,
    /// `dim H_{i+2}(M)`
    pub betti_m: usize,
}

impl PseudoisotopyRow {
    pub fn total_p(&self) -> usize {
        self.inv_plus_p + self.inv_minus_p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoisotopyTable {
    pub rows: Vec<PseudoisotopyRow>,
    /// `None` when no row is reliable.
    pub reliable_max_i: Option<usize>,
    /// `Inv⁺ H^{S¹}_*(LM, *)` over its reliable range.
    pub relative_plus: TruncatedSeries,
    /// `Inv⁻ H^{S¹}_*(LM, *)` over its reliable range.
    pub relative_minus: TruncatedSeries,
    /// Betti numbers of `M`.
    pub betti_m: TruncatedSeries,
}

impl PseudoisotopyTable {
    pub fn row(&self, i: usize) -> Option<&PseudoisotopyRow> {
        self.rows.get(i)
    }

    fn column(&self, f: impl Fn(&PseudoisotopyRow) -> usize) -> TruncatedSeries {
        TruncatedSeries::new(self.rows.iter().map(|r| f(r) as i64).collect())
    }

    pub fn inv_plus_p_series(&self) -> TruncatedSeries {
        self.column(|r| r.inv_plus_p)
    }

    pub fn inv_minus_p_series(&self) -> TruncatedSeries {
        self.column(|r| r.inv_minus_p)
    }

    /// Both dimension identities between the P and A columns, row by row.
    pub fn identities_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.inv_plus_p == r.inv_minus_a && r.inv_plus_a as i64 - r.betti_m as i64 == r.inv_minus_p as i64)
    }
}

/// Builds the table for `0 <= i <= cap - 3`. The Borel and point models are
/// enumerated through cochain degree `cap`.
pub fn pseudoisotopy_table(m: &MinimalModel, cap: u32) -> Result<PseudoisotopyTable, PseudoisotopyError> {
    if cap < 3 {
        return Err(PseudoisotopyError::CapTooSmall(cap));
    }
    let borel = eigen_table(&borel_model(m, cap)?, cap)?;
    let point = eigen_table(&point_borel_model(), cap)?;
    let base = eigen_table(&m.base_dga(), cap)?;

    let absolute_plus = borel.inv_plus_series().expect("Borel model carries an involution");
    let absolute_minus = borel.inv_minus_series().expect("Borel model carries an involution");
    let relative_plus = absolute_plus.sub(&point.inv_plus_series().expect("point involution"));
    let relative_minus = absolute_minus.sub(&point.inv_minus_series().expect("point involution"));
    table_from_series(relative_plus, relative_minus, base.betti_series())
}

/// Applies the dimension formulas to precomputed relative eigenspace series
/// of `H^{S¹}_*(LM, *)` and the Betti series of `M`.
pub fn table_from_series(
    relative_plus: TruncatedSeries,
    relative_minus: TruncatedSeries,
    betti_m: TruncatedSeries,
) -> Result<PseudoisotopyTable, PseudoisotopyError> {
    for (name, s) in [("relative Inv+", &relative_plus), ("relative Inv-", &relative_minus)] {
        if let Some(n) = s.coeffs().iter().position(|&c| c < 0) {
            return Err(PseudoisotopyError::NegativeDimension {
                quantity: name,
                i: n,
                value: s.coeffs()[n],
            });
        }
    }
    // i needs the relative groups in degree i+1 and H_{i+2}(M).
    let plus_at = relative_plus.shift(-1);
    let minus_at = relative_minus.shift(-1);
    let betti_at = betti_m.shift(-2);
    let len = plus_at.len().min(minus_at.len()).min(betti_at.len());

    let mut rows = Vec::with_capacity(len);
    for i in 0..len {
        let plus = plus_at.coeffs()[i];
        let minus = minus_at.coeffs()[i];
        let b = betti_at.coeffs()[i];
        let inv_minus_p = minus - b;
        if inv_minus_p < 0 {
            return Err(PseudoisotopyError::NegativeDimension {
                quantity: "Inv- pi_i P(M)",
                i,
                value: inv_minus_p,
            });
        }
        let inv_plus_p = delta(i) as usize + plus as usize;
        rows.push(PseudoisotopyRow {
            i,
            inv_plus_p,
            inv_minus_p: inv_minus_p as usize,
            inv_plus_a: minus as usize,
            inv_minus_a: inv_plus_p,
            betti_m: b as usize,
        });
    }
    Ok(PseudoisotopyTable {
        reliable_max_i: len.checked_sub(1),
        rows,
        relative_plus,
        relative_minus,
        betti_m,
    })
}

/// `dim π_i 𝒫(M) ⊗ Q`.
pub fn total_p_dimension(table: &PseudoisotopyTable, i: usize) -> Result<usize, PseudoisotopyError> {
    table
        .row(i)
        .map(PseudoisotopyRow::total_p)
        .ok_or(PseudoisotopyError::OutOfRange {
            i,
            max: table.reliable_max_i,
        })
}
