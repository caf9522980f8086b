//! Degreewise cohomology of a [`DgaModel`] and the eigenspace split of the
//! induced involution.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Monomial;
use crate::linalg::{involution_eigen_dims, solve_in_span, Echelon, LinalgError, QMatrix, Rational};
use crate::models::DgaModel;
use crate::series::TruncatedSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("model has no involution")]
    NoInvolution,
    #[error("degree {degree} is outside the computed range (cap {cap})")]
    DegreeOutOfRange { degree: u32, cap: u32 },
    #[error("InternalInconsistency: image of a cocycle in degree {degree} does not reduce to a cohomology class")]
    InternalInconsistency { degree: u32 },
    #[error("degree cap {0} is too small")]
    CapTooSmall(u32),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Monomial bases of the cochain groups `C^0, ..., C^cap`.
pub struct CochainComplex<'a> {
    model: &'a DgaModel,
    cap: u32,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
}

impl<'a> CochainComplex<'a> {
    pub fn new(model: &'a DgaModel, cap: u32) -> Self {
        let bases: Vec<Vec<Monomial>> = (0..=cap).map(|n| model.algebra().monomial_basis(n)).collect();
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        CochainComplex {
            model,
            cap,
            bases,
            index,
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn basis(&self, n: u32) -> &[Monomial] {
        &self.bases[n as usize]
    }

    pub fn dim(&self, n: u32) -> usize {
        self.bases[n as usize].len()
    }

    fn check_degree(&self, n: u32) -> Result<(), CohomologyError> {
        if n + 1 > self.cap {
            Err(CohomologyError::DegreeOutOfRange {
                degree: n,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// Matrix of `D: C^n -> C^{n+1}`; column `j` holds the coordinates of
    /// `D(basis_n[j])`.
    pub fn differential_matrix(&self, n: u32) -> Result<QMatrix, CohomologyError> {
        self.check_degree(n)?;
        let a = self.model.algebra();
        let d = self.model.differential();
        let source = self.basis(n);
        let target_index = &self.index[n as usize + 1];
        let mut m = QMatrix::zeros(self.dim(n + 1), source.len());
        for (j, mono) in source.iter().enumerate() {
            for (t, c) in d.apply_monomial(a, mono).terms() {
                let i = target_index[t];
                m.set(i, j, c.clone());
            }
        }
        Ok(m)
    }

    /// `D_{n-1}`, with `D_{-1} = 0`.
    fn incoming(&self, n: u32) -> Result<QMatrix, CohomologyError> {
        if n == 0 {
            Ok(QMatrix::zeros(self.dim(0), 0))
        } else {
            self.differential_matrix(n - 1)
        }
    }

    /// Matrix of the involution on `C^n`.
    pub fn involution_matrix(&self, n: u32) -> Result<QMatrix, CohomologyError> {
        let t = self.model.involution().ok_or(CohomologyError::NoInvolution)?;
        let a = self.model.algebra();
        let basis = self.basis(n);
        let idx = &self.index[n as usize];
        let mut m = QMatrix::zeros(basis.len(), basis.len());
        for (j, mono) in basis.iter().enumerate() {
            for (t, c) in t.apply_monomial(a, mono).terms() {
                m.set(idx[t], j, c.clone());
            }
        }
        Ok(m)
    }

    /// Cocycle representatives of a basis of `H^n`: the first kernel vectors,
    /// in kernel-basis order, that are independent modulo the coboundaries.
    /// Returns the coboundary matrix alongside.
    fn representatives(&self, n: u32) -> Result<(QMatrix, Vec<Vec<Rational>>), CohomologyError> {
        let incoming = self.incoming(n)?;
        let kernel = self.differential_matrix(n)?.kernel_basis();
        let mut columns = incoming.columns();
        let boundary_cols = columns.len();
        columns.extend(kernel.iter().cloned());
        let stacked = QMatrix::from_columns(self.dim(n), &columns)?;
        let ech = Echelon::of(&stacked);
        let reps = ech
            .pivots
            .iter()
            .filter(|&&p| p >= boundary_cols)
            .map(|&p| kernel[p - boundary_cols].clone())
            .collect();
        Ok((incoming, reps))
    }

    pub fn betti(&self, n: u32) -> Result<usize, CohomologyError> {
        self.check_degree(n)?;
        let kernel_dim = self.differential_matrix(n)?.kernel_basis().len();
        let boundary_rank = self.incoming(n)?.rank();
        Ok(kernel_dim - boundary_rank)
    }

    /// Matrix of the induced involution on `H^n` with respect to the
    /// representatives chosen by [`Self::representatives`].
    pub fn induced_involution(&self, n: u32) -> Result<QMatrix, CohomologyError> {
        self.check_degree(n)?;
        let t = self.involution_matrix(n)?;
        let (incoming, reps) = self.representatives(n)?;
        let b = reps.len();
        let mut span_cols = incoming.columns();
        let offset = span_cols.len();
        span_cols.extend(reps.iter().cloned());
        let span = QMatrix::from_columns(self.dim(n), &span_cols)?;
        let images: Vec<Vec<Rational>> = reps.iter().map(|r| t.mul_vec(r)).collect::<Result<_, _>>()?;
        let solved = solve_in_span(&span, &images)?;
        let mut out = QMatrix::zeros(b, b);
        for (j, sol) in solved.into_iter().enumerate() {
            let coeffs = sol.ok_or(CohomologyError::InternalInconsistency { degree: n })?;
            for i in 0..b {
                out.set(i, j, coeffs[offset + i].clone());
            }
        }
        Ok(out)
    }

    pub fn slice(&self, n: u32) -> Result<DegreeSlice, CohomologyError> {
        self.check_degree(n)?;
        let cochain_dim = self.dim(n);
        if self.model.involution().is_some() {
            let t = self.induced_involution(n)?;
            let (plus, minus) =
                involution_eigen_dims(&t).map_err(|_| CohomologyError::InternalInconsistency { degree: n })?;
            Ok(DegreeSlice {
                degree: n,
                cochain_dim,
                betti: t.rows(),
                inv_plus: Some(plus),
                inv_minus: Some(minus),
            })
        } else {
            Ok(DegreeSlice {
                degree: n,
                cochain_dim,
                betti: self.betti(n)?,
                inv_plus: None,
                inv_minus: None,
            })
        }
    }
}

pub fn cochain_matrix(model: &DgaModel, n: u32) -> Result<QMatrix, CohomologyError> {
    CochainComplex::new(model, n + 1).differential_matrix(n)
}

/// `dim H^n` of the model, computed as `dim ker D_n - rank D_{n-1}`.
pub fn betti(model: &DgaModel, n: u32) -> Result<usize, CohomologyError> {
    CochainComplex::new(model, n + 1).betti(n)
}

pub fn induced_involution(model: &DgaModel, n: u32) -> Result<QMatrix, CohomologyError> {
    if model.involution().is_none() {
        return Err(CohomologyError::NoInvolution);
    }
    CochainComplex::new(model, n + 1).induced_involution(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSlice {
    pub degree: u32,
    pub cochain_dim: usize,
    pub betti: usize,
    pub inv_plus: Option<usize>,
    pub inv_minus: Option<usize>,
}

/// Cohomology dimensions (and eigenspace split when the model carries an
/// involution) for degrees `0..cap`. Degree `n` needs `C^{n+1}`, so `cap`
/// is the highest cochain degree enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenTable {
    pub cap: u32,
    pub slices: Vec<DegreeSlice>,
}

pub fn eigen_table(model: &DgaModel, cap: u32) -> Result<EigenTable, CohomologyError> {
    if cap < 2 {
        return Err(CohomologyError::CapTooSmall(cap));
    }
    let complex = CochainComplex::new(model, cap);
    let slices = (0..cap)
        .into_par_iter()
        .map(|n| complex.slice(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EigenTable { cap, slices })
}

impl EigenTable {
    pub fn has_involution(&self) -> bool {
        self.slices.first().is_some_and(|s| s.inv_plus.is_some())
    }

    pub fn slice(&self, n: u32) -> Option<&DegreeSlice> {
        self.slices.get(n as usize)
    }

    pub fn betti_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.slices.iter().map(|s| s.betti as i64).collect())
    }

    pub fn cochain_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.slices.iter().map(|s| s.cochain_dim as i64).collect())
    }

    pub fn inv_plus_series(&self) -> Option<TruncatedSeries> {
        self.slices
            .iter()
            .map(|s| s.inv_plus.map(|x| x as i64))
            .collect::<Option<Vec<_>>>()
            .map(TruncatedSeries::new)
    }

    pub fn inv_minus_series(&self) -> Option<TruncatedSeries> {
        self.slices
            .iter()
            .map(|s| s.inv_minus.map(|x| x as i64))
            .collect::<Option<Vec<_>>>()
            .map(TruncatedSeries::new)
    }
}
