//! Brute-force oracles: exhaustive spectra, union-size searches, and the
//! verification suites built on them.

mod enumerate;
mod suite;
mod unions;

use thiserror::Error;

use crate::grm::GrmError;
use crate::polyring::PolyError;

pub use enumerate::{
    exhaustive_spectrum, exhaustive_spectrum_in, monomial_basis, SpectrumOptions, SpectrumResult, WeightCount,
    DEFAULT_CODEWORD_BUDGET, SPECTRUM_CSV_HEADER,
};
pub use suite::{
    run_verification_suite, Claim, Suite, SuiteOptions, SuiteReport, ARRANGEMENT_QS, CONSTRUCTOR_QS, DESK_CODES,
};
pub use unions::{
    all_planes, classify_planes, line_union_oracle, plane_union_oracle, LineSearchOptions, Plane3, PlaneConfig,
    SizeCount, UnionSearchResult, DEFAULT_SUBSET_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("R_{q}({r},{m}) has {monomials} monomials; q^{monomials} codewords exceeds the budget of {budget}")]
    BudgetExceeded { q: u32, m: u32, r: u32, monomials: usize, budget: u64 },
    #[error("{subsets} subsets exceeds the budget of {budget}")]
    SubsetBudgetExceeded { subsets: u64, budget: u64 },
    #[error("field of order {0} is not supported here")]
    UnsupportedField(u32),
    #[error("unsupported subset size {0}")]
    InvalidCount(usize),
    #[error(transparent)]
    Grm(#[from] GrmError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
