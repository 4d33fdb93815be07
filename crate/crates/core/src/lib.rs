//! Exact infinite-matrix machinery for formal power series groupoids.
//!
//! - [`series`]: truncated groupoid elements, composition, inversion, powers
//! - [`carleman`]: the embedding `g ↦ M_g`, translation matrices, latent products
//! - [`matrixcore`]: PLU, σ-determinants, pivot search, γ-invertibility probes
//! - [`convergence`]: entrywise probes of latent (undone) products
//! - [`scenarios`]: the circle adjoint action and the deformed one-parameter group
//! - [`localgroup`]: the covering of the punctured plane as a local Lie group

pub mod carleman;
pub mod convergence;
pub mod error;
pub mod handle;
pub mod localgroup;
pub mod matrix;
pub mod matrixcore;
pub mod poly;
pub mod scalar;
pub mod scenarios;
pub mod series;

pub use error::{Error, ParseError, Result};
pub use scalar::{Domain, ExactField, Field, Scalar, C64, Q};
pub use carleman::{carleman_embed, lul_decompose, translation_matrix, truncated_multiply, Junction, LatentProduct};
pub use handle::{InfiniteMatrixHandle, Provenance, Structure};
pub use matrix::{Exactness, TruncatedMatrix};
pub use series::{builtin_series, compose, invert, make_series, pointwise_power, Builtin, GroupoidElement, InfiniteSeries};
pub use matrixcore::{
    find_pivot_rows, gamma_probe, invert_triangular, kernel_basis, plu_decompose, sigma_determinants, BlockInjection,
    Certificate, FiniteSupportVector, GammaVerdict, PermutationSpec, Plu, Side,
};
pub use convergence::{entry_series_probe, latent_product_report, Classification, EntryProbeReport, JunctionReport, ProbeParams};
pub use scenarios::{adjoint_family, adjoint_handle, adjoint_mu_check, circle_cover_extend, circle_generator_matrix, AdjointFamily, CircleReport, MuCheck};
pub use localgroup::{associativity_demo, lift_segment, local_inverse, local_product, sheet_index, AssociativityReport, CoveredPoint};
