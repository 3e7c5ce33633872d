//! Hilbert series and Laurent coefficients of symplectic quotients by the
//! 2-torus.
//!
//! The pipeline runs from a [`WeightMatrix`] through the sectioning operators
//! of [`series`] to a canonical [`HilbertSeries`], whose expansion at `t = 1`
//! is cross-checked against the closed-form coefficients of [`gammas`] and the
//! brute-force counts of [`oracle`].

pub mod congruence;
pub mod gammas;
pub mod hilbert;
pub mod oracle;
pub mod series;
pub mod univariate;
pub mod weights;

pub use congruence::{count_congruence_solutions, count_root_pairs, smith_normal_form, IntMatrix, SmithDecomposition};
pub use gammas::{gamma0, gamma2, gamma_off, GammaOptions, GammaReport, KappaVariant};
pub use hilbert::{analyze, hilbert_off, hilbert_on, HilbertError, HilbertReport};
pub use oracle::{invariant_dimension, oracle_series, perturbation_gamma, OracleSeries};
pub use series::{laurent_at_one, HilbertSeries, LaurentExpansion};
pub use weights::{Classification, GenericityClass, WeightMatrix};
