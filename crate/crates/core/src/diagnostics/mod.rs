//! Exact oracles for enumerable instances.
//!
//! Everything here enumerates the support, so it is meant for desk-scale
//! instances: the normalized distribution, the explicit kernel of the chain,
//! its spectral gap, the exact total-variation curve from a start state,
//! pairwise negative correlation, and an independent spectral k-DPP sampler
//! to cross-check the chain against.

mod exact;
mod mixing;
mod negcorr;
mod report;
mod spectral;
mod transition;

pub use exact::{enumerate, ExactDistribution};
pub use mixing::{
    c_mu_over_support, compute_c_mu, exchange_graph_connected, poincare_constant, total_variation, tv_at_times,
    tv_curve, TvCurve, MAX_DENSE_STATES, SINGLETON_C_MU,
};
pub use negcorr::{check_negative_correlation, marginals, NegCorrCheck, PairSlack, NEGCORR_SLACK};
pub use report::{diagnose, DiagnosticsReport};
pub use spectral::{spectral_kdpp_sample, SpectralKDppSampler};
pub use transition::{build_transition_matrix, MatrixInvariants, TransitionMatrix};
