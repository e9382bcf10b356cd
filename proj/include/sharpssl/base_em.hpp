#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sharpssl/base_lda.hpp"
#include "sharpssl/dataset.hpp"
#include "sharpssl/matrix.hpp"
#include "sharpssl/rng.hpp"

namespace sharpssl {

// Which constraint set the M step optimizes over: the full parameter space
// (any means, any SPD covariance), or the symmetric two-component family
// {(-mu, mu, I_d)} used for K = 2 mean estimation.
enum class EmVariant {
    General,
    SymmetricTwoComponent,
};

struct EmParams {
    Matrix means;    // K x d
    Matrix sigma_w;  // d x d, SPD (identity in the symmetric variant)

    std::size_t k() const { return means.rows(); }
    std::size_t d() const { return means.cols(); }
};

// Responsibilities L: rows sum to one; rows of labeled observations are the
// exact indicator of their label.
struct SoftLabels {
    Matrix l;  // n x K
};

enum class EmInitStrategy {
    UniformSphere,  // symmetric variant: mean uniform on a centered sphere
    Hierarchical,   // Ward clustering of the rows
    UserSupplied,
};

struct EmConfig {
    int starts = 1;  // M
    int iters = 100;  // T
    EmVariant variant = EmVariant::General;
    EmInitStrategy init = EmInitStrategy::Hierarchical;
    double sphere_radius = 1.0;
    std::vector<EmParams> user_inits;  // one per start when UserSupplied
    std::optional<double> early_stop_tol;  // off by default: run exactly T iterations
};

// E step: posterior responsibilities under equal class weights and shared
// covariance, computed in log space. Labeled rows become indicators.
SoftLabels e_step(const LabeledDataset& ds, const EmParams& params);

// M step for the chosen constraint set. `previous` supplies the mean kept
// for a class whose responsibility mass is exactly zero.
EmParams m_step(const LabeledDataset& ds, const SoftLabels& labels, EmVariant variant,
                const EmParams& previous);

struct EmFit {
    EmParams params;
    SoftLabels labels;       // responsibilities under the final parameters
    WhitenedBetween q;
    std::vector<double> mu_tot;
};

// One EM chain: T alternations of e_step/m_step from the given
// initialization, then the between-class covariance under the final
// responsibilities and Q = Sigma_w^{-1} Sigma_b.
EmFit run_em_single(const LabeledDataset& ds, const EmParams& init, const EmConfig& config);

// M independent chains with keyed substreams; returns the chain whose Q has
// the smallest median operator-norm distance to the other chains' (ties to
// the smallest chain index). Chains that fail numerically are excluded;
// AllRunsFailed if none survive.
EmFit run_em_multistart_fit(const LabeledDataset& ds, const EmConfig& config, SeededRng& rng,
                            int* chosen = nullptr);
WhitenedBetween run_em_multistart(const LabeledDataset& ds, const EmConfig& config, SeededRng& rng);

// Index of the matrix with the smallest median op-norm distance to the
// others (the multistart agreement rule), exposed for direct testing.
std::size_t best_agreement(const std::vector<Matrix>& qs);

// Ward-clustering initialization: cluster means plus pooled within-cluster
// covariance with eigenvalues floored away from zero so the chain can start
// even when tiny clusters make the pooled covariance singular.
EmParams init_hierarchical(const LabeledDataset& ds, int k);

// Symmetric-variant initialization: mean uniform on the radius sphere,
// covariance fixed at the identity.
EmParams init_uniform_sphere(SeededRng& rng, std::size_t d, double radius);

// Closed-form iterate of the symmetric two-component EM: one step of
// mu <- n^{-1} { sum_labeled (-1)^{y_i} z_i + sum_unlabeled z_i tanh<z_i, mu> }.
std::vector<double> symmetric_mean_update(const LabeledDataset& ds, const std::vector<double>& mu);

}  // namespace sharpssl
