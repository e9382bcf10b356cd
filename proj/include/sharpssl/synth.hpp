#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sharpssl/dataset.hpp"
#include "sharpssl/matrix.hpp"
#include "sharpssl/rng.hpp"

namespace sharpssl {

// Ground-truth Gaussian mixture used for synthetic benchmarks and
// Bayes-oracle evaluation. The signal-to-noise ratio of a spec is the
// minimum pairwise distance between class means divided by
// sqrt(tr(sigma_w)/p).
struct MixtureSpec {
    int k = 2;
    std::size_t p = 0;
    std::vector<double> priors;  // sums to one
    Matrix means;                // K x p
    Matrix sigma_w;              // p x p SPD
    double gamma = 0.0;          // probability a label is observed
    std::size_t s0 = 0;          // sparsity of the means as constructed
};

enum class CovarianceKind {
    Isotropic,    // sigma_w = I_p
    Anisotropic,  // sigma_w = V diag(Unif[0,2]) V^T with Haar V
};

// Three equidistant sparse class means on the first three coordinates,
// scaled so all pairwise distances equal the requested SNR. The anisotropic
// covariance is normalized through E tr(sigma_w)/p = 1, not the realized
// trace, so the scale does not fluctuate with the draw.
MixtureSpec three_class_spec(std::size_t p, double snr, CovarianceKind kind, SeededRng& rng);

// Two classes at +/- a(1_s, 0_{p-s}) with identity covariance and
// ||mu_1 - mu_2|| = snr, i.e. a = snr / (2 sqrt(s)).
MixtureSpec two_class_spec(std::size_t p, std::size_t s, double snr);

struct SampledData {
    LabeledDataset data;
    std::vector<int> truth;  // true labels in [K], even where y = 0
};

// Draws n observations: class from the priors, features Gaussian around the
// class mean, label observed independently with probability spec.gamma.
SampledData sample_mixture(const MixtureSpec& spec, std::size_t n, SeededRng& rng);

struct BayesRiskEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Monte Carlo misclassification probability of the oracle rule that knows
// the true mixture parameters.
BayesRiskEstimate bayes_risk(const MixtureSpec& spec, std::size_t n_mc, SeededRng& rng);

}  // namespace sharpssl
