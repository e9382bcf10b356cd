#pragma once

#include <cstddef>
#include <vector>

#include "sharpssl/dataset.hpp"
#include "sharpssl/matrix.hpp"

namespace sharpssl {

// Estimate of the whitened between-class covariance of a (projected) dataset,
// Q = Sigma_w^{-1} Sigma_b. Generally non-symmetric; its trace is the score
// used to rank projections.
struct WhitenedBetween {
    Matrix q;
    double trace = 0.0;

    std::size_t d() const { return q.rows(); }
};

// First and second moments split by class. The grand mean is taken over all
// rows by default (unlabeled rows included, see class_moments); the scatter
// matrices use labeled rows only, with denominator n' = number of labeled.
struct ClassMoments {
    std::vector<std::size_t> counts;  // n_k, k = 1..K at index k-1
    Matrix class_means;               // K x d; zero row when n_k = 0
    std::vector<double> grand_mean;
    Matrix sigma_w;  // d x d
    Matrix sigma_b;  // d x d
    std::size_t labeled = 0;  // n'
};

ClassMoments class_moments(const LabeledDataset& ds, bool unlabeled_in_grand_mean = true);

// Labeled-data-only base learner: Q = Sigma_w^{-1} Sigma_b from the class
// moments. Throws SingularWithinCovariance when the pooled within-class
// scatter is rank-deficient (projected dimension above the labeled rank).
WhitenedBetween lda_base(const LabeledDataset& ds);

// Classifies every row with the discriminant rule fit on the labeled rows;
// rows with observed labels keep them.
std::vector<int> lda_predict(const LabeledDataset& ds);

}  // namespace sharpssl
