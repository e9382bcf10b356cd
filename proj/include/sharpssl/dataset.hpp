#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sharpssl/matrix.hpp"

namespace sharpssl {

// Partially labeled observations: n rows in p dimensions with labels in
// {0, ..., K} where 0 means "label not observed". Immutable by convention
// after construction; every pipeline stage takes it by const reference.
struct LabeledDataset {
    std::size_t n = 0;
    std::size_t p = 0;
    int k = 2;  // number of classes K >= 2
    Matrix x;   // n x p
    std::vector<int> y;
    std::vector<std::string> column_names;  // empty for synthetic data

    std::size_t labeled_count() const;
    std::size_t unlabeled_count() const { return n - labeled_count(); }
    double label_fraction() const;
};

// Validates invariants (labels within range, finite features, K >= 2).
LabeledDataset make_labeled_dataset(Matrix x, std::vector<int> y, int k,
                                    std::vector<std::string> column_names = {});

// RFC-4180-style CSV with a required header row. label_column selects the
// label by header name, or "none" for fully unlabeled data. Cells equal to
// unlabeled_token (or empty) parse as label 0. K is inferred as the largest
// observed label unless k_override > 0.
LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        const std::string& unlabeled_token = "0", int k_override = 0);

void save_csv(const LabeledDataset& ds, const std::string& path,
              const std::string& label_column = "label");

struct Standardization {
    std::vector<double> mean;
    std::vector<double> sd;  // n-1 denominator
};

// Centers and scales every column to sample mean 0 and variance 1.
// Throws ZeroVarianceColumn (reporting the offending column) when a column
// is constant; the caller is expected to drop such columns first.
std::pair<LabeledDataset, Standardization> standardize(const LabeledDataset& ds);

// Greedily removes columns whose residual after projecting onto the already
// kept columns has norm <= tol * column norm. First-kept-wins, so output
// order is stable. Returns the reduced dataset and the dropped indices.
std::pair<LabeledDataset, std::vector<std::size_t>> drop_collinear(const LabeledDataset& ds, double tol);

}  // namespace sharpssl
