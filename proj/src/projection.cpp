#include "sharpssl/projection.hpp"

#include <algorithm>
#include <numeric>

#include "sharpssl/errors.hpp"

namespace sharpssl {

Projection make_projection(std::size_t p, std::vector<std::size_t> indices) {
    if (indices.empty() || indices.size() > p) {
        throw InvalidDimension("projection needs 1 <= d <= p coordinates");
    }
    std::sort(indices.begin(), indices.end());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= p) {
            throw InvalidDimension("projection index out of range");
        }
        if (k > 0 && indices[k] == indices[k - 1]) {
            throw InvalidDimension("projection indices must be distinct");
        }
    }
    return Projection{p, std::move(indices)};
}

Projection sample_projection(SeededRng& rng, std::size_t p, std::size_t d) {
    if (d == 0 || d > p) {
        throw InvalidDimension("projection dimension d must satisfy 1 <= d <= p");
    }
    std::vector<std::size_t> pool(p);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(rng.next_below(p - k));
        std::swap(pool[k], pool[j]);
    }
    std::vector<std::size_t> picked(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(d));
    std::sort(picked.begin(), picked.end());
    return Projection{p, std::move(picked)};
}

LabeledDataset project(const LabeledDataset& ds, const Projection& pr) {
    if (pr.p != ds.p) {
        throw DimensionMismatch("projection ambient dimension differs from dataset");
    }
    Matrix z(ds.n, pr.d());
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double* src = ds.x.row_ptr(i);
        double* dst = z.row_ptr(i);
        for (std::size_t k = 0; k < pr.d(); ++k) dst[k] = src[pr.indices[k]];
    }
    std::vector<std::string> names;
    if (!ds.column_names.empty()) {
        for (std::size_t idx : pr.indices) names.push_back(ds.column_names[idx]);
    }
    return make_labeled_dataset(std::move(z), ds.y, ds.k, std::move(names));
}

std::vector<double> back_project_diag(const Matrix& q, const Projection& pr, std::size_t p) {
    if (q.rows() != q.cols() || q.rows() != pr.d() || pr.p != p) {
        throw DimensionMismatch("back_project_diag dimensions inconsistent");
    }
    std::vector<double> w(p, 0.0);
    for (std::size_t k = 0; k < pr.d(); ++k) w[pr.indices[k]] = q(k, k);
    return w;
}

}  // namespace sharpssl
