#pragma once

#include <cstddef>
#include <vector>

#include "sharpssl/dataset.hpp"
#include "sharpssl/matrix.hpp"
#include "sharpssl/rng.hpp"

namespace sharpssl {

// An axis-aligned projection: d distinct coordinates out of p, kept sorted.
// Base procedures are permutation equivariant, so only the index set matters
// and we never materialize the binary projection matrix.
struct Projection {
    std::size_t p = 0;
    std::vector<std::size_t> indices;  // strictly increasing, 0-based

    std::size_t d() const { return indices.size(); }
};

Projection make_projection(std::size_t p, std::vector<std::size_t> indices);

// Uniformly random d-subset of the p coordinates (partial Fisher-Yates).
Projection sample_projection(SeededRng& rng, std::size_t p, std::size_t d);

// Keeps the selected coordinates (in sorted order); labels carry through.
LabeledDataset project(const LabeledDataset& ds, const Projection& pr);

// Scatters the diagonal of a d x d matrix back to ambient dimension p:
// entry k lands at coordinate indices[k], zeros elsewhere.
std::vector<double> back_project_diag(const Matrix& q, const Projection& pr, std::size_t p);

}  // namespace sharpssl
