#pragma once

#include <cstddef>
#include <vector>

#include "sharpssl/matrix.hpp"

namespace sharpssl {

// Ward-linkage agglomerative clustering of the rows of x, cut at k clusters.
// Returns one cluster id in {0, ..., k-1} per row, numbered by first
// appearance in row order. Nearest-neighbor-chain implementation, O(n^2)
// time and memory, which keeps the per-projection EM initialization cheap.
std::vector<std::size_t> ward_cluster(const Matrix& x, std::size_t k);

}  // namespace sharpssl
