#include "sharpssl/ward.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sharpssl/errors.hpp"

namespace sharpssl {

namespace {

struct Merge {
    std::size_t a;
    std::size_t b;
    double height;
};

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

}  // namespace

std::vector<std::size_t> ward_cluster(const Matrix& x, std::size_t k) {
    const std::size_t n = x.rows();
    if (k == 0 || k > n) {
        throw InvalidDimension("cluster count must satisfy 1 <= k <= n");
    }
    if (k == n) {
        std::vector<std::size_t> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        return ids;
    }

    // dist holds the Ward merge cost between active clusters, seeded with
    // squared Euclidean distances between points (Lance-Williams update below
    // preserves argmins under this scaling).
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < x.cols(); ++c) {
                const double diff = x(i, c) - x(j, c);
                d2 += diff * diff;
            }
            dist[i * n + j] = d2;
            dist[j * n + i] = d2;
        }
    }

    std::vector<bool> active(n, true);
    std::vector<double> size(n, 1.0);
    std::vector<Merge> merges;
    merges.reserve(n - 1);
    std::vector<std::size_t> chain;
    chain.reserve(n);

    while (merges.size() < n - 1) {
        if (chain.empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
            }
        }
        while (true) {
            const std::size_t tip = chain.back();
            std::size_t nearest = n;
            double best = std::numeric_limits<double>::infinity();
            // Prefer the previous chain element on ties so reciprocity is
            // detected deterministically.
            if (chain.size() >= 2) {
                nearest = chain[chain.size() - 2];
                best = dist[tip * n + nearest];
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!active[j] || j == tip) continue;
                if (dist[tip * n + j] < best) {
                    best = dist[tip * n + j];
                    nearest = j;
                }
            }
            if (chain.size() >= 2 && nearest == chain[chain.size() - 2]) {
                chain.pop_back();
                const std::size_t other = chain.back();
                chain.pop_back();
                const std::size_t keep = std::min(tip, other);
                const std::size_t gone = std::max(tip, other);
                const double height = dist[keep * n + gone];
                merges.push_back({keep, gone, height});

                const double sa = size[keep], sb = size[gone];
                for (std::size_t j = 0; j < n; ++j) {
                    if (!active[j] || j == keep || j == gone) continue;
                    const double sc = size[j];
                    const double updated = ((sa + sc) * dist[keep * n + j] + (sb + sc) * dist[gone * n + j] -
                                            sc * height) /
                                           (sa + sb + sc);
                    dist[keep * n + j] = updated;
                    dist[j * n + keep] = updated;
                }
                size[keep] = sa + sb;
                active[gone] = false;
                break;
            }
            chain.push_back(nearest);
        }
    }

    // Replay the n-k cheapest merges; stable sort keeps children before
    // parents when heights tie (recording order already does).
    std::stable_sort(merges.begin(), merges.end(),
                     [](const Merge& a, const Merge& b) { return a.height < b.height; });
    UnionFind uf(n);
    for (std::size_t m = 0; m + k < n; ++m) uf.unite(merges[m].a, merges[m].b);

    std::vector<std::size_t> cluster_of_root(n, n);
    std::vector<std::size_t> ids(n);
    std::size_t next_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        if (cluster_of_root[root] == n) cluster_of_root[root] = next_id++;
        ids[i] = cluster_of_root[root];
    }
    return ids;
}

}  // namespace sharpssl
