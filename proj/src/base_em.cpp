#include "sharpssl/base_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharpssl/errors.hpp"
#include "sharpssl/ward.hpp"

namespace sharpssl {

namespace {

void check_params(const LabeledDataset& ds, const EmParams& params) {
    if (params.k() != static_cast<std::size_t>(ds.k) || params.d() != ds.p) {
        throw DimensionMismatch("EM parameter shapes do not match the dataset");
    }
    if (params.sigma_w.rows() != ds.p || params.sigma_w.cols() != ds.p) {
        throw DimensionMismatch("covariance shape does not match the dataset");
    }
}

}  // namespace

SoftLabels e_step(const LabeledDataset& ds, const EmParams& params) {
    check_params(ds, params);
    const std::size_t d = ds.p;
    const auto k = static_cast<std::size_t>(ds.k);
    const Matrix chol = cholesky(params.sigma_w);

    SoftLabels out;
    out.l = Matrix(ds.n, k);
    std::vector<double> dev(d);
    std::vector<double> logp(k);
    for (std::size_t i = 0; i < ds.n; ++i) {
        double* row = out.l.row_ptr(i);
        if (ds.y[i] != 0) {
            row[static_cast<std::size_t>(ds.y[i]) - 1] = 1.0;
            continue;
        }
        const double* z = ds.x.row_ptr(i);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < d; ++j) dev[j] = z[j] - params.means(c, j);
            forward_substitute(chol, dev);
            logp[c] = -0.5 * dot(dev, dev);
            top = std::max(top, logp[c]);
        }
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            row[c] = std::exp(logp[c] - top);
            total += row[c];
        }
        for (std::size_t c = 0; c < k; ++c) row[c] /= total;
    }
    return out;
}

EmParams m_step(const LabeledDataset& ds, const SoftLabels& labels, EmVariant variant,
                const EmParams& previous) {
    const std::size_t d = ds.p;
    const auto k = static_cast<std::size_t>(ds.k);
    if (labels.l.rows() != ds.n || labels.l.cols() != k) {
        throw DimensionMismatch("soft label shape does not match the dataset");
    }

    if (variant == EmVariant::SymmetricTwoComponent) {
        if (k != 2) {
            throw InvalidDimension("symmetric variant requires K = 2");
        }
        std::vector<double> mu(d, 0.0);
        for (std::size_t i = 0; i < ds.n; ++i) {
            const double coef = labels.l(i, 1) - labels.l(i, 0);
            const double* z = ds.x.row_ptr(i);
            for (std::size_t j = 0; j < d; ++j) mu[j] += coef * z[j];
        }
        for (double& v : mu) v /= static_cast<double>(ds.n);
        EmParams out;
        out.means = Matrix(2, d);
        for (std::size_t j = 0; j < d; ++j) {
            out.means(0, j) = -mu[j];
            out.means(1, j) = mu[j];
        }
        out.sigma_w = Matrix::identity(d);
        return out;
    }

    EmParams out;
    out.means = Matrix(k, d);
    out.sigma_w = Matrix(d, d);
    std::vector<double> weight(k, 0.0);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double* row = labels.l.row_ptr(i);
        const double* z = ds.x.row_ptr(i);
        for (std::size_t c = 0; c < k; ++c) {
            weight[c] += row[c];
            for (std::size_t j = 0; j < d; ++j) out.means(c, j) += row[c] * z[j];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (weight[c] == 0.0) {
            // A class with no responsibility mass keeps its previous mean;
            // re-seeding would break determinism.
            for (std::size_t j = 0; j < d; ++j) out.means(c, j) = previous.means(c, j);
        } else {
            for (std::size_t j = 0; j < d; ++j) out.means(c, j) /= weight[c];
        }
    }
    std::vector<double> dev(d);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double* row = labels.l.row_ptr(i);
        const double* z = ds.x.row_ptr(i);
        for (std::size_t c = 0; c < k; ++c) {
            const double w = row[c];
            if (w == 0.0) continue;
            for (std::size_t j = 0; j < d; ++j) dev[j] = z[j] - out.means(c, j);
            for (std::size_t r = 0; r < d; ++r) {
                const double wr = w * dev[r];
                for (std::size_t s = r; s < d; ++s) out.sigma_w(r, s) += wr * dev[s];
            }
        }
    }
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t s = 0; s < r; ++s) out.sigma_w(r, s) = out.sigma_w(s, r);
    }
    for (double& v : out.sigma_w.data()) v /= static_cast<double>(ds.n);
    cholesky(out.sigma_w);  // SPD gate; throws SingularWithinCovariance
    return out;
}

EmFit run_em_single(const LabeledDataset& ds, const EmParams& init, const EmConfig& config) {
    if (config.iters < 1) {
        throw InvalidDimension("iteration count T must be at least 1");
    }
    check_params(ds, init);

    EmParams params = init;
    for (int t = 0; t < config.iters; ++t) {
        const SoftLabels labels = e_step(ds, params);
        EmParams updated = m_step(ds, labels, config.variant, params);
        if (config.early_stop_tol) {
            double change = 0.0;
            for (std::size_t c = 0; c < params.k(); ++c) {
                double norm = 0.0;
                for (std::size_t j = 0; j < params.d(); ++j) {
                    const double diff = updated.means(c, j) - params.means(c, j);
                    norm += diff * diff;
                }
                change = std::max(change, std::sqrt(norm));
            }
            params = std::move(updated);
            if (change < *config.early_stop_tol) break;
        } else {
            params = std::move(updated);
        }
    }

    EmFit fit;
    fit.labels = e_step(ds, params);
    const std::size_t d = ds.p;
    const auto k = static_cast<std::size_t>(ds.k);

    std::vector<double> weight(k, 0.0);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double* row = fit.labels.l.row_ptr(i);
        for (std::size_t c = 0; c < k; ++c) weight[c] += row[c];
    }
    fit.mu_tot.assign(d, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < d; ++j) fit.mu_tot[j] += weight[c] * params.means(c, j);
    }
    for (double& v : fit.mu_tot) v /= static_cast<double>(ds.n);

    Matrix sigma_b(d, d);
    std::vector<double> dev(d);
    for (std::size_t c = 0; c < k; ++c) {
        const double w = weight[c] / static_cast<double>(ds.n);
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) dev[j] = params.means(c, j) - fit.mu_tot[j];
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) sigma_b(r, s) += w * dev[r] * dev[s];
        }
    }
    fit.q.q = solve_spd(params.sigma_w, sigma_b);
    fit.q.trace = trace(fit.q.q);
    fit.params = std::move(params);
    return fit;
}

std::size_t best_agreement(const std::vector<Matrix>& qs) {
    const std::size_t m = qs.size();
    if (m == 0) {
        throw InvalidDimension("best_agreement needs at least one candidate");
    }
    if (m == 1) return 0;
    std::vector<double> dist(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v = op_norm(qs[i] - qs[j]);
            dist[i * m + j] = v;
            dist[j * m + i] = v;
        }
    }
    std::size_t best = 0;
    double best_median = std::numeric_limits<double>::infinity();
    std::vector<double> others;
    for (std::size_t i = 0; i < m; ++i) {
        others.clear();
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) others.push_back(dist[i * m + j]);
        }
        std::sort(others.begin(), others.end());
        const std::size_t half = others.size() / 2;
        const double median = (others.size() % 2 == 1)
                                  ? others[half]
                                  : 0.5 * (others[half - 1] + others[half]);
        if (median < best_median) {
            best_median = median;
            best = i;
        }
    }
    return best;
}

EmFit run_em_multistart_fit(const LabeledDataset& ds, const EmConfig& config, SeededRng& rng,
                            int* chosen) {
    if (config.starts < 1) {
        throw InvalidDimension("number of starts M must be at least 1");
    }
    if (config.init == EmInitStrategy::UserSupplied &&
        config.user_inits.size() < static_cast<std::size_t>(config.starts)) {
        throw InvalidDimension("need one user-supplied initialization per start");
    }

    std::vector<EmFit> fits;
    std::vector<int> chain_index;
    std::string last_error = "no chains attempted";
    for (int m = 0; m < config.starts; ++m) {
        try {
            EmParams init;
            switch (config.init) {
                case EmInitStrategy::UniformSphere: {
                    SeededRng chain_rng = rng.substream(static_cast<std::uint64_t>(m + 1), 0x656d);
                    init = init_uniform_sphere(chain_rng, ds.p, config.sphere_radius);
                    break;
                }
                case EmInitStrategy::Hierarchical:
                    init = init_hierarchical(ds, ds.k);
                    break;
                case EmInitStrategy::UserSupplied:
                    init = config.user_inits[static_cast<std::size_t>(m)];
                    break;
            }
            fits.push_back(run_em_single(ds, init, config));
            chain_index.push_back(m);
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    if (fits.empty()) {
        throw AllRunsFailed("every EM chain failed; last error: " + last_error);
    }

    std::vector<Matrix> qs;
    qs.reserve(fits.size());
    for (const auto& fit : fits) qs.push_back(fit.q.q);
    const std::size_t pick = best_agreement(qs);
    if (chosen != nullptr) *chosen = chain_index[pick];
    return std::move(fits[pick]);
}

WhitenedBetween run_em_multistart(const LabeledDataset& ds, const EmConfig& config, SeededRng& rng) {
    return run_em_multistart_fit(ds, config, rng).q;
}

EmParams init_hierarchical(const LabeledDataset& ds, int k) {
    if (static_cast<std::size_t>(k) > ds.n) {
        throw InvalidDimension("hierarchical initialization needs n >= K");
    }
    const auto kk = static_cast<std::size_t>(k);
    const std::size_t d = ds.p;
    const std::vector<std::size_t> ids = ward_cluster(ds.x, kk);

    EmParams params;
    params.means = Matrix(kk, d);
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < ds.n; ++i) {
        ++counts[ids[i]];
        for (std::size_t j = 0; j < d; ++j) params.means(ids[i], j) += ds.x(i, j);
    }
    for (std::size_t c = 0; c < kk; ++c) {
        for (std::size_t j = 0; j < d; ++j) params.means(c, j) /= static_cast<double>(counts[c]);
    }

    Matrix pooled(d, d);
    std::vector<double> dev(d);
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t j = 0; j < d; ++j) dev[j] = ds.x(i, j) - params.means(ids[i], j);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) pooled(r, s) += dev[r] * dev[s];
        }
    }
    for (double& v : pooled.data()) v /= static_cast<double>(ds.n);

    // Floor the spectrum so the first E step always has an SPD covariance,
    // even when every cluster is a singleton.
    const double tr = trace(pooled);
    const double floor = 1e-8 * (tr > 0.0 ? tr / static_cast<double>(d) : 1.0);
    const SymEigen eig = sym_eigen(pooled);
    params.sigma_w = Matrix(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t s = 0; s < d; ++s) {
            double sum = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                sum += eig.vectors(r, c) * std::max(eig.values[c], floor) * eig.vectors(s, c);
            }
            params.sigma_w(r, s) = sum;
        }
    }
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t s = r + 1; s < d; ++s) {
            const double sym = 0.5 * (params.sigma_w(r, s) + params.sigma_w(s, r));
            params.sigma_w(r, s) = sym;
            params.sigma_w(s, r) = sym;
        }
    }
    return params;
}

EmParams init_uniform_sphere(SeededRng& rng, std::size_t d, double radius) {
    if (radius <= 0.0) {
        throw InvalidDimension("sphere radius must be positive");
    }
    std::vector<double> mu(d);
    double norm = 0.0;
    while (norm == 0.0) {
        for (double& v : mu) v = rng.next_gaussian();
        norm = norm2(mu);
    }
    EmParams params;
    params.means = Matrix(2, d);
    for (std::size_t j = 0; j < d; ++j) {
        const double v = radius * mu[j] / norm;
        params.means(0, j) = -v;
        params.means(1, j) = v;
    }
    params.sigma_w = Matrix::identity(d);
    return params;
}

std::vector<double> symmetric_mean_update(const LabeledDataset& ds, const std::vector<double>& mu) {
    if (ds.k != 2) {
        throw InvalidDimension("symmetric update requires K = 2");
    }
    if (mu.size() != ds.p) {
        throw DimensionMismatch("mean dimension differs from dataset");
    }
    std::vector<double> next(ds.p, 0.0);
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double* z = ds.x.row_ptr(i);
        double coef;
        if (ds.y[i] != 0) {
            coef = (ds.y[i] == 2) ? 1.0 : -1.0;
        } else {
            double inner = 0.0;
            for (std::size_t j = 0; j < ds.p; ++j) inner += z[j] * mu[j];
            coef = std::tanh(inner);
        }
        for (std::size_t j = 0; j < ds.p; ++j) next[j] += coef * z[j];
    }
    for (double& v : next) v /= static_cast<double>(ds.n);
    return next;
}

}  // namespace sharpssl
