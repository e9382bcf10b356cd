#include "sharpssl/base_lda.hpp"

#include <cmath>

#include "sharpssl/errors.hpp"

namespace sharpssl {

ClassMoments class_moments(const LabeledDataset& ds, bool unlabeled_in_grand_mean) {
    const std::size_t d = ds.p;
    const auto k = static_cast<std::size_t>(ds.k);

    ClassMoments m;
    m.counts.assign(k, 0);
    m.class_means = Matrix(k, d);
    m.grand_mean.assign(d, 0.0);
    m.sigma_w = Matrix(d, d);
    m.sigma_b = Matrix(d, d);

    std::size_t grand_count = 0;
    for (std::size_t i = 0; i < ds.n; ++i) {
        const double* row = ds.x.row_ptr(i);
        if (ds.y[i] != 0) {
            const std::size_t c = static_cast<std::size_t>(ds.y[i]) - 1;
            ++m.counts[c];
            for (std::size_t j = 0; j < d; ++j) m.class_means(c, j) += row[j];
        }
        if (unlabeled_in_grand_mean || ds.y[i] != 0) {
            ++grand_count;
            for (std::size_t j = 0; j < d; ++j) m.grand_mean[j] += row[j];
        }
    }
    for (std::size_t c = 0; c < k; ++c) m.labeled += m.counts[c];
    if (m.labeled == 0) {
        throw NoLabeledData("no labeled observations");
    }
    for (std::size_t j = 0; j < d; ++j) m.grand_mean[j] /= static_cast<double>(grand_count);
    for (std::size_t c = 0; c < k; ++c) {
        // Unobserved classes keep a zero mean and contribute nothing below.
        if (m.counts[c] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) m.class_means(c, j) /= static_cast<double>(m.counts[c]);
    }

    const double inv_labeled = 1.0 / static_cast<double>(m.labeled);
    std::vector<double> dev(d);
    for (std::size_t i = 0; i < ds.n; ++i) {
        if (ds.y[i] == 0) continue;
        const std::size_t c = static_cast<std::size_t>(ds.y[i]) - 1;
        const double* row = ds.x.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) dev[j] = row[j] - m.class_means(c, j);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) m.sigma_w(r, s) += dev[r] * dev[s];
        }
    }
    for (double& v : m.sigma_w.data()) v *= inv_labeled;

    for (std::size_t c = 0; c < k; ++c) {
        if (m.counts[c] == 0) continue;
        const double weight = static_cast<double>(m.counts[c]) * inv_labeled;
        for (std::size_t j = 0; j < d; ++j) dev[j] = m.class_means(c, j) - m.grand_mean[j];
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t s = 0; s < d; ++s) m.sigma_b(r, s) += weight * dev[r] * dev[s];
        }
    }
    return m;
}

WhitenedBetween lda_base(const LabeledDataset& ds) {
    const ClassMoments m = class_moments(ds);
    WhitenedBetween wb;
    wb.q = solve_spd(m.sigma_w, m.sigma_b);
    wb.trace = trace(wb.q);
    return wb;
}

std::vector<int> lda_predict(const LabeledDataset& ds) {
    const ClassMoments m = class_moments(ds);
    const Matrix l = cholesky(m.sigma_w);
    const auto k = static_cast<std::size_t>(ds.k);

    std::vector<double> log_prior(k, -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
        if (m.counts[c] > 0) {
            log_prior[c] = std::log(static_cast<double>(m.counts[c]) / static_cast<double>(m.labeled));
        }
    }

    std::vector<int> labels(ds.n);
    std::vector<double> dev(ds.p);
    for (std::size_t i = 0; i < ds.n; ++i) {
        if (ds.y[i] != 0) {
            labels[i] = ds.y[i];
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t c = 0; c < k; ++c) {
            if (m.counts[c] == 0) continue;
            for (std::size_t j = 0; j < ds.p; ++j) dev[j] = ds.x(i, j) - m.class_means(c, j);
            forward_substitute(l, dev);
            const double score = log_prior[c] - 0.5 * dot(dev, dev);
            if (score > best) {
                best = score;
                arg = c;
            }
        }
        labels[i] = static_cast<int>(arg) + 1;
    }
    return labels;
}

}  // namespace sharpssl
