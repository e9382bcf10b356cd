#include "sharpssl/sharp_ssl.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sharpssl/errors.hpp"
#include "sharpssl/parallel.hpp"

namespace sharpssl {

void validate_config(const LabeledDataset& ds, const SharpConfig& config) {
    if (config.groups < 1 || config.per_group < 1) {
        throw InvalidDimension("group counts A and B must be at least 1");
    }
    const std::size_t n_minus_k =
        ds.n > static_cast<std::size_t>(ds.k) ? ds.n - static_cast<std::size_t>(ds.k) : 0;
    const std::size_t d_max = std::min(ds.p, n_minus_k);
    if (config.d < 1 || config.d > d_max) {
        throw InvalidDimension("projected dimension d = " + std::to_string(config.d) +
                               " must lie in [1, min(p, n - K)] = [1, " + std::to_string(d_max) + "]");
    }
    if (config.l < 1 || config.l > ds.p) {
        throw InvalidDimension("selection size l = " + std::to_string(config.l) +
                               " must lie in [1, p] = [1, " + std::to_string(ds.p) + "]");
    }
}

BaseLearner make_base_learner(const SharpConfig& config) {
    if (config.base == BaseMethod::Lda) {
        return [](const LabeledDataset& projected, const Projection&, SeededRng&) {
            return lda_base(projected);
        };
    }
    const EmConfig em = config.em;
    return [em](const LabeledDataset& projected, const Projection&, SeededRng& rng) {
        return run_em_multistart(projected, em, rng);
    };
}

GroupWinner score_group(const LabeledDataset& ds, const SharpConfig& config, const BaseLearner& base,
                        int group) {
    GroupWinner winner;
    winner.group = group;
    winner.trace = -std::numeric_limits<double>::infinity();
    std::string last_error = "no cells attempted";
    for (int b = 1; b <= config.per_group; ++b) {
        SeededRng cell_rng(config.seed, static_cast<std::uint64_t>(group), static_cast<std::uint64_t>(b));
        Projection pr = sample_projection(cell_rng, ds.p, config.d);
        try {
            const LabeledDataset projected = project(ds, pr);
            WhitenedBetween wb = base(projected, pr, cell_rng);
            if (wb.trace > winner.trace) {
                winner.trace = wb.trace;
                winner.member = b;
                winner.projection = std::move(pr);
                winner.q = std::move(wb.q);
            }
        } catch (const Error&) {
            ++winner.failed_cells;
        }
    }
    if (winner.member == 0) {
        throw GroupFailed("all " + std::to_string(config.per_group) + " cells of group " +
                          std::to_string(group) + " failed");
    }
    return winner;
}

SelectionResult select_variables(const LabeledDataset& ds, const SharpConfig& config) {
    return select_variables(ds, config, make_base_learner(config));
}

SelectionResult select_variables(const LabeledDataset& ds, const SharpConfig& config,
                                 const BaseLearner& base) {
    validate_config(ds, config);
    const auto groups = static_cast<std::size_t>(config.groups);

    std::vector<GroupWinner> winners(groups);
    parallel_for(groups, config.threads,
                 [&](std::size_t a) { winners[a] = score_group(ds, config, base, static_cast<int>(a) + 1); });

    SelectionResult result;
    result.importance.w.assign(ds.p, 0.0);
    result.importance.failed_cells = 0;
    for (const GroupWinner& winner : winners) {
        const std::vector<double> contribution = back_project_diag(winner.q, winner.projection, ds.p);
        for (std::size_t j = 0; j < ds.p; ++j) result.importance.w[j] += contribution[j];
        result.importance.failed_cells += winner.failed_cells;
    }
    for (double& v : result.importance.w) v /= static_cast<double>(groups);

    std::vector<std::size_t> order(ds.p);
    std::iota(order.begin(), order.end(), 0);
    if (config.random_tie_break) {
        SeededRng tie_rng = SeededRng(config.seed).substream(0, 0x74696573);
        std::vector<double> key(ds.p);
        for (double& v : key) v = tie_rng.next_double();
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            const double wi = result.importance.w[i], wj = result.importance.w[j];
            if (wi != wj) return wi > wj;
            if (key[i] != key[j]) return key[i] < key[j];
            return i < j;
        });
    } else {
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            const double wi = result.importance.w[i], wj = result.importance.w[j];
            if (wi != wj) return wi > wj;
            return i < j;
        });
    }
    result.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(config.l));
    std::sort(result.selected.begin(), result.selected.end());
    result.importance.winners = std::move(winners);
    return result;
}

SelectionResult fit_predict(const LabeledDataset& ds, const SharpConfig& config, BaseMethod final_method,
                            std::optional<EmConfig> final_em) {
    SelectionResult result = select_variables(ds, config);
    const Projection pr = make_projection(ds.p, result.selected);
    const LabeledDataset sub = project(ds, pr);

    if (final_method == BaseMethod::Lda) {
        result.final_labels = lda_predict(sub);
        return result;
    }

    const EmConfig em = final_em.value_or(config.em);
    SeededRng rng = SeededRng(config.seed).substream(0, 0x66696e616c);
    const EmFit fit = run_em_multistart_fit(sub, em, rng);
    result.final_labels.resize(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) {
        if (ds.y[i] != 0) {
            result.final_labels[i] = ds.y[i];
            continue;
        }
        const double* row = fit.labels.l.row_ptr(i);
        std::size_t arg = 0;
        for (std::size_t c = 1; c < static_cast<std::size_t>(ds.k); ++c) {
            if (row[c] > row[arg]) arg = c;
        }
        result.final_labels[i] = static_cast<int>(arg) + 1;
    }
    return result;
}

}  // namespace sharpssl
