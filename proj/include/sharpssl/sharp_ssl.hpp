#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sharpssl/base_em.hpp"
#include "sharpssl/base_lda.hpp"
#include "sharpssl/dataset.hpp"
#include "sharpssl/projection.hpp"

namespace sharpssl {

enum class BaseMethod {
    Lda,
    Em,
};

struct SharpConfig {
    int groups = 150;     // A: groups of projections
    int per_group = 75;   // B: projections per group
    std::size_t d = 0;    // projected dimension
    std::size_t l = 0;    // number of selected variables
    BaseMethod base = BaseMethod::Em;
    EmConfig em;          // settings for the EM base learner
    std::uint64_t seed = 0;
    bool random_tie_break = false;  // default: ties to the smallest index, for reproducible output
    int threads = 0;                // 0 = all hardware threads; affects wall time only
};

// Throws InvalidDimension naming the violated bound. d is limited to
// min(p, n - K) so the projected within-class covariance stays invertible.
void validate_config(const LabeledDataset& ds, const SharpConfig& config);

// A base learner maps a projected dataset to an estimate of its whitened
// between-class covariance. It receives the projection (so oracle learners
// can look up population quantities) and the cell's random stream (so EM
// initializations are reproducible per cell).
using BaseLearner =
    std::function<WhitenedBetween(const LabeledDataset& projected, const Projection& pr, SeededRng& rng)>;

BaseLearner make_base_learner(const SharpConfig& config);

struct GroupWinner {
    int group = 0;   // a, 1-based
    int member = 0;  // winning b, 1-based
    double trace = 0.0;
    Projection projection;
    Matrix q;
    std::size_t failed_cells = 0;  // cells of this group whose base learner errored
};

struct ImportanceVector {
    std::vector<double> w;  // length p
    std::vector<GroupWinner> winners;
    std::size_t failed_cells = 0;
};

struct SelectionResult {
    std::vector<std::size_t> selected;  // l coordinates, ascending, 0-based
    ImportanceVector importance;
    std::vector<int> final_labels;  // empty until fit_predict
};

// Runs the base learner on the B projections of group a (cells keyed by
// (a, b) substreams) and returns the one with the largest trace; ties go to
// the smallest b. Cells whose learner throws are excluded; GroupFailed if
// all B fail.
GroupWinner score_group(const LabeledDataset& ds, const SharpConfig& config, const BaseLearner& base,
                        int group);

// Full sweep: importance scores w_j averaged over per-group winners, then
// the l largest entries. Deterministic given (dataset, config, seed).
SelectionResult select_variables(const LabeledDataset& ds, const SharpConfig& config);
SelectionResult select_variables(const LabeledDataset& ds, const SharpConfig& config,
                                 const BaseLearner& base);

// Selection followed by a low-dimensional pass on the selected coordinates.
// Labels for unlabeled rows come from the final method (responsibility
// argmax for EM, discriminant rule for LDA); observed labels are kept.
SelectionResult fit_predict(const LabeledDataset& ds, const SharpConfig& config, BaseMethod final_method,
                            std::optional<EmConfig> final_em = std::nullopt);

}  // namespace sharpssl
