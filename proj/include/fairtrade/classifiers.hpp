#pragma once

#include "fairtrade/dataset.hpp"
#include "fairtrade/kernels.hpp"
#include "fairtrade/metrics.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace fairtrade {

/// Per-individual acceptance probabilities, every entry in [0, 1].
class ScoreVector {
public:
    ScoreVector() = default;
    /// Throws DataError if an entry is outside [0, 1] or not finite.
    explicit ScoreVector(std::vector<double> scores);

    [[nodiscard]] std::span<const double> values() const noexcept { return scores_; }
    [[nodiscard]] std::size_t size() const noexcept { return scores_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return scores_[i]; }

private:
    std::vector<double> scores_;
};

struct LogisticConfig {
    double learning_rate = 0.1;
    int max_epochs = 5000;
    double tolerance = 1e-8;
    double l2 = 1e-4;
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<std::string> feature_names;
    int epochs = 0;  ///< epochs actually run
    double final_loss = 0.0;
};

struct NaiveBayesConfig {
    double variance_floor = 1e-9;
};

/// Index 0 is the negative class, index 1 the positive class.
struct GaussianNBModel {
    std::array<double, 2> prior = {0.5, 0.5};
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> variance;
    std::vector<std::string> feature_names;
};

using Model = std::variant<LinearModel, GaussianNBModel>;

/// Objective minimized by train_logistic at (weights, bias).
kernels::LogisticObjective logistic_objective(const Dataset& ds, std::span<const double> weights, double bias,
                                              double l2);

/// Full-batch gradient descent from zero. Stops when the loss changes by less
/// than `tolerance` between epochs or after `max_epochs`. Throws
/// DivergenceError when the loss becomes non-finite.
LinearModel train_logistic(const Dataset& train, const LogisticConfig& config = {});

ScoreVector score_logistic(const LinearModel& model, const Dataset& ds);

GaussianNBModel train_naive_bayes(const Dataset& train, const NaiveBayesConfig& config = {});

/// Posterior p(+ | x), computed in log space and renormalized.
ScoreVector score_naive_bayes(const GaussianNBModel& model, const Dataset& ds);

ScoreVector score(const Model& model, const Dataset& ds);

/// decision = 1 iff score > threshold. A score equal to the threshold is
/// rejected.
BinaryVector predict_at(const ScoreVector& scores, double threshold);

/// Versioned text format: a `fairtrade-model 1` line, `kind`, feature names
/// and parameters, with doubles written in hex-float so a load reproduces
/// the parameters bit-for-bit.
void save_model(const Model& model, std::ostream& out, const std::string& manifest_hash = {});
Model load_model(std::istream& in, std::string* manifest_hash = nullptr);

} // namespace fairtrade
