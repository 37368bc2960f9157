#include "fairtrade/classifiers.hpp"

#include "fairtrade/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace fairtrade {

namespace {

void require_both_labels(const Dataset& ds)
{
    const auto positives = std::count(ds.labels.begin(), ds.labels.end(), std::uint8_t{1});
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(ds.size())) {
        throw DegenerateLabelsError("training data must contain both labels");
    }
}

void require_width(std::size_t expected, const Dataset& ds)
{
    if (ds.cols != expected) {
        throw DataError("feature width mismatch: model has " + std::to_string(expected) + " features, data has "
                        + std::to_string(ds.cols));
    }
}

std::string hex(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& token)
{
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
        throw DataError("model file: bad number '" + token + "'");
    }
    return v;
}

std::string expect_line(std::istream& in, const char* what)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(std::string("model file: unexpected end of input reading ") + what);
    }
    return line;
}

/// Reads "key value" and returns value.
std::string expect_field(std::istream& in, const std::string& key)
{
    const std::string line = expect_line(in, key.c_str());
    if (line.rfind(key + " ", 0) != 0 && line != key) {
        throw DataError("model file: expected '" + key + "', found '" + line + "'");
    }
    return line.size() > key.size() ? line.substr(key.size() + 1) : std::string{};
}

std::vector<std::string> read_names(std::istream& in)
{
    const auto count = std::stoul(expect_field(in, "features"));
    std::vector<std::string> names(count);
    for (auto& name : names) {
        name = expect_line(in, "feature name");
    }
    return names;
}

std::vector<double> read_numbers(const std::string& line, std::size_t count)
{
    std::istringstream in(line);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        values.push_back(parse_double(token));
    }
    if (values.size() != count) {
        throw DataError("model file: expected " + std::to_string(count) + " numbers, found "
                        + std::to_string(values.size()));
    }
    return values;
}

} // namespace

ScoreVector::ScoreVector(std::vector<double> scores) : scores_(std::move(scores))
{
    for (const double s : scores_) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw DataError("score outside [0, 1]: " + std::to_string(s));
        }
    }
}

kernels::LogisticObjective logistic_objective(const Dataset& ds, std::span<const double> weights, double bias,
                                              double l2)
{
    require_width(weights.size(), ds);
    if (ds.size() == 0) {
        throw DataError("logistic objective of an empty dataset");
    }
    return kernels::logistic_objective(ds.view(), ds.labels, weights, bias, l2);
}

LinearModel train_logistic(const Dataset& train, const LogisticConfig& config)
{
    require_both_labels(train);
    if (!(config.learning_rate > 0.0) || config.max_epochs < 0 || config.l2 < 0.0) {
        throw UsageError("invalid logistic regression configuration");
    }

    LinearModel model;
    model.weights.assign(train.cols, 0.0);
    model.feature_names = train.feature_names;

    auto objective = kernels::logistic_objective(train.view(), train.labels, model.weights, model.bias, config.l2);
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        for (std::size_t j = 0; j < train.cols; ++j) {
            model.weights[j] -= config.learning_rate * objective.grad_weights[j];
        }
        model.bias -= config.learning_rate * objective.grad_bias;

        const double previous = objective.loss;
        objective = kernels::logistic_objective(train.view(), train.labels, model.weights, model.bias, config.l2);
        model.epochs = epoch + 1;
        if (!std::isfinite(objective.loss)) {
            throw DivergenceError("logistic regression diverged at epoch " + std::to_string(epoch + 1)
                                  + "; reduce the learning rate (" + std::to_string(config.learning_rate) + ")");
        }
        if (std::abs(previous - objective.loss) < config.tolerance) {
            break;
        }
    }
    model.final_loss = objective.loss;
    return model;
}

ScoreVector score_logistic(const LinearModel& model, const Dataset& ds)
{
    require_width(model.weights.size(), ds);
    std::vector<double> out(ds.size());
    kernels::logistic_scores(ds.view(), model.weights, model.bias, out);
    return ScoreVector(std::move(out));
}

GaussianNBModel train_naive_bayes(const Dataset& train, const NaiveBayesConfig& config)
{
    require_both_labels(train);
    if (!(config.variance_floor > 0.0)) {
        throw UsageError("variance floor must be positive");
    }

    GaussianNBModel model;
    model.feature_names = train.feature_names;
    std::array<std::size_t, 2> count = {0, 0};
    for (int c = 0; c < 2; ++c) {
        model.mean[c].assign(train.cols, 0.0);
        model.variance[c].assign(train.cols, 0.0);
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        const int c = train.labels[i] != 0 ? 1 : 0;
        ++count[c];
        const double* row = train.features.data() + i * train.cols;
        for (std::size_t j = 0; j < train.cols; ++j) {
            model.mean[c][j] += row[j];
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& m : model.mean[c]) {
            m /= static_cast<double>(count[c]);
        }
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        const int c = train.labels[i] != 0 ? 1 : 0;
        const double* row = train.features.data() + i * train.cols;
        for (std::size_t j = 0; j < train.cols; ++j) {
            const double diff = row[j] - model.mean[c][j];
            model.variance[c][j] += diff * diff;
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& v : model.variance[c]) {
            v = std::max(v / static_cast<double>(count[c]), config.variance_floor);
        }
        model.prior[c] = static_cast<double>(count[c]) / static_cast<double>(train.size());
    }
    return model;
}

ScoreVector score_naive_bayes(const GaussianNBModel& model, const Dataset& ds)
{
    require_width(model.mean[0].size(), ds);
    kernels::GaussianTerms terms;
    for (int c = 0; c < 2; ++c) {
        terms.mean[c] = model.mean[c];
        terms.variance[c] = model.variance[c];
        terms.log_prior[c] = std::log(model.prior[c]);
    }
    std::vector<double> out(ds.size());
    kernels::naive_bayes_scores(ds.view(), terms, out);
    return ScoreVector(std::move(out));
}

ScoreVector score(const Model& model, const Dataset& ds)
{
    return std::visit(
        [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel>) {
                return score_logistic(m, ds);
            } else {
                return score_naive_bayes(m, ds);
            }
        },
        model);
}

BinaryVector predict_at(const ScoreVector& scores, double threshold)
{
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw UsageError("threshold must lie in [0, 1]");
    }
    BinaryVector out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = scores[i] > threshold ? 1 : 0;
    }
    return out;
}

void save_model(const Model& model, std::ostream& out, const std::string& manifest_hash)
{
    out << "fairtrade-model 1\n";
    const auto write_names = [&](const std::vector<std::string>& names) {
        out << "features " << names.size() << '\n';
        for (const auto& name : names) {
            out << name << '\n';
        }
    };
    if (const auto* lin = std::get_if<LinearModel>(&model)) {
        out << "kind logistic\n";
        out << "manifest " << manifest_hash << '\n';
        write_names(lin->feature_names);
        out << "bias " << hex(lin->bias) << '\n';
        out << "weights\n";
        for (const double w : lin->weights) {
            out << hex(w) << '\n';
        }
    } else {
        const auto& nb = std::get<GaussianNBModel>(model);
        out << "kind naive_bayes\n";
        out << "manifest " << manifest_hash << '\n';
        write_names(nb.feature_names);
        out << "prior " << hex(nb.prior[0]) << ' ' << hex(nb.prior[1]) << '\n';
        out << "gaussians\n";
        for (std::size_t j = 0; j < nb.mean[0].size(); ++j) {
            out << hex(nb.mean[0][j]) << ' ' << hex(nb.variance[0][j]) << ' ' << hex(nb.mean[1][j]) << ' '
                << hex(nb.variance[1][j]) << '\n';
        }
    }
}

Model load_model(std::istream& in, std::string* manifest_hash)
{
    if (expect_line(in, "header") != "fairtrade-model 1") {
        throw DataError("not a fairtrade model file (version 1)");
    }
    const std::string kind = expect_field(in, "kind");
    const std::string manifest = expect_field(in, "manifest");
    if (manifest_hash != nullptr) {
        *manifest_hash = manifest;
    }
    auto names = read_names(in);
    const std::size_t m = names.size();

    if (kind == "logistic") {
        LinearModel lin;
        lin.feature_names = std::move(names);
        lin.bias = parse_double(expect_field(in, "bias"));
        expect_field(in, "weights");
        lin.weights.resize(m);
        for (auto& w : lin.weights) {
            w = parse_double(expect_line(in, "weight"));
        }
        return lin;
    }
    if (kind == "naive_bayes") {
        GaussianNBModel nb;
        nb.feature_names = std::move(names);
        const auto prior = read_numbers(expect_field(in, "prior"), 2);
        nb.prior = {prior[0], prior[1]};
        expect_field(in, "gaussians");
        for (int c = 0; c < 2; ++c) {
            nb.mean[c].resize(m);
            nb.variance[c].resize(m);
        }
        for (std::size_t j = 0; j < m; ++j) {
            const auto v = read_numbers(expect_line(in, "gaussian"), 4);
            nb.mean[0][j] = v[0];
            nb.variance[0][j] = v[1];
            nb.mean[1][j] = v[2];
            nb.variance[1][j] = v[3];
        }
        return nb;
    }
    throw DataError("model file: unknown kind '" + kind + "'");
}

} // namespace fairtrade
