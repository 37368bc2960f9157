#include "fairtrade/classifiers.hpp"
#include "fairtrade/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace fairtrade;

namespace {

Dataset make_dataset(std::size_t rows, std::size_t cols, std::vector<double> features, BinaryVector labels)
{
    Dataset ds;
    ds.rows = rows;
    ds.cols = cols;
    ds.features = std::move(features);
    ds.labels = std::move(labels);
    ds.groups.assign(rows, 0);
    if (rows > 0) {
        ds.groups[0] = 1;
    }
    for (std::size_t j = 0; j < cols; ++j) {
        ds.feature_names.push_back("x" + std::to_string(j));
    }
    return ds;
}

Dataset random_dataset(std::mt19937_64& gen, std::size_t rows, std::size_t cols)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> x(rows * cols);
    for (auto& v : x) {
        v = normal(gen);
    }
    BinaryVector y(rows);
    for (auto& v : y) {
        v = coin(gen);
    }
    y[0] = 1;
    y[1] = 0;
    return make_dataset(rows, cols, std::move(x), std::move(y));
}

double normal_pdf(double x, double mean, double var)
{
    return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

} // namespace

TEST(ScoreVector, RejectsOutOfRange)
{
    EXPECT_THROW(ScoreVector({0.5, 1.5}), DataError);
    EXPECT_THROW(ScoreVector({-0.1}), DataError);
    EXPECT_THROW(ScoreVector({std::nan("")}), DataError);
    EXPECT_NO_THROW(ScoreVector({0.0, 1.0}));
}

TEST(LogisticGradient, MatchesCentralDifferences)
{
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset ds = random_dataset(gen, 8 + trial, 1 + trial % 5);
        std::vector<double> w(ds.cols);
        for (auto& v : w) {
            v = normal(gen);
        }
        const double b = normal(gen);
        const double l2 = trial % 2 == 0 ? 0.0 : 0.3;
        const auto obj = logistic_objective(ds, w, b, l2);
        const double h = 1e-5;
        const auto relative = [](double a, double f) { return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-8}); };
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto up = w;
            auto down = w;
            up[j] += h;
            down[j] -= h;
            const double fd = (logistic_objective(ds, up, b, l2).loss - logistic_objective(ds, down, b, l2).loss) / (2 * h);
            worst = std::max(worst, relative(obj.grad_weights[j], fd));
        }
        const double fd_b = (logistic_objective(ds, w, b + h, l2).loss - logistic_objective(ds, w, b - h, l2).loss) / (2 * h);
        worst = std::max(worst, relative(obj.grad_bias, fd_b));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(TrainLogistic, SeparableTwoPoints)
{
    const Dataset ds = make_dataset(2, 1, {-1.0, 1.0}, {0, 1});
    const LinearModel m = train_logistic(ds);
    EXPECT_EQ(predict_at(score_logistic(m, ds), 0.5), (BinaryVector{0, 1}));
}

TEST(TrainLogistic, LossNonIncreasingAcrossEpochs)
{
    std::mt19937_64 gen(5);
    const Dataset ds = random_dataset(gen, 60, 3);
    double prev = std::numeric_limits<double>::infinity();
    for (int epochs = 1; epochs <= 40; ++epochs) {
        LogisticConfig cfg;
        cfg.max_epochs = epochs;
        cfg.tolerance = 0.0;
        const double loss = train_logistic(ds, cfg).final_loss;
        EXPECT_LE(loss, prev + 1e-15);
        prev = loss;
    }
}

TEST(TrainLogistic, Deterministic)
{
    std::mt19937_64 gen(6);
    const Dataset ds = random_dataset(gen, 50, 4);
    const LinearModel a = train_logistic(ds);
    const LinearModel b = train_logistic(ds);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.bias, b.bias);
}

TEST(TrainLogistic, DivergenceIsReported)
{
    std::mt19937_64 gen(8);
    Dataset ds = random_dataset(gen, 30, 2);
    for (auto& v : ds.features) {
        v *= 1e150;
    }
    LogisticConfig cfg;
    cfg.learning_rate = 1e10;
    EXPECT_THROW(train_logistic(ds, cfg), DivergenceError);
}

TEST(ScoreLogistic, ZeroModelAndSymmetry)
{
    std::mt19937_64 gen(9);
    const Dataset ds = random_dataset(gen, 20, 3);
    LinearModel zero;
    zero.weights.assign(3, 0.0);
    const ScoreVector zero_scores = score_logistic(zero, ds);
    for (double s : zero_scores.values()) {
        EXPECT_EQ(s, 0.5);
    }
    LinearModel m;
    m.weights = {0.7, -1.2, 0.4};
    m.bias = 0.3;
    LinearModel neg;
    neg.weights = {-0.7, 1.2, -0.4};
    neg.bias = -0.3;
    const ScoreVector a = score_logistic(m, ds);
    const ScoreVector b = score_logistic(neg, ds);
    for (std::size_t i = 0; i < ds.rows; ++i) {
        EXPECT_NEAR(a[i] + b[i], 1.0, 1e-15);
    }
}

TEST(ScoreLogistic, MonotoneInPositiveWeightFeature)
{
    LinearModel m;
    m.weights = {0.8, -0.5};
    m.bias = -0.1;
    std::vector<double> x;
    for (int k = -20; k <= 20; ++k) {
        x.push_back(0.25 * k);
        x.push_back(0.3);
    }
    const Dataset ds = make_dataset(41, 2, x, BinaryVector(41, 0));
    const ScoreVector s = score_logistic(m, ds);
    for (std::size_t i = 1; i < s.size(); ++i) {
        EXPECT_GE(s[i], s[i - 1]);
    }
}

TEST(ScoreLogistic, WidthMismatch)
{
    LinearModel m;
    m.weights = {1.0};
    std::mt19937_64 gen(1);
    EXPECT_THROW(score_logistic(m, random_dataset(gen, 5, 2)), DataError);
}

TEST(NaiveBayes, SeparatedClusters)
{
    std::vector<double> x;
    BinaryVector y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(-5.0 + 0.01 * i);
        y.push_back(0);
        x.push_back(5.0 + 0.01 * i);
        y.push_back(1);
    }
    const Dataset ds = make_dataset(40, 1, x, y);
    const ScoreVector s = score_naive_bayes(train_naive_bayes(ds), ds);
    for (std::size_t i = 0; i < 40; ++i) {
        EXPECT_GT(y[i] ? s[i] : 1.0 - s[i], 0.99);
    }
}

TEST(NaiveBayes, PriorsAreLabelFrequencies)
{
    std::mt19937_64 gen(12);
    const Dataset ds = random_dataset(gen, 37, 2);
    double pos = 0;
    for (auto v : ds.labels) {
        pos += v;
    }
    const GaussianNBModel m = train_naive_bayes(ds);
    EXPECT_EQ(m.prior[1], pos / 37.0);
    EXPECT_EQ(m.prior[0], (37.0 - pos) / 37.0);
}

TEST(NaiveBayes, ThreePointHandComputedPosterior)
{
    // class 0: {0}; class 1: {1, 3} -> mean 2, variance 1; floor 1 lifts class 0's variance to 1
    const Dataset train = make_dataset(3, 1, {0.0, 1.0, 3.0}, {0, 1, 1});
    const GaussianNBModel m = train_naive_bayes(train, NaiveBayesConfig{1.0});
    const Dataset query = make_dataset(2, 1, {1.0, 0.0}, {0, 0});
    const ScoreVector s = score_naive_bayes(m, query);
    // at x = 1 both densities are phi(1), so the posterior is the prior 2/3
    EXPECT_NEAR(s[0], 2.0 / 3.0, 1e-12);
    // at x = 0: (2/3) phi(2) vs (1/3) phi(0)
    const double e = std::exp(-2.0);
    EXPECT_NEAR(s[1], 2.0 * e / (2.0 * e + 1.0), 1e-12);
}

TEST(NaiveBayes, IdenticalDensitiesGivePrior)
{
    const Dataset ds = make_dataset(4, 1, {1.0, 2.0, 1.0, 2.0}, {0, 0, 1, 1});
    GaussianNBModel m = train_naive_bayes(ds);
    m.prior = {0.3, 0.7};
    const ScoreVector scores = score_naive_bayes(m, ds);
    for (double s : scores.values()) {
        EXPECT_NEAR(s, 0.7, 1e-12);
    }
}

TEST(NaiveBayes, MatchesDensityProduct)
{
    std::mt19937_64 gen(31);
    const Dataset train = random_dataset(gen, 40, 3);
    const Dataset query = random_dataset(gen, 5, 3);
    const GaussianNBModel m = train_naive_bayes(train);
    const ScoreVector s = score_naive_bayes(m, query);
    for (std::size_t i = 0; i < 5; ++i) {
        double joint[2];
        for (int c = 0; c < 2; ++c) {
            joint[c] = m.prior[c];
            for (std::size_t j = 0; j < 3; ++j) {
                joint[c] *= normal_pdf(query.features[i * 3 + j], m.mean[c][j], m.variance[c][j]);
            }
        }
        const double p = joint[1] / (joint[0] + joint[1]);
        EXPECT_NEAR(s[i], p, 1e-12);
        EXPECT_NEAR(s[i] + joint[0] / (joint[0] + joint[1]), 1.0, 1e-12);
    }
}

TEST(NaiveBayes, VarianceFloorApplied)
{
    const Dataset ds = make_dataset(4, 1, {1.0, 1.0, 2.0, 3.0}, {0, 0, 1, 1});
    const GaussianNBModel m = train_naive_bayes(ds, NaiveBayesConfig{1e-3});
    EXPECT_EQ(m.variance[0][0], 1e-3);
    EXPECT_EQ(m.variance[1][0], 0.25);
}

TEST(NaiveBayes, NeedsBothClasses)
{
    const Dataset ds = make_dataset(2, 1, {1.0, 2.0}, {1, 1});
    EXPECT_THROW(train_naive_bayes(ds), DegenerateLabelsError);
}

TEST(PredictAt, StrictThreshold)
{
    const ScoreVector s({0.2, 0.5, 0.8});
    EXPECT_EQ(predict_at(s, 0.5), (BinaryVector{0, 0, 1}));
    EXPECT_EQ(predict_at(s, 1.0), (BinaryVector{0, 0, 0}));
    EXPECT_EQ(predict_at(s, 0.0), (BinaryVector{1, 1, 1}));
    EXPECT_THROW(predict_at(s, 1.5), UsageError);
}

TEST(PredictAt, MonotoneInThreshold)
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(100);
    for (auto& x : v) {
        x = u(gen);
    }
    const ScoreVector s(v);
    BinaryVector prev = predict_at(s, 0.0);
    for (int k = 1; k <= 100; ++k) {
        const BinaryVector cur = predict_at(s, k / 100.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            EXPECT_LE(cur[i], prev[i]);
        }
        prev = cur;
    }
}

TEST(ModelFile, RoundTripIsExact)
{
    std::mt19937_64 gen(13);
    const Dataset ds = random_dataset(gen, 30, 3);
    for (const Model& model : {Model(train_logistic(ds)), Model(train_naive_bayes(ds))}) {
        std::stringstream buf;
        save_model(model, buf, "abc123");
        std::string hash;
        const Model back = load_model(buf, &hash);
        EXPECT_EQ(hash, "abc123");
        EXPECT_EQ(model.index(), back.index());
        const auto a = score(model, ds).values();
        const auto b = score(back, ds).values();
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
}

TEST(ModelFile, RejectsGarbage)
{
    std::istringstream bad("not a model\n");
    EXPECT_THROW(load_model(bad), DataError);
    std::istringstream version("fairtrade-model 99\n");
    EXPECT_THROW(load_model(version), DataError);
}
