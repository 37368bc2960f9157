// Serial reference kernels against their OpenMP counterparts. Each pair runs
// on identical inputs; set OMP_NUM_THREADS to vary the parallel side.

#include "fairtrade/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fairtrade;

namespace {

struct Inputs {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x;
    std::vector<double> weights;
    std::vector<double> scores;
    std::vector<double> mean[2];
    std::vector<double> variance[2];
    BinaryVector labels;
    BinaryVector decisions;
    BinaryVector groups;

    [[nodiscard]] MatrixView view() const { return MatrixView{x, rows, cols}; }
};

Inputs make_inputs(std::size_t rows, std::size_t cols)
{
    std::mt19937_64 gen(rows * 31 + cols);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.4);
    Inputs in;
    in.rows = rows;
    in.cols = cols;
    in.x.resize(rows * cols);
    for (auto& v : in.x) {
        v = normal(gen);
    }
    in.weights.resize(cols);
    for (auto& v : in.weights) {
        v = 0.1 * normal(gen);
    }
    for (int c = 0; c < 2; ++c) {
        in.mean[c].resize(cols);
        in.variance[c].assign(cols, 1.0);
        for (auto& v : in.mean[c]) {
            v = 0.5 * normal(gen);
        }
    }
    in.scores.resize(rows);
    in.labels.resize(rows);
    in.decisions.resize(rows);
    in.groups.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        in.scores[i] = unit(gen);
        in.labels[i] = coin(gen);
        in.decisions[i] = coin(gen);
        in.groups[i] = unit(gen) < 0.67 ? 1 : 0;
    }
    return in;
}

template <bool Parallel>
void BM_Tally(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(kernels::tally(in.labels, in.decisions, in.groups));
        } else {
            benchmark::DoNotOptimize(kernels::serial::tally(in.labels, in.decisions, in.groups));
        }
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LogisticObjective(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 100);
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(kernels::logistic_objective(in.view(), in.labels, in.weights, 0.1, 1e-3));
        } else {
            benchmark::DoNotOptimize(kernels::serial::logistic_objective(in.view(), in.labels, in.weights, 0.1, 1e-3));
        }
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LogisticScores(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 100);
    std::vector<double> out(in.rows);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::logistic_scores(in.view(), in.weights, 0.1, out);
        } else {
            kernels::serial::logistic_scores(in.view(), in.weights, 0.1, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_NaiveBayesScores(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 100);
    kernels::GaussianTerms terms;
    for (int c = 0; c < 2; ++c) {
        terms.mean[c] = in.mean[c];
        terms.variance[c] = in.variance[c];
    }
    terms.log_prior[0] = std::log(0.75);
    terms.log_prior[1] = std::log(0.25);
    std::vector<double> out(in.rows);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::naive_bayes_scores(in.view(), terms, out);
        } else {
            kernels::serial::naive_bayes_scores(in.view(), terms, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ThresholdTallies(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 1);
    std::vector<double> thresholds(101);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        thresholds[k] = 1.0 - static_cast<double>(k) / 100.0;
    }
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(kernels::threshold_tallies(in.scores, in.labels, in.groups, thresholds));
        } else {
            benchmark::DoNotOptimize(kernels::serial::threshold_tallies(in.scores, in.labels, in.groups, thresholds));
        }
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ExhaustiveSearch(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<std::size_t>(state.range(0)), 1);
    kernels::SearchConstraint c;
    c.has_max_d = true;
    c.max_d = 0.05;
    for (auto _ : state) {
        if constexpr (Parallel) {
            benchmark::DoNotOptimize(kernels::exhaustive_search(in.labels, in.groups, c));
        } else {
            benchmark::DoNotOptimize(kernels::serial::exhaustive_search(in.labels, in.groups, c));
        }
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}

} // namespace

BENCHMARK(BM_Tally<false>)->Arg(30162)->Arg(1 << 20);
BENCHMARK(BM_Tally<true>)->Arg(30162)->Arg(1 << 20);
BENCHMARK(BM_LogisticObjective<false>)->Arg(30162);
BENCHMARK(BM_LogisticObjective<true>)->Arg(30162);
BENCHMARK(BM_LogisticScores<false>)->Arg(30162);
BENCHMARK(BM_LogisticScores<true>)->Arg(30162);
BENCHMARK(BM_NaiveBayesScores<false>)->Arg(30162);
BENCHMARK(BM_NaiveBayesScores<true>)->Arg(30162);
BENCHMARK(BM_ThresholdTallies<false>)->Arg(30162);
BENCHMARK(BM_ThresholdTallies<true>)->Arg(30162);
BENCHMARK(BM_ExhaustiveSearch<false>)->Arg(12)->Arg(16);
BENCHMARK(BM_ExhaustiveSearch<true>)->Arg(12)->Arg(16);

BENCHMARK_MAIN();
