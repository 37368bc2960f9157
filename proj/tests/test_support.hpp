#pragma once

#include "fairtrade/metrics.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace fairtrade::test {

/// Labels and groups with both groups present.
struct Instance {
    BinaryVector labels;
    BinaryVector groups;
};

inline Instance random_instance(std::mt19937_64& gen, std::size_t n, double p_favored = 0.5, double p_pos = 0.4)
{
    std::bernoulli_distribution fav(p_favored);
    std::bernoulli_distribution pos(p_pos);
    Instance inst;
    do {
        inst.labels.assign(n, 0);
        inst.groups.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            inst.groups[i] = fav(gen) ? 1 : 0;
            inst.labels[i] = pos(gen) ? 1 : 0;
        }
        std::size_t nf = 0;
        for (auto g : inst.groups) {
            nf += g;
        }
        if (nf > 0 && nf < n) {
            return inst;
        }
    } while (true);
}

/// Plain-loop reference: accepted/size per group from scratch.
inline std::pair<double, double> group_rates(BinarySpan decisions, BinarySpan groups)
{
    double acc[2] = {0, 0};
    double size[2] = {0, 0};
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        size[groups[i]] += 1;
        acc[groups[i]] += decisions[i];
    }
    return {acc[1] / size[1], acc[0] / size[0]};
}

} // namespace fairtrade::test
