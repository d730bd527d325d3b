#pragma once

// Finite test problem with an exhaustive-enumeration oracle, shared by the
// estimator unit tests and the acceptance suite. Everything here is exact:
// the outer variable lives on a few atoms and each component of Y takes a few
// values, so I can be enumerated without sampling.

#include <vector>

#include "scrmlmc/estimator.hpp"

namespace scrmlmc::testing {

struct DiscreteSpec {
    std::vector<double> atom_prob;
    std::vector<double> atom_weight;  // phi per atom
    // values[a][p][m] with probabilities probs[a][p][m]
    std::vector<std::vector<std::vector<double>>> values;
    std::vector<std::vector<std::vector<double>>> probs;

    int components() const { return static_cast<int>(values.front().size()); }
};

// Three atoms, three components, distinct conditional means with one close
// pair so the maximum is not decided trivially.
inline DiscreteSpec default_discrete_spec() {
    DiscreteSpec spec;
    spec.atom_prob = {0.5, 0.3, 0.2};
    spec.atom_weight = {1.0, 2.0, 0.5};
    spec.values = {
        {{1.0, 3.0}, {0.0, 4.0}, {2.0, -1.0}},
        {{-2.0, 2.0, 4.0}, {1.0, 1.5}, {0.5, 0.75}},
        {{5.0, -5.0}, {4.0, -2.0}, {3.0, 3.5}},
    };
    spec.probs = {
        {{0.5, 0.5}, {0.75, 0.25}, {0.5, 0.5}},
        {{0.25, 0.5, 0.25}, {0.5, 0.5}, {0.4, 0.6}},
        {{0.6, 0.4}, {0.5, 0.5}, {0.5, 0.5}},
    };
    return spec;
}

inline std::vector<double> conditional_means(const DiscreteSpec& spec, int atom) {
    std::vector<double> means(spec.components(), 0.0);
    for (int p = 0; p < spec.components(); ++p)
        for (std::size_t m = 0; m < spec.values[atom][p].size(); ++m)
            means[p] += spec.values[atom][p][m] * spec.probs[atom][p][m];
    return means;
}

// Exact I for a given aggregator by enumeration over the atoms.
inline double enumerate_exact(const DiscreteSpec& spec, const Aggregator& agg) {
    double total = 0.0;
    for (std::size_t a = 0; a < spec.atom_prob.size(); ++a) {
        const auto means = conditional_means(spec, static_cast<int>(a));
        total += spec.atom_prob[a] * spec.atom_weight[a] * agg.apply(means);
    }
    return total;
}

inline int sample_index(std::span<const double> probs, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

inline NestedProblem make_discrete_problem(DiscreteSpec spec) {
    NestedProblem problem;
    problem.components = spec.components();
    auto shared = std::make_shared<const DiscreteSpec>(std::move(spec));
    problem.sample_outer = [shared](RngStream& rng) -> std::any {
        return sample_index(shared->atom_prob, rng.uniform());
    };
    problem.sample_inner = [shared](const std::any& outer, RngStream& rng,
                                    std::span<double> out) {
        const int atom = std::any_cast<int>(outer);
        for (int p = 0; p < static_cast<int>(out.size()); ++p) {
            const int m = sample_index(shared->probs[atom][p], rng.uniform());
            out[p] = shared->values[atom][p][m];
        }
    };
    problem.weight = [shared](const std::any& outer) {
        return shared->atom_weight[std::any_cast<int>(outer)];
    };
    return problem;
}

// Deterministic variant: Y == f(atom) with no inner randomness.
inline NestedProblem make_deterministic_problem(int components) {
    NestedProblem problem;
    problem.components = components;
    problem.sample_outer = [](RngStream& rng) -> std::any {
        return static_cast<int>(rng.uniform() * 3.0);
    };
    problem.sample_inner = [](const std::any& outer, RngStream&, std::span<double> out) {
        const int atom = std::any_cast<int>(outer);
        for (std::size_t p = 0; p < out.size(); ++p)
            out[p] = static_cast<double>(atom + 1) * (static_cast<double>(p) - 0.5);
    };
    problem.weight = [](const std::any&) { return 1.0; };
    return problem;
}

}  // namespace scrmlmc::testing
