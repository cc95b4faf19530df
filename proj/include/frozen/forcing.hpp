#pragma once

#include <array>
#include <vector>

namespace frozen {

// Scalar case: X^i ~ Bin(d, theta) iid, event {X^i >= k for all i}, conditioned on sum = total.
// Pair case: X^i ~ Mult(d; theta^2, theta(1-theta), theta(1-theta), (1-theta)^2) over
// the letters (11, 10, 01, 00), event {min(x10, x01) >= k for all i}, conditioned on
// the totals of (11, 10, 01).
struct ForcingSpec {
    int n = 1;
    int d = 1;
    int k = 0;
    bool pair = false;
    long total = 0;
    std::array<long, 3> pair_total{};
    double theta = 0.5;
};

// Throws std::invalid_argument for infeasible totals or oversized inputs.
double forcing_probability_exact(const ForcingSpec& spec);

// Largest pairwise deviation of the conditional probability across theta values.
double theta_invariance_check(ForcingSpec spec, const std::vector<double>& thetas);

}  // namespace frozen
