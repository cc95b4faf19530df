#pragma once

#include <array>
#include <string>
#include <vector>

#include "frozen/analytic.hpp"
#include "frozen/coarsen.hpp"

namespace frozen {

// Message letters: (variable-to-clause, clause-to-variable), index 3*out + in
// with spin order 0, 1, f.
namespace letter {
inline constexpr int k00 = 0, k01 = 1, k0f = 2, k10 = 3, k11 = 4, k1f = 5, kf0 = 6, kf1 = 7, kff = 8;
}

inline constexpr int kAlphabetSize = 9;
using Law = std::array<double, kAlphabetSize>;

inline constexpr std::array<int, kAlphabetSize> kReflect = {0, 3, 6, 1, 4, 7, 2, 5, 8};

int letter_index(Spin out, Spin in);
std::string letter_name(int idx);

// 1 if no incoming one, f if exactly one, 0 otherwise.
Spin chi_map(const std::vector<Spin>& incoming);

struct BetheSolution {
    int d = 0;
    double lambda = 0;
    Law h_hat{};
    Law h_dot{};
    double z_dot = 0;
    double z_hat = 0;
};

BetheSolution symmetric_solution(int d, double lambda);
BetheSolution bp_step(int d, double lambda, const BetheSolution& h);

// Max absolute difference over both laws.
double law_distance(const BetheSolution& a, const BetheSolution& b);

struct BpRun {
    BetheSolution solution;
    int steps = 0;
    double distance = 0;  // to the target after the last step
    bool converged = false;
};

BpRun iterate_bp(int d, double lambda, BetheSolution start, const BetheSolution& target, double tol, int max_steps);

enum class VarKind { one, free, susceptible, robust };

// A symmetric family of variable configurations in M^d.
struct VariableClass {
    VarKind kind = VarKind::one;
    int k = 0;
    int j = 0;
    double log_count = 0;
    double log_psi = 0;
    std::array<int, kAlphabetSize> letters{};
    double prob = 0;  // total mass of the family
};

struct EmpiricalMeasure {
    int d = 0;
    double lambda = 0;
    std::vector<VariableClass> classes;
    Law clause{};          // mass of (sigma, R sigma)
    Law clause_log_psi{};  // log of the clause factor
    Law edge{};
    double z_dot_bar = 0;
    double log_z_dot_bar = 0;
    double z_hat_bar = 0;
    double z_bar = 0;
    double p_one = 0;
    double p_free = 0;
    double intensity = 0;       // variable side
    double edge_intensity = 0;  // h(1Z) + (d/2) h(11)
};

// Throws std::invalid_argument when h is not a fixed point to 1e-9.
EmpiricalMeasure empirical_measure(int d, double lambda, const BetheSolution& h);

struct ClosedFormNormalizers {
    double z_dot_bar = 0;
    double z_bar = 0;
    double z_hat_bar = 0;
    double p_one = 0;
};

ClosedFormNormalizers closed_form_normalizers(int d, double lambda);

struct FreeEnergy {
    double long_form = 0;
    double shortcut = 0;
    double alpha = 0;
    double phi_star = 0;  // long_form - alpha log lambda
};

FreeEnergy bethe_free_energy(int d, const EmpiricalMeasure& m, double lambda);

// Free energy of the product of two measures, summed over pair letters directly.
double product_free_energy(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// Pair law over {0,1,f}^2, index 3*s1 + s2.
struct PairLaw {
    Law q{};
    double z = 0;
    double residual = 0;
    int iterations = 0;
};

PairLaw pair_product(const FrozenFixedPoint& a, const FrozenFixedPoint& b);
PairLaw pair_map(int d, const FrozenFixedPoint& a, const FrozenFixedPoint& b, const Law& q);
double pair_residual(int d, const FrozenFixedPoint& a, const FrozenFixedPoint& b, const Law& q);
PairLaw pair_solve(int d, double lambda1, double lambda2, const Law& init);

struct PairUniqueness {
    double f = 0;
    double fprime = 0;
};

PairUniqueness pair_uniqueness(int d, const FrozenFixedPoint& a, const FrozenFixedPoint& b, double x);

}  // namespace frozen
