#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "frozen/analytic.hpp"
#include "frozen/bethe.hpp"

namespace frozen {

using Matrix9 = Eigen::Matrix<double, 9, 9>;

inline constexpr std::array<int, 2> kBlockOne = {letter::k10, letter::k1f};
inline constexpr std::array<int, 3> kBlockFree = {letter::k11, letter::kf0, letter::kff};
inline constexpr std::array<int, 4> kBlockZero = {letter::kf1, letter::k01, letter::k00, letter::k0f};

struct TransitionMatrix {
    int d = 0;
    FrozenFixedPoint fixed_point;
    Matrix9 entries = Matrix9::Zero();
    double epsilon = 0;
};

TransitionMatrix build_M(int d, const FrozenFixedPoint& fp);

// Edge marginal at the symmetric point, proportional to q_a q_b / lambda^{1{ab=11}}.
Law symmetric_edge_marginal(const FrozenFixedPoint& fp);

Law xbar(int d);

// max |(I + (d-1) M) xbar|
double xbar_residual(const TransitionMatrix& m);

// max |h(s) M(s,t) - h(t) M(t,s)|
double reversibility_defect(const TransitionMatrix& m, const Law& h);

struct SpectrumReport {
    std::vector<double> eigenvalues;  // all nine, by decreasing magnitude
    std::vector<double> block_one;
    std::vector<double> block_free;
    std::vector<double> block_zero;
    double lambda1 = 0;  // smaller nontrivial eigenvalue of the zero block
    double lambda2 = 0;  // the one near 1/(d-1)
    double det_shift = 0;  // det[M0 - I/(d-1)]
    double symmetrization_defect = 0;
    std::vector<double> qdot_eigenvalues;
    bool qdot_singular = false;
    double restricted_hessian_max_eigenvalue = 0;
};

// Per-block eigenvalues after symmetrising with the edge marginal.
SpectrumReport spectrum(const TransitionMatrix& m, int d);

struct QdotSpectrum {
    std::vector<double> values;
    bool singular = false;
};

// Throws std::invalid_argument if -1/(d-1) is among the inputs.
QdotSpectrum qdot_spectrum(int d, const std::vector<double>& eigenvalues);

// The eigenvalue list with one copy of -1/(d-1) removed.
std::vector<double> drop_kernel_eigenvalue(int d, const std::vector<double>& eigenvalues);

struct RestrictedHessian {
    double max_eigenvalue = 0;
    std::vector<double> eigenvalues;
    std::vector<double> qdot_constructed;  // eigenvalues of the assembled 8x8 form
    int permissible_dim = 0;
    double symmetry_defect = 0;
};

RestrictedHessian restricted_hessian_check(int d, const FrozenFixedPoint& fp, const EmpiricalMeasure& m);

// min |mu nu - 1/(d-1)| over the nine-by-nine products of eigenvalues.
double pair_eigen_gap(int d, const std::vector<double>& eigenvalues);

}  // namespace frozen
