#pragma once

#include <stdexcept>
#include <string>

namespace frozen {

// Raised when a solve leaves the range where its bracket is known to hold.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMinConfigDegree = 20;

double lambert_w(double z);

// Binary entropy in nats with 0 log 0 = 0.
double entropy(double p);

// (1-q)^k evaluated as exp(k log1p(-q)).
double pow1m(double q, double k);

double phi_indep(int d, double alpha);
double phi_indep_derivative(int d, double alpha);

struct AlphaFm {
    double alpha_fm = 0;
    double alpha_fm_tilde = 0;
    double alpha_peak = 0;  // maximiser of phi_indep
    double residual = 0;
};

AlphaFm alpha_fm(int d);

struct FrozenFixedPoint {
    int d = 0;
    double lambda = 0;
    double q_one = 0;
    double q_free = 0;
    double q_zero = 0;
    double residual = 0;
};

double frozen_f(int d, double lambda, double q);
FrozenFixedPoint solve_q(int d, double lambda);
FrozenFixedPoint fixed_point_from_q(int d, double q);

double log_lambda_of_q(int d, double q);
double lambda_of_q(int d, double q);
double alpha_of_q(int d, double q);

struct ModelRegime {
    double alpha_lbd = 0;
    double alpha_ubd = 0;
    double beta_max = 0;
    double x_min = 1.6;
    double x_max = 3.0;
    double q_min = 0;
    double q_max = 0;
};

ModelRegime model_regime(int d);

// Increasing branch of alpha(q): q from the minimiser of alpha(q) up to q_max.
struct AlphaBranch {
    double q_turn = 0;
    double q_max = 0;
    double alpha_min = 0;
    double alpha_max = 0;
};

AlphaBranch alpha_branch(int d);

struct QAlpha {
    double q = 0;
    double lambda = 0;
    double log_lambda = 0;
    double residual = 0;
    bool in_proven_regime = false;
};

// Throws RegimeError when alpha is not reached on the increasing branch.
QAlpha q_of_alpha(int d, double alpha);

double phi_star_of_q(int d, double q);
double phi_star(int d, double alpha);

struct ThresholdSummary {
    int d = 0;
    double alpha_fm = 0;
    double alpha_fm_tilde = 0;
    double alpha_star = 0;
    double lambda_star = 0;
    double q_star = 0;
    double c_star = 0;
    double alpha_lbd = 0;
    double alpha_ubd = 0;
    bool in_proven_regime = false;
    bool below_min_degree = false;
    double residual = 0;

    double mis_location(double n) const;
};

ThresholdSummary threshold_summary(int d);

double hardcore_phi(int d, double alpha);
double hardcore_recursion_residual(int d, double alpha);

double overlap_rate(int d, double alpha, double rho);
double overlap_rate_derivative(int d, double alpha, double rho);
double overlap_rate_second(int d, double alpha, double rho);
double overlap_minimizer(int d, double alpha);

}  // namespace frozen
