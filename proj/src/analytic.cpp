#include "frozen/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frozen {

namespace {

constexpr double kE = 2.718281828459045235360287;

// Bisection down to adjacent doubles; f(lo) and f(hi) must differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 4000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

// (1/2)(1-2a)log(1-2a) - (1-a)log(1-a)
double indep_bracket(double a) {
    if (a < 0.05) {
        double sum = 0.0;
        double ak = a;
        double two = 1.0;
        for (int k = 2; k < 200; ++k) {
            ak *= a;
            two *= 2.0;
            const double term = (two - 1.0) * ak / (static_cast<double>(k) * (k - 1));
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return sum;
    }
    const double x = 1.0 - 2.0 * a;
    const double t1 = x > 0 ? 0.5 * x * std::log(x) : 0.0;
    return t1 - (1.0 - a) * std::log1p(-a);
}

}  // namespace

double lambert_w(double z) {
    const double branch = -1.0 / kE;
    if (z < branch) {
        if (z > branch - 1e-15) z = branch;
        else throw std::domain_error("lambert_w needs z >= -1/e");
    }
    if (z == 0.0) return 0.0;
    if (z == branch) return -1.0;
    double w;
    if (z < -0.25) {
        const double p = std::sqrt(2.0 * (kE * z + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (z < 3.0) {
        w = std::log1p(z) * (1.0 - std::log1p(std::log1p(z)) / (2.0 + std::log1p(z)));
    } else {
        const double l1 = std::log(z);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double r = w * ew - z;
        const double step = r / (ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) <= 4e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

double entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double pow1m(double q, double k) { return std::exp(k * std::log1p(-q)); }

double phi_indep(int d, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw std::domain_error("phi_indep needs 0 <= alpha <= 1/2");
    if (alpha == 0.0) return 0.0;
    return entropy(alpha) - d * indep_bracket(alpha);
}

double phi_indep_derivative(int d, double alpha) {
    return std::log((1.0 - alpha) / alpha) + d * std::log1p(-alpha / (1.0 - alpha));
}

AlphaFm alpha_fm(int d) {
    if (d < 3) throw std::domain_error("alpha_fm needs d >= 3");
    AlphaFm r;
    r.alpha_peak = bisect([d](double a) { return phi_indep_derivative(d, a); }, 1e-300, 0.5);
    r.alpha_fm = bisect([d](double a) { return phi_indep(d, a); }, r.alpha_peak, 0.5);
    r.residual = std::abs(phi_indep(d, r.alpha_fm));
    const double dp1 = d + 1.0;
    r.alpha_fm_tilde = 2.0 / dp1 * lambert_w(dp1 * kE / 2.0);
    return r;
}

double frozen_f(int d, double lambda, double q) {
    return pow1m(q, d - 1.0) * (lambda + q - lambda * q) - q;
}

namespace {

FrozenFixedPoint fill_fixed_point(int d, double lambda, double q) {
    FrozenFixedPoint fp;
    fp.d = d;
    fp.lambda = lambda;
    fp.q_one = q;
    fp.q_free = (d - 1.0) * q * q / (lambda * (1.0 - q));
    fp.q_zero = 1.0 - q - fp.q_free;
    const double a = pow1m(q, d - 1.0);
    const double norm = (lambda - 1.0) * a + 1.0;
    const double r1 = std::abs(q - lambda * a / norm);
    const double r2 = std::abs(fp.q_free - (d - 1.0) * q * pow1m(q, d - 2.0) / norm);
    fp.residual = std::max(r1, r2);
    return fp;
}

}  // namespace

FrozenFixedPoint fixed_point_from_q(int d, double q) { return fill_fixed_point(d, lambda_of_q(d, q), q); }

FrozenFixedPoint solve_q(int d, double lambda) {
    if (!(lambda > 1.0 + 1e-9)) throw std::domain_error("solve_q needs lambda > 1");
    if (d < 2) throw std::domain_error("solve_q needs d >= 2");
    const double q = bisect([&](double x) { return frozen_f(d, lambda, x); }, 0.0, 1.0);
    return fill_fixed_point(d, lambda, q);
}

double log_lambda_of_q(int d, double q) {
    const double l = std::log1p(-q);
    return std::log(q) + std::log(-std::expm1((d - 1.0) * l)) - d * l;
}

double lambda_of_q(int d, double q) { return std::exp(log_lambda_of_q(d, q)); }

double alpha_of_q(int d, double q) {
    const double em = std::expm1((d - 1.0) * std::log1p(-q));  // A - 1
    const double a = em + 1.0;
    return q * (1.0 + (0.5 * d - 1.0) * a) / (q - em);
}

ModelRegime model_regime(int d) {
    ModelRegime m;
    const double ld = std::log(static_cast<double>(d));
    m.alpha_lbd = 5.0 / 3.0 * ld / d;
    m.alpha_ubd = 2.0 * ld / d;
    m.beta_max = std::pow(static_cast<double>(d), -1.5);
    m.q_min = m.x_min * ld / d;
    m.q_max = m.x_max * ld / d;
    return m;
}

AlphaBranch alpha_branch(int d) {
    if (d < 3) throw RegimeError("alpha branch needs d >= 3");
    AlphaBranch b;
    b.q_max = std::min(3.0 * std::log(static_cast<double>(d)) / d, 0.95);
    // Golden-section search for the minimiser of alpha(q).
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = b.q_max * 1e-6, hi = b.q_max;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = alpha_of_q(d, x1), f2 = alpha_of_q(d, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = alpha_of_q(d, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = alpha_of_q(d, x2);
        }
    }
    b.q_turn = 0.5 * (lo + hi);
    b.alpha_min = alpha_of_q(d, b.q_turn);
    b.alpha_max = alpha_of_q(d, b.q_max);
    return b;
}

QAlpha q_of_alpha(int d, double alpha) {
    const AlphaBranch b = alpha_branch(d);
    if (!(alpha > b.alpha_min && alpha <= b.alpha_max))
        throw RegimeError("alpha=" + std::to_string(alpha) + " is not reached on the increasing branch for d=" +
                          std::to_string(d));
    QAlpha r;
    r.q = bisect([&](double q) { return alpha_of_q(d, q) - alpha; }, b.q_turn, b.q_max);
    r.log_lambda = log_lambda_of_q(d, r.q);
    r.lambda = std::exp(r.log_lambda);
    r.residual = std::abs(alpha_of_q(d, r.q) - alpha);
    const ModelRegime m = model_regime(d);
    const double x = r.q * d / std::log(static_cast<double>(d));
    r.in_proven_regime = x >= m.x_min && x <= m.x_max && alpha >= m.alpha_lbd && alpha <= m.alpha_ubd;
    return r;
}

namespace {

double phi_star_core(int d, double q, double log_lambda, double alpha) {
    const double t = -std::expm1(-log_lambda);  // 1 - 1/lambda
    return -std::log1p(-q * t) - (0.5 * d - 1.0) * std::log1p(-q * q * t) - alpha * log_lambda;
}

}  // namespace

double phi_star_of_q(int d, double q) {
    return phi_star_core(d, q, log_lambda_of_q(d, q), alpha_of_q(d, q));
}

double phi_star(int d, double alpha) {
    const QAlpha r = q_of_alpha(d, alpha);
    return phi_star_core(d, r.q, r.log_lambda, alpha);
}

double ThresholdSummary::mis_location(double n) const { return n * alpha_star - c_star * std::log(n); }

ThresholdSummary threshold_summary(int d) {
    ThresholdSummary s;
    s.d = d;
    s.below_min_degree = d < kMinConfigDegree;
    const AlphaFm fm = alpha_fm(d);
    s.alpha_fm = fm.alpha_fm;
    s.alpha_fm_tilde = fm.alpha_fm_tilde;
    const ModelRegime m = model_regime(d);
    s.alpha_lbd = m.alpha_lbd;
    s.alpha_ubd = m.alpha_ubd;
    const AlphaBranch b = alpha_branch(d);
    const double lo_q = b.q_turn * (1.0 + 1e-9);
    const double f_lo = phi_star_of_q(d, lo_q);
    const double f_hi = phi_star_of_q(d, b.q_max);
    if (!(f_lo > 0.0 && f_hi < 0.0))
        throw RegimeError("no sign change of phi_star on the increasing branch for d=" + std::to_string(d));
    s.q_star = bisect([d](double q) { return phi_star_of_q(d, q); }, lo_q, b.q_max);
    s.alpha_star = alpha_of_q(d, s.q_star);
    const double ll = log_lambda_of_q(d, s.q_star);
    s.lambda_star = std::exp(ll);
    s.c_star = 1.0 / (2.0 * ll);
    s.residual = std::abs(phi_star_of_q(d, s.q_star));
    const double x = s.q_star * d / std::log(static_cast<double>(d));
    s.in_proven_regime =
        x >= m.x_min && x <= m.x_max && s.alpha_star >= m.alpha_lbd && s.alpha_star <= m.alpha_ubd;
    return s;
}

double hardcore_phi(int d, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("hardcore_phi needs 0 < alpha < 1/2");
    const double qa = alpha / (1.0 - alpha);
    const double log_one_minus = std::log1p(-alpha / (1.0 - alpha));  // log((1-2a)/(1-a))
    const double log_lam = std::log(qa) - d * log_one_minus;
    const double lam_term = std::exp(log_lam + d * log_one_minus);
    return std::log1p(lam_term) - 0.5 * d * (log_one_minus + std::log1p(qa)) - alpha * log_lam;
}

double hardcore_recursion_residual(int d, double alpha) {
    const double qa = alpha / (1.0 - alpha);
    const double log_one_minus = std::log1p(-alpha / (1.0 - alpha));
    const double log_lam = std::log(qa) - d * log_one_minus;
    const double t = std::exp(log_lam + (d - 1.0) * log_one_minus);
    return std::abs(qa - t / (t + 1.0));
}

double overlap_rate(int d, double alpha, double rho) {
    return alpha * entropy(rho / alpha) + (1.0 - alpha) * entropy((alpha - rho) / (1.0 - alpha)) -
           0.5 * d * alpha * alpha + 0.5 * d * rho * rho;
}

double overlap_rate_derivative(int d, double alpha, double rho) {
    return 2.0 * std::log(alpha - rho) - std::log(rho) - std::log(1.0 - 2.0 * alpha + rho) + d * rho;
}

double overlap_rate_second(int d, double alpha, double rho) {
    return d - 2.0 / (alpha - rho) - 1.0 / rho - 1.0 / (1.0 - 2.0 * alpha + rho);
}

double overlap_minimizer(int d, double alpha) {
    if (!(alpha > 5.0 / d)) throw std::domain_error("overlap_minimizer needs alpha > 5/d");
    const double lo = 2.0 / d;
    const double hi = alpha - 3.0 / d;
    const double glo = overlap_rate_derivative(d, alpha, lo);
    const double ghi = overlap_rate_derivative(d, alpha, hi);
    if (glo >= 0.0) return lo;
    if (ghi <= 0.0) return hi;
    double rho = bisect([&](double r) { return overlap_rate_derivative(d, alpha, r); }, lo, hi);
    for (int it = 0; it < 3; ++it) {
        const double next = rho - overlap_rate_derivative(d, alpha, rho) / overlap_rate_second(d, alpha, rho);
        if (!(next > lo && next < hi)) break;
        rho = next;
    }
    return rho;
}

}  // namespace frozen
