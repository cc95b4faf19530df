#include "frozen/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frozen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Log-domain convolution truncated to indices <= cap.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, long cap) {
    const long len = std::min<long>(cap + 1, static_cast<long>(a.size() + b.size()) - 1);
    std::vector<double> out(len, kNegInf);
    for (long s = 0; s < len; ++s) {
        double mx = kNegInf;
        const long lo = std::max<long>(0, s - static_cast<long>(a.size()) + 1);
        const long hi = std::min<long>(s, static_cast<long>(b.size()) - 1);
        for (long x = lo; x <= hi; ++x) mx = std::max(mx, a[s - x] + b[x]);
        if (mx == kNegInf) continue;
        double acc = 0.0;
        for (long x = lo; x <= hi; ++x) {
            const double t = a[s - x] + b[x];
            if (t != kNegInf) acc += std::exp(t - mx);
        }
        out[s] = mx + std::log(acc);
    }
    return out;
}

double log_coefficient(const std::vector<double>& per_vertex, int n, long target) {
    std::vector<double> acc{0.0};
    for (int i = 0; i < n; ++i) acc = convolve(acc, per_vertex, target);
    return target < static_cast<long>(acc.size()) ? acc[target] : kNegInf;
}

double scalar_probability(const ForcingSpec& s) {
    const long nd = static_cast<long>(s.n) * s.d;
    if (s.total < 0 || s.total > nd) throw std::invalid_argument("total outside [0, n d]");
    const double lt = std::log(s.theta);
    const double lu = std::log1p(-s.theta);
    std::vector<double> full(s.d + 1), good(s.d + 1);
    for (int x = 0; x <= s.d; ++x) {
        full[x] = std::lgamma(s.d + 1.0) - std::lgamma(x + 1.0) - std::lgamma(s.d - x + 1.0) + x * lt + (s.d - x) * lu;
        good[x] = x >= s.k ? full[x] : kNegInf;
    }
    const double den = log_coefficient(full, s.n, s.total);
    if (den == kNegInf) throw std::invalid_argument("conditioning event has probability zero");
    const double num = log_coefficient(good, s.n, s.total);
    if (num == kNegInf) return 0.0;
    return std::min(1.0, std::exp(num - den));
}

// Three-dimensional counterpart over (s11, s10, s01), truncated at the target.
struct Grid3 {
    long a, b, c;
    std::vector<double> v;
    Grid3(long a_, long b_, long c_) : a(a_), b(b_), c(c_), v(static_cast<std::size_t>(a_ * b_ * c_), kNegInf) {}
    double& at(long i, long j, long k) { return v[static_cast<std::size_t>((i * b + j) * c + k)]; }
};

struct PairState {
    int x11, x10, x01;
    double logp;
};

double pair_log_coefficient(const std::vector<PairState>& states, int n, const std::array<long, 3>& t) {
    Grid3 acc(t[0] + 1, t[1] + 1, t[2] + 1);
    acc.at(0, 0, 0) = 0.0;
    for (int step = 0; step < n; ++step) {
        Grid3 next(t[0] + 1, t[1] + 1, t[2] + 1);
        for (long i = 0; i <= t[0]; ++i)
            for (long j = 0; j <= t[1]; ++j)
                for (long k = 0; k <= t[2]; ++k) {
                    const double base = acc.at(i, j, k);
                    if (base == kNegInf) continue;
                    for (const auto& st : states) {
                        const long ii = i + st.x11, jj = j + st.x10, kk = k + st.x01;
                        if (ii > t[0] || jj > t[1] || kk > t[2]) continue;
                        double& cell = next.at(ii, jj, kk);
                        cell = log_add(cell, base + st.logp);
                    }
                }
        acc = std::move(next);
    }
    return acc.at(t[0], t[1], t[2]);
}

double pair_probability(const ForcingSpec& s) {
    const long nd = static_cast<long>(s.n) * s.d;
    const auto& t = s.pair_total;
    if (t[0] < 0 || t[1] < 0 || t[2] < 0 || t[0] + t[1] + t[2] > nd)
        throw std::invalid_argument("pair totals outside the feasible range");
    if ((t[0] + 1.0) * (t[1] + 1.0) * (t[2] + 1.0) > 2e7) throw std::invalid_argument("pair totals too large");
    const double th = s.theta;
    const std::array<double, 4> lth = {2 * std::log(th), std::log(th) + std::log1p(-th), std::log(th) + std::log1p(-th),
                                       2 * std::log1p(-th)};
    std::vector<PairState> full, good;
    for (int a = 0; a <= s.d; ++a)
        for (int b = 0; a + b <= s.d; ++b)
            for (int c = 0; a + b + c <= s.d; ++c) {
                const int e = s.d - a - b - c;
                const double lp = std::lgamma(s.d + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
                                  std::lgamma(c + 1.0) - std::lgamma(e + 1.0) + a * lth[0] + b * lth[1] + c * lth[2] +
                                  e * lth[3];
                full.push_back({a, b, c, lp});
                if (std::min(b, c) >= s.k) good.push_back({a, b, c, lp});
            }
    const double den = pair_log_coefficient(full, s.n, t);
    if (den == kNegInf) throw std::invalid_argument("conditioning event has probability zero");
    const double num = pair_log_coefficient(good, s.n, t);
    if (num == kNegInf) return 0.0;
    return std::min(1.0, std::exp(num - den));
}

}  // namespace

double forcing_probability_exact(const ForcingSpec& spec) {
    if (spec.n < 1 || spec.d < 1) throw std::invalid_argument("forcing needs n, d >= 1");
    if (spec.k < 0) throw std::invalid_argument("forcing needs k >= 0");
    if (!(spec.theta > 0.0 && spec.theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    if (static_cast<long>(spec.n) * spec.d > 10000) throw std::invalid_argument("n d above 10^4");
    return spec.pair ? pair_probability(spec) : scalar_probability(spec);
}

double theta_invariance_check(ForcingSpec spec, const std::vector<double>& thetas) {
    if (thetas.size() < 2) throw std::invalid_argument("need at least two theta values");
    std::vector<double> p;
    for (double t : thetas) {
        spec.theta = t;
        p.push_back(forcing_probability_exact(spec));
    }
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    return *hi - *lo;
}

}  // namespace frozen
