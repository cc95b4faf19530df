#include "frozen/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frozen {

using namespace letter;

int letter_index(Spin out, Spin in) { return 3 * static_cast<int>(out) + static_cast<int>(in); }

std::string letter_name(int idx) {
    static const char* names[] = {"00", "01", "0f", "10", "11", "1f", "f0", "f1", "ff"};
    if (idx < 0 || idx >= kAlphabetSize) throw std::out_of_range("letter index");
    return names[idx];
}

Spin chi_map(const std::vector<Spin>& incoming) {
    if (incoming.empty()) throw std::invalid_argument("chi_map needs at least one message");
    const auto ones = std::count(incoming.begin(), incoming.end(), Spin::one);
    if (ones == 0) return Spin::one;
    if (ones == 1) return Spin::free;
    return Spin::zero;
}

namespace {

double log_choose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// (1+r)^n - 1 - n r without cancellation for small n r.
double binomial_tail2(int n, double r) {
    if (n < 2) return 0.0;
    if (std::abs(r) * n < 0.5) {
        double term = 1.0;
        double sum = 0.0;
        for (int k = 1; k <= n; ++k) {
            term *= r * (n - k + 1) / k;
            if (k >= 2) {
                sum += term;
                if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            }
        }
        return sum;
    }
    return std::expm1(n * std::log1p(r)) - n * r;
}

struct VariableUpdate {
    Law h_dot{};
    double z_dot = 0;
};

// Variable-side recursion. All terms are homogeneous of degree d-1 in h_hat, so
// the inputs are rescaled by the largest row mass to keep the powers in range.
VariableUpdate variable_update(int d, double lambda, const Law& h_hat) {
    const double scale = std::max(
        {h_hat[k10] + h_hat[k1f], h_hat[kf0] + h_hat[kff], h_hat[k00] + h_hat[k0f] + h_hat[k01] + h_hat[kf1]});
    if (!(scale > 0.0)) throw std::runtime_error("variable recursion input degenerate");
    Law s;
    for (int i = 0; i < kAlphabetSize; ++i) s[i] = h_hat[i] / scale;
    const double one_z = s[k10] + s[k1f];
    const double free_z = s[kf0] + s[kff];
    const double zero_z = s[k00] + s[k0f];
    const double m = d - 1.0;

    Law u{};
    u[k10] = u[k1f] = lambda * std::pow(one_z, m);
    u[k11] = std::pow(free_z, m);
    u[kf0] = u[kff] = m * s[k11] * std::pow(free_z, m - 1.0);
    u[kf1] = m * s[kf1] * std::pow(zero_z, m - 1.0);
    double robust;
    if (zero_z > 0.0 && s[k01] * m < 0.5 * zero_z)
        robust = std::pow(zero_z, m) * binomial_tail2(d - 1, s[k01] / zero_z);
    else
        robust = std::pow(zero_z + s[k01], m) - std::pow(zero_z, m) - m * s[k01] * std::pow(zero_z, m - 1.0);
    const double pair_swap =
        0.5 * m * (m - 1.0) * (s[kf1] * s[kf1] - s[k01] * s[k01]) * (d >= 3 ? std::pow(zero_z, m - 2.0) : 0.0);
    u[k01] = robust;
    u[k00] = u[k0f] = robust + pair_swap;

    double total = 0.0;
    for (double x : u) total += x;
    if (!(total > 0.0) || !std::isfinite(total)) throw std::runtime_error("variable recursion normaliser degenerate");
    VariableUpdate out;
    for (int i = 0; i < kAlphabetSize; ++i) out.h_dot[i] = u[i] / total;
    out.z_dot = std::exp(std::log(total) + m * std::log(scale));
    return out;
}

void check_lambda(double lambda) {
    if (!(lambda > 1.0 + 1e-9)) throw std::domain_error("fugacity must exceed 1");
}

double logsumexp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

}  // namespace

BetheSolution bp_step(int d, double lambda, const BetheSolution& h) {
    check_lambda(lambda);
    if (d < 3) throw std::domain_error("bp_step needs d >= 3");
    const VariableUpdate v = variable_update(d, lambda, h.h_hat);
    BetheSolution out;
    out.d = d;
    out.lambda = lambda;
    out.h_dot = v.h_dot;
    out.z_dot = v.z_dot;
    out.z_hat = 1.0 + (lambda - 1.0) * v.h_dot[k11];
    for (int i = 0; i < kAlphabetSize; ++i)
        out.h_hat[i] = v.h_dot[kReflect[i]] * (i == k11 ? lambda : 1.0) / out.z_hat;
    return out;
}

BetheSolution symmetric_solution(int d, double lambda) {
    check_lambda(lambda);
    if (d < 3) throw std::domain_error("symmetric_solution needs d >= 3");
    const FrozenFixedPoint fp = solve_q(d, lambda);
    const std::array<double, 3> q = {fp.q_zero, fp.q_one, fp.q_free};
    BetheSolution s;
    s.d = d;
    s.lambda = lambda;
    s.z_hat = 1.0 / (1.0 - fp.q_one * (1.0 - 1.0 / lambda) / 3.0);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const int i = 3 * a + b;
            s.h_hat[i] = q[b] / 3.0;
            s.h_dot[i] = s.z_hat * q[a] / 3.0 / (i == k11 ? lambda : 1.0);
        }
    }
    s.z_dot = variable_update(d, lambda, s.h_hat).z_dot;
    return s;
}

double law_distance(const BetheSolution& a, const BetheSolution& b) {
    double m = 0.0;
    for (int i = 0; i < kAlphabetSize; ++i) {
        m = std::max(m, std::abs(a.h_hat[i] - b.h_hat[i]));
        m = std::max(m, std::abs(a.h_dot[i] - b.h_dot[i]));
    }
    return m;
}

BpRun iterate_bp(int d, double lambda, BetheSolution start, const BetheSolution& target, double tol, int max_steps) {
    BpRun run;
    run.solution = std::move(start);
    run.distance = law_distance(run.solution, target);
    while (run.steps < max_steps && run.distance > tol) {
        run.solution = bp_step(d, lambda, run.solution);
        ++run.steps;
        run.distance = law_distance(run.solution, target);
    }
    run.converged = run.distance <= tol;
    return run;
}

EmpiricalMeasure empirical_measure(int d, double lambda, const BetheSolution& h) {
    check_lambda(lambda);
    if (law_distance(bp_step(d, lambda, h), h) > 1e-9)
        throw std::invalid_argument("empirical_measure needs a Bethe fixed point");
    EmpiricalMeasure m;
    m.d = d;
    m.lambda = lambda;
    const double log_lambda = std::log(lambda);
    Law log_hat;
    for (int i = 0; i < kAlphabetSize; ++i) log_hat[i] = std::log(h.h_hat[i]);

    auto add = [&](VarKind kind, int k, int j, double log_count, double log_psi,
                   std::initializer_list<std::pair<int, int>> counts) {
        VariableClass c;
        c.kind = kind;
        c.k = k;
        c.j = j;
        c.log_count = log_count;
        c.log_psi = log_psi;
        for (auto [idx, cnt] : counts) c.letters[idx] += cnt;
        m.classes.push_back(c);
    };
    for (int j = 0; j <= d; ++j)
        add(VarKind::one, 0, j, log_choose(d, j), log_lambda, {{k10, j}, {k1f, d - j}});
    for (int j = 0; j <= d - 1; ++j)
        add(VarKind::free, 1, j, std::log(static_cast<double>(d)) + log_choose(d - 1, j), 0.0,
            {{k11, 1}, {kf0, j}, {kff, d - 1 - j}});
    for (int j = 0; j <= d - 2; ++j)
        add(VarKind::susceptible, 2, j, log_choose(d, 2) + log_choose(d - 2, j), 0.0,
            {{kf1, 2}, {k00, j}, {k0f, d - 2 - j}});
    for (int k = 3; k <= d; ++k)
        for (int j = 0; j <= d - k; ++j)
            add(VarKind::robust, k, j,
                std::lgamma(d + 1.0) - std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(d - k - j + 1.0),
                0.0, {{k01, k}, {k00, j}, {k0f, d - k - j}});

    std::vector<double> logw(m.classes.size());
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        double lw = m.classes[c].log_count + m.classes[c].log_psi;
        for (int i = 0; i < kAlphabetSize; ++i)
            if (m.classes[c].letters[i]) lw += m.classes[c].letters[i] * log_hat[i];
        logw[c] = lw;
    }
    m.log_z_dot_bar = logsumexp(logw);
    m.z_dot_bar = std::exp(m.log_z_dot_bar);
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        auto& cls = m.classes[c];
        cls.prob = std::exp(logw[c] - m.log_z_dot_bar);
        if (cls.kind == VarKind::one) m.p_one += cls.prob;
        if (cls.kind == VarKind::free) m.p_free += cls.prob;
    }
    m.intensity = m.p_one + 0.5 * m.p_free;

    double zc = 0.0, ze = 0.0;
    for (int i = 0; i < kAlphabetSize; ++i) {
        m.clause_log_psi[i] = i == k11 ? log_lambda : 0.0;
        m.clause[i] = std::exp(m.clause_log_psi[i]) * h.h_dot[i] * h.h_dot[kReflect[i]];
        m.edge[i] = h.h_hat[i] * h.h_dot[i];
        zc += m.clause[i];
        ze += m.edge[i];
    }
    for (int i = 0; i < kAlphabetSize; ++i) {
        m.clause[i] /= zc;
        m.edge[i] /= ze;
    }
    m.z_hat_bar = zc;
    m.z_bar = ze;
    m.edge_intensity = m.edge[k10] + m.edge[k1f] + 0.5 * d * m.edge[k11];
    return m;
}

ClosedFormNormalizers closed_form_normalizers(int d, double lambda) {
    const FrozenFixedPoint fp = solve_q(d, lambda);
    const double q = fp.q_one;
    const double t = 1.0 - 1.0 / lambda;
    const double z_hat = 1.0 / (1.0 - q * t / 3.0);
    ClosedFormNormalizers c;
    c.z_dot_bar = std::exp(-d * std::log(3.0)) * (1.0 + (lambda - 1.0) * pow1m(q, d));
    c.z_bar = z_hat / 9.0 * (1.0 - q * q * t);
    c.z_hat_bar = c.z_bar * z_hat;
    c.p_one = q * (1.0 - q) / (1.0 - q * q * t);
    return c;
}

FreeEnergy bethe_free_energy(int d, const EmpiricalMeasure& m, double lambda) {
    FreeEnergy fe;
    double var = 0.0;
    for (const auto& c : m.classes) {
        if (c.prob <= 0.0) continue;
        if (!std::isfinite(c.log_psi)) throw std::invalid_argument("measure charges a forbidden variable class");
        var += c.prob * (c.log_psi + c.log_count - std::log(c.prob));
    }
    double cla = 0.0, edg = 0.0;
    for (int i = 0; i < kAlphabetSize; ++i) {
        if (m.clause[i] > 0.0) {
            if (!std::isfinite(m.clause_log_psi[i])) throw std::invalid_argument("measure charges a forbidden clause");
            cla += m.clause[i] * (m.clause_log_psi[i] - std::log(m.clause[i]));
        }
        if (m.edge[i] > 0.0) edg += m.edge[i] * std::log(m.edge[i]);
    }
    fe.long_form = var + 0.5 * d * cla + d * edg;
    fe.shortcut = m.log_z_dot_bar + 0.5 * d * std::log(m.z_hat_bar) - d * std::log(m.z_bar);
    fe.alpha = m.intensity;
    fe.phi_star = fe.long_form - fe.alpha * std::log(lambda);
    return fe;
}

double product_free_energy(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.d != b.d) throw std::invalid_argument("product measure needs equal degrees");
    const int d = a.d;
    double var = 0.0;
    for (const auto& ca : a.classes) {
        if (ca.prob <= 0.0) continue;
        for (const auto& cb : b.classes) {
            const double p = ca.prob * cb.prob;
            if (p <= 0.0) continue;
            var += p * (ca.log_psi + cb.log_psi + ca.log_count + cb.log_count - std::log(p));
        }
    }
    double cla = 0.0, edg = 0.0;
    for (int i = 0; i < kAlphabetSize; ++i) {
        for (int j = 0; j < kAlphabetSize; ++j) {
            const double pc = a.clause[i] * b.clause[j];
            if (pc > 0.0) cla += pc * (a.clause_log_psi[i] + b.clause_log_psi[j] - std::log(pc));
            const double pe = a.edge[i] * b.edge[j];
            if (pe > 0.0) edg += pe * std::log(pe);
        }
    }
    return var + 0.5 * d * cla + d * edg;
}

namespace {

constexpr int s0 = 0, s1 = 1, sf = 2;
constexpr int at(int x, int y) { return 3 * x + y; }

}  // namespace

PairLaw pair_product(const FrozenFixedPoint& a, const FrozenFixedPoint& b) {
    const std::array<double, 3> qa = {a.q_zero, a.q_one, a.q_free};
    const std::array<double, 3> qb = {b.q_zero, b.q_one, b.q_free};
    PairLaw p;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) p.q[at(x, y)] = qa[x] * qb[y];
    const double na = 1.0 + (a.lambda - 1.0) * pow1m(a.q_one, a.d - 1.0);
    const double nb = 1.0 + (b.lambda - 1.0) * pow1m(b.q_one, b.d - 1.0);
    p.z = na * nb;
    return p;
}

PairLaw pair_map(int d, const FrozenFixedPoint& a, const FrozenFixedPoint& b, const Law& q) {
    const double l1 = a.lambda, l2 = b.lambda;
    const double zz = q[at(s0, s0)] + q[at(s0, sf)] + q[at(sf, s0)] + q[at(sf, sf)];
    const double z1 = q[at(s0, s1)] + q[at(sf, s1)];
    const double one_z = q[at(s1, s0)] + q[at(s1, sf)];
    const double a1 = pow1m(a.q_one, d - 1.0);
    const double a2 = pow1m(b.q_one, d - 1.0);
    const double m = d - 1.0;
    PairLaw out;
    out.z = 1.0 + (l1 - 1.0) * a1 + (l2 - 1.0) * a2 + (l1 - 1.0) * (l2 - 1.0) * std::pow(zz, m);
    Law& n = out.q;
    n[at(s1, s1)] = l1 * l2 * std::pow(zz, m) / out.z;
    n[at(s1, sf)] = l1 * m * z1 * std::pow(zz, m - 1.0) / out.z;
    n[at(sf, s1)] = l2 * m * one_z * std::pow(zz, m - 1.0) / out.z;
    n[at(sf, sf)] =
        (m * q[at(s1, s1)] * std::pow(zz, m - 1.0) + m * (m - 1.0) * one_z * z1 * std::pow(zz, m - 2.0)) / out.z;
    n[at(s1, s0)] = a.q_one - n[at(s1, s1)] - n[at(s1, sf)];
    n[at(s0, s1)] = b.q_one - n[at(s1, s1)] - n[at(sf, s1)];
    n[at(sf, s0)] = a.q_free - n[at(sf, s1)] - n[at(sf, sf)];
    n[at(s0, sf)] = b.q_free - n[at(s1, sf)] - n[at(sf, sf)];
    n[at(s0, s0)] = a.q_zero - n[at(s0, s1)] - n[at(s0, sf)];
    return out;
}

double pair_residual(int d, const FrozenFixedPoint& a, const FrozenFixedPoint& b, const Law& q) {
    const PairLaw next = pair_map(d, a, b, q);
    double r = 0.0;
    for (int i = 0; i < kAlphabetSize; ++i) r = std::max(r, std::abs(next.q[i] - q[i]));
    return r;
}

PairLaw pair_solve(int d, double lambda1, double lambda2, const Law& init) {
    const FrozenFixedPoint a = solve_q(d, lambda1);
    const FrozenFixedPoint b = solve_q(d, lambda2);
    const std::array<double, 3> qa = {a.q_zero, a.q_one, a.q_free};
    const std::array<double, 3> qb = {b.q_zero, b.q_one, b.q_free};
    for (int x = 0; x < 3; ++x) {
        const double row = init[at(x, 0)] + init[at(x, 1)] + init[at(x, 2)];
        const double col = init[at(0, x)] + init[at(1, x)] + init[at(2, x)];
        if (std::abs(row - qa[x]) > 1e-9 || std::abs(col - qb[x]) > 1e-9)
            throw std::invalid_argument("pair_solve init must carry the single-copy marginals");
    }
    constexpr double kDamping = 0.5;
    constexpr int kPatience = 10000;
    constexpr double kTol = 1e-13;
    PairLaw cur;
    cur.q = init;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    for (int it = 0;; ++it) {
        const PairLaw next = pair_map(d, a, b, cur.q);
        double r = 0.0;
        for (int i = 0; i < kAlphabetSize; ++i) r = std::max(r, std::abs(next.q[i] - cur.q[i]));
        cur.residual = r;
        cur.z = next.z;
        cur.iterations = it;
        if (r <= kTol) return cur;
        if (r < best) {
            best = r;
            since_best = 0;
        } else if (++since_best >= kPatience) {
            throw std::runtime_error("pair recursion residual stalled at " + std::to_string(best));
        }
        for (int i = 0; i < kAlphabetSize; ++i) cur.q[i] = (1.0 - kDamping) * cur.q[i] + kDamping * next.q[i];
    }
}

PairUniqueness pair_uniqueness(int d, const FrozenFixedPoint& a, const FrozenFixedPoint& b, double x) {
    const double l1 = a.lambda, l2 = b.lambda;
    const double base = 1.0 + (l1 - 1.0) * pow1m(a.q_one, d - 1.0) + (l2 - 1.0) * pow1m(b.q_one, d - 1.0);
    const double w = 1.0 - a.q_one - b.q_one + x;
    const double cross = (l1 - 1.0) * (l2 - 1.0);
    const double bracket = l1 * l2 - x * cross;
    PairUniqueness u;
    u.f = x * base - std::pow(w, d - 1.0) * bracket;
    u.fprime = base - std::pow(w, d - 2.0) * ((d - 1.0) * bracket - w * cross);
    return u;
}

}  // namespace frozen
