#include "frozen/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frozen {

using namespace letter;

TransitionMatrix build_M(int d, const FrozenFixedPoint& fp) {
    if (d < 3) throw std::domain_error("build_M needs d >= 3");
    TransitionMatrix t;
    t.d = d;
    t.fixed_point = fp;
    const double q0 = fp.q_zero, q1 = fp.q_one, qf = fp.q_free;
    const double r = 1.0 / (d - 1.0);
    const double s = (d - 2.0) / (d - 1.0);
    const double p0 = q0 / (1.0 - q1);
    const double pf = qf / (1.0 - q1);
    const double eps = s * q1 * qf / ((1.0 - q1) * q0);
    t.epsilon = eps;
    Matrix9& m = t.entries;

    for (int row : kBlockOne) {
        m(row, k10) = p0;
        m(row, k1f) = pf;
    }

    m(k11, kf0) = p0;
    m(k11, kff) = pf;
    for (int row : {kf0, kff}) {
        m(row, k11) = r;
        m(row, kf0) = s * p0;
        m(row, kff) = s * pf;
    }

    m(kf1, kf1) = r;
    m(kf1, k00) = s * p0;
    m(kf1, k0f) = s * pf;
    m(k01, k01) = eps + q1 * (1.0 - eps);
    m(k01, k00) = q0 * (1.0 - eps);
    m(k01, k0f) = qf * (1.0 - eps);
    for (int row : {k00, k0f}) {
        m(row, kf1) = eps;
        m(row, k01) = q1 * (1.0 - eps);
        m(row, k00) = q0 * (1.0 - eps);
        m(row, k0f) = qf * (1.0 - eps);
    }
    return t;
}

Law symmetric_edge_marginal(const FrozenFixedPoint& fp) {
    const std::array<double, 3> q = {fp.q_zero, fp.q_one, fp.q_free};
    Law h{};
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const int i = 3 * a + b;
            h[i] = q[a] * q[b] / (i == k11 ? fp.lambda : 1.0);
            total += h[i];
        }
    }
    for (double& x : h) x /= total;
    return h;
}

Law xbar(int d) {
    Law x{};
    x[k11] = d - 1.0;
    x[kf0] = -1.0;
    x[kff] = -1.0;
    return x;
}

double xbar_residual(const TransitionMatrix& m) {
    const Law x = xbar(m.d);
    Eigen::Matrix<double, 9, 1> v;
    for (int i = 0; i < 9; ++i) v(i) = x[i];
    const Eigen::Matrix<double, 9, 1> r = v + (m.d - 1.0) * (m.entries * v);
    return r.cwiseAbs().maxCoeff();
}

double reversibility_defect(const TransitionMatrix& m, const Law& h) {
    double worst = 0.0;
    for (int s = 0; s < 9; ++s)
        for (int t = 0; t < 9; ++t)
            worst = std::max(worst, std::abs(h[s] * m.entries(s, t) - h[t] * m.entries(t, s)));
    return worst;
}

namespace {

template <std::size_t N>
std::vector<double> block_eigenvalues(const TransitionMatrix& m, const Law& h, const std::array<int, N>& idx,
                                      double& defect) {
    Eigen::Matrix<double, N, N> b;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            b(i, j) = std::sqrt(h[idx[i]]) * m.entries(idx[i], idx[j]) / std::sqrt(h[idx[j]]);
    defect = std::max(defect, (b - b.transpose()).cwiseAbs().maxCoeff());
    const Eigen::Matrix<double, N, N> sym = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + N);
    return out;
}

}  // namespace

SpectrumReport spectrum(const TransitionMatrix& m, int d) {
    const Law h = symmetric_edge_marginal(m.fixed_point);
    SpectrumReport r;
    r.block_one = block_eigenvalues(m, h, kBlockOne, r.symmetrization_defect);
    r.block_free = block_eigenvalues(m, h, kBlockFree, r.symmetrization_defect);
    r.block_zero = block_eigenvalues(m, h, kBlockZero, r.symmetrization_defect);
    for (const auto* blk : {&r.block_one, &r.block_free, &r.block_zero})
        r.eigenvalues.insert(r.eigenvalues.end(), blk->begin(), blk->end());
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });

    std::vector<double> z = r.block_zero;
    auto drop_nearest = [&z](double target) {
        auto it = std::min_element(z.begin(), z.end(), [target](double a, double b) {
            return std::abs(a - target) < std::abs(b - target);
        });
        z.erase(it);
    };
    drop_nearest(1.0);
    drop_nearest(0.0);
    if (std::abs(z[0]) > std::abs(z[1])) std::swap(z[0], z[1]);
    r.lambda1 = z[0];
    r.lambda2 = z[1];

    Eigen::Matrix4d m0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m0(i, j) = m.entries(kBlockZero[i], kBlockZero[j]);
    r.det_shift = (m0 - Eigen::Matrix4d::Identity() / (d - 1.0)).determinant();

    const QdotSpectrum qs = qdot_spectrum(d, drop_kernel_eigenvalue(d, r.eigenvalues));
    r.qdot_eigenvalues = qs.values;
    r.qdot_singular = qs.singular;
    return r;
}

std::vector<double> drop_kernel_eigenvalue(int d, const std::vector<double>& eigenvalues) {
    const double k = -1.0 / (d - 1.0);
    std::vector<double> out = eigenvalues;
    auto it = std::min_element(out.begin(), out.end(),
                               [k](double a, double b) { return std::abs(a - k) < std::abs(b - k); });
    if (it == out.end() || std::abs(*it - k) > 1e-9) throw std::invalid_argument("no -1/(d-1) eigenvalue to drop");
    out.erase(it);
    return out;
}

QdotSpectrum qdot_spectrum(int d, const std::vector<double>& eigenvalues) {
    const double k = -1.0 / (d - 1.0);
    QdotSpectrum q;
    for (double lam : eigenvalues) {
        if (std::abs(lam - k) <= 1e-10) throw std::invalid_argument("-1/(d-1) must be excluded");
        const double v = d / (1.0 + (d - 1.0) * lam) - 0.5 * d;
        if (std::abs(v) <= 1e-10) q.singular = true;
        q.values.push_back(v);
    }
    return q;
}

RestrictedHessian restricted_hessian_check(int d, const FrozenFixedPoint& fp, const EmpiricalMeasure& meas) {
    const TransitionMatrix tm = build_M(d, fp);
    Eigen::Matrix<double, 9, 1> hs, hsi, xb;
    const Law x = xbar(d);
    for (int i = 0; i < 9; ++i) {
        if (!(meas.edge[i] > 0.0)) throw std::invalid_argument("edge marginal must be positive");
        hs(i) = std::sqrt(meas.edge[i]);
        hsi(i) = 1.0 / hs(i);
        xb(i) = x[i];
    }
    Matrix9 s = hs.asDiagonal() * (Matrix9::Identity() + (d - 1.0) * tm.entries) * hsi.asDiagonal() / d;
    RestrictedHessian out;
    out.symmetry_defect = (s - s.transpose()).cwiseAbs().maxCoeff();
    s = 0.5 * (s + s.transpose());

    const Eigen::Matrix<double, 9, 1> v = hs.cwiseProduct(xb).normalized();
    Eigen::HouseholderQR<Eigen::Matrix<double, 9, 1>> qr(v);
    const Matrix9 qfull = qr.householderQ() * Matrix9::Identity();
    const Eigen::Matrix<double, 9, 8> u = qfull.rightCols<8>();

    const Eigen::Matrix<double, 8, 8> inner = u.transpose() * s * u;
    Eigen::Matrix<double, 8, 8> qdot = inner.inverse() - 0.5 * d * Eigen::Matrix<double, 8, 8>::Identity();
    qdot = 0.5 * (qdot + qdot.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> qes(qdot, Eigen::EigenvaluesOnly);
    out.qdot_constructed.assign(qes.eigenvalues().data(), qes.eigenvalues().data() + 8);

    Eigen::Matrix<double, 6, 9> c = Eigen::Matrix<double, 6, 9>::Zero();
    c.row(0).setOnes();
    c(1, k01) = 1.0;
    c(1, k10) = -1.0;
    c(2, k0f) = 1.0;
    c(2, kf0) = -1.0;
    c(3, k1f) = 1.0;
    c(3, kf1) = -1.0;
    c(4, k10) = 1.0;
    c(4, k1f) = 1.0;
    c(4, k11) = 0.5 * d;
    c.row(5) = xb.transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 9>> svd(c, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-12 * sv(0)) ++rank;
    if (rank != 6) throw std::runtime_error("constraint rows are rank deficient");
    const Eigen::Matrix<double, 9, 3> nbasis = svd.matrixV().rightCols<3>();
    out.permissible_dim = 3;

    const Eigen::Matrix<double, 8, 3> b = u.transpose() * hsi.asDiagonal() * nbasis;
    Eigen::Matrix3d form = -(b.transpose() * qdot * b);
    form = 0.5 * (form + form.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> fes(form, Eigen::EigenvaluesOnly);
    out.eigenvalues.assign(fes.eigenvalues().data(), fes.eigenvalues().data() + 3);
    out.max_eigenvalue = out.eigenvalues.back();
    return out;
}

double pair_eigen_gap(int d, const std::vector<double>& eigenvalues) {
    const double target = 1.0 / (d - 1.0);
    double gap = std::numeric_limits<double>::infinity();
    for (double a : eigenvalues)
        for (double b : eigenvalues) gap = std::min(gap, std::abs(a * b - target));
    return gap;
}

}  // namespace frozen
