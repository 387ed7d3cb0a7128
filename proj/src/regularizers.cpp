#include "dpml/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dpml {

SvdResult jacobi_svd(const Matrix& a) {
    // One-sided Jacobi orthogonalizes the columns of a working copy; it
    // needs rows >= cols, so transpose first when necessary and swap the
    // roles of u and v on the way out.
    if (a.rows() < a.cols()) {
        SvdResult r = jacobi_svd(transpose(a));
        return SvdResult{std::move(r.v), std::move(r.s), std::move(r.u)};
    }
    const std::size_t m = a.rows(), n = a.cols();
    Matrix b = a;
    Matrix v = Matrix::identity(n);

    const double eps = 1e-15;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += b(i, p) * b(i, p);
                    beta += b(i, q) * b(i, q);
                    gamma += b(i, p) * b(i, q);
                }
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0)
                    continue;
                rotated = true;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    double bp = b(i, p), bq = b(i, q);
                    b(i, p) = c * bp - s * bq;
                    b(i, q) = s * bp + c * bq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += b(i, j) * b(i, j);
        sigma[j] = std::sqrt(norm);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult res;
    res.u = Matrix(m, n);
    res.v = Matrix(n, n);
    res.s.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = order[j];
        res.s[j] = sigma[src];
        if (sigma[src] > 0.0)
            for (std::size_t i = 0; i < m; ++i) res.u(i, j) = b(i, src) / sigma[src];
        for (std::size_t i = 0; i < n; ++i) res.v(i, j) = v(i, src);
    }
    return res;
}

RegResult reg_value_subgrad(RegKind kind, const Matrix& m, double lambda) {
    if (lambda < 0.0) throw ValueError("regularizer weight must be nonnegative");
    RegResult res;
    res.subgrad = Matrix(m.rows(), m.cols());
    switch (kind) {
        case RegKind::Frobenius: {
            double sq = 0.0;
            for (double x : m.data()) sq += x * x;
            res.value = lambda * sq;
            for (std::size_t i = 0; i < m.size(); ++i)
                res.subgrad.data()[i] = 2.0 * lambda * m.data()[i];
            return res;
        }
        case RegKind::L21: {
            double total = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                double norm = 0.0;
                for (std::size_t j = 0; j < m.cols(); ++j) norm += m(i, j) * m(i, j);
                norm = std::sqrt(norm);
                total += norm;
                if (norm > 0.0)
                    for (std::size_t j = 0; j < m.cols(); ++j)
                        res.subgrad(i, j) = lambda * m(i, j) / norm;
            }
            res.value = lambda * total;
            return res;
        }
        case RegKind::TraceNorm: {
            SvdResult svd = jacobi_svd(m);
            double total = 0.0;
            for (double s : svd.s) total += s;
            res.value = lambda * total;
            // u columns for zero singular values are zero, so this sums
            // only the positive-sigma dyads.
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    double g = 0.0;
                    for (std::size_t k = 0; k < svd.s.size(); ++k)
                        g += svd.u(i, k) * svd.v(j, k);
                    res.subgrad(i, j) = lambda * g;
                }
            return res;
        }
        case RegKind::EntrywiseL1: {
            double total = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
                double x = m.data()[i];
                total += std::abs(x);
                res.subgrad.data()[i] = x > 0.0 ? lambda : x < 0.0 ? -lambda : 0.0;
            }
            res.value = lambda * total;
            return res;
        }
    }
    throw ValueError("unknown regularizer kind");
}

std::string reg_kind_name(RegKind kind) {
    switch (kind) {
        case RegKind::Frobenius: return "frobenius";
        case RegKind::L21: return "l21";
        case RegKind::TraceNorm: return "trace";
        case RegKind::EntrywiseL1: return "l1";
    }
    return "?";
}

RegKind reg_kind_from_name(const std::string& name) {
    if (name == "frobenius") return RegKind::Frobenius;
    if (name == "l21") return RegKind::L21;
    if (name == "trace") return RegKind::TraceNorm;
    if (name == "l1") return RegKind::EntrywiseL1;
    throw ValueError("unknown regularizer kind '" + name + "'");
}

}  // namespace dpml
