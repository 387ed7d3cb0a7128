#include "dpml/tensor.hpp"

#include <string>

namespace dpml {

namespace {

std::string shape_msg(const std::string& op, const std::string& detail) {
    return op + ": " + detail;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r > 0 ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c)
            throw ShapeError("Matrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Tensor3 Tensor3::superdiagonal_identity(std::size_t n) {
    Tensor3 t(n, n, n);
    for (std::size_t k = 0; k < n; ++k) t(k, k, k) = 1.0;
    return t;
}

double dot(const Vector& u, const Vector& v) {
    if (u.size() != v.size())
        throw ShapeError(shape_msg("dot", "lengths " + std::to_string(u.size()) +
                                   " and " + std::to_string(v.size())));
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

Vector matvec(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols())
        throw ShapeError(shape_msg("matvec", "matrix is " + std::to_string(m.rows()) +
                                   "x" + std::to_string(m.cols()) + ", vector length " +
                                   std::to_string(v.size())));
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Vector matvec_t(const Matrix& m, const Vector& v) {
    if (v.size() != m.rows())
        throw ShapeError(shape_msg("matvec_t", "matrix is " + std::to_string(m.rows()) +
                                   "x" + std::to_string(m.cols()) + ", vector length " +
                                   std::to_string(v.size())));
    Vector out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double vi = v[i];
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += m(i, j) * vi;
    }
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError(shape_msg("matmul", std::to_string(a.rows()) + "x" +
                                   std::to_string(a.cols()) + " times " +
                                   std::to_string(b.rows()) + "x" +
                                   std::to_string(b.cols())));
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

Matrix mode_product(const Tensor3& t, const Vector& v, int mode) {
    std::size_t want = mode == 1 ? t.dim1() : mode == 2 ? t.dim2() : t.dim3();
    if (mode < 1 || mode > 3)
        throw ShapeError("mode_product: mode must be 1, 2 or 3");
    if (v.size() != want)
        throw ShapeError(shape_msg("mode_product",
                                   "mode " + std::to_string(mode) + " expects vector of length " +
                                   std::to_string(want) + ", got " + std::to_string(v.size())));
    if (mode == 1) {
        Matrix out(t.dim2(), t.dim3());
        for (std::size_t i = 0; i < t.dim1(); ++i)
            for (std::size_t j = 0; j < t.dim2(); ++j)
                for (std::size_t k = 0; k < t.dim3(); ++k)
                    out(j, k) += t(i, j, k) * v[i];
        return out;
    }
    if (mode == 2) {
        Matrix out(t.dim1(), t.dim3());
        for (std::size_t i = 0; i < t.dim1(); ++i)
            for (std::size_t j = 0; j < t.dim2(); ++j)
                for (std::size_t k = 0; k < t.dim3(); ++k)
                    out(i, k) += t(i, j, k) * v[j];
        return out;
    }
    Matrix out(t.dim1(), t.dim2());
    for (std::size_t i = 0; i < t.dim1(); ++i)
        for (std::size_t j = 0; j < t.dim2(); ++j)
            for (std::size_t k = 0; k < t.dim3(); ++k)
                out(i, j) += t(i, j, k) * v[k];
    return out;
}

Matrix mode2_unfold(const Tensor3& t) {
    Matrix out(t.dim2(), t.dim1() * t.dim3());
    for (std::size_t i = 0; i < t.dim1(); ++i)
        for (std::size_t j = 0; j < t.dim2(); ++j)
            for (std::size_t k = 0; k < t.dim3(); ++k)
                out(j, k * t.dim1() + i) = t(i, j, k);
    return out;
}

Tensor3 mode2_refold(const Matrix& m, std::size_t d1, std::size_t d2, std::size_t d3) {
    if (m.rows() != d2 || m.cols() != d1 * d3)
        throw ShapeError(shape_msg("mode2_refold",
                                   "matrix " + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()) + " does not refold to " +
                                   std::to_string(d1) + "x" + std::to_string(d2) + "x" +
                                   std::to_string(d3)));
    Tensor3 t(d1, d2, d3);
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            for (std::size_t k = 0; k < d3; ++k)
                t(i, j, k) = m(j, k * d1 + i);
    return t;
}

Vector kron(const Vector& u, const Vector& v) {
    Vector out(u.size() * v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t i = 0; i < u.size(); ++i)
            out[j * u.size() + i] = u[i] * v[j];
    return out;
}

Vector hadamard(const Vector& u, const Vector& v) {
    if (u.size() != v.size())
        throw ShapeError(shape_msg("hadamard", "lengths " + std::to_string(u.size()) +
                                   " and " + std::to_string(v.size())));
    Vector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * v[i];
    return out;
}

Tensor3 outer3(const Vector& a, const Vector& b, const Vector& c) {
    Tensor3 t(a.size(), b.size(), c.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            for (std::size_t k = 0; k < c.size(); ++k)
                t(i, j, k) = a[i] * b[j] * c[k];
    return t;
}

Tensor3 compose_cp(const Matrix& u_d, const Matrix& u_c, const Matrix& u_b) {
    std::size_t k = u_d.rows();
    if (u_c.rows() != k || u_b.rows() != k)
        throw ShapeError(shape_msg("compose_cp",
                                   "leading dims " + std::to_string(u_d.rows()) + ", " +
                                   std::to_string(u_c.rows()) + ", " +
                                   std::to_string(u_b.rows()) + " must match"));
    Tensor3 w(u_d.cols(), u_c.cols(), u_b.cols());
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t d = 0; d < u_d.cols(); ++d)
            for (std::size_t c = 0; c < u_c.cols(); ++c)
                for (std::size_t b = 0; b < u_b.cols(); ++b)
                    w(d, c, b) += u_d(r, d) * u_c(r, c) * u_b(r, b);
    return w;
}

Tensor3 compose_tucker(const Tensor3& s, const Matrix& u_d, const Matrix& u_c,
                       const Matrix& u_b) {
    if (s.dim1() != u_d.rows() || s.dim2() != u_c.rows() || s.dim3() != u_b.rows())
        throw ShapeError(shape_msg("compose_tucker",
                                   "core " + std::to_string(s.dim1()) + "x" +
                                   std::to_string(s.dim2()) + "x" + std::to_string(s.dim3()) +
                                   " vs factor rows " + std::to_string(u_d.rows()) + ", " +
                                   std::to_string(u_c.rows()) + ", " +
                                   std::to_string(u_b.rows())));
    Tensor3 w(u_d.cols(), u_c.cols(), u_b.cols());
    for (std::size_t kd = 0; kd < s.dim1(); ++kd)
        for (std::size_t kc = 0; kc < s.dim2(); ++kc)
            for (std::size_t kb = 0; kb < s.dim3(); ++kb) {
                double sv = s(kd, kc, kb);
                if (sv == 0.0) continue;
                for (std::size_t d = 0; d < w.dim1(); ++d)
                    for (std::size_t c = 0; c < w.dim2(); ++c)
                        for (std::size_t b = 0; b < w.dim3(); ++b)
                            w(d, c, b) += sv * u_d(kd, d) * u_c(kc, c) * u_b(kb, b);
            }
    return w;
}

Tensor3 compose_tt(const Matrix& u_d, const Tensor3& s, const Matrix& u_b) {
    if (u_d.cols() != s.dim1() || s.dim3() != u_b.rows())
        throw ShapeError(shape_msg("compose_tt",
                                   "U_D cols " + std::to_string(u_d.cols()) + " vs core dim1 " +
                                   std::to_string(s.dim1()) + "; core dim3 " +
                                   std::to_string(s.dim3()) + " vs U_B rows " +
                                   std::to_string(u_b.rows())));
    Tensor3 w(u_d.rows(), s.dim2(), u_b.cols());
    for (std::size_t d = 0; d < w.dim1(); ++d)
        for (std::size_t c = 0; c < w.dim2(); ++c)
            for (std::size_t b = 0; b < w.dim3(); ++b) {
                double acc = 0.0;
                for (std::size_t kd = 0; kd < s.dim1(); ++kd)
                    for (std::size_t kb = 0; kb < s.dim3(); ++kb)
                        acc += u_d(d, kd) * s(kd, c, kb) * u_b(kb, b);
                w(d, c, b) = acc;
            }
    return w;
}

}  // namespace dpml
