#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "dpml/error.hpp"

namespace dpml {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : data_(rows * cols, fill), rows_(rows), cols_(cols) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::vector<double> data_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

/// Dense third-order tensor, index order (i,j,k) with k fastest.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(std::size_t d1, std::size_t d2, std::size_t d3, double fill = 0.0)
        : data_(d1 * d2 * d3, fill), d1_(d1), d2_(d2), d3_(d3) {}

    /// Superdiagonal identity tensor: t[k,k,k] = 1.
    static Tensor3 superdiagonal_identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * d2_ + j) * d3_ + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * d2_ + j) * d3_ + k];
    }

    std::size_t dim1() const { return d1_; }
    std::size_t dim2() const { return d2_; }
    std::size_t dim3() const { return d3_; }
    std::size_t size() const { return data_.size(); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Tensor3& other) const = default;

private:
    std::vector<double> data_;
    std::size_t d1_ = 0;
    std::size_t d2_ = 0;
    std::size_t d3_ = 0;
};

// ---- basic linear algebra ----

double dot(const Vector& u, const Vector& v);

/// m * v (m is rows x cols, v has length cols).
Vector matvec(const Matrix& m, const Vector& v);

/// m^T * v (v has length rows).
Vector matvec_t(const Matrix& m, const Vector& v);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// ---- tensor operations ----

/// Contraction of t with v along `mode` (1, 2 or 3). Result keeps the two
/// remaining dimensions in ascending mode order.
Matrix mode_product(const Tensor3& t, const Vector& v, int mode);

/// Mode-2 unfolding: dim2 x (dim1*dim3) matrix with column index
/// k3*dim1 + k1 (k1 fastest). This matches the ordering of kron(), so
/// kron(a, b) . mode2_unfold(S)^T contracts a against mode 1 and b
/// against mode 3.
Matrix mode2_unfold(const Tensor3& t);

/// Inverse of mode2_unfold given the original dimensions.
Tensor3 mode2_refold(const Matrix& m, std::size_t d1, std::size_t d2, std::size_t d3);

/// Kronecker product with the first argument's index varying fastest:
/// [u1v1, u2v1, ..., u_Ku v1, u1v2, ..., u_Ku v_Kv].
Vector kron(const Vector& u, const Vector& v);

/// Element-wise product of two equal-length vectors.
Vector hadamard(const Vector& u, const Vector& v);

/// Rank-1 tensor t[i,j,k] = a_i b_j c_k.
Tensor3 outer3(const Vector& a, const Vector& b, const Vector& c);

/// CP composition: W[d,c,b] = sum_k U_D[k,d] U_C[k,c] U_B[k,b].
/// Factors share the leading dimension K.
Tensor3 compose_cp(const Matrix& u_d, const Matrix& u_c, const Matrix& u_b);

/// Tucker composition: W = S x1 U_D x2 U_C x3 U_B with S of size
/// (K_D, K_C, K_B) and factors K_D x D, K_C x C, K_B x B.
Tensor3 compose_tucker(const Tensor3& s, const Matrix& u_d, const Matrix& u_c,
                       const Matrix& u_b);

/// Tensor-train composition: W[d,c,b] = sum_{kd,kb} U_D[d,kd] S[kd,c,kb] U_B[kb,b]
/// with U_D of size D x K_D and U_B of size K_B x B.
Tensor3 compose_tt(const Matrix& u_d, const Tensor3& s, const Matrix& u_b);

}  // namespace dpml
