#include "dpml/model_multi.hpp"

namespace dpml {

namespace {

void check_dims(const char* op, std::size_t x_len, std::size_t d, std::size_t z_len,
                std::size_t b) {
    if (x_len != d)
        throw ShapeError(std::string(op) + ": feature length " + std::to_string(x_len) +
                         " vs D " + std::to_string(d));
    if (z_len != b)
        throw ShapeError(std::string(op) + ": descriptor length " + std::to_string(z_len) +
                         " vs B " + std::to_string(b));
}

}  // namespace

Vector predict_cp(const CPModel& m, const Vector& x, const Descriptor& z) {
    check_dims("predict_cp", x.size(), m.feature_dim(), z.size(), m.descriptor_dim());
    Vector gated = hadamard(matvec(m.U_D, x), matvec(m.U_B, z.values));
    return matvec_t(m.U_C, gated);
}

Vector predict_tucker(const TuckerModel& m, const Vector& x, const Descriptor& z) {
    check_dims("predict_tucker", x.size(), m.feature_dim(), z.size(), m.descriptor_dim());
    Vector k = kron(matvec(m.U_D, x), matvec(m.U_B, z.values));
    // t = S_(2) * k without materializing the unfolding:
    // S_(2)[kc, kb*K_D + kd] = S[kd, kc, kb]
    Vector t(m.S.dim2(), 0.0);
    for (std::size_t kd = 0; kd < m.S.dim1(); ++kd)
        for (std::size_t kc = 0; kc < m.S.dim2(); ++kc)
            for (std::size_t kb = 0; kb < m.S.dim3(); ++kb)
                t[kc] += m.S(kd, kc, kb) * k[kb * m.S.dim1() + kd];
    return matvec_t(m.U_C, t);
}

Vector predict_tt(const TTModel& m, const Vector& x, const Descriptor& z) {
    check_dims("predict_tt", x.size(), m.feature_dim(), z.size(), m.descriptor_dim());
    Vector k = kron(matvec_t(m.U_D, x), matvec(m.U_B, z.values));
    Vector y(m.S.dim2(), 0.0);
    for (std::size_t kd = 0; kd < m.S.dim1(); ++kd)
        for (std::size_t c = 0; c < m.S.dim2(); ++c)
            for (std::size_t kb = 0; kb < m.S.dim3(); ++kb)
                y[c] += m.S(kd, c, kb) * k[kb * m.S.dim1() + kd];
    return y;
}

Vector predict_full(const FullTensorModel& m, const Vector& x, const Descriptor& z) {
    check_dims("predict_full", x.size(), m.feature_dim(), z.size(), m.descriptor_dim());
    // W x1 x x3 z
    Matrix xz = mode_product(m.W, x, 1);  // C x B
    return matvec(xz, z.values);
}

Vector predict(const MultiModel& m, const Vector& x, const Descriptor& z) {
    return std::visit(
        [&](const auto& model) -> Vector {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, CPModel>)
                return predict_cp(model, x, z);
            else if constexpr (std::is_same_v<T, TuckerModel>)
                return predict_tucker(model, x, z);
            else if constexpr (std::is_same_v<T, TTModel>)
                return predict_tt(model, x, z);
            else
                return predict_full(model, x, z);
        },
        m);
}

Matrix generate_weight_matrix(const MultiModel& m, const Descriptor& z) {
    return std::visit(
        [&](const auto& model) -> Matrix {
            using T = std::decay_t<decltype(model)>;
            if (z.size() != model.descriptor_dim())
                throw ShapeError("generate_weight_matrix: descriptor length " +
                                 std::to_string(z.size()) + " vs B " +
                                 std::to_string(model.descriptor_dim()));
            Vector b;
            if constexpr (!std::is_same_v<T, FullTensorModel>)
                b = matvec(model.U_B, z.values);
            if constexpr (std::is_same_v<T, CPModel>) {
                // U_D^T diag(U_B z) U_C
                Matrix w(model.feature_dim(), model.class_count());
                for (std::size_t k = 0; k < model.rank(); ++k)
                    for (std::size_t d = 0; d < w.rows(); ++d)
                        for (std::size_t c = 0; c < w.cols(); ++c)
                            w(d, c) += model.U_D(k, d) * b[k] * model.U_C(k, c);
                return w;
            } else if constexpr (std::is_same_v<T, TuckerModel>) {
                // U_D^T (S x3 (U_B z)) U_C
                Matrix core = mode_product(model.S, b, 3);  // K_D x K_C
                return matmul(matmul(transpose(model.U_D), core), model.U_C);
            } else if constexpr (std::is_same_v<T, TTModel>) {
                // U_D (S x3 (U_B z))
                Matrix core = mode_product(model.S, b, 3);  // K_D x C
                return matmul(model.U_D, core);
            } else {
                return mode_product(model.W, z.values, 3);  // D x C slice/mix
            }
        },
        m);
}

Tensor3 compose(const CPModel& m) { return compose_cp(m.U_D, m.U_C, m.U_B); }

Tensor3 compose(const TuckerModel& m) {
    return compose_tucker(m.S, m.U_D, m.U_C, m.U_B);
}

Tensor3 compose(const TTModel& m) { return compose_tt(m.U_D, m.S, m.U_B); }

TuckerModel to_tucker(const CPModel& m) {
    TuckerModel t;
    t.S = Tensor3::superdiagonal_identity(m.rank());
    t.U_D = m.U_D;
    t.U_C = m.U_C;
    t.U_B = m.U_B;
    t.schema = m.schema;
    t.frozen_S = true;
    return t;
}

TuckerModel to_tucker(const TTModel& m) {
    TuckerModel t;
    t.S = m.S;  // K_D x C x K_B core doubles as the Tucker core with K_C = C
    t.U_D = transpose(m.U_D);
    t.U_C = Matrix::identity(m.class_count());
    t.U_B = m.U_B;
    t.schema = m.schema;
    t.frozen_U_C = true;
    return t;
}

TuckerModel to_tucker(const SingleOutputModel& m) {
    TuckerModel t;
    std::size_t k = m.rank();
    t.S = Tensor3::superdiagonal_identity(k);
    t.U_D = transpose(m.P);
    t.U_C = Matrix(k, 1, 1.0);  // all-ones vector
    t.U_B = m.Q;
    t.schema = m.schema;
    t.frozen_S = true;
    t.frozen_U_C = true;
    return t;
}

}  // namespace dpml
