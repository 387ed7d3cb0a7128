#pragma once

#include <variant>

#include "dpml/descriptors.hpp"
#include "dpml/model_single.hpp"
#include "dpml/tensor.hpp"

namespace dpml {

/// CP network: y = U_C^T ((U_D x) o (U_B z)), shared rank K.
struct CPModel {
    Matrix U_D;  // K x D
    Matrix U_C;  // K x C
    Matrix U_B;  // K x B
    DomainSchema schema;

    std::size_t rank() const { return U_D.rows(); }
    std::size_t feature_dim() const { return U_D.cols(); }
    std::size_t class_count() const { return U_C.cols(); }
    std::size_t descriptor_dim() const { return U_B.cols(); }
};

/// Tucker network: y = ((U_D x) kron (U_B z)) S_(2)^T U_C.
/// Frozen flags mark constant factors (identity core etc. from conversions)
/// that the trainer must not update.
struct TuckerModel {
    Tensor3 S;   // K_D x K_C x K_B
    Matrix U_D;  // K_D x D
    Matrix U_C;  // K_C x C
    Matrix U_B;  // K_B x B
    DomainSchema schema;
    bool frozen_S = false;
    bool frozen_U_D = false;
    bool frozen_U_C = false;
    bool frozen_U_B = false;

    std::size_t feature_dim() const { return U_D.cols(); }
    std::size_t class_count() const { return U_C.cols(); }
    std::size_t descriptor_dim() const { return U_B.cols(); }
};

/// Tensor-train network: y = ((U_D^T x) kron (U_B z)) S_(2)^T.
/// Note U_D is D x K_D here, transposed relative to CP/Tucker.
struct TTModel {
    Matrix U_D;  // D x K_D
    Tensor3 S;   // K_D x C x K_B
    Matrix U_B;  // K_B x B
    DomainSchema schema;

    std::size_t feature_dim() const { return U_D.rows(); }
    std::size_t class_count() const { return S.dim2(); }
    std::size_t descriptor_dim() const { return U_B.cols(); }
};

/// Unfactorized reference: the full weight-generating tensor.
struct FullTensorModel {
    Tensor3 W;  // D x C x B
    DomainSchema schema;

    std::size_t feature_dim() const { return W.dim1(); }
    std::size_t class_count() const { return W.dim2(); }
    std::size_t descriptor_dim() const { return W.dim3(); }
};

using MultiModel = std::variant<CPModel, TuckerModel, TTModel, FullTensorModel>;

Vector predict_cp(const CPModel& m, const Vector& x, const Descriptor& z);
Vector predict_tucker(const TuckerModel& m, const Vector& x, const Descriptor& z);
Vector predict_tt(const TTModel& m, const Vector& x, const Descriptor& z);
Vector predict_full(const FullTensorModel& m, const Vector& x, const Descriptor& z);

/// Dispatch over the active variant.
Vector predict(const MultiModel& m, const Vector& x, const Descriptor& z);

/// Per-domain weight matrix W(z) of size D x C, so that
/// predict(m, x, z) == x^T * W(z) for all x.
Matrix generate_weight_matrix(const MultiModel& m, const Descriptor& z);

/// Composed weight-generating tensor (reference path; factorized prediction
/// must agree with mode-product prediction on this tensor).
Tensor3 compose(const CPModel& m);
Tensor3 compose(const TuckerModel& m);
Tensor3 compose(const TTModel& m);

/// Tucker-unification conversions. Constant factors in the result are
/// flagged frozen; the converted model reproduces the source's predictions.
TuckerModel to_tucker(const CPModel& m);
TuckerModel to_tucker(const TTModel& m);
TuckerModel to_tucker(const SingleOutputModel& m);

}  // namespace dpml
