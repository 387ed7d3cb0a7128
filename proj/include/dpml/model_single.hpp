#pragma once

#include "dpml/descriptors.hpp"
#include "dpml/regularizers.hpp"
#include "dpml/tensor.hpp"

namespace dpml {

/// Bilinear single-output model: weights for a domain are generated as
/// P*Q*z and predictions are x^T*P*Q*z. When fixed_P is set, P is a frozen
/// D x D identity and only Q is trained.
struct SingleOutputModel {
    Matrix P;  // D x K
    Matrix Q;  // K x B
    bool fixed_P = false;
    DomainSchema schema;

    std::size_t feature_dim() const { return P.rows(); }
    std::size_t rank() const { return P.cols(); }
    std::size_t descriptor_dim() const { return Q.cols(); }
};

/// Generated weight vector w = P*Q*z for one domain/task.
Vector generate_weights(const SingleOutputModel& m, const Descriptor& z);

/// Bilinear score x^T*P*Q*z. For binary classification the label is the sign.
double predict(const SingleOutputModel& m, const Vector& x, const Descriptor& z);

/// Rank heuristic K = D / ln(D), rounded to nearest, at least 1.
std::size_t default_rank(std::size_t feature_dim);

enum class MethodPreset { RmtlFeda, Mtfl, Tnmtl, Gomtl, Free };

struct PresetResult {
    SingleOutputModel model;
    Matrix Z;  // B x M descriptor stack
    RegSpec regs;
};

/// Model skeleton, descriptor stack and regularizers for the classic-method
/// presets. `rank` is only consulted for GO-MTL (the other presets force
/// P = identity); `lambda` is applied to every norm the preset prescribes.
PresetResult apply_preset(MethodPreset preset, std::size_t feature_dim,
                          std::size_t domain_count, std::size_t rank = 0,
                          double lambda = 1.0);

}  // namespace dpml
