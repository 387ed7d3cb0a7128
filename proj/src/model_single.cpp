#include "dpml/model_single.hpp"

#include <cmath>

namespace dpml {

Vector generate_weights(const SingleOutputModel& m, const Descriptor& z) {
    if (z.size() != m.Q.cols())
        throw ShapeError("generate_weights: descriptor length " + std::to_string(z.size()) +
                         " vs Q cols " + std::to_string(m.Q.cols()));
    return matvec(m.P, matvec(m.Q, z.values));
}

double predict(const SingleOutputModel& m, const Vector& x, const Descriptor& z) {
    if (x.size() != m.P.rows())
        throw ShapeError("predict: feature length " + std::to_string(x.size()) +
                         " vs P rows " + std::to_string(m.P.rows()));
    // x^T P, then dot with Qz; avoids forming the D-vector P*Q*z.
    return dot(matvec_t(m.P, x), matvec(m.Q, z.values));
}

std::size_t default_rank(std::size_t feature_dim) {
    if (feature_dim < 2) return 1;
    double k = static_cast<double>(feature_dim) / std::log(static_cast<double>(feature_dim));
    auto r = static_cast<std::size_t>(std::llround(k));
    return r < 1 ? 1 : r;
}

PresetResult apply_preset(MethodPreset preset, std::size_t feature_dim,
                          std::size_t domain_count, std::size_t rank, double lambda) {
    PresetResult res;
    const std::size_t d = feature_dim, m = domain_count;

    auto identity_model = [&](const DomainSchema& schema) {
        SingleOutputModel model;
        model.P = Matrix::identity(d);
        model.fixed_P = true;
        model.Q = Matrix(d, schema.descriptor_length());
        model.schema = schema;
        return model;
    };

    switch (preset) {
        case MethodPreset::RmtlFeda: {
            DomainSchema schema = DomainSchema::one_hot_const(m);
            res.model = identity_model(schema);
            break;
        }
        case MethodPreset::Mtfl: {
            DomainSchema schema = DomainSchema::one_hot(m);
            res.model = identity_model(schema);
            res.regs.push_back({"Q", RegKind::L21, lambda});
            break;
        }
        case MethodPreset::Tnmtl: {
            DomainSchema schema = DomainSchema::one_hot(m);
            res.model = identity_model(schema);
            res.regs.push_back({"Q", RegKind::TraceNorm, lambda});
            break;
        }
        case MethodPreset::Gomtl: {
            DomainSchema schema = DomainSchema::one_hot(m);
            std::size_t k = rank > 0 ? rank : default_rank(d);
            res.model.P = Matrix(d, k);
            res.model.Q = Matrix(k, schema.descriptor_length());
            res.model.fixed_P = false;
            res.model.schema = schema;
            res.regs.push_back({"P", RegKind::Frobenius, lambda});
            res.regs.push_back({"Q", RegKind::EntrywiseL1, lambda});
            break;
        }
        case MethodPreset::Free: {
            DomainSchema schema = DomainSchema::one_hot(m);
            std::size_t k = rank > 0 ? rank : default_rank(d);
            res.model.P = Matrix(d, k);
            res.model.Q = Matrix(k, schema.descriptor_length());
            res.model.fixed_P = false;
            res.model.schema = schema;
            break;
        }
    }

    std::vector<Descriptor> cols;
    for (std::size_t i = 0; i < m; ++i)
        cols.push_back(encode_domain(res.model.schema, i));
    res.Z = build_Z(cols);
    return res;
}

}  // namespace dpml
