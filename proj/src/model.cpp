#include "dpml/model.hpp"

#include <cmath>
#include <random>

namespace dpml {

Vector predict_scores(const FactorizedModel& m, const Vector& x, const Descriptor& z) {
    return std::visit(
        [&](const auto& model) -> Vector {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>)
                return Vector{predict(model, x, z)};
            else if constexpr (std::is_same_v<T, CPModel>)
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

std::size_t model_feature_dim(const FactorizedModel& m) {
    return std::visit([](const auto& model) { return model.feature_dim(); }, m);
}

std::size_t model_class_count(const FactorizedModel& m) {
    return std::visit(
        [](const auto& model) -> std::size_t {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>)
                return 1;
            else
                return model.class_count();
        },
        m);
}

std::size_t model_descriptor_dim(const FactorizedModel& m) {
    return std::visit([](const auto& model) { return model.descriptor_dim(); }, m);
}

const DomainSchema& model_schema(const FactorizedModel& m) {
    return std::visit([](const auto& model) -> const DomainSchema& { return model.schema; },
                      m);
}

std::string model_kind_name(const FactorizedModel& m) {
    return std::visit(
        [](const auto& model) -> std::string {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>) return "single";
            else if constexpr (std::is_same_v<T, CPModel>) return "cp";
            else if constexpr (std::is_same_v<T, TuckerModel>) return "tucker";
            else if constexpr (std::is_same_v<T, TTModel>) return "tt";
            else return "full";
        },
        m);
}

MultiModel to_multi(const FactorizedModel& m) {
    return std::visit(
        [](const auto& model) -> MultiModel {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>)
                return to_tucker(model);  // Tucker special case, C = 1
            else
                return model;
        },
        m);
}

FactorizedModel from_multi(const MultiModel& m) {
    return std::visit([](const auto& model) -> FactorizedModel { return model; }, m);
}

std::vector<ParamBlock> param_blocks(FactorizedModel& m) {
    std::vector<ParamBlock> blocks;
    auto add_matrix = [&](const std::string& name, Matrix& mat, bool frozen) {
        blocks.push_back({name, mat.data().data(), mat.size(), mat.rows(), mat.cols(),
                          false, frozen});
    };
    auto add_tensor = [&](const std::string& name, Tensor3& t, bool frozen) {
        blocks.push_back({name, t.data().data(), t.size(), t.dim1(),
                          t.dim2() * t.dim3(), true, frozen});
    };
    std::visit(
        [&](auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>) {
                add_matrix("P", model.P, model.fixed_P);
                add_matrix("Q", model.Q, false);
            } else if constexpr (std::is_same_v<T, CPModel>) {
                add_matrix("U_D", model.U_D, false);
                add_matrix("U_C", model.U_C, false);
                add_matrix("U_B", model.U_B, false);
            } else if constexpr (std::is_same_v<T, TuckerModel>) {
                add_tensor("S", model.S, model.frozen_S);
                add_matrix("U_D", model.U_D, model.frozen_U_D);
                add_matrix("U_C", model.U_C, model.frozen_U_C);
                add_matrix("U_B", model.U_B, model.frozen_U_B);
            } else if constexpr (std::is_same_v<T, TTModel>) {
                add_matrix("U_D", model.U_D, false);
                add_tensor("S", model.S, false);
                add_matrix("U_B", model.U_B, false);
            } else {
                add_tensor("W", model.W, false);
            }
        },
        m);
    return blocks;
}

namespace {

// fan-in of each block: the dimension it contracts against on its input side
std::size_t block_fan_in(const FactorizedModel& m, const std::string& name) {
    return std::visit(
        [&](const auto& model) -> std::size_t {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>) {
                if (name == "P") return model.P.rows();      // contracts x (D)
                return model.Q.cols();                        // contracts z (B)
            } else if constexpr (std::is_same_v<T, CPModel>) {
                if (name == "U_D") return model.U_D.cols();  // D
                if (name == "U_B") return model.U_B.cols();  // B
                return model.U_C.rows();                      // gated vector (K)
            } else if constexpr (std::is_same_v<T, TuckerModel>) {
                if (name == "U_D") return model.U_D.cols();
                if (name == "U_B") return model.U_B.cols();
                if (name == "U_C") return model.U_C.rows();   // core output (K_C)
                return model.S.dim1() * model.S.dim3();       // kron length
            } else if constexpr (std::is_same_v<T, TTModel>) {
                if (name == "U_D") return model.U_D.rows();   // D
                if (name == "U_B") return model.U_B.cols();   // B
                return model.S.dim1() * model.S.dim3();
            } else {
                return model.W.dim1() * model.W.dim3();       // x and z together
            }
        },
        m);
}

}  // namespace

void init_params(FactorizedModel& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& block : param_blocks(m)) {
        if (block.frozen) continue;
        double s = 1.0 / std::sqrt(static_cast<double>(block_fan_in(m, block.name)));
        std::uniform_real_distribution<double> dist(-s, s);
        for (std::size_t i = 0; i < block.size; ++i) block.data[i] = dist(rng);
    }
}

SingleOutputModel make_single(std::size_t feature_dim, const DomainSchema& schema,
                              std::size_t rank, bool fixed_p) {
    SingleOutputModel m;
    m.schema = schema;
    m.fixed_P = fixed_p;
    if (fixed_p) {
        m.P = Matrix::identity(feature_dim);
        m.Q = Matrix(feature_dim, schema.descriptor_length());
    } else {
        if (rank == 0) rank = default_rank(feature_dim);
        m.P = Matrix(feature_dim, rank);
        m.Q = Matrix(rank, schema.descriptor_length());
    }
    return m;
}

CPModel make_cp(std::size_t feature_dim, std::size_t class_count,
                const DomainSchema& schema, std::size_t rank) {
    if (rank < 1) throw ValueError("make_cp: rank must be >= 1");
    CPModel m;
    m.schema = schema;
    m.U_D = Matrix(rank, feature_dim);
    m.U_C = Matrix(rank, class_count);
    m.U_B = Matrix(rank, schema.descriptor_length());
    return m;
}

TuckerModel make_tucker(std::size_t feature_dim, std::size_t class_count,
                        const DomainSchema& schema, std::size_t rank_d,
                        std::size_t rank_c, std::size_t rank_b) {
    if (rank_d < 1 || rank_c < 1 || rank_b < 1)
        throw ValueError("make_tucker: ranks must be >= 1");
    TuckerModel m;
    m.schema = schema;
    m.S = Tensor3(rank_d, rank_c, rank_b);
    m.U_D = Matrix(rank_d, feature_dim);
    m.U_C = Matrix(rank_c, class_count);
    m.U_B = Matrix(rank_b, schema.descriptor_length());
    return m;
}

TTModel make_tt(std::size_t feature_dim, std::size_t class_count,
                const DomainSchema& schema, std::size_t rank_d, std::size_t rank_b) {
    if (rank_d < 1 || rank_b < 1) throw ValueError("make_tt: ranks must be >= 1");
    TTModel m;
    m.schema = schema;
    m.U_D = Matrix(feature_dim, rank_d);
    m.S = Tensor3(rank_d, class_count, rank_b);
    m.U_B = Matrix(rank_b, schema.descriptor_length());
    return m;
}

FullTensorModel make_full(std::size_t feature_dim, std::size_t class_count,
                          const DomainSchema& schema) {
    FullTensorModel m;
    m.schema = schema;
    m.W = Tensor3(feature_dim, class_count, schema.descriptor_length());
    return m;
}

}  // namespace dpml
