#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dpml/model_multi.hpp"
#include "dpml/model_single.hpp"

namespace dpml {

/// Any trainable architecture: the bilinear single-output model, the three
/// tensor networks, or the unfactorized full tensor.
using FactorizedModel =
    std::variant<SingleOutputModel, CPModel, TuckerModel, TTModel, FullTensorModel>;

/// Scores for one instance; single-output models return a length-1 vector.
Vector predict_scores(const FactorizedModel& m, const Vector& x, const Descriptor& z);

std::size_t model_feature_dim(const FactorizedModel& m);
std::size_t model_class_count(const FactorizedModel& m);
std::size_t model_descriptor_dim(const FactorizedModel& m);
const DomainSchema& model_schema(const FactorizedModel& m);
std::string model_kind_name(const FactorizedModel& m);

MultiModel to_multi(const FactorizedModel& m);
FactorizedModel from_multi(const MultiModel& m);

/// Named mutable view of one parameter array. `rows` x `cols` gives the
/// matrix shape used by matrix regularizers (tensor blocks view mode 1 as
/// rows). Frozen blocks are constants: never initialized randomly, never
/// updated, and their gradients are reported as zero.
struct ParamBlock {
    std::string name;
    double* data = nullptr;
    std::size_t size = 0;
    std::size_t rows = 0, cols = 0;
    bool is_tensor = false;
    bool frozen = false;
};

std::vector<ParamBlock> param_blocks(FactorizedModel& m);

/// Seeded initialization: entries i.i.d. uniform in [-s, s] with
/// s = 1/sqrt(fan-in), where fan-in is the size of the input each block
/// contracts against in the forward pass. Frozen blocks are left untouched.
void init_params(FactorizedModel& m, std::uint64_t seed);

// Shape factories (parameters zero until init_params).
SingleOutputModel make_single(std::size_t feature_dim, const DomainSchema& schema,
                              std::size_t rank, bool fixed_p);
CPModel make_cp(std::size_t feature_dim, std::size_t class_count,
                const DomainSchema& schema, std::size_t rank);
TuckerModel make_tucker(std::size_t feature_dim, std::size_t class_count,
                        const DomainSchema& schema, std::size_t rank_d,
                        std::size_t rank_c, std::size_t rank_b);
TTModel make_tt(std::size_t feature_dim, std::size_t class_count,
                const DomainSchema& schema, std::size_t rank_d, std::size_t rank_b);
FullTensorModel make_full(std::size_t feature_dim, std::size_t class_count,
                          const DomainSchema& schema);

}  // namespace dpml
