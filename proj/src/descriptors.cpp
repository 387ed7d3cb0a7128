#include "dpml/descriptors.hpp"

#include <algorithm>

namespace dpml {

DomainSchema DomainSchema::one_hot(std::size_t domain_count) {
    if (domain_count < 1) throw ValueError("DomainSchema: domain_count must be >= 1");
    DomainSchema s;
    s.mode_ = SchemaMode::OneHot;
    s.domain_count_ = domain_count;
    return s;
}

DomainSchema DomainSchema::one_hot_const(std::size_t domain_count) {
    if (domain_count < 1) throw ValueError("DomainSchema: domain_count must be >= 1");
    DomainSchema s;
    s.mode_ = SchemaMode::OneHotConst;
    s.domain_count_ = domain_count;
    return s;
}

DomainSchema DomainSchema::distributed(std::vector<Factor> factors, bool append_constant) {
    if (factors.empty())
        throw ValueError("DomainSchema: distributed schema needs at least one factor");
    for (const auto& f : factors) {
        if (f.states.empty())
            throw ValueError("DomainSchema: factor '" + f.name + "' has no states");
    }
    DomainSchema s;
    s.mode_ = SchemaMode::Distributed;
    s.factors_ = std::move(factors);
    s.append_constant_ = append_constant;
    return s;
}

std::size_t DomainSchema::domain_count() const {
    if (mode_ != SchemaMode::Distributed) return domain_count_;
    std::size_t m = 1;
    for (const auto& f : factors_) m *= f.states.size();
    return m;
}

std::size_t DomainSchema::descriptor_length() const {
    switch (mode_) {
        case SchemaMode::OneHot: return domain_count_;
        case SchemaMode::OneHotConst: return domain_count_ + 1;
        case SchemaMode::Distributed: {
            std::size_t b = 0;
            for (const auto& f : factors_) b += f.states.size();
            return b + (append_constant_ ? 1 : 0);
        }
    }
    return 0;
}

namespace {

bool is_zero_or_one(double v) { return v == 0.0 || v == 1.0; }

void validate(const DomainSchema& schema, const Vector& values) {
    if (values.size() != schema.descriptor_length())
        throw ValueError("Descriptor: expected length " +
                         std::to_string(schema.descriptor_length()) + ", got " +
                         std::to_string(values.size()));
    for (double v : values)
        if (!is_zero_or_one(v))
            throw ValueError("Descriptor: entries must be 0 or 1");

    auto ones_in = [&](std::size_t begin, std::size_t end) {
        std::size_t n = 0;
        for (std::size_t i = begin; i < end; ++i) n += values[i] == 1.0;
        return n;
    };

    switch (schema.mode()) {
        case SchemaMode::OneHot:
            if (ones_in(0, values.size()) != 1)
                throw ValueError("Descriptor: one-hot must have exactly one 1");
            break;
        case SchemaMode::OneHotConst:
            if (values.back() != 1.0 || ones_in(0, values.size() - 1) != 1)
                throw ValueError(
                    "Descriptor: one-hot+constant must have one 1 plus trailing 1");
            break;
        case SchemaMode::Distributed: {
            std::size_t off = 0;
            for (const auto& f : schema.factors()) {
                if (ones_in(off, off + f.states.size()) != 1)
                    throw ValueError("Descriptor: factor '" + f.name +
                                     "' block must have exactly one 1");
                off += f.states.size();
            }
            if (schema.append_constant() && values.back() != 1.0)
                throw ValueError("Descriptor: constant entry must be 1");
            break;
        }
    }
}

}  // namespace

Descriptor::Descriptor(DomainSchema schema_in, Vector values_in)
    : schema(std::move(schema_in)), values(std::move(values_in)) {
    validate(schema, values);
}

Descriptor encode_one_hot(const DomainSchema& schema, std::size_t index) {
    if (schema.mode() != SchemaMode::OneHot)
        throw ValueError("encode_one_hot: schema is not one-hot");
    if (index >= schema.domain_count())
        throw ValueError("encode_one_hot: index " + std::to_string(index) +
                         " out of range [0, " + std::to_string(schema.domain_count()) + ")");
    Vector v(schema.descriptor_length(), 0.0);
    v[index] = 1.0;
    return Descriptor(schema, std::move(v));
}

Descriptor encode_one_hot_const(const DomainSchema& schema, std::size_t index) {
    if (schema.mode() != SchemaMode::OneHotConst)
        throw ValueError("encode_one_hot_const: schema is not one-hot+constant");
    if (index >= schema.domain_count())
        throw ValueError("encode_one_hot_const: index " + std::to_string(index) +
                         " out of range [0, " + std::to_string(schema.domain_count()) + ")");
    Vector v(schema.descriptor_length(), 0.0);
    v[index] = 1.0;
    v.back() = 1.0;
    return Descriptor(schema, std::move(v));
}

Descriptor encode_distributed_indices(const DomainSchema& schema,
                                      const std::vector<std::size_t>& state_indices) {
    if (schema.mode() != SchemaMode::Distributed)
        throw ValueError("encode_distributed: schema is not distributed");
    const auto& factors = schema.factors();
    if (state_indices.size() != factors.size())
        throw ValueError("encode_distributed: expected " + std::to_string(factors.size()) +
                         " states, got " + std::to_string(state_indices.size()));
    Vector v(schema.descriptor_length(), 0.0);
    std::size_t off = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (state_indices[f] >= factors[f].states.size())
            throw ValueError("encode_distributed: state index " +
                             std::to_string(state_indices[f]) + " out of range for factor '" +
                             factors[f].name + "'");
        v[off + state_indices[f]] = 1.0;
        off += factors[f].states.size();
    }
    if (schema.append_constant()) v.back() = 1.0;
    return Descriptor(schema, std::move(v));
}

Descriptor encode_distributed(const DomainSchema& schema,
                              const std::vector<std::string>& states) {
    if (schema.mode() != SchemaMode::Distributed)
        throw ValueError("encode_distributed: schema is not distributed");
    const auto& factors = schema.factors();
    if (states.size() != factors.size())
        throw ValueError("encode_distributed: expected " + std::to_string(factors.size()) +
                         " states, got " + std::to_string(states.size()));
    std::vector<std::size_t> idx(states.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
        auto it = std::find(factors[f].states.begin(), factors[f].states.end(), states[f]);
        if (it == factors[f].states.end())
            throw ValueError("encode_distributed: unknown state '" + states[f] +
                             "' for factor '" + factors[f].name + "'");
        idx[f] = static_cast<std::size_t>(it - factors[f].states.begin());
    }
    return encode_distributed_indices(schema, idx);
}

Descriptor encode_domain(const DomainSchema& schema, std::size_t index) {
    switch (schema.mode()) {
        case SchemaMode::OneHot: return encode_one_hot(schema, index);
        case SchemaMode::OneHotConst: return encode_one_hot_const(schema, index);
        case SchemaMode::Distributed: {
            if (index >= schema.domain_count())
                throw ValueError("encode_domain: index " + std::to_string(index) +
                                 " out of range [0, " +
                                 std::to_string(schema.domain_count()) + ")");
            // Factorial enumeration, last factor fastest.
            const auto& factors = schema.factors();
            std::vector<std::size_t> idx(factors.size());
            std::size_t rem = index;
            for (std::size_t f = factors.size(); f-- > 0;) {
                idx[f] = rem % factors[f].states.size();
                rem /= factors[f].states.size();
            }
            return encode_distributed_indices(schema, idx);
        }
    }
    throw ValueError("encode_domain: unknown schema mode");
}

std::vector<std::size_t> decode_states(const Descriptor& d) {
    if (d.schema.mode() != SchemaMode::Distributed)
        throw ValueError("decode_states: schema is not distributed");
    std::vector<std::size_t> idx;
    std::size_t off = 0;
    for (const auto& f : d.schema.factors()) {
        for (std::size_t s = 0; s < f.states.size(); ++s)
            if (d.values[off + s] == 1.0) {
                idx.push_back(s);
                break;
            }
        off += f.states.size();
    }
    return idx;
}

std::size_t decode_domain(const Descriptor& d) {
    switch (d.schema.mode()) {
        case SchemaMode::OneHot:
        case SchemaMode::OneHotConst: {
            std::size_t m = d.schema.domain_count();
            for (std::size_t i = 0; i < m; ++i)
                if (d.values[i] == 1.0) return i;
            throw ValueError("decode_domain: no index set");
        }
        case SchemaMode::Distributed: {
            auto idx = decode_states(d);
            const auto& factors = d.schema.factors();
            std::size_t out = 0;
            for (std::size_t f = 0; f < factors.size(); ++f)
                out = out * factors[f].states.size() + idx[f];
            return out;
        }
    }
    throw ValueError("decode_domain: unknown schema mode");
}

Matrix build_Z(const std::vector<Descriptor>& descriptors) {
    if (descriptors.empty()) throw ValueError("build_Z: no descriptors");
    const DomainSchema& schema = descriptors.front().schema;
    for (const auto& d : descriptors)
        if (!(d.schema == schema))
            throw ValueError("build_Z: descriptors use mixed schemas");
    Matrix z(schema.descriptor_length(), descriptors.size());
    for (std::size_t m = 0; m < descriptors.size(); ++m)
        for (std::size_t b = 0; b < z.rows(); ++b)
            z(b, m) = descriptors[m].values[b];
    return z;
}

}  // namespace dpml
