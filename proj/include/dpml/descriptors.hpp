#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpml/tensor.hpp"

namespace dpml {

enum class SchemaMode { OneHot, OneHotConst, Distributed };

struct Factor {
    std::string name;
    std::vector<std::string> states;

    bool operator==(const Factor&) const = default;
};

/// Declares how domains/tasks are encoded into descriptor vectors z.
class DomainSchema {
public:
    DomainSchema() = default;

    static DomainSchema one_hot(std::size_t domain_count);
    static DomainSchema one_hot_const(std::size_t domain_count);
    /// Block order follows the factor list; states in declared order.
    /// `append_constant` adds a trailing always-1 entry (off in the paper's
    /// distributed examples).
    static DomainSchema distributed(std::vector<Factor> factors,
                                    bool append_constant = false);

    SchemaMode mode() const { return mode_; }
    /// Number of distinct domains (product of factor cardinalities when
    /// distributed).
    std::size_t domain_count() const;
    /// Descriptor length B.
    std::size_t descriptor_length() const;
    const std::vector<Factor>& factors() const { return factors_; }
    bool append_constant() const { return append_constant_; }

    bool operator==(const DomainSchema&) const = default;

private:
    SchemaMode mode_ = SchemaMode::OneHot;
    std::size_t domain_count_ = 1;        // one-hot modes
    std::vector<Factor> factors_;         // distributed mode
    bool append_constant_ = false;        // distributed mode only
};

/// A semantic descriptor z together with the schema it satisfies.
/// Construction validates the schema invariant (one-hot blocks, constant
/// entries) and throws ValueError on violation.
struct Descriptor {
    Descriptor() = default;
    Descriptor(DomainSchema schema, Vector values);

    DomainSchema schema;
    Vector values;

    std::size_t size() const { return values.size(); }
    bool operator==(const Descriptor&) const = default;
};

Descriptor encode_one_hot(const DomainSchema& schema, std::size_t index);
Descriptor encode_one_hot_const(const DomainSchema& schema, std::size_t index);

/// One chosen state per factor, by name.
Descriptor encode_distributed(const DomainSchema& schema,
                              const std::vector<std::string>& states);
/// One chosen state per factor, by in-factor index.
Descriptor encode_distributed_indices(const DomainSchema& schema,
                                      const std::vector<std::size_t>& state_indices);

/// Encode domain `index` under any schema mode. For distributed schemas the
/// index enumerates the factorial grid with the last factor fastest.
Descriptor encode_domain(const DomainSchema& schema, std::size_t index);

/// Recover the domain index from a descriptor (inverse of encode_domain).
std::size_t decode_domain(const Descriptor& d);

/// Recover per-factor state indices from a distributed descriptor.
std::vector<std::size_t> decode_states(const Descriptor& d);

/// Stack descriptors as columns into a B x M matrix. All descriptors must
/// share one schema.
Matrix build_Z(const std::vector<Descriptor>& descriptors);

}  // namespace dpml
