#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpml/descriptors.hpp"
#include "dpml/model.hpp"

namespace dpml {

struct Instance {
    Vector x;
    std::size_t domain = 0;
    int label = 0;  // {-1,+1} for binary (C=1), 0..C-1 otherwise
};

/// Labeled instances grouped by domain, each domain carrying a descriptor.
/// Immutable after construction; derived views (splits, leave-one-out,
/// baselines) are new datasets.
class MultiDomainDataset {
public:
    MultiDomainDataset() = default;
    /// Validates: descriptor lengths, label ranges, feature dims, finiteness,
    /// and domain ids. When `require_nonempty_domains` every listed domain
    /// must own at least one instance (loaders and generators demand this;
    /// split views may leave a domain empty on one side).
    MultiDomainDataset(DomainSchema schema, std::vector<std::string> domain_names,
                       std::vector<Descriptor> descriptors, std::size_t feature_dim,
                       std::size_t class_count, std::vector<Instance> instances,
                       std::string provenance, bool require_nonempty_domains = true);

    const DomainSchema& schema() const { return schema_; }
    std::size_t domain_count() const { return descriptors_.size(); }
    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t class_count() const { return class_count_; }
    std::size_t descriptor_dim() const { return schema_.descriptor_length(); }
    std::size_t size() const { return instances_.size(); }

    const std::vector<Instance>& instances() const { return instances_; }
    const Descriptor& descriptor(std::size_t domain) const { return descriptors_[domain]; }
    const std::vector<Descriptor>& descriptors() const { return descriptors_; }
    const std::string& domain_name(std::size_t domain) const { return domain_names_[domain]; }
    const std::vector<std::string>& domain_names() const { return domain_names_; }
    const std::vector<std::size_t>& domain_instances(std::size_t domain) const {
        return by_domain_[domain];
    }
    const std::string& provenance() const { return provenance_; }

private:
    DomainSchema schema_;
    std::vector<std::string> domain_names_;
    std::vector<Descriptor> descriptors_;
    std::size_t feature_dim_ = 0;
    std::size_t class_count_ = 1;
    std::vector<Instance> instances_;
    std::vector<std::vector<std::size_t>> by_domain_;
    std::string provenance_;
};

/// Synthetic factorial-domain benchmark with planted ground truth.
struct SynthSpec {
    std::vector<Factor> factors;  // distributed domain schema
    std::size_t feature_dim = 10;
    std::size_t class_count = 1;  // 1 = binary with labels in {-1,+1}
    std::size_t per_domain = 100; // instances per domain, in train and in test each

    enum class Planted { AdditiveSingleOutput, LowRankTucker };
    Planted planted = Planted::AdditiveSingleOutput;
    std::size_t rank_d = 2, rank_c = 2, rank_b = 2;  // planted Tucker ranks

    double noise_rate = 0.0;  // label flip probability, must be < 0.5
    double margin = 0.0;      // reject instances with |score| (or top-2 gap) below this
    std::uint64_t seed = 0;
};

struct SynthResult {
    MultiDomainDataset train;
    MultiDomainDataset test;
    FactorizedModel truth;
};

/// Features are i.i.d. standard normal; labels come from the planted model's
/// scores, flipped with probability noise_rate. Instances inside the margin
/// are resampled (throws ValueError when the margin is infeasible).
SynthResult generate(const SynthSpec& spec);

// ---- delimited file I/O ----
// Data file: one instance per line: label, domain state field(s), then
// feature values, comma-separated, after a leading `format=1` line.
// Sidecar header declares feature count, outputs and the domain schema.

void save_dataset(const MultiDomainDataset& ds, const std::string& data_path,
                  const std::string& header_path);
MultiDomainDataset load_dataset(const std::string& data_path,
                                const std::string& header_path);

/// Stratified split per (domain, label); deterministic in `seed`. Strata
/// with a single instance go to train with a warning on stderr.
std::pair<MultiDomainDataset, MultiDomainDataset> split(const MultiDomainDataset& ds,
                                                        double train_fraction,
                                                        std::uint64_t seed);

/// Train on all domains except `held_out`, test on `held_out`. The train
/// side drops the held-out domain from its domain table.
std::pair<MultiDomainDataset, MultiDomainDataset> leave_one_domain_out(
    const MultiDomainDataset& ds, std::size_t held_out);

enum class BaselineMode { SDL, Aggregation };

/// SDL: one single-domain dataset per domain; Aggregation: one dataset that
/// forgets domains. Both use a constant descriptor schema (B = 1, z = [1]).
std::vector<MultiDomainDataset> baselines_view(const MultiDomainDataset& ds,
                                               BaselineMode mode);

/// Optional preprocessing: normalize each instance's feature sum to one,
/// then z-score with statistics computed on the fitting set.
struct FeatureTransform {
    bool sum_normalize = false;
    bool zscore = false;
    Vector mean, stdev;
};

FeatureTransform fit_transform(const MultiDomainDataset& train, bool sum_normalize,
                               bool zscore);
MultiDomainDataset apply_transform(const MultiDomainDataset& ds,
                                   const FeatureTransform& t);

}  // namespace dpml
