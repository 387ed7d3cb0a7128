#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpml/datasets.hpp"
#include "dpml/losses.hpp"
#include "dpml/model.hpp"
#include "dpml/regularizers.hpp"

namespace dpml {

struct TrainConfig {
    double learning_rate = 0.01;

    enum class Schedule { Constant, StepDecay };
    Schedule schedule = Schedule::Constant;
    double decay_factor = 0.5;
    std::size_t decay_every = 0;  // epochs between decays; 0 disables

    std::size_t batch_size = 32;
    std::size_t epochs = 500;
    std::uint64_t seed = 0;
    LossSpec loss;
    RegSpec regs;
    /// Draw each batch element by (uniform domain, uniform instance within
    /// domain), matching the per-domain averaging of the empirical risk in
    /// expectation. Off: shuffled passes over the pooled instances.
    bool balanced_sampling = false;
    bool shuffle = true;
};

struct TrainReport {
    std::vector<double> objective;     // full objective after each epoch
    std::vector<double> domain_error;  // final training error rate per domain
    double wall_seconds = 0.0;
    std::size_t iterations = 0;        // SGD steps taken
};

/// Mini-batch SGD on the per-domain averaged empirical risk plus
/// regularizers. The model is updated in place; frozen blocks stay
/// untouched. Throws DivergenceError when the objective becomes NaN or
/// exceeds 1e6 x its initial value.
TrainReport fit(FactorizedModel& model, const MultiDomainDataset& ds,
                const TrainConfig& cfg);

/// Full objective (per-domain averaged data loss + regularizer values) at
/// the current parameters.
double objective_value(const FactorizedModel& model, const MultiDomainDataset& ds,
                       const TrainConfig& cfg);

/// Mean classification error per domain (sign or argmax of the scores).
std::vector<double> domain_error_rates(const FactorizedModel& model,
                                       const MultiDomainDataset& ds);
double error_rate(const FactorizedModel& model, const MultiDomainDataset& ds);

struct BlockCheck {
    std::string name;
    bool frozen = false;
    double max_rel_error = 0.0;     // unfrozen: analytic vs central differences
    double max_analytic_abs = 0.0;  // frozen: must be exactly 0
};

struct GradCheckReport {
    std::vector<BlockCheck> blocks;
    double max_rel_error = 0.0;  // over unfrozen blocks
};

/// Central-difference check (step 1e-6) of the analytic gradient of the
/// batch objective (mean loss over `batch` plus regularizers), per
/// parameter block. Relative error uses denominator max(|a|, |fd|, 1e-3).
/// The caller is responsible for keeping the batch away from non-smooth
/// points (hinge kinks, L1 zeros).
GradCheckReport grad_check(const FactorizedModel& model, const MultiDomainDataset& batch,
                           const TrainConfig& cfg);

}  // namespace dpml
