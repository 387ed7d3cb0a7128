#pragma once

#include "dpml/tensor.hpp"

namespace dpml {

enum class LossKind { Hinge, CrossEntropy };

/// Hinge expects a single score and labels in {-1,+1}; cross-entropy expects
/// C >= 2 scores and labels in 0..C-1.
struct LossSpec {
    LossKind kind = LossKind::Hinge;
};

struct LossResult {
    double value = 0.0;
    Vector grad;  // d value / d scores
};

LossResult loss_value_grad(const LossSpec& spec, const Vector& scores, int label);

/// Classification decision from raw scores: sign for a single score,
/// argmax otherwise (ties to the lowest index).
int predicted_label(const Vector& scores);

}  // namespace dpml
