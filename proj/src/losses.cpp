#include "dpml/losses.hpp"

#include <algorithm>
#include <cmath>

namespace dpml {

LossResult loss_value_grad(const LossSpec& spec, const Vector& scores, int label) {
    LossResult res;
    res.grad.assign(scores.size(), 0.0);
    if (spec.kind == LossKind::Hinge) {
        if (scores.size() != 1)
            throw ShapeError("hinge loss: expected a single score, got " +
                             std::to_string(scores.size()));
        if (label != 1 && label != -1)
            throw ValueError("hinge loss: label must be +1 or -1, got " +
                             std::to_string(label));
        double margin = static_cast<double>(label) * scores[0];
        if (margin < 1.0) {
            res.value = 1.0 - margin;
            res.grad[0] = -static_cast<double>(label);
        }
        // subgradient 0 at the kink (margin == 1)
        return res;
    }
    // cross-entropy
    if (scores.size() < 2)
        throw ShapeError("cross-entropy loss: needs at least 2 scores");
    if (label < 0 || static_cast<std::size_t>(label) >= scores.size())
        throw ValueError("cross-entropy loss: label " + std::to_string(label) +
                         " out of range [0, " + std::to_string(scores.size()) + ")");
    double m = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s - m);
    double lse = m + std::log(sum);
    res.value = lse - scores[static_cast<std::size_t>(label)];
    for (std::size_t c = 0; c < scores.size(); ++c)
        res.grad[c] = std::exp(scores[c] - lse);
    res.grad[static_cast<std::size_t>(label)] -= 1.0;
    return res;
}

int predicted_label(const Vector& scores) {
    if (scores.size() == 1) return scores[0] >= 0.0 ? 1 : -1;
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = c;
    return static_cast<int>(best);
}

}  // namespace dpml
