#include "dpml/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace dpml {

namespace {

// Gradient buffers parallel to param_blocks(model).
struct GradBuffers {
    std::vector<Vector> g;

    explicit GradBuffers(const std::vector<ParamBlock>& blocks) {
        for (const auto& b : blocks) g.emplace_back(b.size, 0.0);
    }
    void zero() {
        for (auto& v : g) std::fill(v.begin(), v.end(), 0.0);
    }
};

// Accumulates d(loss)/d(params) for one instance into `out`, given the
// loss gradient w.r.t. the scores. Frozen blocks are skipped (they are
// constants). Block order must match param_blocks().
void accumulate_instance(const FactorizedModel& m, const Vector& x, const Descriptor& z,
                         const Vector& dscores, GradBuffers& out) {
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, SingleOutputModel>) {
                // blocks: [P, Q]; s = x^T P Q z
                const double g = dscores[0];
                Vector q = matvec(model.Q, z.values);    // K
                Vector xp = matvec_t(model.P, x);        // K
                if (!model.fixed_P) {
                    auto& dP = out.g[0];
                    const std::size_t k_dim = model.P.cols();
                    for (std::size_t d = 0; d < model.P.rows(); ++d)
                        for (std::size_t k = 0; k < k_dim; ++k)
                            dP[d * k_dim + k] += g * x[d] * q[k];
                }
                auto& dQ = out.g[1];
                const std::size_t b_dim = model.Q.cols();
                for (std::size_t k = 0; k < model.Q.rows(); ++k)
                    for (std::size_t b = 0; b < b_dim; ++b)
                        dQ[k * b_dim + b] += g * xp[k] * z.values[b];
            } else if constexpr (std::is_same_v<T, CPModel>) {
                // blocks: [U_D, U_C, U_B]; y = U_C^T ((U_D x) o (U_B z))
                Vector a = matvec(model.U_D, x);
                Vector b = matvec(model.U_B, z.values);
                Vector h = hadamard(a, b);
                Vector u = matvec(model.U_C, dscores);  // dL/dh
                const std::size_t k_dim = model.rank();
                auto& dUD = out.g[0];
                auto& dUC = out.g[1];
                auto& dUB = out.g[2];
                const std::size_t d_dim = model.U_D.cols();
                const std::size_t c_dim = model.U_C.cols();
                const std::size_t b_dim = model.U_B.cols();
                for (std::size_t k = 0; k < k_dim; ++k) {
                    for (std::size_t c = 0; c < c_dim; ++c)
                        dUC[k * c_dim + c] += h[k] * dscores[c];
                    const double ub_k = u[k] * b[k];
                    for (std::size_t d = 0; d < d_dim; ++d)
                        dUD[k * d_dim + d] += ub_k * x[d];
                    const double ua_k = u[k] * a[k];
                    for (std::size_t bb = 0; bb < b_dim; ++bb)
                        dUB[k * b_dim + bb] += ua_k * z.values[bb];
                }
            } else if constexpr (std::is_same_v<T, TuckerModel>) {
                // blocks: [S, U_D, U_C, U_B]
                Vector a = matvec(model.U_D, x);         // K_D
                Vector b = matvec(model.U_B, z.values);  // K_B
                const std::size_t kd_n = model.S.dim1(), kc_n = model.S.dim2(),
                                  kb_n = model.S.dim3();
                Vector t(kc_n, 0.0);
                for (std::size_t kd = 0; kd < kd_n; ++kd)
                    for (std::size_t kc = 0; kc < kc_n; ++kc)
                        for (std::size_t kb = 0; kb < kb_n; ++kb)
                            t[kc] += model.S(kd, kc, kb) * a[kd] * b[kb];
                Vector dt = matvec(model.U_C, dscores);  // K_C

                auto& dS = out.g[0];
                auto& dUD = out.g[1];
                auto& dUC = out.g[2];
                auto& dUB = out.g[3];
                Vector da(kd_n, 0.0), db(kb_n, 0.0);
                for (std::size_t kd = 0; kd < kd_n; ++kd)
                    for (std::size_t kc = 0; kc < kc_n; ++kc)
                        for (std::size_t kb = 0; kb < kb_n; ++kb) {
                            const double s = model.S(kd, kc, kb);
                            if (!model.frozen_S)
                                dS[(kd * kc_n + kc) * kb_n + kb] += dt[kc] * a[kd] * b[kb];
                            da[kd] += dt[kc] * s * b[kb];
                            db[kb] += dt[kc] * s * a[kd];
                        }
                if (!model.frozen_U_C) {
                    const std::size_t c_dim = model.U_C.cols();
                    for (std::size_t kc = 0; kc < kc_n; ++kc)
                        for (std::size_t c = 0; c < c_dim; ++c)
                            dUC[kc * c_dim + c] += t[kc] * dscores[c];
                }
                if (!model.frozen_U_D) {
                    const std::size_t d_dim = model.U_D.cols();
                    for (std::size_t kd = 0; kd < kd_n; ++kd)
                        for (std::size_t d = 0; d < d_dim; ++d)
                            dUD[kd * d_dim + d] += da[kd] * x[d];
                }
                if (!model.frozen_U_B) {
                    const std::size_t b_dim = model.U_B.cols();
                    for (std::size_t kb = 0; kb < kb_n; ++kb)
                        for (std::size_t bb = 0; bb < b_dim; ++bb)
                            dUB[kb * b_dim + bb] += db[kb] * z.values[bb];
                }
            } else if constexpr (std::is_same_v<T, TTModel>) {
                // blocks: [U_D, S, U_B]; y_c = sum S[kd,c,kb] (U_D^T x)[kd] (U_B z)[kb]
                Vector a = matvec_t(model.U_D, x);       // K_D
                Vector b = matvec(model.U_B, z.values);  // K_B
                const std::size_t kd_n = model.S.dim1(), c_n = model.S.dim2(),
                                  kb_n = model.S.dim3();
                auto& dUD = out.g[0];
                auto& dS = out.g[1];
                auto& dUB = out.g[2];
                Vector da(kd_n, 0.0), db(kb_n, 0.0);
                for (std::size_t kd = 0; kd < kd_n; ++kd)
                    for (std::size_t c = 0; c < c_n; ++c)
                        for (std::size_t kb = 0; kb < kb_n; ++kb) {
                            const double s = model.S(kd, c, kb);
                            dS[(kd * c_n + c) * kb_n + kb] += dscores[c] * a[kd] * b[kb];
                            da[kd] += dscores[c] * s * b[kb];
                            db[kb] += dscores[c] * s * a[kd];
                        }
                for (std::size_t d = 0; d < model.U_D.rows(); ++d)
                    for (std::size_t kd = 0; kd < kd_n; ++kd)
                        dUD[d * kd_n + kd] += x[d] * da[kd];
                const std::size_t b_dim = model.U_B.cols();
                for (std::size_t kb = 0; kb < kb_n; ++kb)
                    for (std::size_t bb = 0; bb < b_dim; ++bb)
                        dUB[kb * b_dim + bb] += db[kb] * z.values[bb];
            } else {
                // FullTensorModel, blocks: [W]; y_c = sum x_d W[d,c,b] z_b
                auto& dW = out.g[0];
                const std::size_t c_n = model.W.dim2(), b_n = model.W.dim3();
                for (std::size_t d = 0; d < model.W.dim1(); ++d) {
                    if (x[d] == 0.0) continue;
                    for (std::size_t c = 0; c < c_n; ++c) {
                        const double gc = dscores[c] * x[d];
                        if (gc == 0.0) continue;
                        for (std::size_t b = 0; b < b_n; ++b)
                            dW[(d * c_n + c) * b_n + b] += gc * z.values[b];
                    }
                }
            }
        },
        m);
}

void validate_fit_inputs(const FactorizedModel& model, const MultiDomainDataset& ds,
                         const TrainConfig& cfg) {
    if (model_feature_dim(model) != ds.feature_dim())
        throw ShapeError("fit: model feature dim " +
                         std::to_string(model_feature_dim(model)) + " vs dataset " +
                         std::to_string(ds.feature_dim()));
    if (model_descriptor_dim(model) != ds.descriptor_dim())
        throw ShapeError("fit: model descriptor dim " +
                         std::to_string(model_descriptor_dim(model)) + " vs dataset " +
                         std::to_string(ds.descriptor_dim()));
    const std::size_t c = model_class_count(model);
    if (cfg.loss.kind == LossKind::Hinge && c != 1)
        throw ValueError("fit: hinge loss requires a single-output model");
    if (cfg.loss.kind == LossKind::CrossEntropy && c < 2)
        throw ValueError("fit: cross-entropy requires C >= 2 outputs");
    if (ds.class_count() != c)
        throw ValueError("fit: dataset class count " + std::to_string(ds.class_count()) +
                         " vs model outputs " + std::to_string(c));
    if (cfg.learning_rate <= 0.0 && cfg.learning_rate != 0.0)
        throw ValueError("fit: learning rate must be >= 0");
    if (cfg.batch_size < 1) throw ValueError("fit: batch size must be >= 1");
    if (cfg.epochs < 1) throw ValueError("fit: epochs must be >= 1");
    for (std::size_t d = 0; d < ds.domain_count(); ++d)
        if (ds.domain_instances(d).empty())
            throw ValueError("fit: domain '" + ds.domain_name(d) + "' is empty");
    for (const auto& term : cfg.regs) {
        if (term.weight < 0.0)
            throw ValueError("fit: regularizer weight for " + term.target +
                             " must be nonnegative");
        if (term.kind == RegKind::L21 || term.kind == RegKind::TraceNorm) {
            if (term.target == "S" || term.target == "W")
                throw ValueError("fit: " + reg_kind_name(term.kind) +
                                 " norm applies to matrix targets only, not " +
                                 term.target);
        }
    }
}

}  // namespace

double objective_value(const FactorizedModel& model, const MultiDomainDataset& ds,
                       const TrainConfig& cfg) {
    double risk = 0.0;
    for (std::size_t d = 0; d < ds.domain_count(); ++d) {
        double domain_loss = 0.0;
        for (std::size_t idx : ds.domain_instances(d)) {
            const Instance& ins = ds.instances()[idx];
            Vector scores = predict_scores(model, ins.x, ds.descriptor(d));
            domain_loss += loss_value_grad(cfg.loss, scores, ins.label).value;
        }
        risk += domain_loss / static_cast<double>(ds.domain_instances(d).size());
    }
    risk /= static_cast<double>(ds.domain_count());

    if (!cfg.regs.empty()) {
        FactorizedModel& mutable_model = const_cast<FactorizedModel&>(model);
        auto blocks = param_blocks(mutable_model);
        for (const auto& term : cfg.regs) {
            for (const auto& block : blocks) {
                if (block.name != term.target) continue;
                Matrix view(block.rows, block.cols);
                std::copy(block.data, block.data + block.size, view.data().begin());
                risk += reg_value_subgrad(term.kind, view, term.weight).value;
            }
        }
    }
    return risk;
}

std::vector<double> domain_error_rates(const FactorizedModel& model,
                                       const MultiDomainDataset& ds) {
    std::vector<double> errs(ds.domain_count(), 0.0);
    for (std::size_t d = 0; d < ds.domain_count(); ++d) {
        std::size_t wrong = 0;
        for (std::size_t idx : ds.domain_instances(d)) {
            const Instance& ins = ds.instances()[idx];
            Vector scores = predict_scores(model, ins.x, ds.descriptor(d));
            if (predicted_label(scores) != ins.label) ++wrong;
        }
        errs[d] = ds.domain_instances(d).empty()
                      ? 0.0
                      : static_cast<double>(wrong) /
                            static_cast<double>(ds.domain_instances(d).size());
    }
    return errs;
}

double error_rate(const FactorizedModel& model, const MultiDomainDataset& ds) {
    std::size_t wrong = 0;
    for (const auto& ins : ds.instances()) {
        Vector scores = predict_scores(model, ins.x, ds.descriptor(ins.domain));
        if (predicted_label(scores) != ins.label) ++wrong;
    }
    return ds.size() == 0 ? 0.0
                          : static_cast<double>(wrong) / static_cast<double>(ds.size());
}

TrainReport fit(FactorizedModel& model, const MultiDomainDataset& ds,
                const TrainConfig& cfg) {
    validate_fit_inputs(model, ds, cfg);
    auto start = std::chrono::steady_clock::now();

    auto blocks = param_blocks(model);
    GradBuffers grads(blocks);
    std::mt19937_64 rng(cfg.seed);

    const std::size_t n = ds.size();
    const std::size_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;

    const double initial_objective = objective_value(model, ds, cfg);
    if (!std::isfinite(initial_objective))
        throw DivergenceError("fit: initial objective is not finite", 0);
    const double blowup = 1e6 * std::max(std::abs(initial_objective), 1e-12);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uniform_int_distribution<std::size_t> domain_dist(0, ds.domain_count() - 1);

    TrainReport report;
    report.objective.reserve(cfg.epochs);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.learning_rate;
        if (cfg.schedule == TrainConfig::Schedule::StepDecay && cfg.decay_every > 0)
            lr *= std::pow(cfg.decay_factor,
                           static_cast<double>(epoch / cfg.decay_every));

        if (!cfg.balanced_sampling && cfg.shuffle)
            std::shuffle(order.begin(), order.end(), rng);

        for (std::size_t step = 0; step < steps_per_epoch; ++step) {
            grads.zero();
            std::size_t count = 0;
            if (cfg.balanced_sampling) {
                for (std::size_t i = 0; i < cfg.batch_size; ++i) {
                    std::size_t d = domain_dist(rng);
                    const auto& pool = ds.domain_instances(d);
                    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
                    const Instance& ins = ds.instances()[pool[pick(rng)]];
                    Vector scores = predict_scores(model, ins.x, ds.descriptor(d));
                    auto lr_res = loss_value_grad(cfg.loss, scores, ins.label);
                    accumulate_instance(model, ins.x, ds.descriptor(d), lr_res.grad,
                                        grads);
                    ++count;
                }
            } else {
                std::size_t begin = step * cfg.batch_size;
                std::size_t end = std::min(begin + cfg.batch_size, n);
                for (std::size_t i = begin; i < end; ++i) {
                    const Instance& ins = ds.instances()[order[i]];
                    Vector scores = predict_scores(model, ins.x, ds.descriptor(ins.domain));
                    auto lr_res = loss_value_grad(cfg.loss, scores, ins.label);
                    accumulate_instance(model, ins.x, ds.descriptor(ins.domain),
                                        lr_res.grad, grads);
                    ++count;
                }
            }
            if (count == 0) continue;
            const double scale = 1.0 / static_cast<double>(count);

            for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                auto& block = blocks[bi];
                if (block.frozen) continue;
                // data term
                for (std::size_t i = 0; i < block.size; ++i)
                    block.data[i] -= lr * scale * grads.g[bi][i];
                // regularizer subgradients at the updated-from values; one
                // application per step, matching SGD on (risk + penalty)
                for (const auto& term : cfg.regs) {
                    if (term.target != block.name || term.weight == 0.0) continue;
                    Matrix view(block.rows, block.cols);
                    std::copy(block.data, block.data + block.size, view.data().begin());
                    RegResult rr = reg_value_subgrad(term.kind, view, term.weight);
                    for (std::size_t i = 0; i < block.size; ++i)
                        block.data[i] -= lr * rr.subgrad.data()[i];
                }
            }
            ++report.iterations;
        }

        double obj = objective_value(model, ds, cfg);
        report.objective.push_back(obj);
        if (std::isnan(obj))
            throw DivergenceError("fit: objective is NaN at epoch " +
                                      std::to_string(epoch + 1),
                                  epoch + 1);
        if (obj > blowup)
            throw DivergenceError("fit: objective exceeded 1e6x its initial value at epoch " +
                                      std::to_string(epoch + 1),
                                  epoch + 1);
    }

    report.domain_error = domain_error_rates(model, ds);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

GradCheckReport grad_check(const FactorizedModel& model, const MultiDomainDataset& batch,
                           const TrainConfig& cfg) {
    if (batch.size() == 0) throw ValueError("grad_check: batch is empty");

    // batch objective: mean loss over the batch + regularizer values
    FactorizedModel work = model;
    auto blocks = param_blocks(work);

    auto batch_objective = [&]() {
        double total = 0.0;
        for (const auto& ins : batch.instances()) {
            Vector scores = predict_scores(work, ins.x, batch.descriptor(ins.domain));
            total += loss_value_grad(cfg.loss, scores, ins.label).value;
        }
        total /= static_cast<double>(batch.size());
        for (const auto& term : cfg.regs) {
            for (const auto& block : blocks) {
                if (block.name != term.target) continue;
                Matrix view(block.rows, block.cols);
                std::copy(block.data, block.data + block.size, view.data().begin());
                total += reg_value_subgrad(term.kind, view, term.weight).value;
            }
        }
        return total;
    };

    // analytic gradient
    GradBuffers grads(blocks);
    for (const auto& ins : batch.instances()) {
        Vector scores = predict_scores(work, ins.x, batch.descriptor(ins.domain));
        auto lr_res = loss_value_grad(cfg.loss, scores, ins.label);
        accumulate_instance(work, ins.x, batch.descriptor(ins.domain), lr_res.grad, grads);
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        for (auto& v : grads.g[bi]) v *= scale;
        if (blocks[bi].frozen) continue;
        for (const auto& term : cfg.regs) {
            if (term.target != blocks[bi].name || term.weight == 0.0) continue;
            Matrix view(blocks[bi].rows, blocks[bi].cols);
            std::copy(blocks[bi].data, blocks[bi].data + blocks[bi].size,
                      view.data().begin());
            RegResult rr = reg_value_subgrad(term.kind, view, term.weight);
            for (std::size_t i = 0; i < blocks[bi].size; ++i)
                grads.g[bi][i] += rr.subgrad.data()[i];
        }
    }

    const double h = 1e-6;
    GradCheckReport report;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        BlockCheck check;
        check.name = blocks[bi].name;
        check.frozen = blocks[bi].frozen;
        if (blocks[bi].frozen) {
            for (double v : grads.g[bi])
                check.max_analytic_abs = std::max(check.max_analytic_abs, std::abs(v));
            report.blocks.push_back(check);
            continue;
        }
        for (std::size_t i = 0; i < blocks[bi].size; ++i) {
            const double saved = blocks[bi].data[i];
            blocks[bi].data[i] = saved + h;
            const double fp = batch_objective();
            blocks[bi].data[i] = saved - h;
            const double fm = batch_objective();
            blocks[bi].data[i] = saved;
            const double fd = (fp - fm) / (2.0 * h);
            const double a = grads.g[bi][i];
            const double denom = std::max({std::abs(a), std::abs(fd), 1e-3});
            check.max_rel_error = std::max(check.max_rel_error, std::abs(a - fd) / denom);
        }
        report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
        report.blocks.push_back(check);
    }
    return report;
}

}  // namespace dpml
