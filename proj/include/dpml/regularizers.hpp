#pragma once

#include <string>
#include <vector>

#include "dpml/tensor.hpp"

namespace dpml {

enum class RegKind { Frobenius, L21, TraceNorm, EntrywiseL1 };

/// One regularization term: `target` names a parameter block
/// (P, Q, U_D, U_C, U_B, S), `weight` is the nonnegative multiplier.
struct RegTerm {
    std::string target;
    RegKind kind = RegKind::Frobenius;
    double weight = 0.0;
};

using RegSpec = std::vector<RegTerm>;

struct RegResult {
    double value = 0.0;
    Matrix subgrad;
};

/// Value and subgradient of a matrix regularizer:
///   Frobenius:   lambda * sum m^2          (squared Frobenius norm)
///   L21:         lambda * sum_rows ||row||_2
///   TraceNorm:   lambda * sum of singular values, subgradient lambda*U*V^T
///   EntrywiseL1: lambda * sum |m|, subgradient lambda*sign(m), 0 at 0
/// L1/L21 use the minimum-norm subgradient (0) at nonsmooth points.
RegResult reg_value_subgrad(RegKind kind, const Matrix& m, double lambda);

/// Thin SVD a = u * diag(s) * v^T via one-sided Jacobi rotations.
/// u is rows x r, v is cols x r, r = min(rows, cols); singular values are
/// sorted in descending order.
struct SvdResult {
    Matrix u;
    Vector s;
    Matrix v;
};

SvdResult jacobi_svd(const Matrix& a);

std::string reg_kind_name(RegKind kind);
RegKind reg_kind_from_name(const std::string& name);

}  // namespace dpml
