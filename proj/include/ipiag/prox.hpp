#pragma once

#include <string>
#include <string_view>

#include "ipiag/types.hpp"

namespace ipiag {

/// Separable regularizers with closed-form proximal maps.
///   zero             h = 0
///   l1               h = weight * ||x||_1
///   nonneg_l1        h = weight * ||x||_1 + indicator{x >= 0}
///   indicator_nonneg h = indicator{x >= 0}
enum class ProxKind { zero, l1, nonneg_l1, indicator_nonneg };

struct ProxSpec {
  ProxKind kind = ProxKind::zero;
  double weight = 0.0;

  void validate() const;
};

std::string_view to_string(ProxKind kind);
ProxKind prox_kind_from_string(std::string_view name);

Vector prox_zero(const Vector& v, double alpha);
/// Soft thresholding at alpha * lambda. |v_i| == alpha * lambda maps to 0.
Vector prox_l1(const Vector& v, double alpha, double lambda);
/// max(v_i - alpha * lambda, 0).
Vector prox_nonneg_l1(const Vector& v, double alpha, double lambda);

/// prox_{alpha h}(v) for the regularizer described by `spec`, written into `out`.
/// `out` may alias `v`.
void apply_prox(const ProxSpec& spec, const Vector& v, double alpha, Vector& out);
Vector apply_prox(const ProxSpec& spec, const Vector& v, double alpha);

/// h(x); +infinity outside the domain of indicator kinds.
double regularizer_value(const ProxSpec& spec, const Vector& x);

}  // namespace ipiag
