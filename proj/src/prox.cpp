#include "ipiag/prox.hpp"

#include <cmath>
#include <limits>

namespace ipiag {

namespace {

void check_alpha(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "prox: step alpha must be positive and finite");
}

void check_lambda(double lambda) {
  require(lambda >= 0.0 && std::isfinite(lambda), "prox: weight must be finite and nonnegative");
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

void ProxSpec::validate() const { check_lambda(weight); }

std::string_view to_string(ProxKind kind) {
  switch (kind) {
    case ProxKind::zero: return "zero";
    case ProxKind::l1: return "l1";
    case ProxKind::nonneg_l1: return "nonneg_l1";
    case ProxKind::indicator_nonneg: return "indicator_nonneg";
  }
  return "zero";
}

ProxKind prox_kind_from_string(std::string_view name) {
  if (name == "zero") return ProxKind::zero;
  if (name == "l1") return ProxKind::l1;
  if (name == "nonneg_l1") return ProxKind::nonneg_l1;
  if (name == "indicator_nonneg") return ProxKind::indicator_nonneg;
  throw InputError("unknown prox kind '" + std::string(name) + "'");
}

Vector prox_zero(const Vector& v, double alpha) {
  check_alpha(alpha);
  return v;
}

Vector prox_l1(const Vector& v, double alpha, double lambda) {
  Vector out(v.size());
  apply_prox({ProxKind::l1, lambda}, v, alpha, out);
  return out;
}

Vector prox_nonneg_l1(const Vector& v, double alpha, double lambda) {
  Vector out(v.size());
  apply_prox({ProxKind::nonneg_l1, lambda}, v, alpha, out);
  return out;
}

void apply_prox(const ProxSpec& spec, const Vector& v, double alpha, Vector& out) {
  check_alpha(alpha);
  spec.validate();
  if (out.size() != v.size()) out.resize(v.size());
  const double t = alpha * spec.weight;
  const Index d = v.size();
  switch (spec.kind) {
    case ProxKind::zero:
      if (&out != &v) out = v;
      break;
    case ProxKind::l1:
      for (Index i = 0; i < d; ++i) out[i] = soft_threshold(v[i], t);
      break;
    case ProxKind::nonneg_l1:
      for (Index i = 0; i < d; ++i) out[i] = v[i] > t ? v[i] - t : 0.0;
      break;
    case ProxKind::indicator_nonneg:
      for (Index i = 0; i < d; ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
      break;
  }
}

Vector apply_prox(const ProxSpec& spec, const Vector& v, double alpha) {
  Vector out(v.size());
  apply_prox(spec, v, alpha, out);
  return out;
}

double regularizer_value(const ProxSpec& spec, const Vector& x) {
  spec.validate();
  switch (spec.kind) {
    case ProxKind::zero:
      return 0.0;
    case ProxKind::l1:
      return spec.weight * x.lpNorm<1>();
    case ProxKind::nonneg_l1:
    case ProxKind::indicator_nonneg: {
      if ((x.array() < 0.0).any()) return std::numeric_limits<double>::infinity();
      return spec.kind == ProxKind::nonneg_l1 ? spec.weight * x.sum() : 0.0;
    }
  }
  return 0.0;
}

}  // namespace ipiag
