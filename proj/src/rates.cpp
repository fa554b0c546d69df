#include "ipiag/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ipiag {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// (1 + x)^p - 1 without cancellation for small x.
double pow1p_minus_one(double x, double p) { return std::expm1(p * std::log1p(x)); }

bool is_theorem1(CertificateVariant v) {
  return v == CertificateVariant::theorem1_stated || v == CertificateVariant::theorem1_proof_tight;
}

void check_positive(double v, const char* what) {
  require(v > 0.0 && std::isfinite(v), std::string(what) + " must be positive and finite");
}

}  // namespace

void RateInputs::validate(double c1_upper) const {
  check_positive(L, "rates: L");
  check_positive(beta, "rates: beta");
  require(tau >= 0, "rates: tau must be >= 0");
  require(C1 >= 0.0 && C1 < c1_upper,
          "rates: C1 must lie in [0, " + std::to_string(c1_upper) + ")");
}

std::string to_string(CertificateVariant v) {
  switch (v) {
    case CertificateVariant::theorem1_stated: return "theorem1_stated";
    case CertificateVariant::theorem1_proof_tight: return "theorem1_proof_tight";
    case CertificateVariant::corollary1: return "corollary1";
    case CertificateVariant::corollary2: return "corollary2";
  }
  return "theorem1_stated";
}

CertificateVariant certificate_variant_from_string(const std::string& name) {
  if (name == "theorem1_stated" || name == "t1") return CertificateVariant::theorem1_stated;
  if (name == "theorem1_proof_tight" || name == "t1tight") {
    return CertificateVariant::theorem1_proof_tight;
  }
  if (name == "corollary1" || name == "cor1") return CertificateVariant::corollary1;
  if (name == "corollary2" || name == "cor2") return CertificateVariant::corollary2;
  throw InputError("unknown certificate variant '" + name + "'");
}

double theorem1_alpha0(const RateInputs& in, CertificateVariant variant) {
  in.validate(0.5);
  require(is_theorem1(variant), "theorem1_alpha0: not a theorem1 variant");
  const double W = in.beta / (16.0 * in.C1 * in.beta + 2.0 * in.L * (in.tau + 2));
  double exponent = 1.0 / (in.tau + 3);
  if (variant == CertificateVariant::theorem1_proof_tight) {
    // For tau = 0 the proof's bound is ((beta/(4L + 16 C1 beta) + 1)^(1/3) - 1)/beta,
    // which is W at tau = 0 with exponent 1/3.
    exponent = in.tau == 0 ? 1.0 / 3.0 : 1.0 / (in.tau + 2);
  }
  return pow1p_minus_one(W, exponent) / in.beta;
}

double theorem1_eta2_bound(const RateInputs& in, double alpha, CertificateVariant variant) {
  in.validate(0.5);
  require(is_theorem1(variant), "theorem1_eta2_bound: not a theorem1 variant");
  check_positive(alpha, "rates: alpha");
  const double ab = alpha * in.beta;
  const double eta1 = std::min(in.C1 * ab, 1.0);
  const double denom = 1.0 + ab - eta1;

  double proof;
  if (in.tau >= 1) {
    const double coeff = (in.L * (in.tau + 2) + 8.0 * in.C1 * in.beta) / (2.0 * in.beta);
    proof = (0.25 - coeff * pow1p_minus_one(ab, in.tau + 2)) / denom;
  } else {
    const double coeff = (in.L + 4.0 * in.C1 * in.beta) / in.beta;
    proof = (0.25 - coeff * pow1p_minus_one(ab, 3.0)) / denom;
  }
  double bound = std::min(ab / 2.0, proof);
  if (variant == CertificateVariant::theorem1_stated) {
    const double coeff = (in.L * (in.tau + 2) * alpha + 8.0 * eta1) / (2.0 * ab);
    const double stated = (0.25 - coeff * pow1p_minus_one(ab, in.tau + 3)) / denom;
    bound = std::min(bound, stated);
  }
  return bound;
}

RateCertificate theorem1_params(const RateInputs& in, CertificateVariant variant,
                                std::optional<double> alpha, std::optional<double> eta2) {
  in.validate(0.5);
  require(is_theorem1(variant), "theorem1_params: not a theorem1 variant");
  RateCertificate cert;
  cert.variant = variant;
  cert.inputs = in;
  cert.rate_W = in.beta / (16.0 * in.C1 * in.beta + 2.0 * in.L * (in.tau + 2));
  cert.alpha0 = theorem1_alpha0(in, variant);
  cert.alpha = alpha.value_or(cert.alpha0);
  check_positive(cert.alpha, "rates: alpha");
  const double ab = cert.alpha * in.beta;
  cert.eta1 = std::min(in.C1 * ab, 1.0);

  const bool step_ok = cert.alpha <= cert.alpha0;
  cert.eta2_max = theorem1_eta2_bound(in, cert.alpha, variant);
  // At alpha = alpha0 the bracket is zero up to rounding.
  if (step_ok) cert.eta2_max = std::max(cert.eta2_max, 0.0);
  cert.eta2 = eta2.value_or(std::max(cert.eta2_max, 0.0));
  require(cert.eta2 >= 0.0 && cert.eta2 <= 1.0, "rates: eta2 must lie in [0, 1]");
  cert.rho = (1.0 + cert.eta2) / (1.0 + ab - cert.eta1);
  cert.admissible = step_ok && cert.eta2 <= cert.eta2_max;
  return cert;
}

RateCertificate corollary1_params(const RateInputs& in, std::optional<double> alpha) {
  in.validate(1.0);
  RateCertificate cert;
  cert.variant = CertificateVariant::corollary1;
  cert.inputs = in;
  cert.rate_W = kNaN;
  const double one_minus = 1.0 - in.C1;
  const double inner = one_minus * in.beta / (in.L * (in.tau + 1) + in.C1 * in.beta);
  cert.alpha0 = pow1p_minus_one(inner, 1.0 / (in.tau + 1)) / (one_minus * in.beta);
  cert.alpha = alpha.value_or(cert.alpha0);
  check_positive(cert.alpha, "rates: alpha");
  const double ab = cert.alpha * in.beta;
  cert.eta1 = in.C1 * ab;
  cert.eta2_max = 0.0;
  cert.eta2 = 0.0;
  cert.rho = 1.0 / (1.0 + ab - cert.eta1);
  cert.admissible = cert.alpha <= cert.alpha0 && cert.eta1 <= 1.0;

  const double Q = in.L / in.beta;
  cert.exact_factor = 1.0 / (1.0 + one_minus * cert.alpha0 * in.beta);
  cert.simplified_factor = 1.0 - one_minus / ((1.0 + Q * (in.tau + 1)) * (in.tau + 1));
  return cert;
}

RateCertificate corollary2_params(double L, double beta, int tau, std::optional<double> alpha,
                                  std::optional<double> eta2) {
  const RateInputs in{L, beta, tau, 0.0};
  in.validate(0.5);
  RateCertificate cert;
  cert.variant = CertificateVariant::corollary2;
  cert.inputs = in;
  cert.rate_W = beta / (2.0 * L * (tau + 2));
  cert.alpha0 = pow1p_minus_one(cert.rate_W, 1.0 / (tau + 2)) / beta;
  cert.alpha = alpha.value_or(cert.alpha0);
  check_positive(cert.alpha, "rates: alpha");
  const double ab = cert.alpha * beta;
  cert.eta1 = 0.0;
  const double bracket =
      (0.25 - L * (tau + 2) / (2.0 * beta) * pow1p_minus_one(ab, tau + 2)) / (1.0 + ab);
  const bool step_ok = cert.alpha <= cert.alpha0;
  cert.eta2_max = std::min(ab / 2.0, bracket);
  if (step_ok) cert.eta2_max = std::max(cert.eta2_max, 0.0);
  cert.eta2 = eta2.value_or(std::max(cert.eta2_max, 0.0));
  require(cert.eta2 >= 0.0 && cert.eta2 <= 1.0, "rates: eta2 must lie in [0, 1]");
  cert.rho = (1.0 + cert.eta2) / (1.0 + ab);
  cert.admissible = step_ok && cert.eta2 <= cert.eta2_max;
  return cert;
}

nlohmann::json to_json(const RateCertificate& cert) {
  auto num = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["variant"] = to_string(cert.variant);
  j["L"] = cert.inputs.L;
  j["beta"] = cert.inputs.beta;
  j["tau"] = cert.inputs.tau;
  j["C1"] = cert.inputs.C1;
  j["rate_W"] = num(cert.rate_W);
  j["alpha0"] = cert.alpha0;
  j["alpha"] = cert.alpha;
  j["eta1"] = cert.eta1;
  j["eta2_max"] = cert.eta2_max;
  j["eta2"] = cert.eta2;
  j["rho"] = cert.rho;
  j["C"] = cert.C ? num(*cert.C) : nlohmann::json(nullptr);
  j["admissible"] = cert.admissible;
  if (cert.exact_factor) j["exact_factor"] = *cert.exact_factor;
  if (cert.simplified_factor) j["simplified_factor"] = *cert.simplified_factor;
  return j;
}

RateCertificate certificate_from_json(const nlohmann::json& j) {
  RateCertificate cert;
  cert.variant = certificate_variant_from_string(j.at("variant").get<std::string>());
  cert.inputs.L = j.at("L").get<double>();
  cert.inputs.beta = j.at("beta").get<double>();
  cert.inputs.tau = j.at("tau").get<int>();
  cert.inputs.C1 = j.at("C1").get<double>();
  cert.rate_W = j.value("rate_W", nlohmann::json(nullptr)).is_null() ? kNaN : j.at("rate_W").get<double>();
  cert.alpha0 = j.at("alpha0").get<double>();
  cert.alpha = j.at("alpha").get<double>();
  cert.eta1 = j.at("eta1").get<double>();
  cert.eta2_max = j.at("eta2_max").get<double>();
  cert.eta2 = j.at("eta2").get<double>();
  cert.rho = j.at("rho").get<double>();
  if (j.contains("C") && !j.at("C").is_null()) cert.C = j.at("C").get<double>();
  cert.admissible = j.value("admissible", false);
  if (j.contains("exact_factor")) cert.exact_factor = j.at("exact_factor").get<double>();
  if (j.contains("simplified_factor")) cert.simplified_factor = j.at("simplified_factor").get<double>();
  return cert;
}

double lyapunov(const CompositeProblem& problem, const Vector& z, double alpha, double eta1,
                const Vector& x_ref, double phi_star) {
  check_positive(alpha, "lyapunov: alpha");
  require_dimension(x_ref, problem.dimension(), "lyapunov: reference");
  return evaluate_objective(problem, z) - phi_star +
         (1.0 - eta1) / (2.0 * alpha) * distance_squared(z, x_ref);
}

// ---------------------------------------------------------------------------

LemmaSplit lemma2_split(double A, double B) {
  require(std::isfinite(A) && std::isfinite(B) && A >= 0.0 && B >= 0.0,
          "lemma2_split: A and B must be finite and nonnegative");
  require(A + B > 0.0, "lemma2_split: A = B = 0 is degenerate");
  require(A + B < 1.0, "lemma2_split: A + B >= 1 leaves no root a < 1");
  LemmaSplit s;
  s.a = 0.5 * (A + std::sqrt(A * A + 4.0 * B));
  s.alpha1 = A / s.a;
  s.alpha2 = B / (s.a * s.a);
  return s;
}

Lemma2Params Lemma2Params::make(double A, double B, double b1, double b2, double c, int k0) {
  require(b1 >= 0.0 && b2 >= 0.0 && c >= 0.0, "lemma2: b1, b2, c must be nonnegative");
  require(k0 >= 0, "lemma2: k0 must be >= 0");
  Lemma2Params p{A, B, b1, b2, c, k0, {}};
  p.split = lemma2_split(A, B);
  return p;
}

double inverse_geometric_sum(double a, int k0) {
  require(a > 0.0, "inverse_geometric_sum: a must be positive");
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j <= k0; ++j) {
    sum += term;
    term /= a;
  }
  return sum;
}

namespace {

bool leq_with_rounding(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
}

void check_sequence(std::span<const double> s, const char* what) {
  for (double v : s) {
    require(std::isfinite(v) && v >= 0.0, std::string(what) + " must be finite and nonnegative");
  }
}

// sum_{j=max(0,k-k0)}^{k} omega_j
double window_sum(std::span<const double> omega, Index k, int k0) {
  double s = 0.0;
  for (Index j = std::max<Index>(0, k - k0); j <= k; ++j) s += omega[static_cast<std::size_t>(j)];
  return s;
}

}  // namespace

bool lemma2_condition(const Lemma2Params& p) {
  const double a = p.split.a;
  return leq_with_rounding(p.c * inverse_geometric_sum(a, p.k0), p.b1 - p.b2 / a);
}

bool lemma1_condition(double a, double b, double c, int k0) {
  require(a > 0.0 && a < 1.0, "lemma1: a must lie in (0, 1)");
  return leq_with_rounding(c * inverse_geometric_sum(a, k0), b);
}

RecurrenceReport lemma2_verify(std::span<const double> V, std::span<const double> omega,
                               const Lemma2Params& p) {
  check_sequence(V, "lemma2_verify: V");
  check_sequence(omega, "lemma2_verify: omega");
  require(V.size() >= 2, "lemma2_verify: need V_0 and V_1");
  require(omega.size() + 1 >= V.size(), "lemma2_verify: omega must cover k = 0..K-1");
  const Index K = static_cast<Index>(V.size()) - 1;
  const double a = p.split.a;

  RecurrenceReport rep;
  rep.recurrence_holds = true;
  for (Index k = 1; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double window = p.c * window_sum(omega, k, p.k0);
    const double rhs = p.A * V[ku] + p.B * V[ku - 1] - p.b1 * omega[ku] + p.b2 * omega[ku - 1] + window;
    const double scale = p.A * V[ku] + p.B * V[ku - 1] + p.b1 * omega[ku] + p.b2 * omega[ku - 1] +
                         window + V[ku + 1];
    const double residual = rhs - V[ku + 1];
    rep.recurrence_residuals.push_back(residual);
    if (residual < -1e-12 * (1.0 + scale)) rep.recurrence_holds = false;
  }
  rep.condition_holds = lemma2_condition(p);

  const double constant = V[1] + a * V[0] + p.b1 * omega[0];
  rep.bound_tolerance = 1e-9 * (1.0 + V[0] + V[1]);
  rep.bound_holds = true;
  double power = 1.0;  // a^{k-1}
  for (Index k = 1; k <= K; ++k) {
    const double residual = V[static_cast<std::size_t>(k)] - power * constant;
    rep.bound_residuals.push_back(residual);
    if (residual > rep.bound_tolerance) rep.bound_holds = false;
    power *= a;
  }
  return rep;
}

RecurrenceReport lemma1_verify(std::span<const double> V, std::span<const double> omega, double a,
                               double b, double c, int k0) {
  check_sequence(V, "lemma1_verify: V");
  check_sequence(omega, "lemma1_verify: omega");
  require(a > 0.0 && a < 1.0, "lemma1_verify: a must lie in (0, 1)");
  require(b >= 0.0 && c >= 0.0 && k0 >= 0, "lemma1_verify: b, c, k0 must be nonnegative");
  require(!V.empty(), "lemma1_verify: need V_0");
  require(omega.size() + 1 >= V.size(), "lemma1_verify: omega must cover k = 0..K-1");
  const Index K = static_cast<Index>(V.size()) - 1;

  RecurrenceReport rep;
  rep.recurrence_holds = true;
  for (Index k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double window = c * window_sum(omega, k, k0);
    const double rhs = a * V[ku] - b * omega[ku] + window;
    const double scale = a * V[ku] + b * omega[ku] + window + V[ku + 1];
    const double residual = rhs - V[ku + 1];
    rep.recurrence_residuals.push_back(residual);
    if (residual < -1e-12 * (1.0 + scale)) rep.recurrence_holds = false;
  }
  rep.condition_holds = lemma1_condition(a, b, c, k0);

  rep.bound_tolerance = 1e-9 * (1.0 + V[0]);
  rep.bound_holds = true;
  double power = 1.0;  // a^k
  for (Index k = 0; k <= K; ++k) {
    const double residual = V[static_cast<std::size_t>(k)] - power * V[0];
    rep.bound_residuals.push_back(residual);
    if (residual > rep.bound_tolerance) rep.bound_holds = false;
    power *= a;
  }
  return rep;
}

std::optional<Lemma2Params> certificate_recurrence(const RateCertificate& cert) {
  if (cert.variant == CertificateVariant::corollary1) return std::nullopt;
  const RateInputs& in = cert.inputs;
  const double b1 = 1.0 / (4.0 * cert.alpha);
  const double b2 = (cert.eta2 + 2.0 * cert.eta2 * cert.eta2) / (2.0 * cert.alpha);
  double c = 0.0;
  int k0 = 0;
  if (cert.variant == CertificateVariant::corollary2) {
    c = in.L * (in.tau + 2) / 2.0;
    k0 = in.tau + 1;
  } else if (in.tau >= 1) {
    c = in.L * (in.tau + 2) / 2.0 + 4.0 * in.C1 * in.beta;
    k0 = in.tau + 1;
  } else {
    c = in.L + 4.0 * in.C1 * in.beta;
    k0 = 2;
  }
  return Lemma2Params::make(cert.rho, 0.0, b1, b2, c, k0);
}

// ---------------------------------------------------------------------------

BoundReport verify_theorem1_bound(const Trace& trace, const RateCertificate& cert) {
  require(trace.records.size() >= 2 && trace.records[0].k == 0 && trace.records[1].k == 1,
          "verify_theorem1_bound: trace must record k = 0 and k = 1");
  require(trace.has_reference && std::isfinite(trace.records[0].psi) &&
              std::isfinite(trace.records[1].psi),
          "verify_theorem1_bound: trace has no Lyapunov column");
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); };
  require(same(trace.alpha, cert.alpha) && same(trace.eta1, cert.eta1) && same(trace.eta2, cert.eta2),
          "verify_theorem1_bound: trace parameters differ from the certificate");
  require(cert.rho > 0.0, "verify_theorem1_bound: rho must be positive");
  require(cert.eta1 < 1.0, "verify_theorem1_bound: eta1 must be < 1");

  BoundReport rep;
  rep.rho = cert.rho;
  const double psi0 = trace.records[0].psi;
  const double psi1 = trace.records[1].psi;
  rep.C = cert.variant == CertificateVariant::corollary1
              ? psi0
              : psi1 + cert.rho * psi0 + trace.records[1].step_norm2 / (4.0 * cert.alpha);

  constexpr double slack = 1e-8;
  // Phi(z) - Phi* cannot be resolved below the rounding of Phi itself.
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::abs(trace.reference_value));
  const double dist_scale = 2.0 * cert.alpha / (1.0 - cert.eta1);
  const double log_rho = std::log(cert.rho);
  for (const TraceRecord& r : trace.records) {
    if (r.k < 1) continue;
    const double bound = std::exp(static_cast<double>(r.k) * log_rho) * rep.C;
    const double gap = r.phi - trace.reference_value;
    if (r.psi > bound * (1.0 + slack) + floor) rep.lyapunov_violations.push_back(r.k);
    if (gap > bound * (1.0 + slack) + floor) rep.objective_violations.push_back(r.k);
    if (r.dist2 > dist_scale * bound * (1.0 + slack) + dist_scale * floor) {
      rep.distance_violations.push_back(r.k);
    }
    if (bound > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, r.psi / bound);
    ++rep.checked;
  }
  return rep;
}

DescentReport verify_descent_lemma(const CompositeProblem& problem, const Trace& trace,
                                   double alpha, double eta1, double eta2, int tau,
                                   const Vector& x_probe) {
  check_positive(alpha, "verify_descent_lemma: alpha");
  require(tau >= 0, "verify_descent_lemma: tau must be >= 0");
  require_dimension(x_probe, problem.dimension(), "verify_descent_lemma: probe");
  const std::size_t n = trace.records.size();
  require(n >= 1 && trace.z_iterates.size() == n,
          "verify_descent_lemma: insufficient history (run with store_iterates)");
  for (std::size_t i = 0; i < n; ++i) {
    require(trace.records[i].k == static_cast<Index>(i),
            "verify_descent_lemma: insufficient history (records must be contiguous)");
  }
  const auto& z = trace.z_iterates;
  const Index K = static_cast<Index>(n) - 1;
  // step[j] = ||z_j - z_{j-1}||^2, zero for j <= 0
  std::vector<double> step(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) step[j] = distance_squared(z[j], z[j - 1]);
  auto step_at = [&](Index j) { return j <= 0 ? 0.0 : step[static_cast<std::size_t>(j)]; };

  const double L = problem.total_lipschitz();
  const double phi_x = evaluate_objective(problem, x_probe);
  DescentReport rep;
  rep.tolerance = 1e-9 * (1.0 + std::abs(phi_x));
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    double d1 = 0.0;
    for (Index j = k - tau - 1; j <= k; ++j) d1 += step_at(j + 1);
    d1 *= L * (tau + 2) / 2.0;
    double d2 = 0.0;
    for (Index j = k - 2; j <= k - 1; ++j) d2 += step_at(j + 1);
    d2 *= eta1 * (1.0 + eta2) * (1.0 + eta2) / alpha;

    const double lhs = evaluate_objective(problem, z[ku + 1]);
    const double rhs = phi_x + (1.0 + eta2) / (2.0 * alpha) * distance_squared(x_probe, z[ku]) -
                       (1.0 - eta1) / (2.0 * alpha) * distance_squared(x_probe, z[ku + 1]) -
                       step_at(k + 1) / (4.0 * alpha) +
                       (eta2 + 2.0 * eta2 * eta2) / (2.0 * alpha) * step_at(k) + d1 + d2;
    const double residual = rhs - lhs;
    rep.residuals.push_back(residual);
    if (residual < rep.min_residual) {
      rep.min_residual = residual;
      rep.worst_k = k;
    }
  }
  if (K == 0) rep.min_residual = 0.0;
  return rep;
}

}  // namespace ipiag
