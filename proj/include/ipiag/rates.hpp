#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipiag/core.hpp"
#include "ipiag/solver.hpp"

namespace ipiag {

/// L: total Lipschitz constant, beta: quadratic-growth modulus, tau: delay
/// bound, C1: eta1 = C1 * alpha * beta. The eta2 analogue (often called C2)
/// is not a separate input: pass eta2 directly.
struct RateInputs {
  double L = 0.0;
  double beta = 0.0;
  int tau = 0;
  double C1 = 0.0;

  /// C1 must lie in [0, c1_upper).
  void validate(double c1_upper = 0.5) const;
};

enum class CertificateVariant { theorem1_stated, theorem1_proof_tight, corollary1, corollary2 };

std::string to_string(CertificateVariant v);
CertificateVariant certificate_variant_from_string(const std::string& name);

/// Step-size and inertia choice together with the linear rate it guarantees
/// for Psi(z_k) <= rho^k C.
struct RateCertificate {
  CertificateVariant variant = CertificateVariant::theorem1_stated;
  RateInputs inputs;
  double rate_W = 0.0;  // beta / (16 C1 beta + 2 L (tau + 2)); not the worker count
  double alpha0 = 0.0;
  double alpha = 0.0;
  double eta1 = 0.0;
  double eta2_max = 0.0;
  double eta2 = 0.0;
  double rho = 1.0;
  /// Filled once a trajectory is known (see verify_theorem1_bound).
  std::optional<double> C;
  bool admissible = false;
  /// corollary1 only, evaluated at alpha = alpha0: 1/(1 + (1 - C1) alpha0 beta)
  /// and its Bernoulli upper bound 1 - (1 - C1)/((1 + Q (tau + 1)) (tau + 1)).
  std::optional<double> exact_factor;
  std::optional<double> simplified_factor;
};

/// Largest admissible step. `theorem1_stated` uses exponent 1/(tau + 3);
/// `theorem1_proof_tight` uses 1/(tau + 2) for tau >= 1 and the tau = 0 form
/// ((beta / (4L + 16 C1 beta) + 1)^(1/3) - 1) / beta.
double theorem1_alpha0(const RateInputs& in, CertificateVariant variant);

/// Upper end of the eta2 interval at step `alpha`, clamped at 0 from below
/// only when the caller asks for it through theorem1_params.
double theorem1_eta2_bound(const RateInputs& in, double alpha, CertificateVariant variant);

/// alpha defaults to alpha0; eta2 defaults to eta2_max.
RateCertificate theorem1_params(const RateInputs& in,
                                CertificateVariant variant = CertificateVariant::theorem1_stated,
                                std::optional<double> alpha = {}, std::optional<double> eta2 = {});

/// Heavy-ball special case (eta2 = 0). Accepts 0 <= C1 < 1.
RateCertificate corollary1_params(const RateInputs& in, std::optional<double> alpha = {});

/// Post-prox extrapolation special case (eta1 = 0).
RateCertificate corollary2_params(double L, double beta, int tau, std::optional<double> alpha = {},
                                  std::optional<double> eta2 = {});

/// { variant, L, beta, tau, C1, alpha0, alpha, eta1, eta2_max, eta2, rho, C } plus
/// admissible and, for corollary1, the two per-iteration factors.
nlohmann::json to_json(const RateCertificate& cert);
RateCertificate certificate_from_json(const nlohmann::json& j);

/// Psi(z) = Phi(z) - Phi* + (1 - eta1)/(2 alpha) ||z - x_ref||^2. With eta1 = 0
/// this is the post-prox-extrapolation Lyapunov function.
double lyapunov(const CompositeProblem& problem, const Vector& z, double alpha, double eta1,
                const Vector& x_ref, double phi_star);

// ---------------------------------------------------------------------------
// Recurrence certificates
//
// lemma1 form:  V_{k+1} <= a V_k - b w_k + c sum_{j=k-k0}^{k} w_j,  k >= 0
//   if c sum_{j=0}^{k0} a^{-j} <= b  then  V_k <= a^k V_0.
// lemma2 form:  V_{k+1} <= A V_k + B V_{k-1} - b1 w_k + b2 w_{k-1}
//                          + c sum_{j=k-k0}^{k} w_j,  k >= 1
//   with a^2 = A a + B, and if c sum_{j=0}^{k0} a^{-j} <= b1 - b2/a then
//   V_k <= a^{k-1} (V_1 + a V_0 + b1 w_0) for k >= 1.
// w_k = 0 for k < 0 in both.
// ---------------------------------------------------------------------------

struct LemmaSplit {
  double a = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

/// a = (A + sqrt(A^2 + 4B)) / 2, alpha1 = A / a, alpha2 = B / a^2.
LemmaSplit lemma2_split(double A, double B);

struct Lemma2Params {
  double A = 0.0;
  double B = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double c = 0.0;
  int k0 = 0;
  LemmaSplit split;

  static Lemma2Params make(double A, double B, double b1, double b2, double c, int k0);
};

/// sum_{j=0}^{k0} a^{-j}, summed term by term.
double inverse_geometric_sum(double a, int k0);

/// c sum_{j=0}^{k0} a^{-j} <= b1 - b2 / a, with a 1e-12 relative allowance
/// for rounding when both sides coincide.
bool lemma2_condition(const Lemma2Params& p);
bool lemma1_condition(double a, double b, double c, int k0);

struct RecurrenceReport {
  /// rhs - lhs of the recurrence for each checked k; >= 0 when it holds.
  std::vector<double> recurrence_residuals;
  bool recurrence_holds = false;
  bool condition_holds = false;
  /// V_k - bound_k for each k the conclusion covers; <= tolerance when it holds.
  std::vector<double> bound_residuals;
  double bound_tolerance = 0.0;
  bool bound_holds = false;

  /// False only if the hypotheses hold and the conclusion fails.
  bool consistent() const { return !(recurrence_holds && condition_holds) || bound_holds; }
};

RecurrenceReport lemma2_verify(std::span<const double> V, std::span<const double> omega,
                               const Lemma2Params& params);
RecurrenceReport lemma1_verify(std::span<const double> V, std::span<const double> omega, double a,
                               double b, double c, int k0);

/// Recurrence that certificate's proof feeds to the lemma2 check:
/// A = rho, B = 0, b1 = 1/(4 alpha), b2 = (eta2 + 2 eta2^2)/(2 alpha) and
/// (c, k0) = (L(tau+2)/2 + 4 C1 beta, tau+1) for tau >= 1, (L + 4 C1 beta, 2)
/// for tau = 0 (corollary2: C1 = 0, k0 = tau + 1). Empty for corollary1.
std::optional<Lemma2Params> certificate_recurrence(const RateCertificate& cert);

// ---------------------------------------------------------------------------
// Trajectory checks
// ---------------------------------------------------------------------------

struct BoundReport {
  double C = 0.0;
  double rho = 1.0;
  std::vector<Index> lyapunov_violations;
  std::vector<Index> objective_violations;
  std::vector<Index> distance_violations;
  /// max over k >= 1 of Psi(z_k) / (rho^k C).
  double worst_ratio = 0.0;
  Index checked = 0;

  bool passed() const {
    return lyapunov_violations.empty() && objective_violations.empty() &&
           distance_violations.empty();
  }
};

/// Checks, for every recorded k >= 1 and relative slack 1e-8,
///   Psi(z_k) <= rho^k C,  Phi(z_k) - Phi* <= rho^k C,
///   ||z_k - x_ref||^2 <= 2 alpha / (1 - eta1) rho^k C,
/// with C = Psi(z_1) + rho Psi(z_0) + ||z_1 - z_0||^2 / (4 alpha)
/// (C = Psi(z_0) for corollary1). Sets cert.C when `cert` is non-const.
BoundReport verify_theorem1_bound(const Trace& trace, const RateCertificate& cert);

struct DescentReport {
  /// rhs - lhs of the descent inequality at x_probe, one entry per k = 0..K-1.
  std::vector<double> residuals;
  double tolerance = 0.0;
  double min_residual = 0.0;
  Index worst_k = -1;

  bool passed() const { return min_residual >= -tolerance; }
};

/// Evaluates, for each k, rhs - lhs of
///   Phi(z_{k+1}) <= Phi(x) + (1 + eta2)/(2 alpha) ||x - z_k||^2
///                 - (1 - eta1)/(2 alpha) ||x - z_{k+1}||^2 - ||z_{k+1} - z_k||^2 / (4 alpha)
///                 + (eta2 + 2 eta2^2)/(2 alpha) ||z_k - z_{k-1}||^2 + D1_k + D2_k,
///   D1_k = L (tau + 2)/2 sum_{j=k-tau-1}^{k} ||z_{j+1} - z_j||^2,
///   D2_k = eta1 (1 + eta2)^2 / alpha sum_{j=k-2}^{k-1} ||z_{j+1} - z_j||^2,
/// at x = x_probe, with z_j = z_0 for j < 0. Needs a trace with stored iterates.
DescentReport verify_descent_lemma(const CompositeProblem& problem, const Trace& trace,
                                   double alpha, double eta1, double eta2, int tau,
                                   const Vector& x_probe);

}  // namespace ipiag
