#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ipiag/async_sim.hpp"
#include "ipiag/core.hpp"

namespace ipiag {

enum class Variant { piag, piag_m, piag_nel, ipiag };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct SolverParams {
  double alpha = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  Index max_iters = 0;
  /// Stop once ||z_{k+1} - z_k|| < stop_tolerance.
  std::optional<double> stop_tolerance;

  void validate() const;
};

/// (x_k, x_{k-1}, z_k, z_{k-1}, y_k) at iteration k.
struct IterateState {
  Index k = 0;
  Vector x_curr, x_prev;
  Vector z_curr, z_prev;
  Vector y_curr;

  /// x_{-1} = x_0 = z_0 (and z_{-1} = z_0, y_0 = x_0).
  static IterateState initial(const Vector& x0);
};

/// Contiguous assignment of components to workers: worker w owns
/// [first(w), last(w)). Sizes differ by at most one, larger blocks first.
class BlockPartition {
 public:
  BlockPartition(Index num_components, int num_workers);

  int num_workers() const { return static_cast<int>(starts_.size()) - 1; }
  Index num_components() const { return starts_.back(); }
  Index first(int w) const { return starts_[static_cast<std::size_t>(w)]; }
  Index last(int w) const { return starts_[static_cast<std::size_t>(w) + 1]; }
  int owner(Index n) const;

 private:
  std::vector<Index> starts_;
};

/// The master's memory of block gradients G_w and where they came from.
class GradientTable {
 public:
  GradientTable(BlockPartition partition, Index dimension);

  const BlockPartition& partition() const { return partition_; }
  int num_workers() const { return partition_.num_workers(); }

  /// G_w <- block gradient of worker w at `x`, tagged as evaluated at iterate `source_iter`.
  void refresh(const CompositeProblem& problem, int worker, const Vector& x, Index source_iter);
  /// G_w <- `block_gradient` directly.
  void store(int worker, const Vector& block_gradient, Index source_iter);

  bool initialized(int worker) const;
  const Vector& block(int worker) const;
  Index source_iter(int worker) const;
  int staleness(int worker, Index k) const;

  /// g = sum_w G_w. Throws StateError if a block was never filled.
  Vector aggregate() const;
  void aggregate_into(Vector& out) const;

 private:
  BlockPartition partition_;
  std::vector<Vector> blocks_;
  std::vector<Index> sources_;
};

Vector aggregate(const GradientTable& table);

/// One iPIAG update:
///   y_{k+1} = x_k + eta1 (x_k - x_{k-1})
///   z_{k+1} = prox_{alpha h}(y_{k+1} - alpha g)
///   x_{k+1} = z_{k+1} + eta2 (z_{k+1} - z_k)
IterateState ipiag_step(const IterateState& state, const SolverParams& params, const Vector& g,
                        const ProxFn& prox);
/// In-place form used by the engine; `scratch` is resized as needed.
void ipiag_step_inplace(IterateState& state, const SolverParams& params, const Vector& g,
                        const ProxFn& prox, Vector& scratch);

struct TraceRecord {
  Index k = 0;
  double phi = 0.0;        // Phi(z_k)
  double dist2 = 0.0;      // ||z_k - x_ref||^2
  double psi = 0.0;        // Phi(z_k) - Phi* + (1 - eta1)/(2 alpha) dist2
  double step_norm2 = 0.0; // ||z_k - z_{k-1}||^2
  int max_staleness = 0;   // of the table that produced z_k
};

struct TraceOptions {
  /// Keep every z_k and x_k (needed for the descent-lemma check).
  bool store_iterates = false;
  /// Evaluate Phi and Psi each recorded iteration; NaN otherwise.
  bool evaluate_objective = true;
  /// Record k = 0, k = 1, every `record_every`-th iteration, and the last one.
  Index record_every = 1;
  /// Reference point and value for dist2/psi. Defaults to the problem's known optimum.
  std::optional<KnownOptimum> reference;
};

struct Trace {
  int num_workers = 0;
  double alpha = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  std::vector<TraceRecord> records;
  /// Per-worker staleness, num_workers entries per record.
  std::vector<int> staleness;
  std::vector<Vector> z_iterates;
  std::vector<Vector> x_iterates;
  Vector final_x, final_y, final_z;
  Index iterations = 0;
  bool stopped_early = false;

  /// False when neither the options nor the problem supplied a reference;
  /// dist2 and psi are NaN then.
  bool has_reference = false;
  /// Phi* of the reference used for dist2 and psi.
  double reference_value = 0.0;
};

/// Runs iPIAG for params.max_iters iterations, replaying `schedule` as the
/// master/worker exchange. All G_w are first filled at x0. At iteration k the
/// workers returning in the schedule refresh G_w at x_{source}, then
/// g_k = sum_w G_w drives one ipiag_step. Deterministic.
///
/// Throws DivergenceError when Phi(z_k) - Phi(z_0) > 1e12 max(1, |Phi(z_0)|)
/// or Phi(z_k) is not finite.
Trace run_synchronous(const CompositeProblem& problem, const SolverParams& params,
                      const DelaySchedule& schedule, const Vector& x0,
                      const TraceOptions& options = {});

/// CSV with header k,phi,dist2,psi,step_norm2,max_staleness; floats use
/// `precision` significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace, int precision = 17);

}  // namespace ipiag
