#include "ipiag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>


namespace ipiag {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::piag: return "piag";
    case Variant::piag_m: return "piag-m";
    case Variant::piag_nel: return "piag-nel";
    case Variant::ipiag: return "ipiag";
  }
  return "piag";
}

Variant variant_from_string(const std::string& name) {
  if (name == "piag") return Variant::piag;
  if (name == "piag-m") return Variant::piag_m;
  if (name == "piag-nel") return Variant::piag_nel;
  if (name == "ipiag") return Variant::ipiag;
  throw InputError("unknown variant '" + name + "' (expected piag, piag-m, piag-nel, ipiag)");
}

void SolverParams::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "solver: alpha must be positive and finite");
  require(eta1 >= 0.0 && eta1 <= 1.0, "solver: eta1 must lie in [0, 1]");
  require(eta2 >= 0.0 && eta2 <= 1.0, "solver: eta2 must lie in [0, 1]");
  require(max_iters >= 0, "solver: max_iters must be >= 0");
  if (stop_tolerance) require(*stop_tolerance >= 0.0, "solver: stop tolerance must be >= 0");
}

IterateState IterateState::initial(const Vector& x0) {
  IterateState s;
  s.k = 0;
  s.x_curr = x0;
  s.x_prev = x0;
  s.z_curr = x0;
  s.z_prev = x0;
  s.y_curr = x0;
  return s;
}

BlockPartition::BlockPartition(Index num_components, int num_workers) {
  require(num_workers >= 1, "partition: need at least one worker");
  require(num_components >= num_workers, "partition: more workers than components");
  const Index base = num_components / num_workers;
  const Index extra = num_components % num_workers;
  starts_.reserve(static_cast<std::size_t>(num_workers) + 1);
  starts_.push_back(0);
  for (int w = 0; w < num_workers; ++w) {
    starts_.push_back(starts_.back() + base + (w < extra ? 1 : 0));
  }
}

int BlockPartition::owner(Index n) const {
  require(n >= 0 && n < num_components(), "partition: component out of range");
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), n);
  return static_cast<int>(it - starts_.begin()) - 1;
}

GradientTable::GradientTable(BlockPartition partition, Index dimension)
    : partition_(std::move(partition)),
      blocks_(static_cast<std::size_t>(partition_.num_workers())),
      sources_(static_cast<std::size_t>(partition_.num_workers()), -1) {
  require(dimension >= 1, "gradient table: dimension must be >= 1");
  for (auto& b : blocks_) b = Vector::Zero(dimension);
}

void GradientTable::refresh(const CompositeProblem& problem, int worker, const Vector& x,
                            Index source_iter) {
  require(worker >= 0 && worker < num_workers(), "gradient table: worker out of range");
  auto& block = blocks_[static_cast<std::size_t>(worker)];
  block.setZero();
  problem.add_block_gradient(partition_.first(worker), partition_.last(worker), x, block);
  sources_[static_cast<std::size_t>(worker)] = source_iter;
}

void GradientTable::store(int worker, const Vector& block_gradient, Index source_iter) {
  require(worker >= 0 && worker < num_workers(), "gradient table: worker out of range");
  require_dimension(block_gradient, blocks_.front().size(), "gradient table");
  blocks_[static_cast<std::size_t>(worker)] = block_gradient;
  sources_[static_cast<std::size_t>(worker)] = source_iter;
}

bool GradientTable::initialized(int worker) const {
  return sources_.at(static_cast<std::size_t>(worker)) >= 0;
}

const Vector& GradientTable::block(int worker) const {
  return blocks_.at(static_cast<std::size_t>(worker));
}

Index GradientTable::source_iter(int worker) const {
  return sources_.at(static_cast<std::size_t>(worker));
}

int GradientTable::staleness(int worker, Index k) const {
  return static_cast<int>(k - source_iter(worker));
}

void GradientTable::aggregate_into(Vector& out) const {
  for (int w = 0; w < num_workers(); ++w) {
    if (!initialized(w)) {
      throw StateError("gradient table: block of worker " + std::to_string(w) +
                       " was never filled");
    }
  }
  out = blocks_.front();
  for (std::size_t w = 1; w < blocks_.size(); ++w) out += blocks_[w];
}

Vector GradientTable::aggregate() const {
  Vector out;
  aggregate_into(out);
  return out;
}

Vector aggregate(const GradientTable& table) { return table.aggregate(); }

void ipiag_step_inplace(IterateState& state, const SolverParams& params, const Vector& g,
                        const ProxFn& prox, Vector& scratch) {
  const Index k = state.k;
  if (!g.allFinite()) throw NumericError("non-finite aggregated gradient", k);
  require_dimension(g, state.x_curr.size(), "ipiag_step: gradient");

  state.y_curr = state.x_curr + params.eta1 * (state.x_curr - state.x_prev);
  scratch = state.y_curr - params.alpha * g;
  state.z_prev.swap(state.z_curr);
  prox(scratch, params.alpha, state.z_curr);
  state.x_prev.swap(state.x_curr);
  state.x_curr = state.z_curr + params.eta2 * (state.z_curr - state.z_prev);
  state.k = k + 1;

  if (!state.z_curr.allFinite() || !state.x_curr.allFinite()) {
    throw NumericError("non-finite iterate", k + 1);
  }
}

IterateState ipiag_step(const IterateState& state, const SolverParams& params, const Vector& g,
                        const ProxFn& prox) {
  IterateState next = state;
  Vector scratch;
  ipiag_step_inplace(next, params, g, prox, scratch);
  return next;
}

namespace {

// Past x-iterates addressed by absolute iteration index.
class IterateHistory {
 public:
  IterateHistory(std::size_t capacity, const Vector& x0) : slots_(capacity, x0) {}

  void push(Index k, const Vector& x) { slots_[static_cast<std::size_t>(k) % slots_.size()] = x; }

  const Vector& at(Index k, Index current) const {
    if (current - k >= static_cast<Index>(slots_.size()) || k > current) {
      throw StateError("iterate history: x_" + std::to_string(k) + " no longer available at k=" +
                       std::to_string(current));
    }
    return slots_[static_cast<std::size_t>(k) % slots_.size()];
  }

 private:
  std::vector<Vector> slots_;
};

Index max_lag(const DelaySchedule& schedule, Index iterations) {
  Index lag = 0;
  for (Index k = 0; k < iterations; ++k) {
    for (const Refresh& r : schedule.refreshes(k)) lag = std::max(lag, k - r.source_iter);
  }
  return lag;
}

}  // namespace

Trace run_synchronous(const CompositeProblem& problem, const SolverParams& params,
                      const DelaySchedule& schedule, const Vector& x0,
                      const TraceOptions& options) {
  params.validate();
  require_dimension(x0, problem.dimension(), "run_synchronous: x0");
  require(x0.allFinite(), "run_synchronous: x0 must be finite");
  require(options.record_every >= 1, "run_synchronous: record_every must be >= 1");
  require(!options.store_iterates || options.record_every == 1,
          "run_synchronous: storing iterates needs record_every == 1");
  const Index K = params.max_iters;
  require(schedule.num_iterations() >= K,
          "run_synchronous: schedule covers " + std::to_string(schedule.num_iterations()) +
              " iterations, need " + std::to_string(K));

  const int W = schedule.num_workers();
  GradientTable table(BlockPartition(problem.num_components(), W), problem.dimension());
  for (int w = 0; w < W; ++w) table.refresh(problem, w, x0, 0);

  IterateHistory history(static_cast<std::size_t>(max_lag(schedule, K)) + 1, x0);
  IterateState state = IterateState::initial(x0);

  Trace trace;
  trace.num_workers = W;
  trace.alpha = params.alpha;
  trace.eta1 = params.eta1;
  trace.eta2 = params.eta2;

  const std::optional<KnownOptimum>& ref =
      options.reference ? options.reference : problem.known_optimum();
  trace.has_reference = ref.has_value();
  if (ref) {
    require_dimension(ref->point, problem.dimension(), "run_synchronous: reference");
    trace.reference_value = ref->value;
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  const double phi0 = evaluate_objective(problem, x0);
  const double guard = 1e12 * std::max(1.0, std::abs(phi0));

  auto record = [&](double step_norm2, Index k) {
    TraceRecord rec;
    rec.k = k;
    rec.step_norm2 = step_norm2;
    rec.phi = nan;
    rec.psi = nan;
    rec.dist2 = ref ? distance_squared(state.z_curr, ref->point) : nan;
    if (options.evaluate_objective) {
      rec.phi = evaluate_objective(problem, state.z_curr);
      if (ref) {
        rec.psi = rec.phi - ref->value + (1.0 - params.eta1) / (2.0 * params.alpha) * rec.dist2;
      }
      if (!std::isfinite(rec.phi) || rec.phi - phi0 > guard) {
        throw DivergenceError("objective diverged: Phi(z_k)=" + std::to_string(rec.phi) +
                                  ", Phi(z_0)=" + std::to_string(phi0),
                              k);
      }
    }
    int worst = 0;
    // At k the table that produced z_k was last touched at iteration k - 1.
    const Index table_k = std::max<Index>(k - 1, 0);
    for (int w = 0; w < W; ++w) {
      const int s = k == 0 ? 0 : table.staleness(w, table_k);
      trace.staleness.push_back(s);
      worst = std::max(worst, s);
    }
    rec.max_staleness = worst;
    trace.records.push_back(rec);
    if (options.store_iterates) {
      trace.z_iterates.push_back(state.z_curr);
      trace.x_iterates.push_back(state.x_curr);
    }
  };

  const Index expected = options.record_every == 1 ? K + 1 : K / options.record_every + 3;
  trace.records.reserve(static_cast<std::size_t>(expected));
  trace.staleness.reserve(static_cast<std::size_t>(expected) * static_cast<std::size_t>(W));
  record(0.0, 0);

  const ProxFn& prox = problem.oracles().prox;
  Vector g(problem.dimension());
  Vector scratch(problem.dimension());
  for (Index k = 0; k < K; ++k) {
    for (const Refresh& r : schedule.refreshes(k)) {
      table.refresh(problem, r.worker, history.at(r.source_iter, k), r.source_iter);
    }
    table.aggregate_into(g);
    ipiag_step_inplace(state, params, g, prox, scratch);
    history.push(k + 1, state.x_curr);

    const double step2 = distance_squared(state.z_curr, state.z_prev);
    const bool stop = params.stop_tolerance && std::sqrt(step2) < *params.stop_tolerance;
    if ((k + 1) % options.record_every == 0 || k == 0 || k + 1 == K || stop) {
      record(step2, k + 1);
    }
    trace.iterations = k + 1;
    if (stop) {
      trace.stopped_early = true;
      break;
    }
  }
  trace.final_x = state.x_curr;
  trace.final_y = state.y_curr;
  trace.final_z = state.z_curr;
  return trace;
}

void write_trace_csv(std::ostream& out, const Trace& trace, int precision) {
  out << "k,phi,dist2,psi,step_norm2,max_staleness\n";
  const auto old_precision = out.precision(precision);
  for (const TraceRecord& r : trace.records) {
    out << r.k << ',' << r.phi << ',' << r.dist2 << ',' << r.psi << ',' << r.step_norm2 << ','
        << r.max_staleness << '\n';
  }
  out.precision(old_precision);
}

}  // namespace ipiag
