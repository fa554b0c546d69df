#include "ipiag/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ipiag/async_sim.hpp"
#include "ipiag/problems.hpp"

namespace ipiag {

namespace {

nlohmann::json num_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

template <class T>
nlohmann::json opt_or_null(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

bool uses_eta1(Variant v) { return v == Variant::piag_m || v == Variant::ipiag; }
bool uses_eta2(Variant v) { return v == Variant::piag_nel || v == Variant::ipiag; }

// "auto" -> nullopt, otherwise a finite number.
std::optional<double> parse_auto(const std::string& text, const char* what) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw InputError(std::string(what) + ": expected a number or 'auto', got '" + text + "'");
  }
}

std::optional<double> json_auto(const nlohmann::json& j, const char* key,
                                std::optional<double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return parse_auto(v.get<std::string>(), key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string to_string(ScheduleKind kind) { return kind == ScheduleKind::sync ? "sync" : "uniform1"; }

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "sync") return ScheduleKind::sync;
  if (name == "uniform1") return ScheduleKind::uniform1;
  throw InputError("unknown schedule '" + name + "' (expected sync or uniform1)");
}

void RunConfig::validate() const {
  require(!alpha || *alpha > 0.0, "run: alpha must be positive");
  require(!eta1 || (*eta1 >= 0.0 && *eta1 <= 1.0), "run: eta1 must lie in [0, 1]");
  require(!eta2 || (*eta2 >= 0.0 && *eta2 <= 1.0), "run: eta2 must lie in [0, 1]");
  require(c1 >= 0.0 && c1 < 0.5, "run: c1 must lie in [0, 0.5)");
  require(tau >= 0, "run: tau must be >= 0");
  require(workers >= 1, "run: workers must be >= 1");
  require(iters >= 0, "run: iters must be >= 0");
  require(record_every >= 1, "run: record_every must be >= 1");
  require(!stop_tolerance || *stop_tolerance > 0.0, "run: stop tolerance must be positive");
}

RunConfig run_config_from_json(const nlohmann::json& j, const RunConfig& defaults) {
  RunConfig c = defaults;
  try {
    if (j.contains("variant")) c.variant = variant_from_string(j.at("variant").get<std::string>());
    c.alpha = json_auto(j, "alpha", c.alpha);
    c.eta1 = json_auto(j, "eta1", c.eta1);
    c.eta2 = json_auto(j, "eta2", c.eta2);
    c.c1 = j.value("c1", c.c1);
    if (j.contains("alpha_rule")) {
      c.alpha_rule = certificate_variant_from_string(j.at("alpha_rule").get<std::string>());
    }
    c.tau = j.value("tau", c.tau);
    c.workers = j.value("workers", c.workers);
    if (j.contains("schedule")) c.schedule = schedule_kind_from_string(j.at("schedule").get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.iters = j.value("iters", c.iters);
    c.record_every = j.value("record_every", c.record_every);
    if (j.contains("stop_tolerance")) {
      const auto& t = j.at("stop_tolerance");
      c.stop_tolerance = t.is_null() ? std::nullopt : std::optional<double>(t.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  auto autoable = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json("auto");
  };
  return {{"variant", to_string(c.variant)},
          {"alpha", autoable(c.alpha)},
          {"eta1", autoable(c.eta1)},
          {"eta2", autoable(c.eta2)},
          {"c1", c.c1},
          {"alpha_rule", to_string(c.alpha_rule)},
          {"tau", c.tau},
          {"workers", c.workers},
          {"schedule", to_string(c.schedule)},
          {"seed", c.seed},
          {"iters", c.iters},
          {"record_every", c.record_every},
          {"stop_tolerance", opt_or_null(c.stop_tolerance)}};
}

ResolvedParams resolve_parameters(const CompositeProblem& problem, const RunConfig& config) {
  config.validate();
  const Variant v = config.variant;
  require(uses_eta1(v) || !config.eta1 || *config.eta1 == 0.0,
          "run: variant " + to_string(v) + " fixes eta1 = 0");
  require(uses_eta2(v) || !config.eta2 || *config.eta2 == 0.0,
          "run: variant " + to_string(v) + " fixes eta2 = 0");

  const double L = problem.total_lipschitz();
  const std::optional<double>& beta = problem.growth_constant();
  const bool needs_beta = !config.alpha || (uses_eta1(v) && !config.eta1) || (uses_eta2(v) && !config.eta2);
  require(!needs_beta || beta.has_value(),
          "run: 'auto' parameters need the problem's growth constant beta");

  ResolvedParams out;
  SolverParams& p = out.params;
  const double rule_c1 = uses_eta1(v) ? config.c1 : 0.0;
  if (config.alpha) {
    p.alpha = *config.alpha;
  } else {
    const RateInputs in{L, *beta, config.tau, rule_c1};
    switch (config.alpha_rule) {
      case CertificateVariant::corollary1: p.alpha = corollary1_params(in).alpha0; break;
      case CertificateVariant::corollary2: p.alpha = corollary2_params(L, *beta, config.tau).alpha0; break;
      default: p.alpha = theorem1_alpha0(in, config.alpha_rule); break;
    }
  }
  p.eta1 = uses_eta1(v) ? config.eta1.value_or(beta ? std::min(config.c1 * p.alpha * *beta, 1.0) : 0.0)
                        : 0.0;
  p.eta2 = uses_eta2(v) ? config.eta2.value_or(0.0) : 0.0;

  if (!beta) {
    out.notes.push_back("no growth constant: no rate certificate");
    return out;
  }
  const double c1_eff = p.eta1 / (p.alpha * *beta);
  const std::optional<double> eta2_arg =
      uses_eta2(v) ? config.eta2 : std::optional<double>(0.0);
  const RateInputs in{L, *beta, config.tau, c1_eff};
  if (config.alpha_rule == CertificateVariant::corollary1 && !uses_eta2(v) && c1_eff < 1.0) {
    out.certificate = corollary1_params(in, p.alpha);
  } else if (config.alpha_rule == CertificateVariant::corollary2 && !uses_eta1(v)) {
    out.certificate = corollary2_params(L, *beta, config.tau, p.alpha, eta2_arg);
  } else if (c1_eff < 0.5) {
    const CertificateVariant rule = config.alpha_rule == CertificateVariant::theorem1_proof_tight
                                        ? CertificateVariant::theorem1_proof_tight
                                        : CertificateVariant::theorem1_stated;
    out.certificate = theorem1_params(in, rule, p.alpha, eta2_arg);
  } else {
    out.notes.push_back("eta1 / (alpha beta) >= 1/2: no rate certificate");
  }
  if (out.certificate) {
    p.eta2 = out.certificate->eta2;
    if (!out.certificate->admissible) out.notes.push_back("parameters outside the certified region");
  } else {
    require(!uses_eta2(v) || config.eta2.has_value(), "run: eta2 = auto needs a rate certificate");
  }
  p.validate();
  return out;
}

RunResult execute_run(const CompositeProblem& problem, const RunConfig& config,
                      const TraceOptions& options) {
  RunResult result;
  result.config = config;
  result.resolved = resolve_parameters(problem, config);
  SolverParams params = result.resolved.params;
  params.max_iters = config.iters;
  params.stop_tolerance = config.stop_tolerance;

  const DelaySchedule schedule =
      config.schedule == ScheduleKind::sync
          ? schedule_synchronous(config.workers, config.iters)
          : schedule_uniform_single(config.workers, config.tau, config.iters, config.seed);
  result.observed_staleness = max_observed_staleness(schedule);

  TraceOptions opts = options;
  if (!opts.store_iterates) opts.record_every = std::max(opts.record_every, config.record_every);
  result.trace = run_synchronous(problem, params, schedule, Vector::Zero(problem.dimension()), opts);

  const auto& cert = result.resolved.certificate;
  if (cert && cert->admissible && result.trace.has_reference && opts.evaluate_objective &&
      result.trace.records.size() >= 2) {
    result.bound = verify_theorem1_bound(result.trace, *cert);
  }
  return result;
}

std::optional<Index> iterations_to(const Trace& trace, double threshold) {
  for (const TraceRecord& r : trace.records) {
    if (r.dist2 <= threshold) return r.k;
  }
  return std::nullopt;
}

nlohmann::json run_summary(const RunResult& result, double wall_clock_seconds) {
  const Trace& t = result.trace;
  const TraceRecord& last = t.records.back();
  nlohmann::json j = to_json(result.config);
  j["alpha"] = t.alpha;
  j["eta1"] = t.eta1;
  j["eta2"] = t.eta2;
  j["iterations"] = t.iterations;
  j["stopped_early"] = t.stopped_early;
  j["final_phi"] = num_or_null(last.phi);
  j["final_phi_gap"] = t.has_reference ? num_or_null(last.phi - t.reference_value) : nlohmann::json(nullptr);
  j["final_dist2"] = num_or_null(last.dist2);
  j["iters_to_1e-4"] = opt_or_null(iterations_to(t, 1e-4));
  j["iters_to_1e-6"] = opt_or_null(iterations_to(t, 1e-6));
  j["max_staleness"] = result.observed_staleness;
  if (result.resolved.certificate) {
    RateCertificate cert = *result.resolved.certificate;
    if (result.bound) cert.C = result.bound->C;
    j["certificate"] = to_json(cert);
  } else {
    j["certificate"] = nullptr;
  }
  if (result.bound) {
    const BoundReport& b = *result.bound;
    j["bound_check"] = {{"passed", b.passed()},
                        {"checked", b.checked},
                        {"C", b.C},
                        {"rho", b.rho},
                        {"worst_ratio", b.worst_ratio},
                        {"lyapunov_violations", b.lyapunov_violations.size()},
                        {"objective_violations", b.objective_violations.size()},
                        {"distance_violations", b.distance_violations.size()}};
  } else {
    j["bound_check"] = nullptr;
  }
  j["notes"] = result.resolved.notes;
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

void write_svg_plot(std::ostream& out, const RunResult& result) {
  constexpr double width = 720, height = 480, left = 70, right = 20, top = 20, bottom = 50;
  const Trace& t = result.trace;
  const double kmax = std::max<double>(1.0, static_cast<double>(t.records.back().k));
  std::vector<std::pair<double, double>> curve, envelope;
  for (const TraceRecord& r : t.records) {
    if (r.dist2 > 0.0 && std::isfinite(r.dist2)) curve.emplace_back(r.k, std::log10(r.dist2));
    if (result.bound && r.k >= 1) {
      const double scale = 2.0 * t.alpha / (1.0 - t.eta1);
      const double e = scale * std::pow(result.bound->rho, static_cast<double>(r.k)) * result.bound->C;
      if (e > 0.0) envelope.emplace_back(r.k, std::log10(e));
    }
  }
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto* series : {&curve, &envelope}) {
    for (const auto& [k, y] : *series) {
      lo = first ? y : std::min(lo, y);
      hi = first ? y : std::max(hi, y);
      first = false;
    }
  }
  lo = std::floor(lo);
  hi = std::max(std::ceil(hi), lo + 1.0);
  auto px = [&](double k) { return left + (width - left - right) * k / kmax; };
  auto py = [&](double y) { return top + (height - top - bottom) * (hi - y) / (hi - lo); };
  auto polyline = [&](const std::vector<std::pair<double, double>>& s, const char* style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& [k, y] : s) out << px(k) << ',' << py(y) << ' ';
    out << "\"/>\n";
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
      << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int step = std::max(1, static_cast<int>((hi - lo) / 8.0));
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += step) {
    out << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << py(e) << "\" y2=\""
        << py(e) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e
        << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double k = kmax * i / 4.0;
    out << "<text x=\"" << px(k) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">"
        << static_cast<Index>(k) << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">k</text>\n";
  out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2 << "\" transform=\"rotate(-90 16,"
      << (top + height - bottom) / 2 << ")\" text-anchor=\"middle\">||z_k - x*||^2</text>\n";
  if (!envelope.empty()) polyline(envelope, "stroke=\"gray\" stroke-dasharray=\"8,3,2,3\"");
  polyline(curve, "stroke=\"steelblue\" stroke-width=\"1.5\"");
  out << "<text x=\"" << width - right - 8 << "\" y=\"" << top + 16 << "\" text-anchor=\"end\">"
      << to_string(result.config.variant) << ", alpha=" << t.alpha << "</text>\n";
  out << "</svg>\n";
}

int print_precision() {
  const char* env = std::getenv("IPIAG_PRINT_PRECISION");
  if (env == nullptr) return 17;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 17) return 17;
  return static_cast<int>(v);
}

std::vector<CompareRow> compare_runs(const CompositeProblem& problem,
                                     const std::vector<std::pair<std::string, RunConfig>>& configs,
                                     int repetitions) {
  require(configs.size() >= 2, "compare: need at least two configs");
  require(repetitions >= 1, "compare: repetitions must be >= 1");
  std::vector<CompareRow> rows;
  for (const auto& [label, base] : configs) {
    CompareRow row;
    row.label = label;
    row.variant = base.variant;
    const int reps = base.schedule == ScheduleKind::sync ? 1 : repetitions;
    double sum4 = 0.0, sum6 = 0.0;
    bool all4 = true, all6 = true;
    for (int r = 0; r < reps; ++r) {
      RunConfig cfg = base;
      cfg.seed = base.seed + static_cast<std::uint64_t>(r);
      const RunResult res = execute_run(problem, cfg);
      const Trace& t = res.trace;
      row.alpha = t.alpha;
      row.eta1 = t.eta1;
      row.eta2 = t.eta2;
      if (res.resolved.certificate) row.rho = res.resolved.certificate->rho;
      const auto k4 = iterations_to(t, 1e-4);
      const auto k6 = iterations_to(t, 1e-6);
      all4 = all4 && k4.has_value();
      all6 = all6 && k6.has_value();
      if (k4) sum4 += static_cast<double>(*k4);
      if (k6) sum6 += static_cast<double>(*k6);
      row.final_gap += (t.records.back().phi - t.reference_value) / reps;
      row.final_dist2 += t.records.back().dist2 / reps;
    }
    if (all4) row.iters_to_1e4 = sum4 / reps;
    if (all6) row.iters_to_1e6 = sum6 / reps;
    row.repetitions = reps;
    rows.push_back(row);
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, int precision) {
  out << "label,variant,alpha,eta1,eta2,rho,iters_to_1e-4,iters_to_1e-6,final_gap,final_dist2,"
         "repetitions\n";
  const auto old = out.precision(precision);
  for (const CompareRow& r : rows) {
    out << r.label << ',' << to_string(r.variant) << ',' << r.alpha << ',' << r.eta1 << ','
        << r.eta2 << ',';
    if (std::isfinite(r.rho)) out << r.rho;
    out << ',';
    if (r.iters_to_1e4) out << *r.iters_to_1e4;
    out << ',';
    if (r.iters_to_1e6) out << *r.iters_to_1e6;
    out << ',' << r.final_gap << ',' << r.final_dist2 << ',' << r.repetitions << '\n';
  }
  out.precision(old);
}

CompositeProblem with_reference(const CompositeProblem& problem) {
  if (problem.known_optimum()) return problem;
  return problem.with_known_optimum(lasso_reference_solution(problem));
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

struct RunFlags {
  std::string problem;
  std::string variant = "ipiag";
  std::string alpha = "auto", eta1 = "auto", eta2 = "auto";
  double c1 = 0.45;
  std::string alpha_rule = "t1";
  std::optional<double> beta;
  int tau = 4;
  int workers = 4;
  std::string schedule = "uniform1";
  std::uint64_t seed = 0;
  Index iters = 10000;
  Index record_every = 1;
  std::string out;
  bool plot = false;
};

int cmd_run(const RunFlags& f) {
  RunConfig c;
  c.variant = variant_from_string(f.variant);
  c.alpha = parse_auto(f.alpha, "--alpha");
  c.eta1 = parse_auto(f.eta1, "--eta1");
  c.eta2 = parse_auto(f.eta2, "--eta2");
  c.c1 = f.c1;
  c.alpha_rule = certificate_variant_from_string(f.alpha_rule);
  c.tau = f.tau;
  c.workers = f.workers;
  c.schedule = schedule_kind_from_string(f.schedule);
  c.seed = f.seed;
  c.iters = f.iters;
  c.record_every = f.record_every;
  c.validate();

  CompositeProblem problem = problem_from_json(read_json_file(f.problem));
  if (f.beta) problem = problem.with_growth_constant(*f.beta);
  problem = with_reference(problem);

  const auto start = std::chrono::steady_clock::now();
  const RunResult result = execute_run(problem, c);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path dir(f.out);
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "trace.csv");
    write_trace_csv(csv, result.trace, print_precision());
  }
  nlohmann::json summary = run_summary(result, seconds);
  summary["problem"] = problem_to_json(problem);
  summary["problem"].erase("known_optimum");
  {
    std::ofstream js(dir / "summary.json");
    js << summary.dump(2) << '\n';
  }
  if (f.plot) {
    std::ofstream svg(dir / "plot.svg");
    write_svg_plot(svg, result);
  }
  summary.erase("problem");
  std::cout << summary.dump(2) << '\n';
  if (result.bound && !result.bound->passed()) {
    std::cerr << "bound check failed\n";
    return exit_bound_check;
  }
  return exit_ok;
}

int cmd_compare(const std::string& spec_path) {
  const nlohmann::json spec = read_json_file(spec_path);
  try {
    require(spec.contains("problem"), "compare: spec needs a 'problem'");
    require(spec.contains("configs") && spec.at("configs").is_array(),
            "compare: spec needs a 'configs' array");
    CompositeProblem problem = problem_from_json(spec.at("problem"));
    if (spec.contains("beta")) problem = problem.with_growth_constant(spec.at("beta").get<double>());
    problem = with_reference(problem);
    const RunConfig defaults = run_config_from_json(spec.value("defaults", nlohmann::json::object()));
    std::vector<std::pair<std::string, RunConfig>> configs;
    for (const auto& entry : spec.at("configs")) {
      if (entry.contains("problem")) {
        require(entry.at("problem") == spec.at("problem"), "compare: configs use different problems");
      }
      RunConfig c = run_config_from_json(entry, defaults);
      configs.emplace_back(entry.value("label", to_string(c.variant)), c);
    }
    const auto rows = compare_runs(problem, configs, spec.value("repetitions", 10));
    if (spec.contains("out")) {
      std::ofstream out(spec.at("out").get<std::string>());
      require(out.good(), "compare: cannot write output");
      write_compare_csv(out, rows, print_precision());
    } else {
      write_compare_csv(std::cout, rows, print_precision());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("compare spec: ") + e.what());
  }
  return exit_ok;
}

struct CertifyFlags {
  double L = 0.0;
  double beta = 0.0;
  int tau = 0;
  double c1 = 0.0;
  std::string variant = "t1";
  std::optional<double> alpha;
  std::optional<double> eta2;
};

int cmd_certify(const CertifyFlags& f) {
  const CertificateVariant v = certificate_variant_from_string(f.variant);
  const RateInputs in{f.L, f.beta, f.tau, f.c1};
  RateCertificate cert;
  switch (v) {
    case CertificateVariant::corollary1: cert = corollary1_params(in, f.alpha); break;
    case CertificateVariant::corollary2:
      require(f.c1 == 0.0, "certify: corollary2 has C1 = 0");
      cert = corollary2_params(f.L, f.beta, f.tau, f.alpha, f.eta2);
      break;
    default: cert = theorem1_params(in, v, f.alpha, f.eta2); break;
  }
  nlohmann::json j = to_json(cert);
  if (f.c1 < 0.5) {
    j["alpha0_stated"] = theorem1_alpha0(in, CertificateVariant::theorem1_stated);
    j["alpha0_proof_tight"] = theorem1_alpha0(in, CertificateVariant::theorem1_proof_tight);
  } else {
    j["alpha0_stated"] = nullptr;
    j["alpha0_proof_tight"] = nullptr;
  }
  std::cout << j.dump(2) << '\n';
  return exit_ok;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Inertial proximal incremental aggregated gradient solver and benchmarks"};
  app.require_subcommand(1);

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Run one solver configuration");
  run->add_option("--problem", rf.problem, "Problem JSON (full document or generator block)")->required();
  run->add_option("--variant", rf.variant, "piag | piag-m | piag-nel | ipiag");
  run->add_option("--alpha", rf.alpha, "Step size or 'auto'");
  run->add_option("--eta1", rf.eta1, "Pre-prox inertia or 'auto'");
  run->add_option("--eta2", rf.eta2, "Post-prox extrapolation or 'auto'");
  run->add_option("--c1", rf.c1, "eta1 = c1 alpha beta when eta1 is auto");
  run->add_option("--alpha-rule", rf.alpha_rule, "t1 | t1tight | cor1 | cor2 (alpha = auto)");
  run->add_option("--beta", rf.beta, "Growth constant, overriding the problem's");
  run->add_option("--tau", rf.tau, "Declared delay bound");
  run->add_option("--workers", rf.workers, "Number of workers");
  run->add_option("--schedule", rf.schedule, "sync | uniform1");
  run->add_option("--seed", rf.seed, "Schedule seed");
  run->add_option("--iters", rf.iters, "Iterations K");
  run->add_option("--record-every", rf.record_every, "Trace stride");
  run->add_option("--out", rf.out, "Output directory")->required();
  run->add_flag("--plot", rf.plot, "Also write plot.svg");

  std::string spec_path;
  auto* compare = app.add_subcommand("compare", "Run several configurations on one problem");
  compare->add_option("--spec", spec_path, "Comparison spec JSON")->required();

  CertifyFlags cf;
  auto* certify = app.add_subcommand("certify", "Print a rate certificate");
  certify->add_option("--L", cf.L, "Total Lipschitz constant")->required();
  certify->add_option("--beta", cf.beta, "Quadratic-growth constant")->required();
  certify->add_option("--tau", cf.tau, "Delay bound")->required();
  certify->add_option("--c1", cf.c1, "eta1 = C1 alpha beta");
  certify->add_option("--variant", cf.variant, "t1 | t1tight | cor1 | cor2");
  certify->add_option("--alpha", cf.alpha, "Step size (default alpha0)");
  certify->add_option("--eta2", cf.eta2, "Post-prox extrapolation (default eta2_max)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return cmd_run(rf);
    if (*compare) return cmd_compare(spec_path);
    return cmd_certify(cf);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const ScheduleInvariantError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return exit_divergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace ipiag
