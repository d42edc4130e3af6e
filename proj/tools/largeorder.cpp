#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "largeorder/arith.hpp"
#include "largeorder/engine.hpp"
#include "largeorder/oracle.hpp"
#include "largeorder/order.hpp"
#include "largeorder/smooth.hpp"

namespace {

using namespace largeorder;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

// Largest N accepted by commands that run the brute-force oracle.
constexpr std::uint64_t kOracleLimit = 10'000'000;
constexpr std::uint64_t kPsiLimit = 10'000'000;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json base_payload(const std::string& command, json inputs) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  return j;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

std::optional<std::string> optional_str(const std::optional<Int>& v) {
  if (!v) {
    return std::nullopt;
  }
  return v->get_str();
}

json null_or(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

/// Threshold from --threshold, else LARGEORDER_THRESHOLD, else the default.
Int resolve_threshold(const std::string& flag) {
  if (!flag.empty()) {
    return parse_decimal(flag);
  }
  if (const char* env = std::getenv("LARGEORDER_THRESHOLD"); env != nullptr && *env != '\0') {
    return parse_decimal(env);
  }
  return EngineConfig{}.small_n_threshold;
}

void outcome_fields(json& j, const SearchOutcome& outcome) {
  if (const auto* div = std::get_if<NontrivialDivisor>(&outcome)) {
    j["kind"] = "divisor";
    j["value"] = div->d.get_str();
    return;
  }
  const auto& elem = std::get<LargeOrderElement>(outcome);
  j["kind"] = "element";
  j["value"] = elem.alpha.value().get_str();
  if (elem.known_order) {
    j["order"] = elem.known_order->get_str();
  }
}

std::string outcome_text(const SearchOutcome& outcome) {
  if (const auto* div = std::get_if<NontrivialDivisor>(&outcome)) {
    return "divisor " + div->d.get_str();
  }
  const auto& elem = std::get<LargeOrderElement>(outcome);
  std::string s = "element " + elem.alpha.value().get_str();
  if (elem.known_order) {
    s += " order " + elem.known_order->get_str();
  }
  return s;
}

json trace_json(const EngineTrace& t) {
  json j;
  j["exit"] = to_string(t.exit);
  j["B"] = t.B.get_str();
  j["reached_final_stage"] = t.reached_final_stage;
  if (t.reached_final_stage) {
    j["M_final"] = t.M_final.get_str();
    j["alpha_final"] = t.alpha_final.get_str();
  }
  j["Z"] = null_or(optional_str(t.Z));
  j["k_hit"] = null_or(optional_str(t.k_hit));
  j["fallback_invocations"] = t.fallback_invocations;
  j["multiplications"] = t.multiplications;
  j["order_search"] = {{"calls", t.order_stats.calls},
                       {"multiplications", t.order_stats.multiplications},
                       {"worst_budget_ratio", t.order_stats.worst_budget_ratio},
                       {"budget_violations", t.order_stats.budget_violations}};
  json iters = json::array();
  for (const auto& it : t.iterations) {
    iters.push_back({{"beta", it.beta.get_str()},
                     {"branch", to_string(it.branch)},
                     {"m", null_or(optional_str(it.m))},
                     {"M_after", it.M_after.get_str()},
                     {"alpha_after", it.alpha_after.get_str()}});
  }
  j["iterations"] = std::move(iters);
  return j;
}

void print_trace_text(const EngineTrace& t) {
  std::cout << "exit " << to_string(t.exit) << '\n';
  if (t.B != 0) {
    std::cout << "B " << t.B.get_str() << '\n';
  }
  for (const auto& it : t.iterations) {
    std::cout << "  beta=" << it.beta.get_str() << " branch=" << to_string(it.branch);
    if (it.m) {
      std::cout << " m=" << it.m->get_str();
    }
    std::cout << " M=" << it.M_after.get_str() << " alpha=" << it.alpha_after.get_str() << '\n';
  }
  if (t.reached_final_stage) {
    std::cout << "final stage M=" << t.M_final.get_str();
    if (t.Z) {
      std::cout << " Z=" << t.Z->get_str();
    }
    if (t.k_hit) {
      std::cout << " k=" << t.k_hit->get_str();
    }
    std::cout << '\n';
  }
  std::cout << "fallback_invocations " << t.fallback_invocations << '\n';
  std::cout << "multiplications " << t.multiplications + t.order_stats.multiplications << '\n';
}

struct FindArgs {
  std::string n, d, threshold;
  bool trace = false;
  bool json = false;
  bool primorial = false;
};

int cmd_find(const FindArgs& a) {
  const Int n = parse_decimal(a.n);
  const Int d = parse_decimal(a.d);
  EngineConfig config;
  config.small_n_threshold = resolve_threshold(a.threshold);
  config.trace = a.trace;
  config.enable_primorial_optimization = a.primorial;

  const auto start = Clock::now();
  const EngineResult r = find_large_order(n, d, config);
  const double ms = elapsed_ms(start);

  if (a.json) {
    json j = base_payload("find", {{"n", n.get_str()},
                                   {"d", d.get_str()},
                                   {"threshold", config.small_n_threshold.get_str()}});
    outcome_fields(j, r.outcome);
    if (a.trace) {
      j["trace"] = trace_json(r.trace);
    }
    j["timing_ms"] = ms;
    emit(j);
  } else {
    std::cout << outcome_text(r.outcome) << '\n';
    if (a.trace) {
      print_trace_text(r.trace);
    }
  }
  return kExitOk;
}

struct OrderArgs {
  std::string n, alpha, bound;
  bool json = false;
  bool primorial = false;
};

int cmd_order(const OrderArgs& a) {
  const Int n = parse_decimal(a.n);
  const Int alpha_in = parse_decimal(a.alpha);
  const Int bound = parse_decimal(a.bound);
  if (n < 2) {
    throw PreconditionError("N must be at least 2");
  }
  if (bound < 1) {
    throw PreconditionError("bound must be at least 1");
  }
  const Residue alpha = Residue::reduce(alpha_in, n);
  json j = base_payload("order", {{"n", n.get_str()},
                                  {"alpha", alpha_in.get_str()},
                                  {"bound", bound.get_str()}});
  const auto start = Clock::now();

  const Int g = gcd(alpha.value(), n);
  if (g != 1) {
    if (g == n) {
      throw PreconditionError("alpha is 0 modulo N; no order and no divisor");
    }
    if (a.json) {
      j["kind"] = "divisor";
      j["value"] = g.get_str();
      j["timing_ms"] = elapsed_ms(start);
      emit(j);
    } else {
      std::cout << "not invertible; divisor " << g.get_str() << '\n';
    }
    return kExitOk;
  }

  const OrderSearchOptions options{OrderSearchOptions{}.budget_constant, a.primorial};
  OrderSearchStats stats;
  const BoundedOrderResult r = order_bounded(alpha, bound, options, &stats);
  const double ms = elapsed_ms(start);
  const auto* exact = std::get_if<ExactOrder>(&r);
  if (a.json) {
    if (exact != nullptr) {
      j["kind"] = "exact";
      j["order"] = exact->order.get_str();
      j["factorization"] = exact->factorization.to_string();
    } else {
      j["kind"] = "exceeds_bound";
    }
    j["multiplications"] = stats.multiplications;
    j["timing_ms"] = ms;
    emit(j);
  } else if (exact != nullptr) {
    std::cout << "order " << exact->order.get_str() << " = "
              << exact->factorization.to_string() << '\n';
  } else {
    std::cout << "exceeds bound " << bound.get_str() << '\n';
  }
  return kExitOk;
}

struct PsiArgs {
  std::string x, y;
  bool bound_only = false;
  bool json = false;
};

int cmd_psi(const PsiArgs& a) {
  const Int x = parse_decimal(a.x);
  const Int y = parse_decimal(a.y);
  if (x < 1 || y < 1) {
    throw PreconditionError("x and y must be positive");
  }
  const auto start = Clock::now();
  std::optional<std::uint64_t> count;
  if (!a.bound_only) {
    if (x > kPsiLimit) {
      throw PreconditionError("x above 10^7 needs --bound-only");
    }
    count = psi_brute(to_u64(x), to_u64(y));
  }
  std::optional<double> bound;
  const double xd = x.get_d();
  const double yd = y.get_d();
  if (xd >= 4.0 && yd >= 2.0 && xd >= yd) {
    bound = psi_lower_bound(xd, yd);
  } else if (a.bound_only) {
    throw PreconditionError("the lower bound needs x >= 4 and x >= y >= 2");
  }
  const double ms = elapsed_ms(start);

  if (a.json) {
    json j = base_payload("psi", {{"x", x.get_str()}, {"y", y.get_str()}});
    j["count"] = count ? json(std::to_string(*count)) : json(nullptr);
    j["bound"] = bound ? json(*bound) : json(nullptr);
    j["timing_ms"] = ms;
    emit(j);
  } else {
    if (count) {
      std::cout << "count " << *count << '\n';
    }
    if (bound) {
      std::cout << "bound " << *bound << '\n';
    }
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string n, d, threshold;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a) {
  const Int n = parse_decimal(a.n);
  const Int d = parse_decimal(a.d);
  if (n > kOracleLimit) {
    throw PreconditionError("verify needs N <= 10^7");
  }
  EngineConfig config;
  config.small_n_threshold = resolve_threshold(a.threshold);

  const auto start = Clock::now();
  const EngineResult r = find_large_order(n, d, config);
  const oracle::VerificationReport report = oracle::verify_outcome(n, d, r.outcome);
  const double ms = elapsed_ms(start);

  if (a.json) {
    json j = base_payload("verify", {{"n", n.get_str()},
                                     {"d", d.get_str()},
                                     {"threshold", config.small_n_threshold.get_str()}});
    outcome_fields(j, r.outcome);
    j["verdict"] = report.pass ? "pass" : "fail";
    j["detail"] = report.detail;
    j["timing_ms"] = ms;
    emit(j);
  } else {
    std::cout << (report.pass ? "pass" : "fail") << ": " << outcome_text(r.outcome) << " ("
              << report.detail << ")\n";
  }
  return report.pass ? kExitOk : kExitInternal;
}

struct BenchArgs {
  std::string n = "18446744073709551557";
  std::vector<unsigned> d_exponents{20, 22, 24};
  std::vector<std::string> pairs;
  unsigned repeats = 3;
  std::string threshold;
  bool primorial = false;
  bool json = false;
};

struct BenchRow {
  Int n, d;
  double median_ms = 0.0;
  std::uint64_t multiplications = 0;
  SearchOutcome outcome;
  ExitPoint exit = ExitPoint::SmallN;
};

/// Least-squares slope of log(ms) against log(D).
std::optional<double> fitted_exponent(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) {
    return std::nullopt;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(r.d.get_d());
    const double y = std::log(std::max(r.median_ms, 1e-6));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(rows.size());
  const double den = k * sxx - sx * sx;
  if (den == 0.0) {
    return std::nullopt;
  }
  return (k * sxy - sx * sy) / den;
}

int cmd_bench(const BenchArgs& a) {
  if (a.repeats == 0) {
    throw PreconditionError("repeats must be positive");
  }
  std::vector<std::pair<Int, Int>> inputs;
  for (const auto& p : a.pairs) {
    const auto colon = p.find(':');
    if (colon == std::string::npos) {
      throw PreconditionError("--pair expects N:D, got '" + p + "'");
    }
    inputs.emplace_back(parse_decimal(p.substr(0, colon)), parse_decimal(p.substr(colon + 1)));
  }
  if (inputs.empty()) {
    const Int n = parse_decimal(a.n);
    for (unsigned e : a.d_exponents) {
      if (e == 0 || e > 62) {
        throw PreconditionError("D exponents must lie in [1, 62]");
      }
      inputs.emplace_back(n, Int(1) << e);
    }
  }

  EngineConfig config;
  config.small_n_threshold = resolve_threshold(a.threshold);
  config.enable_primorial_optimization = a.primorial;

  std::vector<BenchRow> rows;
  for (const auto& [n, d] : inputs) {
    std::vector<double> times;
    std::optional<EngineResult> last;
    for (unsigned i = 0; i < a.repeats; ++i) {
      const auto start = Clock::now();
      EngineResult r = find_large_order(n, d, config);
      times.push_back(elapsed_ms(start));
      last = std::move(r);
    }
    std::sort(times.begin(), times.end());
    const double median = times.size() % 2 == 1
                              ? times[times.size() / 2]
                              : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
    rows.push_back(BenchRow{n, d, median,
                            last->trace.multiplications + last->trace.order_stats.multiplications,
                            last->outcome, last->trace.exit});
    std::cerr << "bench N=" << n.get_str() << " D=" << d.get_str() << " median_ms=" << median
              << '\n';
  }

  std::vector<std::optional<double>> ratios;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].median_ms > 0.0) {
      ratios.emplace_back(rows[i].median_ms / rows[i - 1].median_ms);
    } else {
      ratios.emplace_back(std::nullopt);
    }
  }
  const auto slope = fitted_exponent(rows);

  if (a.json) {
    json runs = json::array();
    for (const auto& r : rows) {
      json row{{"n", r.n.get_str()},
               {"d", r.d.get_str()},
               {"median_ms", r.median_ms},
               {"multiplications", r.multiplications},
               {"exit", to_string(r.exit)}};
      outcome_fields(row, r.outcome);
      runs.push_back(std::move(row));
    }
    json ratio_list = json::array();
    for (const auto& q : ratios) {
      ratio_list.push_back(q ? json(*q) : json(nullptr));
    }
    json j = base_payload("bench", {{"repeats", std::to_string(a.repeats)},
                                    {"threshold", config.small_n_threshold.get_str()}});
    j["runs"] = std::move(runs);
    j["time_ratios"] = std::move(ratio_list);
    j["fitted_exponent"] = slope ? json(*slope) : json(nullptr);
    emit(j);
  } else {
    for (const auto& r : rows) {
      std::cout << "N=" << r.n.get_str() << " D=" << r.d.get_str() << " median_ms=" << r.median_ms
                << " mults=" << r.multiplications << " exit=" << to_string(r.exit) << " "
                << outcome_text(r.outcome) << '\n';
    }
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      std::cout << "ratio " << i + 1 << ": " << (ratios[i] ? std::to_string(*ratios[i]) : "n/a")
                << '\n';
    }
    if (slope) {
      std::cout << "fitted exponent " << *slope << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find an element of large multiplicative order modulo N, or a divisor of N"};
  app.require_subcommand(1);

  FindArgs find;
  auto* find_cmd = app.add_subcommand("find", "Element of order > D or a nontrivial divisor");
  find_cmd->add_option("--n", find.n, "Modulus N >= 3")->required();
  find_cmd->add_option("--d", find.d, "Bound D, 1 <= D < N - 1")->required();
  find_cmd->add_flag("--trace", find.trace, "Include per-iteration details");
  find_cmd->add_option("--threshold", find.threshold, "Small-N threshold (>= 3)");
  find_cmd->add_flag("--json", find.json, "Emit one JSON object");
  find_cmd->add_flag("--primorial", find.primorial, "Primorial baby steps in order searches");

  OrderArgs order;
  auto* order_cmd = app.add_subcommand("order", "Decide whether ord_N(alpha) <= bound");
  order_cmd->add_option("--n", order.n, "Modulus N")->required();
  order_cmd->add_option("--alpha", order.alpha, "Element")->required();
  order_cmd->add_option("--bound", order.bound, "Order bound >= 1")->required();
  order_cmd->add_flag("--json", order.json, "Emit one JSON object");
  order_cmd->add_flag("--primorial", order.primorial, "Primorial baby steps");

  PsiArgs psi;
  auto* psi_cmd = app.add_subcommand("psi", "Count y-smooth integers up to x");
  psi_cmd->add_option("--x", psi.x, "Upper end x")->required();
  psi_cmd->add_option("--y", psi.y, "Smoothness bound y")->required();
  psi_cmd->add_flag("--bound-only", psi.bound_only, "Only evaluate the lower bound");
  psi_cmd->add_flag("--json", psi.json, "Emit one JSON object");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run find and check the answer by brute force");
  verify_cmd->add_option("--n", verify.n, "Modulus N <= 10^7")->required();
  verify_cmd->add_option("--d", verify.d, "Bound D")->required();
  verify_cmd->add_option("--threshold", verify.threshold, "Small-N threshold (>= 3)");
  verify_cmd->add_flag("--json", verify.json, "Emit one JSON object");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time find over a series of D");
  bench_cmd->add_option("--n", bench.n, "Modulus for the D series")->capture_default_str();
  bench_cmd->add_option("--d-exponents", bench.d_exponents, "D = 2^e for each e")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--pair", bench.pairs, "Explicit N:D pair, repeatable");
  bench_cmd->add_option("--repeats", bench.repeats, "Runs per input; the median is reported")
      ->capture_default_str();
  bench_cmd->add_option("--threshold", bench.threshold, "Small-N threshold (>= 3)");
  bench_cmd->add_flag("--primorial", bench.primorial, "Primorial baby steps");
  bench_cmd->add_flag("--json", bench.json, "Emit one JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*find_cmd) {
      return cmd_find(find);
    }
    if (*order_cmd) {
      return cmd_order(order);
    }
    if (*psi_cmd) {
      return cmd_psi(psi);
    }
    if (*verify_cmd) {
      return cmd_verify(verify);
    }
    if (*bench_cmd) {
      return cmd_bench(bench);
    }
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: value out of range: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
