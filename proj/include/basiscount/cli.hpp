#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "basiscount/counting.hpp"
#include "basiscount/enumerate.hpp"
#include "basiscount/json_spec.hpp"
#include "basiscount/lab/campaign.hpp"
#include "basiscount/lab/capacity.hpp"
#include "basiscount/lab/distribution.hpp"
#include "basiscount/lab/phi.hpp"
#include "basiscount/lmo.hpp"

namespace basiscount::cli {

enum ExitCode : int { ok = 0, usage = 1, bad_spec = 2, infeasible = 3, guard_refused = 4 };

/// 12 significant digits, shortest round-trip afterwards.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

/// exp(log_value) as a decimal string with 12 significant digits, valid far
/// outside the double range.
inline std::string format_exp(double log_value) {
  if (log_value == -std::numeric_limits<double>::infinity()) return "0";
  if (!std::isfinite(log_value)) return "inf";
  char buf[64];
  if (std::abs(log_value) < 700.0) {
    std::snprintf(buf, sizeof buf, "%.12g", std::exp(log_value));
    return buf;
  }
  const double e10 = log_value / std::log(10.0);
  double exponent = std::floor(e10);
  double mantissa = std::pow(10.0, e10 - exponent);
  if (mantissa >= 9.999999999995) {
    mantissa /= 10.0;
    exponent += 1.0;
  }
  std::snprintf(buf, sizeof buf, "%.11fe%+.0f", mantissa, exponent);
  return buf;
}

inline nlohmann::ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

struct CommonOptions {
  std::optional<double> tol;
  std::size_t max_iters = 20000;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool force = false;
  bool timing = false;
  bool exact = false;
  std::string weights_file;

  SolveOptions solver() const {
    SolveOptions s;
    s.tol = tol;
    s.max_iters = max_iters;
    s.seed = seed;
    return s;
  }
  EnumerationGuard guard() const {
    EnumerationGuard g;
    g.override_limits = force;
    return g;
  }
};

namespace detail {

inline void emit(std::ostream& out, const nlohmann::ordered_json& doc, const std::string& format) {
  if (format == "table") {
    for (const auto& [key, value] : doc.items()) {
      out << std::left << std::setw(16) << key << ' ';
      if (value.is_string())
        out << value.get<std::string>();
      else
        out << value.dump();
      out << '\n';
    }
    return;
  }
  out << doc.dump(2) << '\n';
}

inline nlohmann::ordered_json estimate_json(const CountEstimate& est) {
  nlohmann::ordered_json doc;
  doc["tau_found"] = number_or_null(est.tau_found);
  doc["gap"] = number_or_null(est.gap);
  doc["beta_upper"] = format_exp(est.log_beta_upper);
  nlohmann::ordered_json lows = nlohmann::ordered_json::object();
  for (const auto& lb : est.lower_bounds) lows[lb.name] = format_exp(lb.log_value);
  doc["lower_bounds"] = lows;
  doc["mode"] = mode_name(est.mode);
  doc["r"] = est.r;
  doc["n"] = est.n;
  doc["exact"] = nullptr;
  doc["elapsed_ms"] = nullptr;
  doc["constant"] = est.constant;
  if (est.mode == CountMode::weighted) doc["constant_note"] = "conservative constant";
  doc["iterations"] = est.iterations;
  return doc;
}

inline std::vector<double> read_point(const std::string& file, std::size_t n) {
  const auto doc = read_json_file(file);
  if (!doc.is_array()) throw SpecError(file + ":$", "expected an array");
  if (doc.size() != n)
    throw SpecError(file + ":$", "point has " + std::to_string(doc.size()) + " entries, expected " + std::to_string(n));
  std::vector<double> p;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto path = file + ":$[" + std::to_string(i) + "]";
    if (doc[i].is_string()) {
      try {
        p.push_back(parse_rational(doc[i].get<std::string>()).get_d());
      } catch (const std::invalid_argument& e) {
        throw SpecError(path, e.what());
      }
    } else if (doc[i].is_number()) {
      p.push_back(doc[i].get<double>());
    } else {
      throw SpecError(path, "expected a number");
    }
  }
  return p;
}

inline nlohmann::ordered_json doubles_json(const std::vector<double>& v) {
  auto arr = nlohmann::ordered_json::array();
  for (double x : v) arr.push_back(round12(x));
  return arr;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic approximate counting of matroid bases and common bases"};
  app.require_subcommand(1);
  app.name("basiscount");

  CommonOptions opt;
  std::vector<std::string> files;
  std::size_t k = 0;
  std::size_t trials = 0;
  std::string point_file;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", opt.tol, "Frank-Wolfe gap tolerance (default 1e-6 * n)")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", opt.max_iters, "Frank-Wolfe iteration limit")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "random seed (default 0)");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "table"}));
    sub->add_flag("--force", opt.force, "lift the enumeration guards");
    sub->add_flag("--timing", opt.timing, "report elapsed_ms (otherwise null, keeping output deterministic)");
  };

  auto* count = app.add_subcommand("count", "bracket the number of bases of a matroid");
  count->add_option("spec", files, "matroid JSON")->required()->expected(1);
  count->add_flag("--exact", opt.exact, "also count exactly by enumeration");

  auto* count_k = app.add_subcommand("count-k", "bracket the number of independent sets of size k");
  count_k->add_option("spec", files, "matroid JSON")->required()->expected(1);
  count_k->add_option("--k", k, "set size")->required();
  count_k->add_flag("--exact", opt.exact, "also count exactly by enumeration");

  auto* inter = app.add_subcommand("intersect-count", "bracket the number of common bases of two matroids");
  inter->add_option("specs", files, "two matroid JSON files")->required()->expected(2);
  inter->add_flag("--exact", opt.exact, "also count exactly by enumeration");

  auto* weighted = app.add_subcommand("weighted-count", "bracket the weighted count of (common) bases");
  weighted->add_option("specs", files, "one or two matroid JSON files")->required()->expected(1, 2);
  weighted->add_option("--weights", opt.weights_file, "JSON array of weights")->required();
  weighted->add_flag("--exact", opt.exact, "also count exactly by enumeration");

  auto* exact = app.add_subcommand("exact", "count (common) bases exactly by enumeration");
  exact->add_option("specs", files, "one or two matroid JSON files")->required()->expected(1, 2);
  exact->add_option("--weights", opt.weights_file, "JSON array of weights");

  auto* validate = app.add_subcommand("validate", "check the matroid axioms");
  validate->add_option("spec", files, "matroid JSON")->required()->expected(1);
  trials = 1000;
  validate->add_option("--trials", trials, "random trials when n > 12")->check(CLI::PositiveNumber);

  auto* lab_hessian = app.add_subcommand("lab-hessian", "Hessian signature, log-concavity and Euler campaigns");
  lab_hessian->add_option("spec", files, "matroid JSON")->required()->expected(1);
  lab_hessian->add_option("--trials", trials, "trials per campaign")->check(CLI::PositiveNumber);

  auto* lab_entropy = app.add_subcommand("lab-entropy", "entropy sandwich for an external-field distribution");
  lab_entropy->add_option("spec", files, "matroid JSON")->required()->expected(1);
  lab_entropy->add_option("--weights", opt.weights_file, "JSON array of weights (default all ones)");

  auto* lab_capacity = app.add_subcommand("lab-capacity", "log-capacity of the basis polynomial");
  lab_capacity->add_option("spec", files, "matroid JSON")->required()->expected(1);
  lab_capacity->add_option("--weights", opt.weights_file, "JSON array of weights (default all ones)");
  lab_capacity->add_option("--point", point_file, "JSON array p (default: external-field marginals)");

  auto* lab_phi = app.add_subcommand("lab-phi", "capacity lower bound on the number of common bases");
  lab_phi->add_option("specs", files, "two matroid JSON files")->required()->expected(2);
  lab_phi->add_option("--point", point_file, "JSON array p (default: entropy-maximizing common point)");

  for (auto* sub : {count, count_k, inter, weighted, exact, validate, lab_hessian, lab_entropy, lab_capacity, lab_phi})
    add_common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
      err << sub->help();
    else
      err << app.help();
    return usage;
  }
  if (lab_hessian->parsed() && lab_hessian->count("--trials") == 0) trials = 100;

  const auto start = std::chrono::steady_clock::now();
  auto finish = [&](nlohmann::ordered_json doc, int code) {
    if (doc.contains("elapsed_ms") && opt.timing) {
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      doc["elapsed_ms"] = std::round(ms * 1000.0) / 1000.0;
    }
    detail::emit(out, doc, opt.format);
    return code;
  };
  const CountOptions copts{opt.solver()};

  try {
    std::vector<Matroid> ms;
    for (const auto& f : files) ms.push_back(load_matroid(f));
    if (ms.size() == 2 && ms[0].size() != ms[1].size())
      throw SpecError(files[1] + ":$", "ground set size " + std::to_string(ms[1].size()) + " differs from " +
                                           std::to_string(ms[0].size()) + " in " + files[0]);
    std::optional<Weights> lambda;
    if (!opt.weights_file.empty()) {
      lambda = load_weights(opt.weights_file);
      if (lambda->size() != ms[0].size())
        throw SpecError(opt.weights_file + ":$", "has " + std::to_string(lambda->size()) + " weights, expected " +
                                                    std::to_string(ms[0].size()));
    }
    const std::optional<Matroid> other = ms.size() == 2 ? std::optional<Matroid>(ms[1]) : std::nullopt;

    if (count->parsed() || count_k->parsed() || inter->parsed() || weighted->parsed()) {
      CountEstimate est;
      Matroid target = ms[0];
      if (count->parsed()) {
        est = count_bases(target, copts);
      } else if (count_k->parsed()) {
        if (k > target.rank())
          throw SpecError("--k", "k = " + std::to_string(k) + " exceeds the rank " + std::to_string(target.rank()));
        target = truncation(target, k);
        est = count_bases(target, copts);
      } else if (inter->parsed()) {
        est = count_common_bases(ms[0], ms[1], copts);
      } else {
        est = count_weighted_common_bases(ms[0], other, *lambda, copts);
      }
      auto doc = detail::estimate_json(est);
      if (opt.exact) {
        const bool pair = inter->parsed() || (weighted->parsed() && other);
        const auto ex = exact_weighted_count(target, pair ? other : std::nullopt,
                                             weighted->parsed() ? lambda : std::nullopt, opt.guard());
        doc["exact"] = ex.to_string();
      } else if (est.exact_zero) {
        doc["exact"] = "0";
      }
      return finish(doc, est.exact_zero ? infeasible : ok);
    }

    if (exact->parsed()) {
      const auto ex = exact_weighted_count(ms[0], other, lambda, opt.guard());
      nlohmann::ordered_json doc;
      doc["exact"] = ex.to_string();
      doc["support"] = ex.support;
      doc["mode"] = other ? (lambda ? "weighted" : "intersection") : (lambda ? "weighted" : "single");
      doc["r"] = ms[0].rank();
      doc["n"] = ms[0].size();
      doc["elapsed_ms"] = nullptr;
      return finish(doc, ok);
    }

    if (validate->parsed()) {
      const auto rep = validate_matroid(ms[0], trials, opt.seed);
      nlohmann::ordered_json doc;
      doc["n"] = ms[0].size();
      doc["r"] = ms[0].rank();
      doc["kind"] = kind_name(ms[0].kind());
      doc["exhaustive"] = rep.exhaustive;
      doc["checks"] = rep.checks;
      doc["passed"] = rep.passed();
      auto vs = nlohmann::ordered_json::array();
      for (const auto& v : rep.violations) {
        const char* kind = v.kind == AxiomViolation::Kind::empty_set_dependent ? "empty_set_dependent"
                           : v.kind == AxiomViolation::Kind::downward_closure  ? "downward_closure"
                                                                                : "exchange";
        vs.push_back({{"kind", kind}, {"s", v.s.elements()}, {"t", v.t.elements()}});
      }
      doc["violations"] = vs;
      return finish(doc, ok);
    }

    if (lab_hessian->parsed()) {
      check_enumeration_guard(ms[0].size(), ms[0].rank(), opt.guard());
      const std::string name = files[0];
      auto reports = nlohmann::ordered_json::array();
      for (auto rep : {lab::hessian_campaign(ms[0], name, trials, opt.seed, 1e-8, opt.guard()),
                       lab::log_concavity_campaign(ms[0], name, trials, opt.seed, 1e-8, opt.guard()),
                       lab::euler_campaign(ms[0], name, trials, opt.seed, 1e-8, opt.guard())}) {
        rep.worst_residual = round12(rep.worst_residual);
        reports.push_back(lab::to_json(rep));
      }
      if (opt.format == "table") {
        for (const auto& r : reports) detail::emit(out, r, "table");
        return ok;
      }
      out << reports.dump(2) << '\n';
      return ok;
    }

    const Weights weights = lambda.value_or(Weights::ones(ms[0].size()));

    if (lab_entropy->parsed()) {
      const auto d = lab::external_field_distribution(ms[0], weights, opt.guard());
      const auto s = lab::entropy_sandwich_check(d);
      const auto dd = lab::dual_distribution(d);
      nlohmann::ordered_json doc;
      doc["lower"] = round12(s.lower);
      doc["entropy"] = round12(s.entropy);
      doc["upper"] = round12(s.upper);
      doc["upper_minus_r"] = round12(s.additive);
      doc["half_upper"] = round12(s.half);
      doc["dual_entropy"] = round12(dd.entropy);
      doc["marginals"] = detail::doubles_json(d.marginals);
      doc["support"] = d.entries.size();
      doc["pass"] = s.pass;
      return finish(doc, ok);
    }

    if (lab_capacity->parsed()) {
      const auto d = lab::external_field_distribution(ms[0], weights, opt.guard());
      const auto p = point_file.empty() ? d.marginals : detail::read_point(point_file, ms[0].size());
      lab::CapacityOptions cap;
      cap.seed = opt.seed;
      nlohmann::ordered_json doc;
      doc["point"] = detail::doubles_json(p);
      try {
        doc["log_capacity"] = round12(lab::capacity(ms[0], p, weights, cap, opt.guard()));
      } catch (const lab::CapacityUnbounded& e) {
        doc["log_capacity"] = nullptr;
        doc["unbounded"] = e.what();
      }
      if (point_file.empty()) {
        double rel = 0.0;  // sum mu log(1/mu) + sum mu log lambda^S = entropy relative to the weighting
        for (std::size_t e = 0; e < d.entries.size(); ++e) {
          double lw = 0.0;
          for (auto i : d.entries[e].first.elements()) lw += weights.log_value(i);
          rel += d.entries[e].second * lw;
        }
        doc["entropy_plus_log_weight"] = round12(d.entropy + rel);
      }
      return finish(doc, ok);
    }

    if (lab_phi->parsed()) {
      std::vector<double> p;
      if (!point_file.empty()) {
        p = detail::read_point(point_file, ms[0].size());
      } else {
        if (ms[0].rank() != ms[1].rank()) throw Infeasible("ranks differ, so there is no common basis");
        p = maximize_entropy(EntropyProgram{ms[0], ms[1], std::nullopt}, opt.solver()).point.p;
      }
      lab::CapacityOptions cap;
      cap.seed = opt.seed;
      const auto res = lab::phi_bound_check(ms[0], ms[1], p, 1e-9, cap, opt.guard());
      nlohmann::ordered_json doc;
      doc["lhs"] = res.lhs.get_str();
      doc["lhs_mixed_derivative"] = res.lhs_mixed.get_str();
      doc["log_capacity_m"] = number_or_null(res.log_cap_m);
      doc["log_capacity_dual"] = number_or_null(res.log_cap_dual);
      doc["rhs_phi"] = round12(res.rhs_phi);
      doc["rhs_simplified"] = round12(res.rhs_simplified);
      doc["phi"] = round12(lab::phi(p));
      doc["point"] = detail::doubles_json(p);
      doc["pass"] = res.pass;
      return finish(doc, ok);
    }
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return bad_spec;
  } catch (const GuardExceeded& e) {
    err << "error: enumeration guard: " << e.what() << " (use --force to override)\n";
    return guard_refused;
  } catch (const Infeasible& e) {
    err << "error: infeasible: " << e.what() << '\n';
    return infeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return bad_spec;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return bad_spec;
  }
  err << "error: no command\n";
  return usage;
}

}  // namespace basiscount::cli
