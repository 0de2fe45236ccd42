#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "agesampler/cli.hpp"
#include "agesampler/penalty.hpp"
#include "agesampler/sim.hpp"

namespace agesampler::cli {

namespace {

const char* problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::P1:
    case ProblemKind::P1Clairvoyant:
      return "p1";
    case ProblemKind::P2:
      return "p2";
    case ProblemKind::None:
      break;
  }
  return "none";
}

// Runs a command body, turning exceptions into an error report and exit code.
template <typename Body>
int guarded(const std::string& command, const std::string& output_path, std::ostream& out,
            std::ostream& err, Body&& body) {
  auto fail = [&](int code, const char* status, const char* type, const std::string& message) {
    err << command << ": " << message << '\n';
    const json doc{{"command", command},
                   {"status", status},
                   {"error", {{"type", type}, {"message", message}}}};
    try {
      write_json(doc, output_path, out);
    } catch (const std::exception&) {
      write_json(doc, "", out);
    }
    return code;
  };
  try {
    return body();
  } catch (const Infeasible& e) {
    return fail(kInfeasible, "infeasible", "Infeasible", e.what());
  } catch (const InputError& e) {
    return fail(kInvalidInput, "invalid_input", "InputError", e.what());
  } catch (const NotStochastic& e) {
    return fail(kInvalidInput, "invalid_input", "NotStochastic", e.what());
  } catch (const NotErgodic& e) {
    return fail(kInvalidInput, "invalid_input", "NotErgodic", e.what());
  } catch (const InvalidArgument& e) {
    return fail(kInvalidInput, "invalid_input", "InvalidArgument", e.what());
  } catch (const MalformedProgram& e) {
    return fail(kInvalidInput, "invalid_input", "MalformedProgram", e.what());
  } catch (const ObjectiveMismatch& e) {
    return fail(kInternalFailure, "internal_failure", "ObjectiveMismatch", e.what());
  } catch (const InducedNotErgodic& e) {
    return fail(kInternalFailure, "internal_failure", "InducedNotErgodic", e.what());
  } catch (const std::exception& e) {
    return fail(kInternalFailure, "internal_failure", "Error", e.what());
  }
}

json chain_json(const MarkovChain& chain) {
  const double nu = clairvoyant_frequency(chain);
  return json{{"p", to_json(chain.transition())},
              {"stationary", to_json(chain.stationary())},
              {"nu_dagger", nu},
              {"clairvoyant_interval", 1.0 / nu}};
}

json periodic_json(const MarkovChain& chain, int m_max, int tau) {
  const EvalReport r = evaluate_policy(chain, MarkovPolicy::periodic(chain.size(), m_max, tau),
                                       m_max);
  json doc = to_json(r);
  doc["tau"] = tau;
  return doc;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<double> parse_values(const json& doc, const std::string& name) {
  std::vector<double> out;
  if (doc.is_number()) {
    out.push_back(doc.get<double>());
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!doc[i].is_number())
        throw InputError("sweep: " + name + "[" + std::to_string(i) + "]: expected a number");
      out.push_back(doc[i].get<double>());
    }
  } else if (doc.is_object()) {
    for (const char* key : {"from", "to", "step"})
      if (!doc.contains(key) || !doc.at(key).is_number())
        throw InputError("sweep: " + name + "." + key + ": expected a number");
    const double from = doc.at("from").get<double>();
    const double to = doc.at("to").get<double>();
    const double step = doc.at("step").get<double>();
    if (!(step > 0.0) || to < from)
      throw InputError("sweep: " + name + ": need step > 0 and to >= from");
    const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      // Round to 12 digits so grid values print cleanly (0.3, not 0.30000000000000004).
      const double v = from + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    throw InputError("sweep: " + name + ": expected a number, an array, or {from,to,step}");
  }
  if (out.empty()) throw InputError("sweep: " + name + ": no values");
  return out;
}

struct GridPoint {
  double p12;
  double p21;
  double constraint;
};

std::string sweep_row(const SweepSpec& spec, const GridPoint& pt) {
  const char* name = spec.problem == SweepSpec::Kind::Clairvoyant ? "clairvoyant"
                     : spec.problem == SweepSpec::Kind::P1          ? "p1"
                                                                    : "p2";
  std::string constraint;
  std::string objective;
  std::string periodic;
  std::string nu_dagger;
  std::string ratio;
  std::string penalty;
  std::string frequency;
  std::string periodic_tau;
  std::string status = "ok";
  try {
    Matrix p(2, 2);
    p << 1.0 - pt.p12, pt.p12, pt.p21, 1.0 - pt.p21;
    const MarkovChain chain(p);
    const double nd = clairvoyant_frequency(chain);
    nu_dagger = number(nd);
    if (spec.problem != SweepSpec::Kind::Clairvoyant) {
      SolveOptions options;
      options.tie_break = spec.tie_break;
      int tau = 0;
      CmdpSolution sol;
      if (spec.problem == SweepSpec::Kind::P1) {
        const double nu = spec.nu_clairvoyant ? nd : pt.constraint;
        constraint = number(nu);
        sol = solve_p1(chain, spec.m_max, nu, options);
        objective = number(sol.report.avg_age_penalty);
        try {
          tau = optimal_periodic_p1(nu, spec.m_max);
        } catch (const PeriodExceedsM&) {
        }
      } else {
        constraint = number(pt.constraint);
        sol = solve_p2(chain, spec.m_max, pt.constraint, options);
        objective = number(sol.report.avg_sampling_frequency);
        try {
          tau = optimal_periodic_p2(pt.constraint, spec.m_max);
        } catch (const PeriodExceedsM&) {
        }
      }
      penalty = number(sol.report.avg_age_penalty);
      frequency = number(sol.report.avg_sampling_frequency);
      ratio = number(sol.report.avg_sampling_frequency / nd);
      if (tau > 0) {
        const EvalReport r = evaluate_policy(
            chain, MarkovPolicy::periodic(chain.size(), spec.m_max, tau), spec.m_max);
        periodic_tau = std::to_string(tau);
        periodic = number(spec.problem == SweepSpec::Kind::P1 ? r.avg_age_penalty
                                                              : r.avg_sampling_frequency);
      }
    }
  } catch (const Infeasible&) {
    status = "infeasible";
  } catch (const std::exception& e) {
    status = std::string("error: ") + e.what();
  }
  return number(pt.p12) + ',' + number(pt.p21) + ',' + name + ',' + constraint + ',' +
         objective + ',' + periodic + ',' + nu_dagger + ',' + ratio + ',' + penalty + ',' +
         frequency + ',' + periodic_tau + ',' + csv_quote(status);
}

}  // namespace

void RunConfig::validate() const {
  if (m_max < 1) throw InputError("--m-max must be >= 1");
  if (problem == ProblemKind::P1 && !(nu > 0.0 && nu <= 1.0))
    throw InputError("--nu must lie in (0, 1]");
  if (problem == ProblemKind::P2 && !(d >= 0.0 && std::isfinite(d)))
    throw InputError("--age-limit must be a finite value >= 0");
  if (k_samples < 1) throw InputError("--samples must be >= 1");
  if (warmup < 0) throw InputError("--warmup must be >= 0");
}

json solve_report(const MarkovChain& chain, const RunConfig& config) {
  config.validate();
  if (config.problem == ProblemKind::None)
    throw InputError("one of --nu, --clairvoyant, --age-limit is required");
  SolveOptions options;
  options.tie_break = config.tie_break;

  json report{{"command", "solve"},
              {"status", "ok"},
              {"problem", problem_name(config.problem)},
              {"m_max", config.m_max},
              {"chain", chain_json(chain)}};

  CmdpSolution sol;
  int periodic_tau = 0;
  std::string periodic_note;
  if (config.problem == ProblemKind::P2) {
    report["constraint"] = {{"d", config.d}};
    sol = solve_p2(chain, config.m_max, config.d, options);
    try {
      periodic_tau = optimal_periodic_p2(config.d, config.m_max);
    } catch (const PeriodExceedsM& e) {
      periodic_note = e.what();
    }
  } else {
    const bool clairvoyant = config.problem == ProblemKind::P1Clairvoyant;
    const double nu = clairvoyant ? clairvoyant_frequency(chain) : config.nu;
    report["constraint"] = {{"nu", nu}, {"clairvoyant", clairvoyant}, {"min_interval", 1.0 / nu}};
    sol = solve_p1(chain, config.m_max, nu, options);
    try {
      periodic_tau = optimal_periodic_p1(nu, config.m_max);
    } catch (const PeriodExceedsM& e) {
      periodic_note = e.what();
    }
  }

  json defaulted = json::array();
  for (bool d : sol.policy.defaulted) defaulted.push_back(d);
  report["lp"] = {{"status", lp::to_string(sol.lp.status)},
                  {"objective_value", sol.lp.objective_value},
                  {"iterations", sol.lp.iterations},
                  {"optimal_vertices", sol.optimal_vertices},
                  {"tie_break", config.tie_break == TieBreak::FaceCentroid ? "centroid" : "vertex"}};
  report["policy"] = {{"dist", to_json(sol.policy.dist)}, {"defaulted", defaulted}};
  report["evaluation"] = to_json(sol.report);
  report["periodic_baseline"] = periodic_tau > 0 ? periodic_json(chain, config.m_max, periodic_tau)
                                                 : json{{"tau", nullptr}, {"note", periodic_note}};
  return report;
}

int cmd_info(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("info", config.output_path, out, err, [&] {
    const MarkovChain chain = load_chain(config.chain_path);
    json doc = chain_json(chain);
    doc["command"] = "info";
    doc["status"] = "ok";
    doc["n_states"] = chain.size();
    write_json(doc, config.output_path, out);
    return static_cast<int>(kSuccess);
  });
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("solve", config.output_path, out, err, [&] {
    const MarkovChain chain = load_chain(config.chain_path);
    write_json(solve_report(chain, config), config.output_path, out);
    return static_cast<int>(kSuccess);
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("simulate", config.output_path, out, err, [&] {
    config.validate();
    json report;
    if (!config.policy_path.empty()) {
      report = read_json_file(config.policy_path);
      if (!report.is_object()) throw InputError(config.policy_path + ": expected a JSON object");
    }

    std::optional<MarkovChain> chain;
    if (!config.chain_path.empty()) {
      chain.emplace(load_chain(config.chain_path));
    } else if (report.contains("chain")) {
      chain.emplace(parse_chain(report.at("chain"), config.policy_path + ": chain"));
    } else {
      throw InputError("--chain is required unless --policy is a solve report");
    }

    if (config.policy_path.empty()) {
      if (config.problem == ProblemKind::None)
        throw InputError("simulate needs --policy or one of --nu, --clairvoyant, --age-limit");
      report = solve_report(*chain, config);
    }
    const MarkovPolicy policy =
        parse_policy(report, config.policy_path.empty() ? "policy" : config.policy_path);
    if (policy.num_states() != chain->size())
      throw InputError("policy has " + std::to_string(policy.num_states()) +
                       " states but the chain has " + std::to_string(chain->size()));
    if (!report.contains("policy")) {
      report = json{{"policy", {{"dist", to_json(policy.dist)}}}};
      try {
        report["evaluation"] = to_json(evaluate_policy(*chain, policy, policy.m_max()));
      } catch (const InducedNotErgodic& e) {
        report["evaluation"] = {{"error", e.what()}};
      }
    }

    SimOptions options;
    options.warmup = config.warmup;
    const SimReport sim = run_policy(*chain, policy, config.k_samples, config.seed, options);
    report["command"] = "simulate";
    report["status"] = "ok";
    report["simulation"] = {{"n_samples", sim.n_samples},
                            {"warmup", config.warmup},
                            {"seed", sim.seed},
                            {"empirical_age_penalty", sim.empirical_age_penalty},
                            {"empirical_interval", sim.empirical_interval},
                            {"empirical_frequency", sim.empirical_frequency}};
    write_json(report, config.output_path, out);
    return static_cast<int>(kSuccess);
  });
}

SweepSpec parse_sweep_spec(const json& doc) {
  if (!doc.is_object()) throw InputError("sweep: expected a JSON object");
  SweepSpec spec;
  const std::string problem = doc.value("problem", std::string("clairvoyant"));
  if (problem == "clairvoyant") {
    spec.problem = SweepSpec::Kind::Clairvoyant;
  } else if (problem == "p1") {
    spec.problem = SweepSpec::Kind::P1;
  } else if (problem == "p2") {
    spec.problem = SweepSpec::Kind::P2;
  } else {
    throw InputError("sweep: problem: expected \"clairvoyant\", \"p1\" or \"p2\", got \"" +
                     problem + "\"");
  }
  if (doc.contains("m_max")) {
    if (!doc.at("m_max").is_number_integer() || doc.at("m_max").get<int>() < 1)
      throw InputError("sweep: m_max: expected an integer >= 1");
    spec.m_max = doc.at("m_max").get<int>();
  }
  for (const char* key : {"p12", "p21"})
    if (!doc.contains(key)) throw InputError(std::string("sweep: missing field \"") + key + "\"");
  spec.p12 = parse_values(doc.at("p12"), "p12");
  spec.p21 = parse_values(doc.at("p21"), "p21");
  if (spec.problem == SweepSpec::Kind::P1) {
    if (!doc.contains("nu")) throw InputError("sweep: missing field \"nu\"");
    const json& nu = doc.at("nu");
    if (nu.is_string()) {
      if (nu.get<std::string>() != "clairvoyant")
        throw InputError("sweep: nu: expected a number or \"clairvoyant\"");
      spec.nu_clairvoyant = true;
      spec.constraint_values = {0.0};
    } else {
      spec.constraint_values = parse_values(nu, "nu");
    }
  } else if (spec.problem == SweepSpec::Kind::P2) {
    if (!doc.contains("d")) throw InputError("sweep: missing field \"d\"");
    spec.constraint_values = parse_values(doc.at("d"), "d");
  } else {
    spec.constraint_values = {0.0};
  }
  if (doc.contains("tie_break")) {
    const std::string tb = doc.at("tie_break").get<std::string>();
    if (tb == "vertex") {
      spec.tie_break = TieBreak::FirstVertex;
    } else if (tb != "centroid") {
      throw InputError("sweep: tie_break: expected \"centroid\" or \"vertex\"");
    }
  }
  return spec;
}

std::string sweep_csv_header() {
  return "p12,p21,problem,constraint,optimal_objective,periodic_objective,nu_dagger,"
         "ratio_to_clairvoyant,optimal_penalty,optimal_frequency,periodic_tau,status";
}

std::vector<std::string> run_sweep(const SweepSpec& spec, unsigned workers) {
  std::vector<GridPoint> points;
  for (double p12 : spec.p12)
    for (double p21 : spec.p21)
      for (double c : spec.constraint_values) points.push_back({p12, p21, c});

  std::vector<std::string> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = sweep_row(spec, points[i]);
  };
  const unsigned count =
      std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

int cmd_sweep(const std::string& spec_path, const std::string& output_path, unsigned workers,
              std::ostream& out, std::ostream& err) {
  return guarded("sweep", "", out, err, [&] {
    const SweepSpec spec = parse_sweep_spec(read_json_file(spec_path));
    const auto rows = run_sweep(spec, workers);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!output_path.empty()) {
      file.open(output_path, std::ios::binary | std::ios::trunc);
      if (!file) throw InputError(output_path + ": cannot open file for writing");
      sink = &file;
    }
    *sink << sweep_csv_header() << '\n';
    for (const auto& row : rows) *sink << row << '\n';
    return static_cast<int>(kSuccess);
  });
}

}  // namespace agesampler::cli
