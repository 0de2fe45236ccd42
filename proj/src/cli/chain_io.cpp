#include <fstream>
#include <iostream>
#include <sstream>

#include "agesampler/cli.hpp"

namespace agesampler::cli {

namespace {

std::string field(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

// Reads a rectangular array of numbers, naming the first offending field.
Matrix parse_matrix(const json& value, const std::string& source, const std::string& name) {
  if (!value.is_array() || value.empty())
    throw InputError(source + ": " + name + ": expected a non-empty array of rows");
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = value[i];
    if (!row.is_array() || row.empty())
      throw InputError(source + ": " + field(name, i) + ": expected a non-empty array");
    if (i == 0) cols = row.size();
    if (row.size() != cols)
      throw InputError(source + ": " + field(name, i) + ": expected " + std::to_string(cols) +
                       " entries, got " + std::to_string(row.size()));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const json& v = value[i][j];
      if (!v.is_number())
        throw InputError(source + ": " + field(field(name, i), j) + ": expected a number, got " +
                         v.dump());
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_json(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError(path + ": cannot open file for writing");
  file << doc.dump(2) << '\n';
}

MarkovChain parse_chain(const json& doc, const std::string& source) {
  if (!doc.is_object()) throw InputError(source + ": expected a JSON object");
  if (!doc.contains("p")) throw InputError(source + ": missing field \"p\"");
  Matrix p = parse_matrix(doc.at("p"), source, "p");
  try {
    return MarkovChain(std::move(p));
  } catch (const NotStochastic& e) {
    throw NotStochastic(source + ": " + e.what());
  } catch (const NotErgodic& e) {
    throw NotErgodic(source + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InputError(source + ": " + e.what());
  }
}

MarkovChain load_chain(const std::string& path) { return parse_chain(read_json_file(path), path); }

MarkovPolicy parse_policy(const json& doc, const std::string& source) {
  if (!doc.is_object()) throw InputError(source + ": expected a JSON object");
  const json* holder = &doc;
  std::string prefix;
  if (!doc.contains("dist")) {
    if (!doc.contains("policy") || !doc.at("policy").is_object())
      throw InputError(source + ": missing field \"dist\" (or \"policy.dist\")");
    holder = &doc.at("policy");
    prefix = "policy.";
    if (!holder->contains("dist")) throw InputError(source + ": missing field \"policy.dist\"");
  }
  MarkovPolicy policy;
  policy.dist = parse_matrix(holder->at("dist"), source, prefix + "dist");
  policy.defaulted.assign(static_cast<std::size_t>(policy.dist.rows()), false);
  if (holder->contains("defaulted")) {
    const json& flags = holder->at("defaulted");
    if (!flags.is_array() || flags.size() != policy.defaulted.size())
      throw InputError(source + ": " + prefix + "defaulted: expected one flag per state");
    for (std::size_t j = 0; j < flags.size(); ++j) {
      if (!flags[j].is_boolean())
        throw InputError(source + ": " + field(prefix + "defaulted", j) + ": expected a boolean");
      policy.defaulted[j] = flags[j].get<bool>();
    }
  }
  try {
    policy.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(source + ": " + e.what());
  }
  return policy;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json to_json(const EvalReport& r) {
  return json{{"avg_age_penalty", r.avg_age_penalty},
              {"avg_sampling_interval", r.avg_sampling_interval},
              {"avg_sampling_frequency", r.avg_sampling_frequency},
              {"induced_stationary", to_json(r.induced_stationary)}};
}

}  // namespace agesampler::cli
