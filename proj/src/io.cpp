#include "madd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "madd/csv.hpp"
#include "madd/error.hpp"

namespace madd {

std::string format_real(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string records_to_csv(std::span<const ScoredRecord> records) {
  std::string out = "proba,group,label\n";
  out.reserve(out.size() + records.size() * 28);
  for (const auto& r : records) {
    out += format_real(r.proba);
    out += r.group == Group::G0 ? ",0," : ",1,";
    if (r.label) out += *r.label ? '1' : '0';
    out += '\n';
  }
  return out;
}

namespace {

double parse_proba(const std::string& field, std::size_t row) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": bad probability '" + field + "'");
  }
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw Error(ErrorCode::InvalidProbability, "row " + std::to_string(row) + ": probability outside [0,1]: " + field);
  }
  return v;
}

}  // namespace

std::vector<ScoredRecord> records_from_csv(const CsvTable& table) {
  const int proba_idx = table.column("proba");
  const int group_idx = table.column("group");
  const int label_idx = table.column("label");
  if (proba_idx < 0 || group_idx < 0) {
    throw Error(ErrorCode::ParseError, "records CSV needs 'proba' and 'group' columns");
  }
  std::vector<ScoredRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    ScoredRecord r;
    r.proba = parse_proba(row[static_cast<std::size_t>(proba_idx)], i + 1);
    const auto& g = row[static_cast<std::size_t>(group_idx)];
    if (g == "0") {
      r.group = Group::G0;
    } else if (g == "1") {
      r.group = Group::G1;
    } else {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i + 1) + ": group must be 0 or 1, got '" + g + "'");
    }
    if (label_idx >= 0) {
      const auto& l = row[static_cast<std::size_t>(label_idx)];
      if (l == "0" || l == "1") {
        r.label = l == "1" ? 1 : 0;
      } else if (!l.empty()) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(i + 1) + ": label must be 0, 1 or empty");
      }
    }
    records.push_back(r);
  }
  return records;
}

std::vector<ScoredRecord> read_records(const std::filesystem::path& path) {
  return records_from_csv(read_csv(path));
}

void write_records(const std::filesystem::path& path, std::span<const ScoredRecord> records) {
  write_file(path, records_to_csv(records));
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "lambda,accuracy_loss,fairness_loss,total_loss\n";
  for (const auto& row : result.rows) {
    out += format_real(row.lambda) + ',' + format_real(row.accuracy_loss) + ',' +
           format_real(row.fairness_loss) + ',' + format_real(row.total_loss) + '\n';
  }
  return out;
}

nlohmann::json config_to_json(const ObjectiveConfig& config) {
  return {
      {"theta", config.theta},
      {"threshold", config.threshold},
      {"m", config.bins},
      {"grid_size", config.lambda_grid.size()},
      {"cdf_method", std::string(to_string(config.cdf_method))},
      {"cdf_grid_nodes", config.cdf_grid_nodes},
  };
}

nlohmann::json sweep_to_json(const SweepResult& result, const ObjectiveConfig& config) {
  auto rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"lambda", row.lambda},
                    {"accuracy_loss", row.accuracy_loss},
                    {"fairness_loss", row.fairness_loss},
                    {"total_loss", row.total_loss}});
  }
  return {
      {"lambda_star", result.lambda_star},
      {"min_total_loss", result.min_total_loss},
      {"config", config_to_json(config)},
      {"rows", std::move(rows)},
  };
}

nlohmann::json model_to_json(const LogisticModel& model, const FeatureEncoder& encoder) {
  auto features = nlohmann::json::array();
  for (std::size_t i = 0; i < encoder.names().size(); ++i) {
    features.push_back({{"name", encoder.names()[i]},
                        {"kind", std::string(to_string(encoder.kinds()[i]))},
                        {"levels", encoder.levels()[i]},
                        {"mean", encoder.means()[i]},
                        {"scale", encoder.scales()[i]},
                        {"weight", model.weights.at(i)}});
  }
  return {{"type", "logistic"}, {"bias", model.bias}, {"trained", model.trained}, {"features", std::move(features)}};
}

StoredModel model_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> names;
    std::vector<ColumnKind> kinds;
    std::vector<std::vector<std::string>> levels;
    std::vector<double> means, scales;
    LogisticModel model;
    for (const auto& f : j.at("features")) {
      names.push_back(f.at("name").get<std::string>());
      const auto kind = f.at("kind").get<std::string>();
      if (kind == "binary") {
        kinds.push_back(ColumnKind::Binary);
      } else if (kind == "ordinal") {
        kinds.push_back(ColumnKind::Ordinal);
      } else if (kind == "numerical") {
        kinds.push_back(ColumnKind::Numerical);
      } else {
        throw Error(ErrorCode::ParseError, "unknown feature kind '" + kind + "'");
      }
      levels.push_back(f.at("levels").get<std::vector<std::string>>());
      means.push_back(f.at("mean").get<double>());
      scales.push_back(f.at("scale").get<double>());
      model.weights.push_back(f.at("weight").get<double>());
    }
    model.bias = j.at("bias").get<double>();
    model.trained = j.at("trained").get<bool>();
    return {std::move(model), FeatureEncoder::from_parts(std::move(names), std::move(kinds), std::move(levels),
                                                         std::move(means), std::move(scales))};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model JSON: ") + e.what());
  }
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {
      {"command", m.command},
      {"config", m.config},
      {"inputs", m.inputs},
      {"outputs", m.outputs},
      {"rows", {{"g0", m.rows_g0}, {"g1", m.rows_g1}}},
      {"started", iso8601_utc(m.started)},
      {"finished", iso8601_utc(m.finished)},
      {"version", m.version},
      {"extra", m.extra},
  };
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

}  // namespace madd
