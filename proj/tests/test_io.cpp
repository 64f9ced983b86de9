#include <doctest.h>

#include <filesystem>
#include <random>

#include "madd/error.hpp"
#include "madd/io.hpp"
#include "oracles.hpp"

using namespace madd;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "madd_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("format_real round-trips doubles") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = unit(gen);
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("records CSV round trip") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto probas = oracle::random_probas(gen, 1 + gen() % 200);
    std::vector<ScoredRecord> records;
    for (double p : probas) {
      std::optional<int> label;
      if (gen() % 5) label = static_cast<int>(gen() % 2);
      records.push_back({p, gen() % 2 ? Group::G1 : Group::G0, label});
    }
    const auto back = records_from_csv(parse_csv(records_to_csv(records)));
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(back[i].proba == records[i].proba);
      CHECK(back[i].group == records[i].group);
      CHECK(back[i].label == records[i].label);
    }
  }
}

TEST_CASE("records CSV layout") {
  const std::vector<ScoredRecord> records{{0.25, Group::G0, 1}, {1.0, Group::G1, std::nullopt}};
  CHECK(records_to_csv(records) == "proba,group,label\n0.25,0,1\n1,1,\n");
}

TEST_CASE("records CSV without a label column") {
  const auto r = records_from_csv(parse_csv("proba,group\n0.1,0\n0.9,1\n"));
  REQUIRE(r.size() == 2);
  CHECK(!r[0].label.has_value());
  CHECK(r[1].group == Group::G1);
}

TEST_CASE("records CSV errors") {
  CHECK(code_of([] { records_from_csv(parse_csv("proba,group\n1.5,0\n")); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { records_from_csv(parse_csv("proba,group\n-0.1,0\n")); }) == ErrorCode::InvalidProbability);
  CHECK(code_of([] { records_from_csv(parse_csv("proba,group\nabc,0\n")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { records_from_csv(parse_csv("proba,group\n0.5,2\n")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { records_from_csv(parse_csv("proba,group,label\n0.5,1,3\n")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { records_from_csv(parse_csv("p,group\n0.5,1\n")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_csv("a,b\n1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_csv("a,b\n\"1,2\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { read_records(scratch("does_not_exist.csv")); }) == ErrorCode::IoError);
}

TEST_CASE("CSV quoting and line endings") {
  const auto t = parse_csv("a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == "x,y");
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.column("b") == 1);
  CHECK(t.column("c") == -1);
}

TEST_CASE("records written to disk read back identically") {
  const auto path = scratch("nested/records.csv");
  std::filesystem::remove_all(path.parent_path());
  const std::vector<ScoredRecord> records{{0.123456789012345678, Group::G0, 0}, {0.9, Group::G1, 1}};
  write_records(path, records);
  const auto back = read_records(path);
  CHECK(back[0].proba == records[0].proba);
  CHECK(back[1].label == 1);
}

TEST_CASE("sweep serialisation") {
  SweepResult r;
  r.rows = {{0.0, 0.4, 0.3, 0.35}, {1.0, 0.5, 0.1, 0.3}};
  r.lambda_star = 1.0;
  r.min_total_loss = 0.3;
  r.best_index = 1;
  const auto csv = sweep_to_csv(r);
  CHECK(csv.rfind("lambda,accuracy_loss,fairness_loss,total_loss\n", 0) == 0);
  const auto t = parse_csv(csv);
  CHECK(t.rows.size() == 2);
  CHECK(std::stod(t.rows[1][2]) == 0.1);

  ObjectiveConfig c;
  const auto j = sweep_to_json(r, c);
  CHECK(j.at("lambda_star").get<double>() == 1.0);
  CHECK(j.at("min_total_loss").get<double>() == 0.3);
  CHECK(config_to_json(c).at("theta").get<double>() == 0.5);
}

TEST_CASE("model JSON round trip") {
  const auto enc = FeatureEncoder::from_parts({"gender", "age", "sum_click"},
                                              {ColumnKind::Binary, ColumnKind::Ordinal, ColumnKind::Numerical},
                                              {{"F", "M"}, {"0-35", "35-55", "55<="}, {}}, {0.0, 0.0, 812.5},
                                              {1.0, 1.0, 301.25});
  const LogisticModel model{{0.1, -0.2, 1.0 / 3.0}, -0.7, true};
  const auto stored = model_from_json(nlohmann::json::parse(model_to_json(model, enc).dump()));
  CHECK(stored.model.weights == model.weights);
  CHECK(stored.model.bias == model.bias);
  CHECK(stored.model.trained);
  CHECK(std::ranges::equal(stored.encoder.names(), enc.names()));
  CHECK(std::ranges::equal(stored.encoder.kinds(), enc.kinds()));
  CHECK(std::ranges::equal(stored.encoder.means(), enc.means()));
  CHECK(std::ranges::equal(stored.encoder.scales(), enc.scales()));
  CHECK(stored.encoder.levels()[1] == enc.levels()[1]);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), Error);
}

TEST_CASE("manifest JSON") {
  RunManifest m;
  m.command = "sweep";
  m.inputs = {"in.csv"};
  m.outputs = {"out/sweep.csv"};
  m.rows_g0 = 3;
  m.rows_g1 = 4;
  m.started = std::chrono::system_clock::time_point{};
  m.finished = m.started + std::chrono::seconds(90);
  const auto j = manifest_to_json(m);
  CHECK(j.at("command") == "sweep");
  CHECK(j.at("started") == "1970-01-01T00:00:00Z");
  CHECK(j.at("finished") == "1970-01-01T00:01:30Z");
  CHECK(j.at("version") == MADD_VERSION);
  const auto path = scratch("manifest.json");
  write_json(path, j);
  CHECK(nlohmann::json::parse(read_file(path)) == j);
}
