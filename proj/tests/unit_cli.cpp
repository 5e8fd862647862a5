#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "anomaly/errors.hpp"
#include "anomaly/job.hpp"

using namespace anomaly;
using nlohmann::json;

namespace {

json example_charge_job() {
  return json::parse(R"({
    "command": "charge",
    "model": {
      "type": "cylinder",
      "circumference": 6.283185307179586,
      "spin": "trivial",
      "gauge": {"kind": "plateau", "start": 0.3, "end": 2.7, "ramp_fraction": 0.2},
      "window": {"t1": 0.0, "t2": 1.0}
    },
    "tolerances": {"quadrature": 1e-9, "eta_oracle": 1e-6}
  })");
}

json strip_wall_time(json report) {
  report.erase("wall_time_ms");
  return report;
}

} // namespace

TEST_CASE("charge job reproduces the worked cylinder example") {
  const JobSpec job = parse_job(example_charge_job());
  const RunResult result = run(job);
  CHECK(result.exit_code == kExitOk);
  const auto& r = result.report["results"];
  CHECK(r["q_chiral"].get<double>() == doctest::Approx(-4.0));
  CHECK(r["oracle_q_right"].get<long long>() == -2);
  CHECK(r["q_total"].get<double>() == 0.0);
  CHECK(result.report["schema_version"].get<int>() == kReportSchemaVersion);
}

TEST_CASE("schema violations carry a JSON pointer") {
  json doc = example_charge_job();
  doc["model"].erase("circumference");
  try {
    parse_job(doc);
    FAIL("expected JobParseError");
  } catch (const JobParseError& e) {
    CHECK(e.json_pointer == "/model/circumference");
  }

  doc = example_charge_job();
  doc["model"]["spin"] = "sideways";
  try {
    parse_job(doc);
    FAIL("expected JobParseError");
  } catch (const JobParseError& e) {
    CHECK(e.json_pointer == "/model/spin");
  }

  doc = example_charge_job();
  doc["command"] = "transmogrify";
  CHECK_THROWS_AS(parse_job(doc), JobParseError);
}

TEST_CASE("command-model incompatibility is a precondition error, not a schema error") {
  json doc = example_charge_job();
  doc["command"] = "flow";
  doc["model"] = {{"type", "sphere"}, {"k", 1}};
  const RunResult flow_on_sphere = run(parse_job(doc));
  CHECK(flow_on_sphere.exit_code == kExitPrecondition);
  CHECK(flow_on_sphere.report["results"]["error"].get<std::string>() == "precondition");

  doc = example_charge_job();
  doc["command"] = "reference"; // cylinder model
  CHECK(run(parse_job(doc)).exit_code == kExitPrecondition);

  doc["model"] = {{"type", "sphere"}, {"k", 2}};
  const RunResult result = run(parse_job(doc));
  CHECK(result.exit_code == kExitOk);
  CHECK(result.report["results"]["q_chiral"].get<long long>() == 12);
}

TEST_CASE("validate command: failing profile yields nonzero exit") {
  json doc = {
      {"command", "validate"},
      {"model",
       {{"type", "cylinder"},
        {"circumference", 6.283185307179586},
        {"spin", "trivial"},
        {"gauge", {{"kind", "samples"}, {"values", {0.0, 0.25, 0.5, 0.75, 1.0}}}},
        {"window", {{"t1", 0.0}, {"t2", 1.0}}}}},
  };
  const RunResult result = run(parse_job(doc));
  CHECK(result.exit_code == kExitFailedCheck);
  CHECK_FALSE(result.report["results"]["pass"].get<bool>());

  // a plateau profile passes
  doc["model"]["gauge"] = {{"kind", "plateau"}, {"start", 0.0}, {"end", 1.0}};
  const RunResult ok = run(parse_job(doc));
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.report["results"]["pass"].get<bool>());
}

TEST_CASE("flow command writes the CSV trace with the documented columns") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "anomaly_forge_test";
  fs::create_directories(dir);
  const std::string csv_path = (dir / "trace.csv").string();
  const std::string report_path = (dir / "report.json").string();

  json doc = example_charge_job();
  doc["command"] = "flow";
  doc["flow_samples"] = 17;
  doc["output"] = {{"report_path", report_path}, {"csv_path", csv_path}};

  const RunResult result = run(parse_job(doc));
  CHECK(result.exit_code == kExitOk);
  CHECK(result.report["results"]["projector_trace"]["value"].get<long long>() == -2);
  CHECK(result.report["results"]["equal"].get<bool>());

  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "mode_index,t,lambda");

  std::ifstream report_file(report_path);
  REQUIRE(report_file.good());
  json on_disk;
  report_file >> on_disk;
  CHECK(strip_wall_time(on_disk) == strip_wall_time(json(result.report)));

  fs::remove_all(dir);
}

TEST_CASE("suite command is deterministic in the seed") {
  json doc = {{"command", "suite"}, {"seed", 42}, {"suite_cases", 25}};
  const RunResult a = run(parse_job(doc));
  const RunResult b = run(parse_job(doc));
  CHECK(a.exit_code == kExitOk);
  CHECK(a.report["results"]["passed"].get<int>() == 25);
  CHECK(strip_wall_time(json(a.report)).dump() == strip_wall_time(json(b.report)).dump());

  json other = doc;
  other["seed"] = 43;
  const RunResult c = run(parse_job(other));
  CHECK(c.report["results"]["passed"].get<int>() == 25);
  CHECK(c.report["job"]["seed"].get<int>() == 43);
}

TEST_CASE("job echo round-trips through parse -> serialize -> parse") {
  const json docs[] = {
      example_charge_job(),
      json{{"command", "eta"},
           {"model",
            {{"type", "bianchi2"},
             {"a", {{"kind", "constant"}, {"value", 1.0}}},
             {"b", {{"kind", "plateau"}, {"start", 1.0}, {"end", 2.0}}},
             {"spin", 1},
             {"window", {{"t1", 0.0}, {"t2", 1.0}}},
             {"n1", -3},
             {"n2", 5}}}},
      json{{"command", "forms"},
           {"model",
            {{"type", "bianchi1"},
             {"a1", {{"kind", "constant"}, {"value", 1.0}}},
             {"a2", {{"kind", "constant"}, {"value", 2.0}}},
             {"a3", {{"kind", "samples"}, {"values", {1.0, 1.0, 1.0, 1.0}}}},
             {"spin", 5},
             {"window", {{"t1", -1.0}, {"t2", 1.0}}}}}},
  };
  for (const json& doc : docs) {
    const JobSpec job = parse_job(doc);
    const json echoed = job.echo;
    const JobSpec reparsed = parse_job(echoed);
    CHECK(json(reparsed.echo) == echoed);
  }
}

TEST_CASE("eta command reports closed form and zeta oracle within tolerance") {
  json doc = example_charge_job();
  doc["command"] = "eta";
  const RunResult result = run(parse_job(doc));
  CHECK(result.exit_code == kExitOk);
  const auto& res = result.report["results"];
  CHECK(res["initial"]["h"].get<int>() == 0);
  CHECK(res["initial"]["oracle_abs_deviation"].get<double>() < 1e-6);
  CHECK(res["final"]["oracle_abs_deviation"].get<double>() < 1e-6);
}

TEST_CASE("eta command on the homogeneous models") {
  json doc = {{"command", "eta"},
              {"model",
               {{"type", "bianchi1"},
                {"a1", {{"kind", "constant"}, {"value", 1.0}}},
                {"a2", {{"kind", "constant"}, {"value", 1.0}}},
                {"a3", {{"kind", "constant"}, {"value", 1.0}}},
                {"spin", 0},
                {"window", {{"t1", 0.0}, {"t2", 1.0}}}}}};
  const RunResult torus = run(parse_job(doc));
  CHECK(torus.exit_code == kExitOk);
  CHECK(torus.report["results"]["eta"].get<double>() == 0.0);
  CHECK(torus.report["results"]["h"].get<int>() == 1);

  doc["model"] = {{"type", "bianchi2"},
                  {"a", {{"kind", "constant"}, {"value", 1.0}}},
                  {"b", {{"kind", "plateau"}, {"start", 1.0}, {"end", 2.0}}},
                  {"spin", 2},
                  {"window", {{"t1", 0.0}, {"t2", 1.0}}}};
  const RunResult heis = run(parse_job(doc));
  CHECK(heis.exit_code == kExitOk);
  CHECK(heis.report["results"]["final"]["eta_smooth"].get<double>() ==
        doctest::Approx(16.0 / (96.0 * 3.14159265358979323846 * 3.14159265358979323846)));
}

TEST_CASE("forms command on the cylinder notes the 2D degenerate case") {
  json doc = example_charge_job();
  doc["command"] = "forms";
  const RunResult result = run(parse_job(doc));
  CHECK(result.exit_code == kExitOk);
  CHECK(result.report["results"]["form_integral"]["value"].get<double>() ==
        doctest::Approx(2.4));
  CHECK(result.report["results"].contains("note"));
}
