#include "anomaly/job.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anomaly/charge.hpp"
#include "anomaly/errors.hpp"
#include "anomaly/flow.hpp"
#include "anomaly/forms.hpp"
#include "anomaly/geometry.hpp"
#include "anomaly/spectral.hpp"

namespace anomaly {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- parsing

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw JobParseError(message, pointer);
}

const json& require_field(const json& obj, const std::string& pointer, const char* key) {
  if (!obj.is_object()) fail(pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(pointer + "/" + key, "missing required field");
  return *it;
}

double require_number(const json& obj, const std::string& pointer, const char* key) {
  const json& v = require_field(obj, pointer, key);
  if (!v.is_number()) fail(pointer + "/" + key, "expected a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const std::string& pointer, const char* key) {
  const json& v = require_field(obj, pointer, key);
  if (!v.is_string()) fail(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

TimeWindow parse_window(const json& j, const std::string& pointer) {
  const double t1 = require_number(j, pointer, "t1");
  const double t2 = require_number(j, pointer, "t2");
  if (!(t1 < t2)) fail(pointer, "window requires t1 < t2");
  return TimeWindow(t1, t2);
}

Profile parse_profile(const json& j, const std::string& pointer, const TimeWindow& window) {
  const std::string kind = require_string(j, pointer, "kind");
  try {
    if (kind == "constant") return Profile::constant(require_number(j, pointer, "value"));
    if (kind == "plateau") {
      const double ramp =
          j.contains("ramp_fraction") ? require_number(j, pointer, "ramp_fraction") : 0.2;
      return Profile::plateau(require_number(j, pointer, "start"),
                              require_number(j, pointer, "end"), window, ramp);
    }
    if (kind == "samples") {
      const json& values = require_field(j, pointer, "values");
      if (!values.is_array() || values.size() < 2)
        fail(pointer + "/values", "expected an array of at least two numbers");
      std::vector<double> v;
      v.reserve(values.size());
      for (const auto& e : values) {
        if (!e.is_number()) fail(pointer + "/values", "expected numbers");
        v.push_back(e.get<double>());
      }
      return Profile::sampled(std::move(v), window);
    }
  } catch (const ParameterError& e) {
    fail(pointer, e.what());
  }
  fail(pointer + "/kind", "unknown profile kind '" + kind + "'");
}

SpacetimeModel parse_model(const json& j, const std::string& pointer) {
  const std::string type = require_string(j, pointer, "type");
  try {
    if (type == "cylinder") {
      const TimeWindow w = parse_window(require_field(j, pointer, "window"), pointer + "/window");
      const std::string spin = require_string(j, pointer, "spin");
      if (spin != "trivial" && spin != "nontrivial")
        fail(pointer + "/spin", "cylinder spin must be 'trivial' or 'nontrivial'");
      return SpacetimeModel(Cylinder{
          require_number(j, pointer, "circumference"),
          spin == "trivial" ? CircleSpin::trivial : CircleSpin::nontrivial,
          parse_profile(require_field(j, pointer, "gauge"), pointer + "/gauge", w), w});
    }
    if (type == "bianchi1") {
      const TimeWindow w = parse_window(require_field(j, pointer, "window"), pointer + "/window");
      const json& spin = require_field(j, pointer, "spin");
      if (!spin.is_number_integer()) fail(pointer + "/spin", "expected an integer 0..7");
      return SpacetimeModel(BianchiI{
          parse_profile(require_field(j, pointer, "a1"), pointer + "/a1", w),
          parse_profile(require_field(j, pointer, "a2"), pointer + "/a2", w),
          parse_profile(require_field(j, pointer, "a3"), pointer + "/a3", w),
          spin.get<int>(), w});
    }
    if (type == "bianchi2") {
      const TimeWindow w = parse_window(require_field(j, pointer, "window"), pointer + "/window");
      const json& spin = require_field(j, pointer, "spin");
      if (!spin.is_number_integer()) fail(pointer + "/spin", "expected an integer 0..3");
      BianchiII b{parse_profile(require_field(j, pointer, "a"), pointer + "/a", w),
                  parse_profile(require_field(j, pointer, "b"), pointer + "/b", w),
                  spin.get<int>(), w, std::nullopt, std::nullopt};
      if (j.contains("n1")) {
        if (!j["n1"].is_number_integer()) fail(pointer + "/n1", "expected an integer");
        b.n1 = j["n1"].get<long long>();
      }
      if (j.contains("n2")) {
        if (!j["n2"].is_number_integer()) fail(pointer + "/n2", "expected an integer");
        b.n2 = j["n2"].get<long long>();
      }
      return SpacetimeModel(std::move(b));
    }
    if (type == "sphere") {
      const json& k = require_field(j, pointer, "k");
      if (!k.is_number_integer()) fail(pointer + "/k", "expected a positive integer");
      return SpacetimeModel(SphereReference{k.get<int>()});
    }
  } catch (const ParameterError& e) {
    fail(pointer, e.what());
  }
  fail(pointer + "/type", "unknown model type '" + type + "'");
}

bool command_needs_model(const std::string& command) {
  return command != "suite";
}

void check_command_structure(const JobSpec& job) {
  static const char* kCommands[] = {"charge", "flow", "eta", "forms",
                                    "validate", "reference", "suite"};
  bool known = false;
  for (const char* c : kCommands) known = known || job.command == c;
  if (!known) fail("/command", "unknown command '" + job.command + "'");
  if (command_needs_model(job.command) && !job.model) fail("/model", "missing required field");
}

// command-model compatibility is a precondition, not a schema matter
void check_command_model(const JobSpec& job) {
  if (!job.model) return;
  const std::string kind = job.model->kind();
  const auto reject = [&](const char* why) {
    throw ParameterError("command '" + job.command + "' " + why);
  };
  if (job.command == "flow" && kind != "cylinder")
    reject("requires a cylinder model (only that evolution decouples into modes)");
  if (job.command == "reference" && kind != "sphere") reject("requires a sphere model");
  if ((job.command == "eta" || job.command == "forms") && kind == "sphere")
    reject("requires a model with a metric chart");
  if (job.command == "validate" && kind == "sphere") reject("requires a model with profiles");
}

// ------------------------------------------------------------ serializing

ordered_json serialize_profile_echo(const json& src) {
  // profiles echo their defining document (normalized key order)
  ordered_json out;
  if (src.contains("kind")) out["kind"] = src["kind"];
  for (const char* key : {"value", "start", "end", "ramp_fraction", "values"})
    if (src.contains(key)) out[key] = src[key];
  return out;
}

ordered_json normalize_model_echo(const json& src) {
  ordered_json out;
  out["type"] = src.value("type", "");
  for (const char* key : {"circumference", "spin", "k", "n1", "n2"})
    if (src.contains(key)) out[key] = src[key];
  if (src.contains("window"))
    out["window"] = {{"t1", src["window"].value("t1", 0.0)},
                     {"t2", src["window"].value("t2", 0.0)}};
  for (const char* key : {"gauge", "a1", "a2", "a3", "a", "b"})
    if (src.contains(key)) out[key] = serialize_profile_echo(src[key]);
  return out;
}

ordered_json serialize_form_integral(const FormIntegral& f) {
  return {{"value", f.value},
          {"estimated_error", f.estimated_error},
          {"evaluations", f.evaluations}};
}

ordered_json serialize_charge_report(const ChargeReport& r) {
  ordered_json out;
  if (!r.warnings.empty()) out["warnings"] = r.warnings;
  out["model_kind"] = r.model_kind;
  out["model_descriptor"] = r.model_descriptor;
  out["form_integral"] = serialize_form_integral(r.form_integral);
  out["eta1"] = r.eta1;
  out["eta2"] = r.eta2;
  out["h1"] = r.h1;
  out["h2"] = r.h2;
  out["q_right"] = r.q_right;
  out["q_left"] = r.q_left;
  out["q_total"] = r.q_total;
  out["q_chiral"] = r.q_chiral;
  out["nearest_integer_deviation"] = r.nearest_integer_deviation;
  out["anomalous"] = r.anomalous;
  if (r.oracle_value) out["oracle_q_right"] = *r.oracle_value;
  if (r.eta_smooth_1) out["eta_smooth_1"] = *r.eta_smooth_1;
  if (r.eta_smooth_2) out["eta_smooth_2"] = *r.eta_smooth_2;
  if (r.n1) out["n1"] = *r.n1;
  if (r.n2) out["n2"] = *r.n2;
  out["partial"] = r.partial;
  return out;
}

ordered_json serialize_validation(const ValidationReport& v) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : v.entries)
    entries.push_back({{"profile", e.profile_name},
                       {"max_abs_derivative", e.max_abs_derivative}});
  return {{"tolerance", v.tolerance}, {"entries", entries}, {"pass", v.pass}};
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file " + tmp.string());
    out << text;
  }
  fs::rename(tmp, target);
}

// --------------------------------------------------------- deterministic rng

struct SplitUniform {
  std::uint64_t state;

  explicit SplitUniform(std::uint64_t seed) : state(seed + 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64: platform-independent, unlike std distributions
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  bool coin() { return (next_u64() & 1ULL) != 0ULL; }
};

// ------------------------------------------------------------ command bodies

ordered_json run_charge(const JobSpec& job, int& exit_code) {
  const ChargeReport r = assemble_charges(*job.model, job.tolerances.quadrature);
  exit_code = kExitOk;
  return serialize_charge_report(r);
}

ordered_json run_flow(const JobSpec& job, int& exit_code, std::string* csv) {
  const auto* c = job.model->get_if<Cylinder>();
  const ModeFamily family = mode_family_cylinder(*job.model);
  const TraceResult trace = projector_trace(family, c->window.t1, c->window.t2);
  const long long flow = spectral_flow(family, c->window.t1, c->window.t2, job.flow_samples);

  if (csv) {
    std::ostringstream os;
    os << "mode_index,t,lambda\n";
    const int samples = job.flow_samples;
    for (long long k = -trace.cutoff_used; k <= trace.cutoff_used; ++k)
      for (int i = 0; i < samples; ++i) {
        const double t =
            c->window.t1 + c->window.length() * static_cast<double>(i) / (samples - 1);
        os << k << "," << t << "," << family.eigenvalue(k, t) << "\n";
      }
    *csv = os.str();
  }

  exit_code = kExitOk;
  ordered_json out;
  out["projector_trace"] = {{"value", trace.value},
                            {"cutoff_used", trace.cutoff_used},
                            {"stabilization_span", trace.stabilization_span}};
  out["spectral_flow"] = flow;
  out["equal"] = (trace.value == flow);
  for (const auto& w : trace.warnings) out["warnings"].push_back(w);
  return out;
}

ordered_json run_eta(const JobSpec& job, int& exit_code) {
  ordered_json out;
  const SpacetimeModel& model = *job.model;
  const TimeWindow w = *model.window();

  if (const auto* c = model.get_if<Cylinder>()) {
    const auto describe = [&](double t) {
      const ArithmeticSpectrum s =
          circle_spectrum(c->circumference, c->spin, c->gauge.value(t), true);
      const EtaResult e = eta_closed(s);
      const double oracle = eta_zeta_oracle(s);
      ordered_json j;
      j["t"] = t;
      j["spectrum"] = {{"scale", s.scale}, {"sigma", s.sigma}, {"shift", s.shift}};
      j["eta"] = e.eta;
      j["h"] = e.h;
      j["reduced"] = e.reduced;
      j["eta_zeta_oracle"] = oracle;
      j["oracle_abs_deviation"] = std::abs(oracle - e.eta);
      return j;
    };
    out["initial"] = describe(w.t1);
    out["final"] = describe(w.t2);
    const double dev1 = out["initial"]["oracle_abs_deviation"].get<double>();
    const double dev2 = out["final"]["oracle_abs_deviation"].get<double>();
    exit_code = (dev1 <= job.tolerances.eta_oracle && dev2 <= job.tolerances.eta_oracle)
                    ? kExitOk
                    : kExitAccuracy;
    return out;
  }
  if (const auto* b = model.get_if<BianchiI>()) {
    const auto summary = std::get<TorusSummary>(torus_summary(b->spin));
    out["eta"] = summary.eta;
    out["h"] = summary.h;
    out["spin"] = summary.spin;
    exit_code = kExitOk;
    return out;
  }
  const auto* b2 = model.get_if<BianchiII>();
  const auto describe = [&](double t) {
    return ordered_json{{"t", t},
                        {"a", b2->a.value(t)},
                        {"b", b2->b.value(t)},
                        {"eta_smooth", heisenberg_eta_smooth(b2->a.value(t), b2->b.value(t))}};
  };
  out["initial"] = describe(w.t1);
  out["final"] = describe(w.t2);
  out["note"] = "smooth part only; integer offsets are external inputs";
  exit_code = kExitOk;
  return out;
}

ordered_json run_forms(const JobSpec& job, int& exit_code, std::string* csv) {
  const SpacetimeModel& model = *job.model;
  const FormIntegral f = index_form_integral(model, job.tolerances.quadrature);

  if (csv && model.dimension() == 4) {
    const TimeWindow w = *model.window();
    std::ostringstream os;
    os << "t,ahat_density\n";
    constexpr int kSamples = 201;
    for (int i = 0; i < kSamples; ++i) {
      const double t = w.t1 + w.length() * static_cast<double>(i) / (kSamples - 1);
      os << t << ","
         << ahat_density_at(model, SpacetimePoint{t, 0.0, 0.0, 0.0}, default_fd_step())
         << "\n";
    }
    *csv = os.str();
  }

  exit_code = kExitOk;
  ordered_json out;
  out["form_integral"] = serialize_form_integral(f);
  if (model.dimension() == 2)
    out["note"] = "2D model: no degree-4 gravitational form; value is the gauge flux";
  return out;
}

ordered_json run_validate(const JobSpec& job, int& exit_code) {
  const ValidationReport v = validate_product_structure(*job.model, job.validate_tol);
  exit_code = v.pass ? kExitOk : kExitFailedCheck;
  return serialize_validation(v);
}

ordered_json run_reference(const JobSpec& job, int& exit_code) {
  const auto* s = job.model->get_if<SphereReference>();
  const long long value = reference_sphere_charge(s->k);
  exit_code = kExitOk;
  return {{"k", s->k}, {"q_chiral", value}};
}

// Randomized cross-validation of the charge formula against the projector
// trace (plus conservation and gauge-shift checks), deterministic in seed.
ordered_json run_suite(const JobSpec& job, int& exit_code) {
  SplitUniform rng(job.seed);
  int cases = 0, passed = 0;
  ordered_json failures = ordered_json::array();

  const auto off_lattice = [&](double x, double sigma) {
    const double q0 = sigma + x;
    const double q = q0 - std::floor(q0);
    return std::min(q, 1.0 - q) > 1e-3;
  };

  for (int i = 0; i < job.suite_cases; ++i) {
    const double circumference = rng.uniform(1.0, 10.0);
    const double scale = 6.28318530717958647692 / circumference;
    const CircleSpin spin = rng.coin() ? CircleSpin::trivial : CircleSpin::nontrivial;
    const double sigma = spin == CircleSpin::trivial ? 0.0 : 0.5;
    double v1 = rng.uniform(-5.0, 5.0);
    double v2 = rng.uniform(-5.0, 5.0);
    while (!off_lattice(v1 / scale, sigma)) v1 = rng.uniform(-5.0, 5.0);
    while (!off_lattice(v2 / scale, sigma)) v2 = rng.uniform(-5.0, 5.0);

    const TimeWindow w(0.0, 1.0);
    const SpacetimeModel model(Cylinder{
        circumference, spin, Profile::plateau(v1, v2, w, rng.uniform(0.1, 0.3)), w});

    ++cases;
    const CrossValidation cv = cross_validate_cylinder(model);
    const ChargeReport r = assemble_charges(model, 1e-9);
    const bool integral = r.nearest_integer_deviation < 1e-8;
    const bool conserved = r.q_total == 0.0;
    const TraceResult reversed =
        projector_trace(mode_family_cylinder(model), w.t2, w.t1);
    const bool antisymmetric = reversed.value == -cv.oracle_q_right;

    if (cv.equal && integral && conserved && antisymmetric) {
      ++passed;
    } else {
      failures.push_back({{"case", i},
                          {"model", model.descriptor()},
                          {"formula_q_right", cv.formula_q_right},
                          {"oracle_q_right", cv.oracle_q_right},
                          {"equal", cv.equal},
                          {"integral", integral},
                          {"antisymmetric", antisymmetric}});
    }
  }

  exit_code = (passed == cases) ? kExitOk : kExitFailedCheck;
  ordered_json out;
  out["cases"] = cases;
  out["passed"] = passed;
  out["failed"] = cases - passed;
  out["failures"] = failures;
  return out;
}

} // namespace

JobSpec parse_job(const json& doc) {
  if (!doc.is_object()) fail("", "job document must be a JSON object");
  JobSpec job;
  job.command = require_string(doc, "", "command");

  if (doc.contains("model")) job.model = parse_model(doc["model"], "/model");

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    if (!tol.is_object()) fail("/tolerances", "expected an object");
    if (tol.contains("quadrature")) {
      if (!tol["quadrature"].is_number() || !(tol["quadrature"].get<double>() > 0.0))
        fail("/tolerances/quadrature", "expected a positive number");
      job.tolerances.quadrature = tol["quadrature"].get<double>();
    }
    if (tol.contains("eta_oracle")) {
      if (!tol["eta_oracle"].is_number() || !(tol["eta_oracle"].get<double>() > 0.0))
        fail("/tolerances/eta_oracle", "expected a positive number");
      job.tolerances.eta_oracle = tol["eta_oracle"].get<double>();
    }
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (!out.is_object()) fail("/output", "expected an object");
    if (out.contains("report_path")) {
      if (!out["report_path"].is_string()) fail("/output/report_path", "expected a string");
      job.output.report_path = out["report_path"].get<std::string>();
    }
    if (out.contains("csv_path")) {
      if (!out["csv_path"].is_string()) fail("/output/csv_path", "expected a string");
      job.output.csv_path = out["csv_path"].get<std::string>();
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() &&
        !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0))
      fail("/seed", "expected an unsigned integer");
    job.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("flow_samples")) {
    if (!doc["flow_samples"].is_number_integer() || doc["flow_samples"].get<int>() < 2)
      fail("/flow_samples", "expected an integer >= 2");
    job.flow_samples = doc["flow_samples"].get<int>();
  }
  if (doc.contains("validate_tol")) {
    if (!doc["validate_tol"].is_number() || doc["validate_tol"].get<double>() < 0.0)
      fail("/validate_tol", "expected a nonnegative number");
    job.validate_tol = doc["validate_tol"].get<double>();
  }
  if (doc.contains("suite_cases")) {
    if (!doc["suite_cases"].is_number_integer() || doc["suite_cases"].get<int>() < 1)
      fail("/suite_cases", "expected a positive integer");
    job.suite_cases = doc["suite_cases"].get<int>();
  }

  check_command_structure(job);

  // normalized echo of the job document
  job.echo["command"] = job.command;
  if (doc.contains("model")) job.echo["model"] = normalize_model_echo(doc["model"]);
  job.echo["tolerances"] = {{"quadrature", job.tolerances.quadrature},
                            {"eta_oracle", job.tolerances.eta_oracle}};
  if (!job.output.report_path.empty() || job.output.csv_path) {
    ordered_json out;
    if (!job.output.report_path.empty()) out["report_path"] = job.output.report_path;
    if (job.output.csv_path) out["csv_path"] = *job.output.csv_path;
    job.echo["output"] = out;
  }
  job.echo["seed"] = job.seed;
  if (job.command == "flow") job.echo["flow_samples"] = job.flow_samples;
  if (job.command == "validate") job.echo["validate_tol"] = job.validate_tol;
  if (job.command == "suite") job.echo["suite_cases"] = job.suite_cases;
  return job;
}

ordered_json serialize_model(const SpacetimeModel& model) {
  ordered_json out;
  out["type"] = model.kind();
  out["descriptor"] = model.descriptor();
  return out;
}

RunResult run(const JobSpec& job) {
  const auto start = std::chrono::steady_clock::now();

  RunResult result;
  ordered_json& report = result.report;
  report["schema_version"] = kReportSchemaVersion;
  report["versions"] = {{"anomaly_forge", kToolVersion},
                        {"report_schema", kReportSchemaVersion}};
  report["job"] = job.echo;

  std::string csv;
  std::string* csv_sink = job.output.csv_path ? &csv : nullptr;
  ordered_json results;
  ordered_json warnings = ordered_json::array();
  int exit_code = kExitOk;

  try {
    check_command_model(job);
    if (job.command == "charge")
      results = run_charge(job, exit_code);
    else if (job.command == "flow")
      results = run_flow(job, exit_code, csv_sink);
    else if (job.command == "eta")
      results = run_eta(job, exit_code);
    else if (job.command == "forms")
      results = run_forms(job, exit_code, csv_sink);
    else if (job.command == "validate")
      results = run_validate(job, exit_code);
    else if (job.command == "reference")
      results = run_reference(job, exit_code);
    else
      results = run_suite(job, exit_code);
  } catch (const AccuracyError& e) {
    exit_code = kExitAccuracy;
    results = {{"error", "accuracy"},
               {"message", e.what()},
               {"best_value", e.best_value},
               {"error_estimate", e.error_estimate}};
  } catch (const UnsupportedModelError& e) {
    exit_code = kExitPrecondition;
    results = {{"error", "unsupported_model"}, {"message", e.what()}};
  } catch (const ParameterError& e) {
    exit_code = kExitPrecondition;
    results = {{"error", "precondition"}, {"message", e.what()}};
  } catch (const NumericError& e) {
    exit_code = kExitAccuracy;
    results = {{"error", "numeric"},
               {"message", e.what()},
               {"condition_estimate", e.condition_estimate}};
  }

  if (results.contains("warnings")) {
    warnings = results["warnings"];
    results.erase("warnings");
  }

  report["results"] = results;
  report["warnings"] = warnings;
  report["exit_code"] = exit_code;

  const auto elapsed = std::chrono::steady_clock::now() - start;
  report["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() / 1000.0;

  if (!job.output.report_path.empty())
    write_text_atomic(job.output.report_path, report.dump(2) + "\n");
  if (job.output.csv_path && !csv.empty()) write_text_atomic(*job.output.csv_path, csv);

  result.exit_code = exit_code;
  return result;
}

} // namespace anomaly
