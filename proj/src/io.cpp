#include "rocoin/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rocoin/errors.hpp"
#include "rocoin/rng.hpp"

namespace rocoin {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

json parse_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

double require_number(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw IoError(ctx + ": missing or non-numeric field '" + key + "'");
  return obj[key].get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw IoError(ctx + ": missing or non-string field '" + key + "'");
  return obj[key].get<std::string>();
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quoted(const std::string& s) { return "\"" + escape(s) + "\""; }

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot serialize non-finite number");
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// devices.json

std::vector<DeviceProfile> load_devices(const std::string& path) {
  const json root = parse_json(path);
  if (!root.is_array()) throw IoError(path + ": expected a top-level array");
  std::vector<DeviceProfile> devices;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string ctx = path + ": device[" + std::to_string(i) + "]";
    const json& o = root[i];
    if (!o.is_object()) throw IoError(ctx + ": expected an object");
    for (const auto& [key, _] : o.items())
      if (key != "id" && key != "core_flops" && key != "mem_bytes" &&
          key != "tran_bps" && key != "p_out")
        throw IoError(ctx + ": unknown field '" + key + "'");
    DeviceProfile d;
    d.id = require_string(o, "id", ctx);
    d.core_flops = require_number(o, "core_flops", ctx);
    d.mem_bytes = require_number(o, "mem_bytes", ctx);
    d.tran_bps = require_number(o, "tran_bps", ctx);
    d.p_out = require_number(o, "p_out", ctx);
    devices.push_back(std::move(d));
  }
  try {
    return validate_devices(std::move(devices));
  } catch (const ValidationError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void save_devices(const std::string& path, const std::vector<DeviceProfile>& devices) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const auto& d = devices[i];
    out += "  {\"id\":" + quoted(d.id) +
           ",\"core_flops\":" + format_number(d.core_flops) +
           ",\"mem_bytes\":" + format_number(d.mem_bytes) +
           ",\"tran_bps\":" + format_number(d.tran_bps) +
           ",\"p_out\":" + format_number(d.p_out) + "}";
    out += (i + 1 < devices.size()) ? ",\n" : "\n";
  }
  out += "]\n";
  write_file(path, out);
}

// ---------------------------------------------------------------------------
// students.json

std::vector<StudentArch> load_students(const std::string& path) {
  const json root = parse_json(path);
  if (!root.is_array()) throw IoError(path + ": expected a top-level array");
  std::vector<StudentArch> students;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string ctx = path + ": student[" + std::to_string(i) + "]";
    const json& o = root[i];
    if (!o.is_object()) throw IoError(ctx + ": expected an object");
    for (const auto& [key, _] : o.items())
      if (key != "id" && key != "flops" && key != "param_bytes" && key != "output_bits")
        throw IoError(ctx + ": unknown field '" + key + "'");
    StudentArch s;
    s.id = require_string(o, "id", ctx);
    s.flops = require_number(o, "flops", ctx);
    s.param_bytes = require_number(o, "param_bytes", ctx);
    s.output_bits = require_number(o, "output_bits", ctx);
    students.push_back(std::move(s));
  }
  try {
    return validate_students(std::move(students));
  } catch (const ValidationError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void save_students(const std::string& path, const std::vector<StudentArch>& students) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < students.size(); ++i) {
    const auto& s = students[i];
    out += "  {\"id\":" + quoted(s.id) + ",\"flops\":" + format_number(s.flops) +
           ",\"param_bytes\":" + format_number(s.param_bytes) +
           ",\"output_bits\":" + format_number(s.output_bits) + "}";
    out += (i + 1 < students.size()) ? ",\n" : "\n";
  }
  out += "]\n";
  write_file(path, out);
}

// ---------------------------------------------------------------------------
// activations.csv

ActivationMatrix load_activations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");

  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : l) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    cells.push_back(cur);
    return cells;
  };

  const auto header = split(line);
  if (header.empty() || header[0] != "sample")
    throw IoError(path + ": header must start with 'sample'");
  const std::size_t filters = header.size() - 1;
  for (std::size_t m = 0; m < filters; ++m)
    if (header[m + 1] != "f" + std::to_string(m + 1))
      throw IoError(path + ": header column " + std::to_string(m + 2) +
                    " must be 'f" + std::to_string(m + 1) + "', got '" + header[m + 1] + "'");

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto cells = split(line);
    if (cells.size() != filters + 1)
      throw IoError(path + ": row " + std::to_string(lineno) + " has " +
                    std::to_string(cells.size() - 1) + " values, expected " +
                    std::to_string(filters));
    std::vector<double> row(filters);
    for (std::size_t m = 0; m < filters; ++m) {
      const std::string& cell = cells[m + 1];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw IoError(path + ": row " + std::to_string(lineno) + " column f" +
                      std::to_string(m + 1) + ": not a number: '" + cell + "'");
      row[m] = v;
    }
    rows.push_back(std::move(row));
  }

  ActivationMatrix acts;
  acts.values = Matrix(rows.size(), filters);
  for (std::size_t v = 0; v < rows.size(); ++v)
    for (std::size_t m = 0; m < filters; ++m) acts.values(v, m) = rows[v][m];
  try {
    validate_activations(acts);
  } catch (const ValidationError& e) {
    throw IoError(path + ": " + e.what());
  }
  return acts;
}

void save_activations(const std::string& path, const ActivationMatrix& acts) {
  std::string out = "sample";
  for (int m = 1; m <= acts.filter_count(); ++m) out += ",f" + std::to_string(m);
  out += "\n";
  for (std::size_t v = 0; v < acts.values.rows(); ++v) {
    out += "s" + std::to_string(v);
    for (std::size_t m = 0; m < acts.values.cols(); ++m)
      out += "," + format_number(acts.values(v, m));
    out += "\n";
  }
  write_file(path, out);
}

// ---------------------------------------------------------------------------
// plan.json

AssignmentPlan load_plan(const std::string& path) {
  const json root = parse_json(path);
  if (!root.is_object()) throw IoError(path + ": expected a top-level object");
  AssignmentPlan plan;
  const std::string ctx = path + ": plan";
  if (!root.contains("groups") || !root["groups"].is_array())
    throw IoError(ctx + ": missing 'groups' array");
  for (const auto& g : root["groups"]) {
    DeviceGroup group;
    if (!g.is_object() || !g.contains("members") || !g["members"].is_array())
      throw IoError(ctx + ": each group needs a 'members' array");
    for (const auto& m : g["members"]) {
      if (!m.is_string()) throw IoError(ctx + ": group members must be strings");
      group.members.push_back(m.get<std::string>());
    }
    if (!g.contains("centroid") || !g["centroid"].is_object())
      throw IoError(ctx + ": each group needs a 'centroid' object");
    group.centroid_mem = require_number(g["centroid"], "mem_bytes", ctx);
    group.centroid_core = require_number(g["centroid"], "core_flops", ctx);
    plan.groups.push_back(std::move(group));
  }
  if (!root.contains("partitions") || !root["partitions"].is_array())
    throw IoError(ctx + ": missing 'partitions' array");
  for (const auto& p : root["partitions"]) {
    FilterPartition part;
    if (!p.is_array()) throw IoError(ctx + ": each partition must be an array");
    for (const auto& f : p) {
      if (!f.is_number_integer()) throw IoError(ctx + ": filter indices must be integers");
      part.members.push_back(f.get<int>());
    }
    plan.partitions.push_back(std::move(part));
  }
  if (!root.contains("matching") || !root["matching"].is_array())
    throw IoError(ctx + ": missing 'matching' array");
  for (const auto& m : root["matching"]) {
    if (!m.is_number_integer()) throw IoError(ctx + ": matching entries must be integers");
    plan.matching.push_back(m.get<int>());
  }
  if (!root.contains("student_choice") || !root["student_choice"].is_array())
    throw IoError(ctx + ": missing 'student_choice' array");
  for (const auto& s : root["student_choice"]) {
    if (!s.is_string()) throw IoError(ctx + ": student_choice entries must be strings");
    plan.student_choice.push_back(s.get<std::string>());
  }
  if (!root.contains("predicted_latency_s") || !root["predicted_latency_s"].is_number())
    throw IoError(ctx + ": missing numeric 'predicted_latency_s'");
  plan.predicted_latency_s = root["predicted_latency_s"].get<double>();
  return plan;
}

void save_plan(const std::string& path, const AssignmentPlan& plan,
               const ConstraintReport& report) {
  std::string out = "{\n  \"groups\": [\n";
  for (std::size_t k = 0; k < plan.groups.size(); ++k) {
    const auto& g = plan.groups[k];
    out += "    {\"members\":[";
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      out += quoted(g.members[i]);
      if (i + 1 < g.members.size()) out += ",";
    }
    out += "],\"centroid\":{\"mem_bytes\":" + format_number(g.centroid_mem) +
           ",\"core_flops\":" + format_number(g.centroid_core) + "}}";
    out += (k + 1 < plan.groups.size()) ? ",\n" : "\n";
  }
  out += "  ],\n  \"partitions\": [\n";
  for (std::size_t k = 0; k < plan.partitions.size(); ++k) {
    out += "    [";
    const auto& members = plan.partitions[k].members;
    for (std::size_t i = 0; i < members.size(); ++i) {
      out += std::to_string(members[i]);
      if (i + 1 < members.size()) out += ",";
    }
    out += "]";
    out += (k + 1 < plan.partitions.size()) ? ",\n" : "\n";
  }
  out += "  ],\n  \"matching\": [";
  for (std::size_t k = 0; k < plan.matching.size(); ++k) {
    out += std::to_string(plan.matching[k]);
    if (k + 1 < plan.matching.size()) out += ",";
  }
  out += "],\n  \"student_choice\": [";
  for (std::size_t k = 0; k < plan.student_choice.size(); ++k) {
    out += quoted(plan.student_choice[k]);
    if (k + 1 < plan.student_choice.size()) out += ",";
  }
  out += "],\n  \"predicted_latency_s\": " + format_number(plan.predicted_latency_s) + ",\n";
  out += "  \"constraints\": {\n";
  for (const auto& c : report.checks) {
    out += "    " + quoted(c.name) + ": " +
           quoted(c.pass ? "pass" : "fail: " + c.detail) + ",\n";
  }
  out += "    \"accuracy-loss\": \"not evaluated (requires training)\"\n  }\n}\n";
  write_file(path, out);
}

// ---------------------------------------------------------------------------
// report.json / report.csv

SimReport load_report(const std::string& path) {
  const json root = parse_json(path);
  const std::string ctx = path + ": report";
  if (!root.is_object()) throw IoError(ctx + ": expected a top-level object");
  SimReport r;
  r.trials = static_cast<int>(require_number(root, "trials", ctx));
  r.coverage_rate = require_number(root, "coverage_rate", ctx);
  r.accuracy_proxy = require_number(root, "accuracy_proxy", ctx);
  r.zero_coverage_trials = static_cast<int>(require_number(root, "zero_coverage_trials", ctx));
  if (!root.contains("latency")) throw IoError(ctx + ": missing 'latency'");
  if (root["latency"].is_null()) {
    r.latency.defined = false;
  } else {
    const json& l = root["latency"];
    r.latency.defined = true;
    r.latency.mean = require_number(l, "mean_s", ctx);
    r.latency.p50 = require_number(l, "p50_s", ctx);
    r.latency.p90 = require_number(l, "p90_s", ctx);
    r.latency.p99 = require_number(l, "p99_s", ctx);
    r.latency.max = require_number(l, "max_s", ctx);
  }
  if (!root.contains("group_loss_rate") || !root["group_loss_rate"].is_array())
    throw IoError(ctx + ": missing 'group_loss_rate' array");
  for (const auto& v : root["group_loss_rate"]) {
    if (!v.is_number()) throw IoError(ctx + ": group_loss_rate entries must be numbers");
    r.group_loss_rate.push_back(v.get<double>());
  }
  return r;
}

void save_report_json(const std::string& path, const SimReport& report,
                      const FailureScenario& scenario) {
  std::string out = "{\n";
  out += "  \"mode\": " +
         quoted(scenario.mode == FailureMode::outage_sampling ? "outage_sampling"
                                                              : "crash_subset") +
         ",\n";
  out += "  \"crash_count\": " + std::to_string(scenario.crash_count) + ",\n";
  out += "  \"seed\": " + std::to_string(scenario.seed) + ",\n";
  out += "  \"trials\": " + std::to_string(report.trials) + ",\n";
  out += "  \"coverage_rate\": " + format_number(report.coverage_rate) + ",\n";
  out += "  \"accuracy_proxy\": " + format_number(report.accuracy_proxy) + ",\n";
  out += "  \"zero_coverage_trials\": " + std::to_string(report.zero_coverage_trials) + ",\n";
  if (report.latency.defined) {
    out += "  \"latency\": {\"mean_s\":" + format_number(report.latency.mean) +
           ",\"p50_s\":" + format_number(report.latency.p50) +
           ",\"p90_s\":" + format_number(report.latency.p90) +
           ",\"p99_s\":" + format_number(report.latency.p99) +
           ",\"max_s\":" + format_number(report.latency.max) + "},\n";
  } else {
    out += "  \"latency\": null,\n";
  }
  out += "  \"group_loss_rate\": [";
  for (std::size_t k = 0; k < report.group_loss_rate.size(); ++k) {
    out += format_number(report.group_loss_rate[k]);
    if (k + 1 < report.group_loss_rate.size()) out += ",";
  }
  out += "]\n}\n";
  write_file(path, out);
}

void save_report_csv(const std::string& path, const SimReport& report) {
  std::string out = "metric,value\n";
  out += "trials," + std::to_string(report.trials) + "\n";
  out += "coverage_rate," + format_number(report.coverage_rate) + "\n";
  out += "accuracy_proxy," + format_number(report.accuracy_proxy) + "\n";
  out += "zero_coverage_trials," + std::to_string(report.zero_coverage_trials) + "\n";
  if (report.latency.defined) {
    out += "mean_latency_s," + format_number(report.latency.mean) + "\n";
    out += "p50_latency_s," + format_number(report.latency.p50) + "\n";
    out += "p90_latency_s," + format_number(report.latency.p90) + "\n";
    out += "p99_latency_s," + format_number(report.latency.p99) + "\n";
    out += "max_latency_s," + format_number(report.latency.max) + "\n";
  }
  for (std::size_t k = 0; k < report.group_loss_rate.size(); ++k)
    out += "group_loss_rate_" + std::to_string(k) + "," +
           format_number(report.group_loss_rate[k]) + "\n";
  write_file(path, out);
}

void save_edge_list(const std::string& path, const FilterGraph& g) {
  std::string out = "filter_i,filter_j,weight\n";
  for (int i = 0; i < g.filter_count; ++i)
    for (int j = i + 1; j < g.filter_count; ++j)
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             format_number(g.weights(static_cast<std::size_t>(i),
                                     static_cast<std::size_t>(j))) +
             "\n";
  write_file(path, out);
}

// ---------------------------------------------------------------------------
// synthetic generators

ActivationMatrix synth_activations(int filters, int classes, int samples_per_class,
                                   double sharpness, std::uint64_t seed) {
  if (classes < 1) throw ValidationError("synth_activations: classes must be >= 1");
  if (filters < classes)
    throw ValidationError("synth_activations: need at least one filter per class");
  if (samples_per_class < 1)
    throw ValidationError("synth_activations: samples_per_class must be >= 1");
  if (sharpness < 1.0)
    throw ValidationError("synth_activations: sharpness must be >= 1");

  Rng rng(seed);
  const std::size_t m = static_cast<std::size_t>(filters);
  const std::size_t v = static_cast<std::size_t>(classes) *
                        static_cast<std::size_t>(samples_per_class);
  ActivationMatrix acts;
  acts.values = Matrix(v, m);
  std::size_t row = 0;
  for (int c = 0; c < classes; ++c) {
    const int lo = c * filters / classes;
    const int hi = (c + 1) * filters / classes;
    for (int s = 0; s < samples_per_class; ++s, ++row) {
      for (int f = 0; f < filters; ++f) {
        const double base = (f >= lo && f < hi) ? sharpness : 1.0;
        acts.values(row, static_cast<std::size_t>(f)) =
            base + next_uniform(rng, -0.3, 0.3);
      }
    }
  }
  return acts;
}

std::vector<DeviceProfile> synth_devices(int n, double success_mean, std::uint64_t seed) {
  if (n < 1) throw ValidationError("synth_devices: n must be >= 1");
  if (success_mean < 0.0 || success_mean > 1.0)
    throw ValidationError("synth_devices: success_mean must lie in [0,1]");
  const double mean_out = 1.0 - success_mean;
  const double half_width = std::min(mean_out, 1.0 - mean_out) / 2.0;

  Rng rng(seed);
  std::vector<DeviceProfile> devices;
  for (int i = 0; i < n; ++i) {
    DeviceProfile d;
    d.id = "dev-" + std::to_string(i);
    d.core_flops = next_uniform(rng, 5e6, 30e6);
    d.tran_bps = next_uniform(rng, 500.0, 1000.0);
    d.mem_bytes = next_uniform(rng, 0.5e6, 1.5e6);
    d.p_out = half_width == 0.0
                  ? mean_out
                  : next_uniform(rng, mean_out - half_width, mean_out + half_width);
    devices.push_back(std::move(d));
  }
  return devices;
}

std::vector<StudentArch> synth_students(const std::string& preset) {
  if (preset == "paper-cifar") {
    return {
        {"mobilenet-v2", 20e6, 0.4e6, 512.0},
        {"wrn16-1", 34.25e6, 0.72e6, 512.0},
        {"wrn22-1", 48.58e6, 1.12e6, 512.0},
    };
  }
  if (preset == "paper-cifar100") {
    return {
        {"wrn22-1", 48.58e6, 1.12e6, 512.0},
        {"wrn16-2", 260.1e6, 2.84e6, 512.0},
        {"wrn16-3", 575.3e6, 6.24e6, 512.0},
    };
  }
  throw ValidationError("synth_students: unknown preset '" + preset + "'");
}

}  // namespace rocoin
