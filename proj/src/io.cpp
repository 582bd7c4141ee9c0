#include "cbm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cbm {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw IoError("expected a number, got " + j.dump());
}

json interval_to_json(const DyadicInterval& I) { return json{{"level", I.level}, {"index", I.index}}; }

json details_to_json(const std::map<std::string, double>& details) {
  json out = json::object();
  for (const auto& [k, v] : details) out[k] = number(v);
  return out;
}

}  // namespace

json weight_to_json(const DyadicWeight& w) {
  json values = json::array();
  for (double v : w.values()) values.push_back(number(v));
  return json{{"depth", w.depth()}, {"values", std::move(values)}};
}

DyadicWeight weight_from_json(const json& j) {
  if (!j.is_object() || !j.contains("depth") || !j.contains("values"))
    throw IoError("weight JSON needs \"depth\" and \"values\"");
  const int depth = j.at("depth").get<int>();
  std::vector<double> values;
  values.reserve(j.at("values").size());
  for (const auto& v : j.at("values")) values.push_back(read_number(v));
  return DyadicWeight(depth, std::move(values));
}

json carleson_to_json(const CarlesonSequence& seq) {
  json alpha = json::array();
  for_each_subinterval(DyadicInterval(0, 0), seq.depth(), [&](const DyadicInterval& I) {
    const double a = seq(I);
    if (a != 0.0) alpha.push_back(json::array({I.level, I.index, a}));
  });
  return json{{"depth", seq.depth()}, {"alpha", std::move(alpha)}};
}

CarlesonSequence carleson_from_json(const json& j) {
  if (!j.is_object() || !j.contains("depth")) throw IoError("Carleson JSON needs \"depth\"");
  CarlesonSequence seq(j.at("depth").get<int>());
  if (j.contains("alpha"))
    for (const auto& e : j.at("alpha")) {
      if (!e.is_array() || e.size() != 3) throw IoError("Carleson entry must be [level, index, value]");
      const int level = e[0].get<int>();
      const auto index = e[1].get<std::int64_t>();
      if (level < 0 || level > seq.depth() || index < 0 || index >= (std::int64_t{1} << level))
        throw IoError("Carleson entry out of range: " + e.dump());
      seq.set(DyadicInterval(level, index), read_number(e[2]));
    }
  return seq;
}

json psi_config_to_json(const PsiConfig& c) {
  json j{{"family", c.family}, {"alpha", c.alpha}, {"normalize", c.normalize}};
  j["clamp_s0"] = c.clamp_s0 ? json(*c.clamp_s0) : json("auto");
  if (c.family == "parametric") {
    j["young"] = c.young;
    j["t_min"] = c.t_min;
  }
  return j;
}

PsiConfig psi_config_from_json(const json& j) {
  PsiConfig c;
  if (j.contains("family")) c.family = j.at("family").get<std::string>();
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("normalize")) c.normalize = j.at("normalize").get<bool>();
  if (j.contains("clamp_s0")) {
    const json& s0 = j.at("clamp_s0");
    if (s0.is_string()) {
      if (s0.get<std::string>() != "auto") throw IoError("clamp_s0 must be \"auto\" or a number");
    } else {
      c.clamp_s0 = s0.get<double>();
    }
  }
  if (j.contains("young")) c.young = j.at("young").get<std::string>();
  if (j.contains("t_min")) c.t_min = j.at("t_min").get<double>();
  return c;
}

json corpus_spec_to_json(const CorpusSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  return json{{"kind", spec.kind}, {"depth", spec.depth}, {"seed", spec.seed}, {"params", std::move(params)}};
}

CorpusSpec corpus_spec_from_json(const json& j) {
  CorpusSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  spec.depth = j.at("depth").get<int>();
  spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items()) spec.params[k] = v.get<double>();
  return spec;
}

json certificate_to_json(const Certificate& cert) {
  json j{{"theorem", cert.theorem},
         {"root", interval_to_json(cert.root)},
         {"lhs", number(cert.lhs)},
         {"rhs_base", number(cert.rhs_base)},
         {"constant", number(cert.constant)},
         {"ratio", number(cert.ratio)},
         {"verdict", cert.verdict},
         {"failures", cert.failures},
         {"breakdown", details_to_json(cert.breakdown)}};
  if (!cert.notes.empty()) j["notes"] = cert.notes;
  if (cert.ledger) {
    json rows = json::array();
    for (const auto& e : *cert.ledger)
      rows.push_back(json{{"level", e.node.level}, {"index", e.node.index}, {"term", number(e.term)}, {"gain", number(e.gain)}});
    j["ledger"] = std::move(rows);
  }
  return j;
}

json check_report_to_json(const CheckReport& r) {
  json j{{"name", r.name},       {"lhs", number(r.lhs)},       {"rhs", number(r.rhs)},
         {"ratio", number(r.ratio)}, {"passed", r.passed}, {"precondition_failed", r.precondition_failed},
         {"details", details_to_json(r.details)}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

DyadicWeight read_weight(const std::filesystem::path& path) {
  try {
    return weight_from_json(read_json(path));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_weight(const std::filesystem::path& path, const DyadicWeight& w) { write_text(path, weight_to_json(w).dump() + "\n"); }

CarlesonSequence read_carleson(const std::filesystem::path& path) {
  try {
    return carleson_from_json(read_json(path));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace cbm
