#pragma once

// JSON and CSV formats. Weight: {"depth": n, "values": [...]}. Carleson
// sequence: {"depth": n, "alpha": [[level, index, value], ...]}.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbm/carleson.hpp"
#include "cbm/corpus.hpp"
#include "cbm/psi.hpp"
#include "cbm/report.hpp"

namespace cbm {

using json = nlohmann::json;

/// Any input/output problem; the message names the offending path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json weight_to_json(const DyadicWeight& w);
DyadicWeight weight_from_json(const json& j);

json carleson_to_json(const CarlesonSequence& seq);
CarlesonSequence carleson_from_json(const json& j);

/// {"family", "alpha", "clamp_s0": "auto" | number, "normalize", "young", "t_min"}
json psi_config_to_json(const PsiConfig& config);
PsiConfig psi_config_from_json(const json& j);

json corpus_spec_to_json(const CorpusSpec& spec);
CorpusSpec corpus_spec_from_json(const json& j);

json certificate_to_json(const Certificate& cert);
json check_report_to_json(const CheckReport& report);

/// Doubles are written shortest-round-trip; non-finite values become strings
/// ("inf", "-inf", "nan") so files stay valid JSON.
json number(double x);

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

DyadicWeight read_weight(const std::filesystem::path& path);
void write_weight(const std::filesystem::path& path, const DyadicWeight& w);
CarlesonSequence read_carleson(const std::filesystem::path& path);

/// Shortest round-trip decimal form, used for CSV cells.
std::string format_double(double x);

}  // namespace cbm
