#pragma once

// The three CLI commands. Each returns a process exit code:
// 0 all pass, 2 some certificate failed, 3 configuration error.

#include <cstdint>
#include <string>
#include <vector>

#include "cbm/io.hpp"

namespace cbm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 2;
inline constexpr int kExitConfig = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run depends on. A run is reproducible from this alone.
struct RunConfig {
  std::string command;  // gen-corpus | verify | psi-table
  PsiConfig psi;
  std::string corpus;  // manifest path; empty = default corpus built in memory
  int depth_min = 6;
  int depth_max = 12;
  std::uint64_t seed = 1;
  std::vector<std::string> kinds = {"constant", "random-martingale", "spike", "lacunary", "two-level-gap", "power-like"};
  std::string out_dir = ".";
  int workers = 1;
  std::string theorem;
  int root_level = 0;  // certificates are issued for every root at this level
  Tolerances tol;
};

/// With include_placement = false the output directory and worker count are
/// omitted; results never depend on them.
json run_config_to_json(const RunConfig& config, bool include_placement = true);
RunConfig run_config_from_json(const json& j);

const std::vector<std::string>& theorem_ids();

/// Specs of the default corpus restricted to the configured kinds and depths.
std::vector<CorpusSpec> corpus_specs(const RunConfig& config);

struct CorpusItem {
  std::string id;
  CorpusSpec spec;
  DyadicWeight weight;
};

/// Loads the manifest named in config.corpus (hashes are checked), or builds
/// the corpus in memory when none is given.
std::vector<CorpusItem> load_corpus(const RunConfig& config);

int cmd_gen_corpus(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_psi_table(const RunConfig& config);

/// Certificates of one verify run plus summary rows, as written to disk.
struct VerifyOutput {
  std::vector<Certificate> certificates;
  std::vector<std::string> row_ids;  // one per certificate
  std::vector<int> row_depths;
};
VerifyOutput run_verify(const RunConfig& config);
std::string certificates_text(const RunConfig& config, const VerifyOutput& out);
std::string summary_csv(const VerifyOutput& out);

}  // namespace cbm
