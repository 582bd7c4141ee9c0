#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "cbm/commands.hpp"

namespace {

void add_common(CLI::App* sub, cbm::RunConfig& c, std::string& clamp, std::string& config_file) {
  sub->add_option("--config", config_file, "RunConfig JSON; flags given explicitly override it");
  sub->add_option("--psi-family", c.psi.family, "log-bump | loglog-bump | parametric");
  sub->add_option("--alpha", c.psi.alpha, "bump exponent");
  sub->add_option("--clamp", clamp, "clamp point s0 or 'auto'");
  sub->add_flag("--normalize", c.psi.normalize, "scale Psi so that int_0^1 ds/phi <= 1 and 1/Psi(1) <= 1");
  sub->add_option("--young", c.psi.young, "Young family behind a parametric Psi");
  sub->add_option("--depth", c.depth_max, "largest depth (with --depth-min for a range)");
  sub->add_option("--depth-min", c.depth_min, "smallest depth");
  sub->add_option("--seed", c.seed, "generator seed");
  sub->add_option("--out", c.out_dir, "output directory (default: $CBV_OUT_DIR or .)");
  sub->add_option("--workers", c.workers, "worker threads");
  sub->add_option("--tolerance-inequality", c.tol.inequality, "slack on asserted inequalities");
  sub->add_option("--tolerance-identity", c.tol.identity, "relative slack on identities");
  sub->add_option("--tolerance-quadrature", c.tol.quadrature, "quadrature tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic Carleson-Buckley verification"};
  app.require_subcommand(1);
  cbm::RunConfig cfg;
  if (const char* env = std::getenv("CBV_OUT_DIR")) cfg.out_dir = env;
  std::string clamp = "auto";
  std::string config_file;

  auto* gen = app.add_subcommand("gen-corpus", "write the weight corpus and its manifest");
  add_common(gen, cfg, clamp, config_file);
  gen->add_option("--kinds", cfg.kinds, "weight kinds to include");

  auto* verify = app.add_subcommand("verify", "run one verifier over the corpus");
  add_common(verify, cfg, clamp, config_file);
  verify->add_option("--theorem", cfg.theorem, "theorem id")->required();
  verify->add_option("--corpus", cfg.corpus, "manifest.json from gen-corpus (default: build in memory)");
  verify->add_option("--kinds", cfg.kinds, "weight kinds when the corpus is built in memory");
  verify->add_option("--root-level", cfg.root_level, "issue certificates for every root at this level");

  auto* table = app.add_subcommand("psi-table", "CSV of Psi, phi, B, B' and m on a log grid");
  add_common(table, cfg, clamp, config_file);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_file.empty()) {
      // Start from the file, then reapply explicit flags by parsing again.
      cbm::RunConfig from_file = cbm::run_config_from_json(cbm::read_json(config_file));
      cfg = from_file;
      app.parse(argc, argv);
    }
    if (clamp != "auto") cfg.psi.clamp_s0 = std::stod(clamp);
    cfg.command = sub->get_name();
    if (cfg.command == "gen-corpus") return cbm::cmd_gen_corpus(cfg);
    if (cfg.command == "verify") return cbm::cmd_verify(cfg);
    return cbm::cmd_psi_table(cfg);
  } catch (const cbm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return cbm::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return cbm::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cbm::kExitConfig;
  }
}
