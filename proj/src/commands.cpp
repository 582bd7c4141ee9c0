#include "cbm/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "cbm/bellman.hpp"
#include "cbm/sweeps.hpp"
#include "cbm/verifiers.hpp"

namespace cbm {

namespace {

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate(const RunConfig& c) {
  if (c.workers < 1) throw ConfigError("--workers must be >= 1");
  if (c.depth_min < 1 || c.depth_max > 20 || c.depth_min > c.depth_max) throw ConfigError("bad depth range");
  if (c.root_level < 0) throw ConfigError("root level must be >= 0");
}

PsiFunction psi_or_config_error(const PsiConfig& config) {
  try {
    return make_psi(config);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("Psi configuration: ") + e.what());
  }
}

struct TaskResult {
  Certificate cert;
  std::string id;
  int depth = 0;
};
using Task = std::function<std::vector<TaskResult>()>;

// Tasks write only their own slot; the merge is in task order.
std::vector<TaskResult> run_tasks(const std::vector<Task>& tasks, int workers) {
  std::vector<std::vector<TaskResult>> slots(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        slots[i] = tasks[i]();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<TaskResult> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty()) {
      TaskResult r;
      r.cert.theorem = "task";
      r.cert.verdict = "fail";
      r.cert.failures.push_back("task " + std::to_string(i) + ": " + errors[i]);
      r.id = "task-" + std::to_string(i);
      out.push_back(std::move(r));
    }
    for (auto& r : slots[i]) out.push_back(std::move(r));
  }
  return out;
}

std::vector<DyadicInterval> roots_for(const DyadicWeight& w, int root_level) {
  std::vector<DyadicInterval> roots;
  if (root_level > w.depth()) return roots;
  for (std::int64_t k = 0; k < (std::int64_t{1} << root_level); ++k) roots.emplace_back(root_level, k);
  return roots;
}

std::string suffix(const DyadicInterval& root, int root_level) {
  return root_level == 0 ? std::string() : "@" + root.to_string();
}

Certificate from_report(const std::string& theorem, const CheckReport& r) {
  Certificate c;
  c.theorem = theorem;
  c.lhs = r.lhs;
  c.rhs_base = r.rhs;
  c.constant = 1.0;
  c.ratio = r.ratio;
  c.verdict = r.passed ? "pass" : "fail";
  if (!r.passed) c.failures.push_back(r.note.empty() ? r.name + " failed" : r.note);
  c.breakdown = r.details;
  if (!r.note.empty() && r.passed) c.notes.push_back(r.note);
  return c;
}

Certificate from_sweep(const SweepResult& s) {
  Certificate c;
  c.theorem = "bellman-checks/" + s.name;
  c.lhs = static_cast<double>(s.violations);
  c.rhs_base = static_cast<double>(s.instances);
  c.ratio = s.min_ratio;
  c.verdict = s.passed() ? "pass" : "fail";
  c.breakdown["instances"] = static_cast<double>(s.instances);
  c.breakdown["violations"] = static_cast<double>(s.violations);
  c.breakdown["min_ratio"] = s.min_ratio;
  if (!s.worst.empty()) c.notes.push_back("extreme instance: " + s.worst);
  if (!s.passed()) c.failures.push_back(s.name + ": " + std::to_string(s.violations) + " violations");
  return c;
}

std::vector<Task> bellman_check_tasks(const RunConfig& config, const std::vector<CorpusItem>& corpus,
                                      const PsiFunction& psi) {
  auto B = std::make_shared<const BellmanProfile>(psi);
  auto m = std::make_shared<const BellmanProfile>(build_m(normalized(psi)));
  auto weights = std::make_shared<std::vector<DyadicWeight>>();
  for (const auto& item : corpus) weights->push_back(item.weight);
  const Tolerances tol = config.tol;
  const std::uint64_t seed = config.seed;
  auto one = [](std::string id, std::function<Certificate()> fn) -> Task {
    return [id, fn] { return std::vector<TaskResult>{{fn(), id, 0}}; };
  };
  std::vector<Task> tasks;
  tasks.push_back(one("psi-admissible", [psi] { return from_report("bellman-checks/psi_admissible", check_admissible(psi)); }));
  tasks.push_back(one("profile", [B] { return from_report("bellman-checks/profile", check_profile(*B)); }));
  tasks.push_back(one("T-embed", [B] {
    return from_report("bellman-checks/T_convexity_embed", check_T_convexity(TwoVarBellman(*B, Regime::Embed)));
  }));
  tasks.push_back(one("T-paraproduct", [m] {
    return from_report("bellman-checks/T_convexity_paraproduct",
                       check_T_convexity(TwoVarBellman(*m, Regime::Paraproduct)));
  }));
  tasks.push_back(one("main-pairs", [=] { return from_sweep(sweep_main_pairs(*weights, *m, 10000, seed, tol)); }));
  for (int g = 2; g <= 4; ++g)
    tasks.push_back(one("main-npoint-g" + std::to_string(g),
                        [=] { return from_sweep(sweep_main_npoint(*weights, *m, g, seed, tol)); }));
  tasks.push_back(one("paraproduct", [=] { return from_sweep(sweep_paraproduct(*weights, *m, 10000, seed, tol)); }));
  return tasks;
}

}  // namespace

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"buc-classic", "folk",        "d-embed",      "fd-embed",      "embed",
                                               "embed2",      "bump-embed",  "failure-demo", "bellman-checks"};
  return ids;
}

json run_config_to_json(const RunConfig& c, bool include_placement) {
  json j{{"command", c.command},
         {"psi", psi_config_to_json(c.psi)},
         {"corpus", c.corpus},
         {"depth_min", c.depth_min},
         {"depth_max", c.depth_max},
         {"seed", c.seed},
         {"kinds", c.kinds},
         {"theorem", c.theorem},
         {"root_level", c.root_level},
         {"tolerances",
          {{"inequality", c.tol.inequality}, {"identity", c.tol.identity}, {"quadrature", c.tol.quadrature}}}};
  if (include_placement) {
    j["out_dir"] = c.out_dir;
    j["workers"] = c.workers;
  }
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.command = j.value("command", c.command);
  if (j.contains("psi")) c.psi = psi_config_from_json(j.at("psi"));
  c.corpus = j.value("corpus", c.corpus);
  c.depth_min = j.value("depth_min", c.depth_min);
  c.depth_max = j.value("depth_max", c.depth_max);
  c.seed = j.value("seed", c.seed);
  if (j.contains("kinds")) c.kinds = j.at("kinds").get<std::vector<std::string>>();
  c.out_dir = j.value("out_dir", c.out_dir);
  c.workers = j.value("workers", c.workers);
  c.theorem = j.value("theorem", c.theorem);
  c.root_level = j.value("root_level", c.root_level);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    c.tol.inequality = t.value("inequality", c.tol.inequality);
    c.tol.identity = t.value("identity", c.tol.identity);
    c.tol.quadrature = t.value("quadrature", c.tol.quadrature);
  }
  return c;
}

std::vector<CorpusSpec> corpus_specs(const RunConfig& config) {
  const bool empty = std::all_of(config.kinds.begin(), config.kinds.end(), [](const std::string& k) { return k.empty(); });
  if (empty) throw ConfigError("empty kinds list");
  static const std::set<std::string> known = {"constant", "random-martingale", "spike", "lacunary", "two-level-gap",
                                              "power-like"};
  for (const auto& k : config.kinds)
    if (!k.empty() && !known.count(k)) throw ConfigError("unknown weight kind: " + k);
  std::vector<CorpusSpec> out;
  for (const auto& spec : default_corpus_specs(config.seed)) {
    if (std::find(config.kinds.begin(), config.kinds.end(), spec.kind) == config.kinds.end()) continue;
    if (spec.depth < config.depth_min || spec.depth > config.depth_max) continue;
    out.push_back(spec);
  }
  if (out.empty()) throw ConfigError("corpus selection is empty");
  return out;
}

std::vector<CorpusItem> load_corpus(const RunConfig& config) {
  std::vector<CorpusItem> items;
  if (config.corpus.empty()) {
    for (const auto& spec : corpus_specs(config)) items.push_back({spec.id(), spec, gen_weight(spec)});
    return items;
  }
  const std::filesystem::path manifest(config.corpus);
  if (!std::filesystem::exists(manifest)) throw ConfigError("missing corpus manifest: " + manifest.string());
  const json j = read_json(manifest);
  const auto base = manifest.parent_path();
  for (const auto& e : j.at("weights")) {
    CorpusItem item;
    item.id = e.at("id").get<std::string>();
    item.spec = corpus_spec_from_json(e.at("spec"));
    const auto file = base / e.at("file").get<std::string>();
    item.weight = read_weight(file);
    if (hex(content_hash(item.weight)) != e.at("hash").get<std::string>())
      throw IoError("content hash mismatch for " + file.string());
    items.push_back(std::move(item));
  }
  return items;
}

int cmd_gen_corpus(const RunConfig& config) {
  validate(config);
  const auto specs = corpus_specs(config);
  const std::filesystem::path out(config.out_dir);
  json entries = json::array();
  for (const auto& spec : specs) {
    const DyadicWeight w = gen_weight(spec);
    const std::string file = "weights/" + spec.id() + ".json";
    write_weight(out / file, w);
    entries.push_back(json{{"id", spec.id()}, {"spec", corpus_spec_to_json(spec)}, {"file", file},
                           {"hash", hex(content_hash(w))}});
  }
  const json manifest{{"seed", config.seed}, {"count", specs.size()}, {"weights", std::move(entries)}};
  write_json(out / "manifest.json", manifest);
  std::cout << "wrote " << specs.size() << " weights to " << (out / "manifest.json").string() << "\n";
  return kExitOk;
}

VerifyOutput run_verify(const RunConfig& config) {
  validate(config);
  const auto& ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), config.theorem) == ids.end())
    throw ConfigError("unknown theorem id: " + config.theorem);
  const PsiFunction psi = psi_or_config_error(config.psi);
  const std::string theorem = config.theorem;
  const Tolerances tol = config.tol;
  const int root_level = config.root_level;

  std::vector<Task> tasks;
  std::vector<CorpusItem> corpus;
  if (theorem != "failure-demo") corpus = load_corpus(config);
  auto shared_corpus = std::make_shared<const std::vector<CorpusItem>>(std::move(corpus));

  if (theorem == "bellman-checks") {
    tasks = bellman_check_tasks(config, *shared_corpus, psi);
  } else if (theorem == "failure-demo") {
    auto B = std::make_shared<const BellmanProfile>(psi);
    for (int depth = config.depth_min; depth <= config.depth_max; ++depth)
      tasks.push_back([B, depth] {
        FailureDemo demo = failure_demo(depth, *B);
        Certificate c = demo.d_embed;
        c.theorem = "failure-demo";
        c.breakdown["classical_ratio"] = demo.classical_ratio;
        c.breakdown["classical_expected"] = 4.0 * depth;
        return std::vector<TaskResult>{{std::move(c), "spike-d" + std::to_string(depth), depth}};
      });
    if (config.depth_min <= 6 && config.depth_max >= 12)
      tasks.push_back([B] {
        return std::vector<TaskResult>{{from_report("failure-demo/contrast", failure_contrast(*B, 6, 12)), "contrast", 0}};
      });
  } else {
    const bool needs_m = theorem == "embed2" || theorem == "bump-embed";
    std::shared_ptr<const BellmanProfile> B;
    if (theorem != "buc-classic" && theorem != "folk")
      B = std::make_shared<const BellmanProfile>(needs_m ? build_m(normalized(psi)) : BellmanProfile(psi));
    const std::uint64_t seed = config.seed;
    for (std::size_t wi = 0; wi < shared_corpus->size(); ++wi) {
      const CorpusItem& item = (*shared_corpus)[wi];
      for (const DyadicInterval& root : roots_for(item.weight, root_level)) {
        const std::string base_id = item.id + suffix(root, root_level);
        const int depth = item.weight.depth();
        const DyadicWeight* w = &item.weight;
        auto keep = shared_corpus;  // keeps *w alive inside the task
        if (theorem == "buc-classic") {
          tasks.push_back([=] { return std::vector<TaskResult>{{verify_buckley_classic(*w, root), base_id, depth}}; });
        } else if (theorem == "d-embed") {
          tasks.push_back([=] { return std::vector<TaskResult>{{verify_d_embed(*w, *B, root, tol), base_id, depth}}; });
        } else if (theorem == "fd-embed") {
          tasks.push_back([=] {
            std::vector<TaskResult> out;
            for (const auto& [name, f] : default_test_functions(*w, seed + wi))
              out.push_back({verify_fd_embed(*w, f, *B, root, tol), base_id + "/" + name, depth});
            return out;
          });
        } else {
          for (const char* kind : kCarlesonKinds) {
            const std::string id = base_id + "/" + kind;
            const std::string k = kind;
            tasks.push_back([=] {
              // Raw (unnormalized) sequence: the verifiers normalize and say so.
              double factor = 0.0;
              CarlesonSequence seq = gen_carleson_sequence(k, depth, seed + wi, &factor);
              if (factor > 0.0) seq = seq.scaled(factor);
              std::vector<TaskResult> out;
              if (theorem == "folk") {
                out.push_back({verify_folk(*w, seq, root), id, depth});
              } else if (theorem == "embed") {
                out.push_back({verify_embed(*w, seq, *B, root, tol), id, depth});
              } else {
                const auto fns = default_test_functions(*w, seed + wi);
                std::vector<SignedStepFunction> fs;
                for (const auto& nf : fns) fs.push_back(nf.f);
                auto certs = verify_embed2(*w, fs, seq, *B, root, tol, theorem);
                for (std::size_t i = 0; i < certs.size(); ++i)
                  out.push_back({std::move(certs[i]), id + "/" + fns[i].name, depth});
              }
              return out;
            });
          }
        }
      }
    }
  }

  VerifyOutput out;
  for (auto& r : run_tasks(tasks, config.workers)) {
    out.certificates.push_back(std::move(r.cert));
    out.row_ids.push_back(std::move(r.id));
    out.row_depths.push_back(r.depth);
  }
  return out;
}

std::string certificates_text(const RunConfig& config, const VerifyOutput& out) {
  json certs = json::array();
  for (std::size_t i = 0; i < out.certificates.size(); ++i) {
    json c = certificate_to_json(out.certificates[i]);
    c["id"] = out.row_ids[i];
    certs.push_back(std::move(c));
  }
  // Worker count and output directory are left out: the file must not depend on them.
  const json doc{{"config", run_config_to_json(config, false)}, {"certificates", std::move(certs)}};
  return doc.dump(2) + "\n";
}

std::string summary_csv(const VerifyOutput& out) {
  std::ostringstream os;
  os << "id,depth,lhs,rhs,ratio,verdict\n";
  for (std::size_t i = 0; i < out.certificates.size(); ++i) {
    const Certificate& c = out.certificates[i];
    os << out.row_ids[i] << ',' << out.row_depths[i] << ',' << format_double(c.lhs) << ','
       << format_double(c.constant * c.rhs_base) << ',' << format_double(c.ratio) << ',' << c.verdict << '\n';
  }
  return os.str();
}

int cmd_verify(const RunConfig& config) {
  const VerifyOutput out = run_verify(config);
  const std::filesystem::path dir(config.out_dir);
  write_text(dir / "certificates.json", certificates_text(config, out));
  write_text(dir / "summary.csv", summary_csv(out));
  write_json(dir / "run_config.json", run_config_to_json(config));
  std::size_t failed = 0;
  for (const auto& c : out.certificates)
    if (!c.passed()) ++failed;
  std::cout << config.theorem << ": " << out.certificates.size() << " certificates, " << failed << " failed -> "
            << (dir / "certificates.json").string() << "\n";
  for (std::size_t i = 0; i < out.certificates.size() && i < 1000; ++i)
    if (!out.certificates[i].passed())
      std::cout << "  FAIL " << out.row_ids[i] << ": "
                << (out.certificates[i].failures.empty() ? "" : out.certificates[i].failures.front()) << "\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_psi_table(const RunConfig& config) {
  validate(config);
  const PsiFunction psi = psi_or_config_error(config.psi);
  const std::filesystem::path dir(config.out_dir);
  const CheckReport adm = check_admissible(psi);
  if (!adm.passed) {
    write_json(dir / "psi_admissibility.json", check_report_to_json(adm));
    std::cout << "Psi is not admissible; report in " << (dir / "psi_admissibility.json").string() << "\n";
    return kExitFailure;
  }
  const BellmanProfile B(psi);
  const BellmanProfile m = build_m(normalized(psi));
  std::ostringstream os;
  os << "s,psi,phi,B,Bprime,m\n";
  // Log grid from 1e-12 to 1, endpoint included.
  constexpr int kRows = 1000;
  for (int k = 0; k < kRows; ++k) {
    const double s = k == kRows - 1 ? 1.0 : std::pow(10.0, -12.0 + 12.0 * k / (kRows - 1));
    os << format_double(s) << ',' << format_double(psi(s)) << ',' << format_double(psi.phi(s)) << ','
       << format_double(B.value(s)) << ',' << format_double(B.derivative(s)) << ',' << format_double(m.value(s))
       << '\n';
  }
  write_text(dir / "psi_table.csv", os.str());
  std::cout << "wrote " << kRows << " rows to " << (dir / "psi_table.csv").string() << "\n";
  return kExitOk;
}

}  // namespace cbm
