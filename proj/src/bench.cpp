#include "linform/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "linform/errors.hpp"
#include "linform/lp_format.hpp"
#include "linform/parser.hpp"
#include "linform/solver.hpp"
#include "linform/verify.hpp"

namespace linform {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

InstanceAnnotation load_annotation(const std::string& path) {
  const auto doc = nlohmann::json::parse(read_file(path));
  InstanceAnnotation ann;
  for (const auto& k : doc.at("expected_kinds"))
    ann.expected_kinds.push_back(kind_from_name(k.get<std::string>()));
  ann.source = doc.value("source", "");
  return ann;
}

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  std::vector<CorpusEntry> entries;
  if (!fs::is_directory(dir)) throw InvalidArgument("not a directory: " + dir);
  for (const auto& item : fs::directory_iterator(dir)) {
    if (item.path().extension() != ".nlm") continue;
    CorpusEntry e;
    e.name = item.path().stem().string();
    e.nlm_path = item.path().string();
    const fs::path ann = item.path().parent_path() / (e.name + ".ann.json");
    if (fs::exists(ann)) e.annotation = load_annotation(ann.string());
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.name < b.name; });
  if (entries.empty()) throw InvalidArgument("no .nlm instances in " + dir);
  return entries;
}

InstanceResult run_instance(const std::string& name, const Model& model,
                            const BenchOptions& opts) {
  InstanceResult result;
  result.name = name;
  const auto start = std::chrono::steady_clock::now();

  try {
    std::set<PatternKind> kinds;
    for (const auto& inst : detect_patterns(model)) kinds.insert(inst.kind);
    result.detected_kinds.assign(kinds.begin(), kinds.end());
  } catch (const Error&) {
    result.detected_kinds.clear();
  }

  try {
    FixpointResult fx = run_fixpoint(model, opts.order, opts.seed);
    const std::string lp = emit_lp(fx.model);
    const Solution sol = solve_milp(fx.model);
    result.reformulate_ok = !lp.empty() && sol.status == SolveStatus::Optimal;
    result.emit_roundtrip_ok = lp_roundtrip_ok(fx.model);
    const VerifyReport verify = verify_equivalence(model, fx.model, fx.trace, opts.tol);
    result.osr_pass = verify.osr_pass;
  } catch (const Error&) {
    result.reformulate_ok = false;
    result.emit_roundtrip_ok = false;
    result.osr_pass = false;
  }

  const auto end = std::chrono::steady_clock::now();
  result.runtime_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return result;
}

BenchReport run_bench(const std::string& corpus_dir, const BenchOptions& opts,
                      double* total_runtime_ms) {
  const std::vector<CorpusEntry> corpus = load_corpus(corpus_dir);
  std::vector<InstanceResult> results;
  std::vector<std::pair<std::string, InstanceAnnotation>> annotations;
  double total = 0.0;
  for (const auto& entry : corpus) {
    ParseResult parsed = parse_model(read_file(entry.nlm_path));
    InstanceResult r;
    if (parsed.ok()) {
      r = run_instance(entry.name, *parsed.model, opts);
    } else {
      r.name = entry.name;
    }
    total += r.runtime_ms;
    results.push_back(std::move(r));
    annotations.emplace_back(entry.name, entry.annotation);
  }
  if (total_runtime_ms) *total_runtime_ms = total;
  return compute_metrics(results, annotations);
}

}  // namespace linform
