#pragma once

#include <string>
#include <vector>

#include "linform/metrics.hpp"
#include "linform/rewriter.hpp"

namespace linform {

struct BenchOptions {
  RewriteOrder order = RewriteOrder::FixedPriority;
  unsigned seed = 0;
  double tol = 1e-4;
};

/// One corpus entry: <name>.nlm next to <name>.ann.json.
struct CorpusEntry {
  std::string name;
  std::string nlm_path;
  InstanceAnnotation annotation;
};

std::vector<CorpusEntry> load_corpus(const std::string& dir);
InstanceAnnotation load_annotation(const std::string& path);

/// detect -> fixpoint -> emit -> solve -> verify for one model.
InstanceResult run_instance(const std::string& name, const Model& model,
                            const BenchOptions& opts);

BenchReport run_bench(const std::string& corpus_dir, const BenchOptions& opts,
                      double* total_runtime_ms = nullptr);

}  // namespace linform
