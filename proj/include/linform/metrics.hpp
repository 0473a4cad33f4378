#pragma once

#include <string>
#include <vector>

#include "linform/detector.hpp"

namespace linform {

struct InstanceAnnotation {
  std::vector<PatternKind> expected_kinds;  // distinct kinds present in the instance
  std::string source;
};

/// Raw per-instance outcome gathered by the bench harness.
struct InstanceResult {
  std::string name;
  std::vector<PatternKind> detected_kinds;  // distinct, sorted
  bool reformulate_ok = false;              // fixpoint + emit accepted + solve Optimal
  bool emit_roundtrip_ok = false;           // emit -> re-parse matched
  bool osr_pass = false;
  double runtime_ms = 0.0;
};

struct InstanceOutcome {
  std::string name;
  bool detect_ok = false;
  bool reformulate_ok = false;
  bool emit_ok = false;
  bool osr_pass = false;
  double runtime_ms = 0.0;
};

struct BenchAggregates {
  double dsr = 0.0;
  double rsr = 0.0;
  double csr = 0.0;
  double osr = 0.0;
};

struct BenchReport {
  std::vector<InstanceOutcome> instances;  // sorted by name
  BenchAggregates aggregates;              // percentages
};

/// DSR: detected kind multiset equals the annotation. RSR: reformulation
/// produced a solvable linear model. CSR: emit/re-parse round trip. OSR:
/// verified optimum match. Throws InvalidArgument on empty or misaligned
/// inputs.
BenchReport compute_metrics(const std::vector<InstanceResult>& results,
                            const std::vector<std::pair<std::string, InstanceAnnotation>>& annotations);

}  // namespace linform
