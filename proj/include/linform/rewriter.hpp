#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linform/affinity.hpp"
#include "linform/detector.hpp"
#include "linform/model.hpp"

namespace linform {

struct TraceIteration {
  int t = 0;
  PatternKind kind = PatternKind::Bilinear;
  int instances_replaced = 0;
  std::vector<VarDecl> aux_vars;
  std::vector<std::string> aux_constraints;
  std::vector<double> big_m_values;
};

struct PostSolve {
  MonoFn fn = MonoFn::Exp;
  bool increasing = true;
};

/// Recovery map for the fractional transform: x = scaled / tau.
struct FractionalRecovery {
  std::string tau;
  std::vector<std::pair<std::string, std::string>> original_to_scaled;
};

struct RewriteTrace {
  std::vector<TraceIteration> iterations;
  std::optional<PostSolve> post_solve;
  std::optional<FractionalRecovery> fractional;
};

struct BigMDerivation {
  std::string constraint;
  double m_value = 0.0;
  Interval source_interval;
};

/// Outcome of one reformulation pass.
struct RewriteStep {
  Model model;
  int instances_replaced = 0;
  std::vector<VarDecl> aux_vars;
  std::vector<std::string> aux_constraints;
  std::vector<double> big_m_values;
  std::vector<BigMDerivation> big_m_derivations;
  std::optional<PostSolve> post_solve;
  std::optional<FractionalRecovery> fractional;
};

RewriteStep rewrite_bilinear(const Model& m, const std::vector<PatternInstance>& instances);
RewriteStep rewrite_minmax(const Model& m, const std::vector<PatternInstance>& instances);
RewriteStep rewrite_abs(const Model& m, const std::vector<PatternInstance>& instances);
RewriteStep rewrite_fractional(const Model& m, const std::vector<PatternInstance>& instances);
RewriteStep rewrite_monotone(const Model& m, const std::vector<PatternInstance>& instances);

enum class RewriteOrder { FixedPriority, SeededRandom };

struct FixpointResult {
  Model model;
  RewriteTrace trace;
};

/// Detect-choose-rewrite loop. Fixed priority runs Monotone, Bilinear, Abs,
/// Min, Max, LinearFractional; seeded-random picks uniformly but defers the
/// fractional transform until it is the only kind left (it needs an otherwise
/// linear model). Terminates with a model emit_lp accepts.
FixpointResult run_fixpoint(const Model& m, RewriteOrder order = RewriteOrder::FixedPriority,
                            unsigned seed = 0);

}  // namespace linform
