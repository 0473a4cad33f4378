#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linform/locus.hpp"
#include "linform/model.hpp"

namespace linform {

enum class PatternKind { Bilinear, Min, Max, Abs, LinearFractional, Monotone };

/// How an occurrence sits relative to optimization pressure:
///   Benign        - the convex-direction encoding is exact as-is,
///   ConstraintSplit - plain inequality splitting is exact,
///   Adverse       - needs selector binaries to pin the auxiliary.
enum class Polarity { Benign, Adverse, ConstraintSplit };

struct PatternInstance {
  PatternKind kind = PatternKind::Bilinear;
  ExprLocus path;
  std::vector<Expr> args;
  Polarity polarity = Polarity::Benign;
};

const char* kind_name(PatternKind k);  // "bilinear", "min", ..., "linear_fractional"
PatternKind kind_from_name(const std::string& name);
const char* polarity_name(Polarity p);

/// Scans a normalized model and reports every occurrence of the six pattern
/// kinds exactly once. Throws UnsupportedNonlinearity for structures outside
/// the catalog: continuous-by-continuous products, products of three or more
/// variable factors, nested patterns, monotone transforms off the top level,
/// denominators whose positivity the bounds cannot prove.
std::vector<PatternInstance> detect_patterns(const Model& m);

Polarity polarity_of(const PatternInstance& inst, const Model& m);

/// Kinds with at least one active instance.
std::set<PatternKind> applicable_kinds(const Model& m);

/// Detection report for the CLI: [{"kind", "path", "polarity"}, ...].
std::string detection_json(const Model& m);

}  // namespace linform
