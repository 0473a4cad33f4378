#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "linform/detector.hpp"
#include "linform/metrics.hpp"
#include "linform/model.hpp"

namespace linform {

/// Deterministic random helpers; identical sequences for identical seeds on
/// any platform (raw mt19937 draws, no distribution objects).
class Rng {
 public:
  explicit Rng(unsigned seed) : engine_(seed) {}
  int range(int lo, int hi);                          // inclusive
  double real(double lo, double hi);
  double coeff(double lo, double hi, double step);    // quantized, never 0 or +1
  bool chance(double p);
  std::mt19937& engine() { return engine_; }

 private:
  std::mt19937 engine_;
};

struct PlantedInstance {
  PatternKind kind = PatternKind::Abs;
  std::string path;  // rendered like the detector's locus strings
};

struct GeneratedModel {
  Model model;
  InstanceAnnotation annotation;
  std::vector<PlantedInstance> planted;
};

struct GenMix {
  std::map<PatternKind, int> kind_counts;  // instances per model; empty = one kind, round robin
};

GenMix parse_mix(const std::string& spec);  // "abs=1,min=2"

/// Deterministic per seed. Each generated model is feasible, bounded, and
/// within oracle scale; the annotation and planted list record ground truth.
std::vector<GeneratedModel> gen_models(unsigned seed, int count, const GenMix& mix = {});

// Targeted single-pattern generators used by the property and acceptance
// suites. All produce feasible, bounded, oracle-solvable models.
Model gen_pattern_free(Rng& rng);
Model gen_param_product_model(Rng& rng);  // parameter-by-variable products everywhere
Model gen_minmax_instance(PatternKind kind, Polarity polarity, Rng& rng);
Model gen_abs_objective(Rng& rng);
Model gen_abs_equality(Rng& rng);
Model gen_abs_adverse(Rng& rng);
Model gen_fractional_lp(Rng& rng);    // 3 vars, 4 constraints, denominator lo >= 0.01
Model gen_monotone_binary(Rng& rng);  // all-binary model with a monotone objective
Model gen_random_milp(Rng& rng, int max_binaries);
Model gen_random_lp3(Rng& rng);       // 3 bounded vars, a few rows

}  // namespace linform
