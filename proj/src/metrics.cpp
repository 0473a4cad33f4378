#include "linform/metrics.hpp"

#include <algorithm>
#include <map>

#include "linform/errors.hpp"

namespace linform {

BenchReport compute_metrics(
    const std::vector<InstanceResult>& results,
    const std::vector<std::pair<std::string, InstanceAnnotation>>& annotations) {
  if (results.empty()) throw InvalidArgument("compute_metrics: no instances");
  std::map<std::string, const InstanceAnnotation*> by_name;
  for (const auto& [name, ann] : annotations) by_name[name] = &ann;

  BenchReport report;
  int dsr = 0, rsr = 0, csr = 0, osr = 0;
  for (const auto& r : results) {
    auto it = by_name.find(r.name);
    if (it == by_name.end())
      throw InvalidArgument("compute_metrics: no annotation for instance " + r.name);
    std::vector<PatternKind> expected = it->second->expected_kinds;
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    std::vector<PatternKind> detected = r.detected_kinds;
    std::sort(detected.begin(), detected.end());
    detected.erase(std::unique(detected.begin(), detected.end()), detected.end());

    InstanceOutcome out;
    out.name = r.name;
    out.detect_ok = detected == expected;
    out.reformulate_ok = r.reformulate_ok;
    out.emit_ok = r.emit_roundtrip_ok;
    out.osr_pass = r.osr_pass;
    out.runtime_ms = r.runtime_ms;
    dsr += out.detect_ok;
    rsr += out.reformulate_ok;
    csr += out.emit_ok;
    osr += out.osr_pass;
    report.instances.push_back(std::move(out));
  }
  std::sort(report.instances.begin(), report.instances.end(),
            [](const InstanceOutcome& a, const InstanceOutcome& b) { return a.name < b.name; });
  const double n = static_cast<double>(results.size());
  report.aggregates.dsr = 100.0 * dsr / n;
  report.aggregates.rsr = 100.0 * rsr / n;
  report.aggregates.csr = 100.0 * csr / n;
  report.aggregates.osr = 100.0 * osr / n;
  return report;
}

}  // namespace linform
