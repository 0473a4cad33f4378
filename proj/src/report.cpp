#include "linform/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace linform {

using nlohmann::ordered_json;

namespace {

ordered_json verify_json(const VerifyReport& v) {
  ordered_json out;
  out["oracle_obj"] = v.oracle_obj;
  out["reformulated_obj"] = v.reformulated_obj;
  out["recovered_obj"] = v.recovered_obj;
  out["abs_gap"] = v.abs_gap;
  out["projected_feasible"] = v.projected_feasible;
  out["osr_pass"] = v.osr_pass;
  return out;
}

}  // namespace

std::string emit_json_report(const RewriteTrace& trace,
                             const std::optional<VerifyReport>& verify,
                             const std::string& input_path) {
  ordered_json out;
  out["input"] = input_path;
  ordered_json iterations = ordered_json::array();
  for (const auto& it : trace.iterations) {
    ordered_json entry;
    entry["t"] = it.t;
    entry["kind"] = kind_name(it.kind);
    entry["instances"] = it.instances_replaced;
    ordered_json aux_vars = ordered_json::array();
    for (const auto& v : it.aux_vars) aux_vars.push_back(v.name);
    entry["aux_vars"] = std::move(aux_vars);
    entry["aux_constraints"] = it.aux_constraints;
    entry["big_m"] = it.big_m_values;
    iterations.push_back(std::move(entry));
  }
  out["iterations"] = std::move(iterations);
  ordered_json post;
  post["fn"] = trace.post_solve ? ordered_json(mono_fn_name(trace.post_solve->fn))
                                : ordered_json(nullptr);
  post["direction"] = trace.post_solve
                          ? ordered_json(trace.post_solve->increasing ? "increasing"
                                                                      : "decreasing")
                          : ordered_json(nullptr);
  out["post_solve"] = std::move(post);
  out["verify"] = verify ? verify_json(*verify) : ordered_json(nullptr);
  return out.dump(2) + "\n";
}

std::string bench_report_json(const BenchReport& report) {
  ordered_json out;
  ordered_json instances = ordered_json::array();
  for (const auto& i : report.instances) {
    ordered_json entry;
    entry["name"] = i.name;
    entry["detect_ok"] = i.detect_ok;
    entry["reformulate_ok"] = i.reformulate_ok;
    entry["emit_ok"] = i.emit_ok;
    entry["osr_pass"] = i.osr_pass;
    instances.push_back(std::move(entry));
  }
  out["instances"] = std::move(instances);
  ordered_json agg;
  agg["dsr"] = report.aggregates.dsr;
  agg["rsr"] = report.aggregates.rsr;
  agg["csr"] = report.aggregates.csr;
  agg["osr"] = report.aggregates.osr;
  out["aggregates"] = std::move(agg);
  return out.dump(2) + "\n";
}

std::string verify_report_text(const VerifyReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "oracle_obj=%.10g reformulated_obj=%.10g recovered_obj=%.10g abs_gap=%.3g "
                "projected_feasible=%s osr_pass=%s\n",
                report.oracle_obj, report.reformulated_obj, report.recovered_obj,
                report.abs_gap, report.projected_feasible ? "true" : "false",
                report.osr_pass ? "true" : "false");
  return buf;
}

}  // namespace linform
