#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "linform/bench.hpp"
#include "linform/errors.hpp"
#include "linform/generator.hpp"
#include "linform/lp_format.hpp"
#include "linform/parser.hpp"
#include "linform/report.hpp"
#include "linform/solver.hpp"
#include "linform/verify.hpp"

namespace {

using namespace linform;

constexpr int kExitError = 1;
constexpr int kExitOsrFail = 2;
constexpr int kExitUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << content;
}

Model load_model(const std::string& path) {
  ParseResult parsed = parse_model(read_file(path));
  for (const auto& d : parsed.diagnostics)
    if (d.severity == Severity::Warning)
      std::cerr << path << ":" << d.line << ":" << d.column << ": warning: " << d.message
                << "\n";
  if (!parsed.ok()) {
    std::ostringstream msg;
    msg << "parse failed:\n";
    for (const auto& d : parsed.diagnostics)
      if (d.severity == Severity::Error)
        msg << path << ":" << d.line << ":" << d.column << ": error: " << d.message << "\n";
    throw InvalidArgument(msg.str());
  }
  return *parsed.model;
}

RewriteOrder order_from(const std::string& name) {
  if (name == "fixed") return RewriteOrder::FixedPriority;
  if (name == "random") return RewriteOrder::SeededRandom;
  throw InvalidArgument("unknown order: " + name);
}

void print_solution(const Solution& sol) {
  std::printf("status: %s\n", status_name(sol.status));
  if (sol.status != SolveStatus::Optimal) return;
  std::printf("objective: %.10g\n", sol.objective);
  for (const auto& [name, value] : sol.assignment)
    std::printf("  %s = %.10g\n", name.c_str(), value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linform: exact nonlinear-to-linear optimization model compiler"};
  app.require_subcommand(1);

  std::string input, output, trace_path, report_path, order = "fixed", mix_spec;
  unsigned seed = 0;
  double tol = 1e-4;
  int count = 1;
  std::string out_dir = ".";

  auto* detect = app.add_subcommand("detect", "report nonlinear pattern instances as JSON");
  detect->add_option("model", input, "input .nlm model")->required();

  auto* linearize = app.add_subcommand("linearize", "rewrite a model to LP/MILP form");
  linearize->add_option("model", input, "input .nlm model")->required();
  linearize->add_option("-o,--output", output, "output .lp path");
  linearize->add_option("--trace", trace_path, "trace JSON path");
  linearize->add_option("--order", order, "rewrite order: fixed or random");
  linearize->add_option("--seed", seed, "seed for --order random");

  auto* solve = app.add_subcommand("solve", "linearize if needed, then solve");
  solve->add_option("model", input, "input .nlm model")->required();
  solve->add_option("--order", order, "rewrite order: fixed or random");
  solve->add_option("--seed", seed, "seed for --order random");

  auto* verify = app.add_subcommand("verify", "check the reformulation against the oracle");
  verify->add_option("model", input, "input .nlm model")->required();
  verify->add_option("--tol", tol, "objective match tolerance");
  verify->add_option("--order", order, "rewrite order: fixed or random");
  verify->add_option("--seed", seed, "seed for --order random");
  verify->add_option("--report", report_path, "write the full JSON report here");

  auto* bench = app.add_subcommand("bench", "run a corpus and compute DSR/RSR/CSR/OSR");
  bench->add_option("corpus", input, "corpus directory")->required();
  bench->add_option("--report", report_path, "write the bench report JSON here");
  bench->add_option("--tol", tol, "objective match tolerance");
  bench->add_option("--order", order, "rewrite order: fixed or random");
  bench->add_option("--seed", seed, "seed for --order random");

  auto* gen = app.add_subcommand("gen", "generate random models with known patterns");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--count", count, "number of models");
  gen->add_option("--mix", mix_spec, "pattern mix, e.g. abs=1,min=2");
  gen->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (detect->parsed()) {
      std::fputs(detection_json(load_model(input)).c_str(), stdout);
      return 0;
    }
    if (linearize->parsed()) {
      const Model model = load_model(input);
      FixpointResult fx = run_fixpoint(model, order_from(order), seed);
      const std::string lp = emit_lp(fx.model);
      if (output.empty())
        std::fputs(lp.c_str(), stdout);
      else
        write_file(output, lp);
      if (!trace_path.empty())
        write_file(trace_path, emit_json_report(fx.trace, std::nullopt, input));
      return 0;
    }
    if (solve->parsed()) {
      const Model model = load_model(input);
      FixpointResult fx = run_fixpoint(model, order_from(order), seed);
      Solution sol = solve_milp(fx.model);
      if (sol.status == SolveStatus::Optimal) {
        sol.objective = recover_objective(fx.trace, sol.objective);
        sol.assignment = project_onto_original(model, fx.trace, sol);
      }
      print_solution(sol);
      return sol.status == SolveStatus::Optimal ? 0 : kExitError;
    }
    if (verify->parsed()) {
      const Model model = load_model(input);
      FixpointResult fx = run_fixpoint(model, order_from(order), seed);
      const VerifyReport report = verify_equivalence(model, fx.model, fx.trace, tol);
      std::fputs(verify_report_text(report).c_str(), stdout);
      if (!report_path.empty())
        write_file(report_path, emit_json_report(fx.trace, report, input));
      return report.osr_pass ? 0 : kExitOsrFail;
    }
    if (bench->parsed()) {
      BenchOptions opts;
      opts.order = order_from(order);
      opts.seed = seed;
      opts.tol = tol;
      double total_ms = 0.0;
      const BenchReport report = run_bench(input, opts, &total_ms);
      std::printf("instances: %zu  runtime: %.1f ms\n", report.instances.size(), total_ms);
      std::printf("DSR %.1f%%  RSR %.1f%%  CSR %.1f%%  OSR %.1f%%\n", report.aggregates.dsr,
                  report.aggregates.rsr, report.aggregates.csr, report.aggregates.osr);
      if (!report_path.empty()) write_file(report_path, bench_report_json(report));
      const bool all_pass = report.aggregates.dsr == 100.0 && report.aggregates.rsr == 100.0 &&
                            report.aggregates.csr == 100.0 && report.aggregates.osr == 100.0;
      return all_pass ? 0 : kExitOsrFail;
    }
    if (gen->parsed()) {
      const GenMix mix = mix_spec.empty() ? GenMix{} : parse_mix(mix_spec);
      const auto models = gen_models(seed, count, mix);
      for (size_t i = 0; i < models.size(); ++i) {
        const std::string base = out_dir + "/gen_" + std::to_string(seed) + "_" +
                                 std::to_string(i);
        write_file(base + ".nlm", to_nlm(models[i].model));
        std::string ann = "{\"expected_kinds\": [";
        for (size_t k = 0; k < models[i].annotation.expected_kinds.size(); ++k) {
          if (k) ann += ", ";
          ann += std::string("\"") + kind_name(models[i].annotation.expected_kinds[k]) + "\"";
        }
        ann += "], \"source\": \"" + models[i].annotation.source + "\"}\n";
        write_file(base + ".ann.json", ann);
      }
      std::printf("wrote %zu models to %s\n", models.size(), out_dir.c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
