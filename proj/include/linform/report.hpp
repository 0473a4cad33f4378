#pragma once

#include <optional>
#include <string>

#include "linform/metrics.hpp"
#include "linform/rewriter.hpp"
#include "linform/verify.hpp"

namespace linform {

/// Stable-schema JSON; byte-identical for identical inputs. "verify" is null
/// when no verification ran (plain linearize).
std::string emit_json_report(const RewriteTrace& trace,
                             const std::optional<VerifyReport>& verify,
                             const std::string& input_path = "");

/// {"instances": [...], "aggregates": {"dsr", "rsr", "csr", "osr"}}; instances
/// sorted by name. Runtimes are reported on the console, not in the JSON, so
/// identical runs produce identical bytes.
std::string bench_report_json(const BenchReport& report);

std::string verify_report_text(const VerifyReport& report);

}  // namespace linform
