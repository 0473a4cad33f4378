#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linform/model.hpp"

namespace linform {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  int line = 1;
  int column = 1;
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::optional<Model> model;  // set iff no error diagnostics
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
};

/// Parses the .nlm text model format. Never throws: malformed input of any
/// kind comes back as diagnostics. The returned model is normalized.
ParseResult parse_model(std::string_view text);

/// Renders a model back to .nlm text (parse_model round-trips it).
std::string to_nlm(const Model& m);

std::string format_diagnostics(const std::vector<ParseDiagnostic>& diags);

}  // namespace linform
