#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tickcheck {

// 1-based position of a token or construct in a source file.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;     // stable machine-readable tag, e.g. "DuplicateId"
    std::string message;
    SourceSpan span;
};

inline Diagnostic error_diag(std::string code, std::string message, SourceSpan span = {}) {
    return Diagnostic{Severity::Error, std::move(code), std::move(message), span};
}

inline bool has_error(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

// Internal failure carrying a diagnostic code; user-input problems are
// reported as Diagnostic lists, this is for contract violations and
// errors raised mid-expression (division by zero, unbound names).
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& message, SourceSpan span = {})
        : std::runtime_error(message), code_(std::move(code)), span_(span) {}

    const std::string& code() const { return code_; }
    const SourceSpan& span() const { return span_; }

  private:
    std::string code_;
    SourceSpan span_;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

}  // namespace tickcheck
