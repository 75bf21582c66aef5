#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bisup {

/// A single parser or validation finding, anchored to an input line.
struct Diagnostic {
    std::size_t line = 0;    // 1-based; 0 when the finding has no source location
    std::size_t column = 0;  // 1-based; 0 when unknown
    std::string category;    // e.g. "unknown-event", "missing-agent", "spec-not-sublanguage"
    std::string message;
};

inline std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    if (d.line > 0) {
        os << "line " << d.line;
        if (d.column > 0) os << ":" << d.column;
        os << ": ";
    }
    os << d.category << ": " << d.message;
    return os.str();
}

/// Raised when a problem fails validation (e.g. the specification is not a
/// sublanguage of the plant). Carries the full diagnostic list.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<Diagnostic> diags)
        : std::runtime_error(summarize(diags)), diagnostics_(std::move(diags)) {}

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  private:
    static std::string summarize(const std::vector<Diagnostic>& diags) {
        std::ostringstream os;
        os << "validation failed";
        for (const auto& d : diags) os << "\n  " << format_diagnostic(d);
        return os.str();
    }

    std::vector<Diagnostic> diagnostics_;
};

}  // namespace bisup
