#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fisa {

enum class Severity { error, warning };

inline const char* to_string(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

struct SourcePosition {
  std::string file;
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePosition&, const SourcePosition&) = default;
};

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::optional<SourcePosition> position;
  std::optional<std::string> subject_id;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;

  bool is_error() const { return severity == Severity::error; }
};

using Diagnostics = std::vector<Diagnostic>;

inline Diagnostic make_error(std::string code, std::string message,
                             std::optional<std::string> subject = std::nullopt) {
  return {Severity::error, std::move(code), std::move(message), std::nullopt, std::move(subject)};
}

inline Diagnostic make_warning(std::string code, std::string message,
                               std::optional<std::string> subject = std::nullopt) {
  return {Severity::warning, std::move(code), std::move(message), std::nullopt, std::move(subject)};
}

inline bool has_errors(const Diagnostics& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

inline std::size_t count_code(const Diagnostics& diags, const std::string& code) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

// file:line:col: severity CODE [subject]: message
inline std::string format_diagnostic(const Diagnostic& d) {
  std::string out;
  if (d.position) {
    out += d.position->file.empty() ? "<input>" : d.position->file;
    out += ':' + std::to_string(d.position->line) + ':' + std::to_string(d.position->column) + ": ";
  }
  out += to_string(d.severity);
  out += ' ';
  out += d.code;
  if (d.subject_id) out += " [" + *d.subject_id + "]";
  out += ": ";
  out += d.message;
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << format_diagnostic(d);
}

/// Outcome of a parse: a value, or the diagnostics explaining why there is none.
/// Warnings may accompany a successful value.
template <typename T>
struct Parsed {
  std::optional<T> value;
  Diagnostics diagnostics;

  explicit operator bool() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

}  // namespace fisa
