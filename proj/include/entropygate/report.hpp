#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entropygate {

inline constexpr const char* kToolVersion = "0.1.0";

/// Flat `key = value` report with dotted keys, emitted in insertion order.
/// Numbers are written with 17 significant digits so they parse back to the
/// same double. Lines without " = " (free-form notes) are ignored on parse.
class ReportDocument {
 public:
  static std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

  void set(const std::string& key, std::string value) {
    if (key.empty() || key.find(" = ") != std::string::npos || key.find('\n') != std::string::npos)
      throw std::invalid_argument("bad report key '" + key + "'");
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = std::move(value);
        return;
      }
    entries_.emplace_back(key, std::move(value));
  }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value) { set(key, format_number(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }

  /// Free-form line appended after the key-value body.
  void note(std::string line) { notes_.push_back(std::move(line)); }

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    return std::nullopt;
  }

  [[nodiscard]] double number(const std::string& key) const {
    auto v = get(key);
    if (!v) throw std::out_of_range("report has no key '" + key + "'");
    char* end = nullptr;
    const double x = std::strtod(v->c_str(), &end);
    if (end == v->c_str() || *end != '\0') throw std::invalid_argument("'" + key + "' is not numeric: " + *v);
    return x;
  }

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }
  [[nodiscard]] const std::vector<std::string>& notes() const noexcept { return notes_; }

  void emit(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
    for (const auto& n : notes_) out << n << '\n';
  }

  static ReportDocument parse(std::istream& in) {
    ReportDocument doc;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto pos = line.find(" = ");
      if (line.empty() || line[0] == '#' || pos == std::string::npos) {
        if (!line.empty() && line[0] != '#') doc.notes_.push_back(line);
        continue;
      }
      doc.set(line.substr(0, pos), line.substr(pos + 3));
    }
    return doc;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> notes_;
};

}  // namespace entropygate
