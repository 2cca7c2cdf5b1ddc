#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "entropygate/core.hpp"
#include "entropygate/eos.hpp"

namespace entropygate {

// Text format:
//   rho-axis: r1 r2 ... rN
//   e-axis: e1 e2 ... eM
//   N rows of M values, row i at density r_i
// Lines whose first non-blank character is '#' are comments.

namespace detail {

inline std::vector<double> parse_numbers(std::string_view text, std::size_t line) {
  std::vector<double> out;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw TableParseError(line, "not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw TableParseError(line, "not a number: '" + tok + "'");
    out.push_back(x);
  }
  return out;
}

inline bool is_blank_or_comment(const std::string& s) {
  const auto p = s.find_first_not_of(" \t\r");
  return p == std::string::npos || s[p] == '#';
}

inline std::vector<double> parse_axis_line(const std::string& text, std::string_view label,
                                           std::size_t line) {
  const auto p = text.find_first_not_of(" \t");
  const std::string_view rest = std::string_view(text).substr(p == std::string::npos ? text.size() : p);
  if (rest.substr(0, label.size()) != label)
    throw TableParseError(line, "expected '" + std::string(label) + "'");
  auto values = parse_numbers(rest.substr(label.size()), line);
  if (values.size() < 2)
    throw TableParseError(line, std::string(label) + " needs at least two values");
  for (std::size_t k = 1; k < values.size(); ++k)
    if (!(values[k] > values[k - 1]))
      throw TableParseError(line, std::string(label.substr(0, label.size() - 1)) +
                                      " is not strictly increasing (entry " + std::to_string(k + 1) +
                                      ")");
  return values;
}

}  // namespace detail

inline EntropyTable parse_table(std::istream& in) {
  std::vector<double> rho_axis, e_axis, values;
  std::string text;
  std::size_t line = 0, rows = 0;
  int stage = 0;
  while (std::getline(in, text)) {
    ++line;
    if (detail::is_blank_or_comment(text)) continue;
    if (stage == 0) {
      rho_axis = detail::parse_axis_line(text, "rho-axis:", line);
      stage = 1;
    } else if (stage == 1) {
      e_axis = detail::parse_axis_line(text, "e-axis:", line);
      stage = 2;
    } else {
      auto row = detail::parse_numbers(text, line);
      if (row.size() != e_axis.size())
        throw TableParseError(line, "row " + std::to_string(rows + 1) + " has " +
                                        std::to_string(row.size()) + " values, expected " +
                                        std::to_string(e_axis.size()));
      ++rows;
      if (rows > rho_axis.size())
        throw TableParseError(line, "too many rows: expected " + std::to_string(rho_axis.size()) +
                                        ", found at least " + std::to_string(rows));
      values.insert(values.end(), row.begin(), row.end());
    }
  }
  if (stage < 2) throw TableParseError(line, "missing axis header");
  if (rows != rho_axis.size())
    throw TableParseError(line, "wrong row count: expected " + std::to_string(rho_axis.size()) +
                                    ", found " + std::to_string(rows));
  return EntropyTable(std::move(rho_axis), std::move(e_axis), std::move(values));
}

inline void write_table(std::ostream& out, const EntropyTable& table) {
  const auto old = out.precision(17);
  out << "rho-axis:";
  for (double r : table.rho_axis()) out << ' ' << r;
  out << "\ne-axis:";
  for (double e : table.e_axis()) out << ' ' << e;
  out << '\n';
  for (std::size_t i = 0; i < table.rho_axis().size(); ++i) {
    for (std::size_t j = 0; j < table.e_axis().size(); ++j) out << (j ? " " : "") << table.value(i, j);
    out << '\n';
  }
  out.precision(old);
}

inline EosModel load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file '" + path + "'");
  return EosModel::tabulated(parse_table(in));
}

}  // namespace entropygate
