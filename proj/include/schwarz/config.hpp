#pragma once

// Flat key=value render recipes. Blank lines and lines starting with '#'
// are ignored; unknown keys are rejected so typos do not pass silently.

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "schwarz/core.hpp"

namespace schwarz::config {

struct RenderConfig {
  std::optional<double> center_re, center_im, width;
  std::optional<std::string> px;  // "N" or "WxH"
  std::optional<int> max_iter;
  std::optional<std::string> palette;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw Error(ErrorCode::InvalidArgument, "config: bad number for '" + key + "'");
  return x;
}

}  // namespace detail

inline RenderConfig parse(std::istream& in) {
  RenderConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "center_re") {
      cfg.center_re = detail::to_double(key, value);
    } else if (key == "center_im") {
      cfg.center_im = detail::to_double(key, value);
    } else if (key == "width") {
      cfg.width = detail::to_double(key, value);
    } else if (key == "px") {
      cfg.px = value;
    } else if (key == "max_iter") {
      const double v = detail::to_double(key, value);
      if (v != static_cast<int>(v)) throw Error(ErrorCode::InvalidArgument, "config: max_iter must be an integer");
      cfg.max_iter = static_cast<int>(v);
    } else if (key == "palette") {
      cfg.palette = value;
    } else {
      throw Error(ErrorCode::InvalidArgument, "config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline RenderConfig parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

}  // namespace schwarz::config
