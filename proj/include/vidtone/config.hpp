#pragma once

// Flat key=value configuration mirroring Params. '#' starts a comment.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vidtone/params.hpp"

namespace vidtone::config {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline double number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw Error(ErrorKind::parse, "value for '" + key + "' is not a number: '" + value + "'");
  return v;
}

}  // namespace detail

// Keys are case-insensitive: lambda gamma TH rho alpha k1 k2 k3_low k3_high
// LB entropy_base ecb_mode target_mean target_sigma.
inline void apply_setting(Params& p, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = detail::lower(detail::trim(raw_key));
  const std::string value = detail::trim(raw_value);
  auto num = [&] { return detail::number(key, value); };
  if (key == "lambda") p.lambda = num();
  else if (key == "gamma") p.gamma = num();
  else if (key == "th") p.th = num();
  else if (key == "rho") p.rho = num();
  else if (key == "alpha") p.alpha = num();
  else if (key == "k1") p.k1 = num();
  else if (key == "k2") p.k2 = num();
  else if (key == "k3_low") p.k3_low = num();
  else if (key == "k3_high") p.k3_high = num();
  else if (key == "lb") p.lb = num();
  else if (key == "entropy_base") p.entropy_base = num();
  else if (key == "target_mean") p.target_mean = num();
  else if (key == "target_sigma") p.target_sigma = num();
  else if (key == "ecb_mode") {
    const std::string v = detail::lower(value);
    if (v == "curve") p.ecb_mode = EcbMode::curve;
    else if (v == "histogram") p.ecb_mode = EcbMode::histogram;
    else throw Error(ErrorKind::parse, "ecb_mode must be 'curve' or 'histogram', got '" + value + "'");
  } else {
    throw Error(ErrorKind::parse, "unknown config key '" + raw_key + "'");
  }
}

// "key=value" as given to --set.
inline void apply_assignment(Params& p, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorKind::parse, "expected key=value, got '" + assignment + "'");
  apply_setting(p, assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline Params parse_config(const std::string& text, Params base = {},
                           const std::string& source = "config") {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    try {
      apply_assignment(base, detail::trim(line));
    } catch (const Error& e) {
      throw Error(e.kind(), source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

inline Params load_config(const std::filesystem::path& path, Params base = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base, path.string());
}

inline std::string to_text(const Params& p) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda=" << p.lambda << "\ngamma=" << p.gamma << "\nTH=" << p.th << "\nrho=" << p.rho
     << "\nalpha=" << p.alpha << "\nk1=" << p.k1 << "\nk2=" << p.k2 << "\nk3_low=" << p.k3_low
     << "\nk3_high=" << p.k3_high << "\nLB=" << p.lb << "\nentropy_base=" << p.entropy_base
     << "\necb_mode=" << to_string(p.ecb_mode) << "\ntarget_mean=" << p.target_mean
     << "\ntarget_sigma=" << p.target_sigma << "\n";
  return os.str();
}

}  // namespace vidtone::config
