#pragma once

// Plain-text `key = value` configuration for simulation runs. Blank lines and
// lines starting with '#' are ignored; unknown keys are an error.

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "avt/error.hpp"
#include "avt/sim.hpp"

namespace avt {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_real(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && ptr == v.data() + v.size(), ErrorCode::ConfigError,
          "key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  return out;
}

inline std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc() && ptr == v.data() + v.size()) return out;
  // Accept integral reals such as 1e5.
  const double r = parse_real(key, v);
  require(r >= 0.0 && r == std::floor(r) && r < 1.8e19, ErrorCode::ConfigError,
          "key '" + std::string(key) + "': expected a non-negative integer");
  return static_cast<std::uint64_t>(r);
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorCode::ConfigError, "key '" + std::string(key) + "': expected true or false");
}

}  // namespace detail

/// Parses and validates a configuration. When px0 is not given it defaults to
/// the covariate density.
inline SimConfig parse_sim_config(std::istream& in) {
  SimConfig c;
  bool have_px0 = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    require(eq != std::string_view::npos, ErrorCode::ConfigError,
            "line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(body.substr(0, eq));
    const auto val = detail::trim(body.substr(eq + 1));
    require(!val.empty(), ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": empty value");

    if (key == "beta") {
      c.problem.beta = detail::parse_real(key, val);
    } else if (key == "d") {
      c.problem.d = static_cast<int>(detail::parse_uint(key, val));
    } else if (key == "L") {
      c.problem.L = detail::parse_real(key, val);
    } else if (key == "sigma2") {
      c.problem.sigma2 = detail::parse_real(key, val);
    } else if (key == "px0") {
      c.problem.px0 = detail::parse_real(key, val);
      have_px0 = true;
    } else if (key == "n") {
      c.problem.n = static_cast<double>(detail::parse_uint(key, val));
    } else if (key == "covariate") {
      c.covariate = parse_covariate(val);
    } else if (key == "reps") {
      c.reps = detail::parse_uint(key, val);
    } else if (key == "seed") {
      c.seed = detail::parse_uint(key, val);
    } else if (key == "t_nodes") {
      c.t_nodes = detail::parse_uint(key, val);
    } else if (key == "x0") {
      c.x0.clear();
      std::string_view rest = val;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        c.x0.push_back(detail::parse_real(key, detail::trim(rest.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(detail::parse_uint(key, val));
    } else if (key == "ridge_r") {
      c.ridge_r = detail::parse_real(key, val);
    } else if (key == "fisher_target") {
      c.fisher_target = detail::parse_real(key, val);
    } else if (key == "estimator") {
      c.estimator = std::string(val);
    } else if (key == "estimator_bandwidth") {
      c.estimator_bandwidth = detail::parse_real(key, val);
    } else if (key == "prior") {
      c.prior = std::string(val);
    } else if (key == "records") {
      c.records = detail::parse_bool(key, val);
    } else {
      fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_px0) c.problem.px0 = covariate_density(c.covariate, c.problem.d);
  try {
    c.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

inline SimConfig parse_sim_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sim_config(in);
}

/// Reads a configuration file; I/O failures throw std::ios_base::failure.
inline SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  return parse_sim_config(in);
}

}  // namespace avt
