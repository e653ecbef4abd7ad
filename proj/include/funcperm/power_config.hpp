#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "funcperm/error.hpp"
#include "funcperm/power_study.hpp"

namespace funcperm {

// Study configuration, INI style:
//
//   [study]              m, n, replications, alpha, seed, threads
//   [reference]          x0, r, sigma, t_max, grid_points
//   [test NAME]          method, k, components, B     (one per column, in order)
//   [alternative NAME]   x0, r, sigma                 (one per row, in order;
//                                                      unset keys follow [reference])
namespace detail {

inline std::string trim_copy(std::string_view s) { return std::string(trim(s)); }

template <typename T>
T parse_config_number(const std::string& text, const std::string& key) {
  const auto s = trim_copy(text);
  T value{};
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (s.empty() || ec != std::errc{} || ptr != end)
    throw ConfigError("invalid value '" + s + "' for key '" + key + "'", key);
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(value)) throw ConfigError("non-finite value for key '" + key + "'", key);
  return value;
}

inline void read_gbm_keys(const boost::property_tree::ptree& section, const std::string& prefix, GbmParams& p,
                          bool allow_grid) {
  for (const auto& [key, node] : section) {
    const std::string full = prefix + "." + key;
    const auto& v = node.data();
    if (key == "x0") p.x0 = parse_config_number<double>(v, full);
    else if (key == "r") p.r = parse_config_number<double>(v, full);
    else if (key == "sigma") p.sigma = parse_config_number<double>(v, full);
    else if (allow_grid && key == "t_max") p.t_max = parse_config_number<double>(v, full);
    else if (allow_grid && key == "grid_points") p.grid_points = parse_config_number<std::size_t>(v, full);
    else throw ConfigError("unknown key '" + full + "'", full);
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " in [" + prefix + "]", prefix + "." + e.key());
  }
}

/// Section names in file order. The INI reader drops sections without keys,
/// but an empty [alternative NAME] is meaningful (it repeats the reference).
inline std::vector<std::string> section_names(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') out.push_back(std::string(trim(t.substr(1, t.size() - 2))));
  }
  return out;
}

}  // namespace detail

inline PowerStudyConfig parse_power_config(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  boost::property_tree::ptree tree;
  try {
    std::istringstream body(text);
    boost::property_tree::read_ini(body, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("malformed config, line " + std::to_string(e.line()) + ": " + e.message(),
                      "line " + std::to_string(e.line()));
  }

  PowerStudyConfig cfg;
  std::set<std::string> names;
  // [reference] first, alternatives inherit from it regardless of file order.
  if (auto ref = tree.get_child_optional("reference")) detail::read_gbm_keys(*ref, "reference", cfg.reference, true);

  for (const auto& [key, node] : tree)
    if (node.empty() && !node.data().empty()) throw ConfigError("key '" + key + "' outside of a section", key);

  const boost::property_tree::ptree no_keys;
  for (const auto& section : detail::section_names(text)) {
    const auto found = tree.find(section);
    const auto& body = found == tree.not_found() ? no_keys : found->second;
    if (section == "reference") continue;
    if (section == "study") {
      for (const auto& [key, node] : body) {
        const std::string full = "study." + key;
        const auto& v = node.data();
        if (key == "m") cfg.m = detail::parse_config_number<std::size_t>(v, full);
        else if (key == "n") cfg.n = detail::parse_config_number<std::size_t>(v, full);
        else if (key == "replications") cfg.replications = detail::parse_config_number<std::size_t>(v, full);
        else if (key == "alpha") cfg.alpha = detail::parse_config_number<double>(v, full);
        else if (key == "seed") cfg.seed = detail::parse_config_number<std::uint64_t>(v, full);
        else if (key == "threads") cfg.threads = detail::parse_config_number<unsigned>(v, full);
        else throw ConfigError("unknown key '" + full + "'", full);
      }
      continue;
    }
    const auto space = section.find(' ');
    const std::string kind = section.substr(0, space);
    const std::string name = space == std::string::npos ? "" : detail::trim_copy(section.substr(space + 1));
    if ((kind == "test" || kind == "alternative") && name.empty())
      throw ConfigError("section [" + section + "] needs a name", section);
    if (kind == "test") {
      if (!names.insert("test " + name).second) throw ConfigError("duplicate test '" + name + "'", section);
      TestSpec spec;
      spec.name = name;
      bool has_method = false;
      for (const auto& [key, node] : body) {
        const std::string full = section + "." + key;
        const auto& v = node.data();
        if (key == "method") {
          try {
            spec.method = parse_method(detail::trim_copy(v));
          } catch (const ConfigError&) {
            throw ConfigError("unknown method '" + v + "' for key '" + full + "'", full);
          }
          has_method = true;
        } else if (key == "k") spec.k = detail::parse_config_number<std::size_t>(v, full);
        else if (key == "components") spec.components = detail::parse_config_number<std::size_t>(v, full);
        else if (key == "B") spec.B = detail::parse_config_number<std::size_t>(v, full);
        else throw ConfigError("unknown key '" + full + "'", full);
      }
      if (!has_method) throw ConfigError("missing key '" + section + ".method'", section + ".method");
      cfg.roster.push_back(spec);
    } else if (kind == "alternative") {
      if (!names.insert("alternative " + name).second)
        throw ConfigError("duplicate alternative '" + name + "'", section);
      Scenario s{name, cfg.reference};
      detail::read_gbm_keys(body, section, s.params, false);
      cfg.alternatives.push_back(s);
    } else {
      throw ConfigError("unknown section [" + section + "]", section);
    }
  }
  cfg.validate();
  return cfg;
}

inline PowerStudyConfig load_power_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'", path);
  return parse_power_config(in);
}

}  // namespace funcperm
