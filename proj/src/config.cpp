#include "qwalk/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qwalk/error.hpp"
#include "qwalk/io.hpp"

namespace qwalk {

CoinParameters ExperimentConfig::coin() const { return build_coin({a_re, a_im}, {b_re, b_im}); }

namespace {

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::InvalidArgument, "bad value for " + key + ": '" + value + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) bad_value(key, s);
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_value(key, s);
}

template <class T>
Field number(T ExperimentConfig::*m, const char* key) {
  return {[m](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*m);
            else return std::to_string(c.*m);
          },
          [m, key](ExperimentConfig& c, const std::string& s) { c.*m = parse_number<T>(key, s); }};
}

Field text(std::string ExperimentConfig::*m) {
  return {[m](const ExperimentConfig& c) { return c.*m; },
          [m](ExperimentConfig& c, const std::string& s) { c.*m = s; }};
}

Field flag(bool ExperimentConfig::*m, const char* key) {
  return {[m](const ExperimentConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [m, key](ExperimentConfig& c, const std::string& s) { c.*m = parse_bool(key, s); }};
}

// Ordered so the written file is stable.
const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = {
      {"command", text(&ExperimentConfig::command)},
      {"n", number(&ExperimentConfig::n, "n")},
      {"x", number(&ExperimentConfig::x, "x")},
      {"y", number(&ExperimentConfig::y, "y")},
      {"a_re", number(&ExperimentConfig::a_re, "a_re")},
      {"a_im", number(&ExperimentConfig::a_im, "a_im")},
      {"b_re", number(&ExperimentConfig::b_re, "b_re")},
      {"b_im", number(&ExperimentConfig::b_im, "b_im")},
      {"site", number(&ExperimentConfig::site, "site")},
      {"component", text(&ExperimentConfig::component)},
      {"cell_i", number(&ExperimentConfig::cell_i, "cell_i")},
      {"cell_j", number(&ExperimentConfig::cell_j, "cell_j")},
      {"direction", text(&ExperimentConfig::direction)},
      {"t", number(&ExperimentConfig::t, "t")},
      {"t_max", number(&ExperimentConfig::t_max, "t_max")},
      {"stride", number(&ExperimentConfig::stride, "stride")},
      {"fractions", text(&ExperimentConfig::fractions)},
      {"window", number(&ExperimentConfig::window, "window")},
      {"halfwidth", number(&ExperimentConfig::halfwidth, "halfwidth")},
      {"prominence", number(&ExperimentConfig::prominence, "prominence")},
      {"refine", flag(&ExperimentConfig::refine, "refine")},
      {"m_min", number(&ExperimentConfig::m_min, "m_min")},
      {"m_max", number(&ExperimentConfig::m_max, "m_max")},
      {"orthogonalize", flag(&ExperimentConfig::orthogonalize, "orthogonalize")},
      {"stable", flag(&ExperimentConfig::stable, "stable")},
      {"log_scale", flag(&ExperimentConfig::log_scale, "log_scale")},
      {"full", flag(&ExperimentConfig::full, "full")},
      {"dense_cap", number(&ExperimentConfig::dense_cap, "dense_cap")},
      {"out", text(&ExperimentConfig::out)},
      {"pgm", text(&ExperimentConfig::pgm)},
  };
  return f;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + "=" + field.get(cfg) + "\n";
  return out;
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "config line " + std::to_string(lineno) + ": missing '='");
    }
    const std::string key = trim(t.substr(0, eq));
    const auto it = fields().find(key);
    if (it == fields().end()) {
      throw Error(ErrorKind::InvalidArgument, "config line " + std::to_string(lineno) +
                                                  ": unknown key '" + key + "'");
    }
    it->second.set(base, trim(t.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IOFailure, "cannot read config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace qwalk
