#pragma once

#include <cstdint>
#include <string>

#include "qwalk/coin.hpp"

namespace qwalk {

/// Everything one CLI run needs. Stored as flat key=value text; command-line
/// flags override values read from a file.
struct ExperimentConfig {
  std::string command;
  int n = 0;
  int x = 0;
  int y = 0;
  double a_re = 0.70710678118654757;
  double a_im = 0.0;
  double b_re = 0.70710678118654757;
  double b_im = 0.0;
  int site = 0;          // 0 picks the lattice center
  std::string component = "R";
  int cell_i = 0;        // 0 picks the box center
  int cell_j = 0;
  std::string direction = "E";
  std::int64_t t = 0;
  std::int64_t t_max = 0;
  std::int64_t stride = 1;
  std::string fractions;  // comma list of z with t = z tau n^2, e.g. "1/8,1/4"
  std::int64_t window = 500;
  std::int64_t halfwidth = 0;  // 0 means 4n
  double prominence = 0.25;
  bool refine = true;
  int m_min = 1;
  int m_max = 20;
  bool orthogonalize = true;
  bool stable = false;
  bool log_scale = true;
  bool full = false;
  int dense_cap = 1600;
  std::string out;
  std::string pgm;

  CoinParameters coin() const;
};

std::string to_config_text(const ExperimentConfig& cfg);

/// Unknown keys or malformed values throw InvalidArgument. Blank lines and
/// lines starting with '#' are skipped.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {});

ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace qwalk
