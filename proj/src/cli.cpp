#include "qwalk/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <numeric>

#include "qwalk/error.hpp"
#include "qwalk/grover2d.hpp"
#include "qwalk/io.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/revivals.hpp"
#include "qwalk/spectrum.hpp"
#include "qwalk/walk1d.hpp"

namespace qwalk {

std::vector<std::pair<int, int>> parse_fractions(const std::string& list) {
  std::vector<std::pair<int, int>> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
    const auto slash = item.find('/');
    try {
      std::size_t used = 0;
      const int num = std::stoi(item, &used);
      int den = 1;
      if (slash != std::string::npos) {
        if (used != slash) throw std::invalid_argument(item);
        den = std::stoi(item.substr(slash + 1), &used);
        if (slash + 1 + used != item.size()) throw std::invalid_argument(item);
      } else if (used != item.size()) {
        throw std::invalid_argument(item);
      }
      if (num < 1 || den < 1) throw std::invalid_argument(item);
      const int g = std::gcd(num, den);
      out.emplace_back(num / g, den / g);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad fraction '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

void emit(const ExperimentConfig& cfg, const CsvTable& table) {
  if (cfg.out.empty()) {
    std::cout << to_csv(table);
  } else {
    write_csv(cfg.out, table);
  }
}

Component parse_component(const std::string& c) {
  if (c == "R") return Component::R;
  if (c == "L") return Component::L;
  throw Error(ErrorKind::InvalidArgument, "component must be R or L");
}

Direction parse_direction(const std::string& d) {
  if (d == "E" || d == "R") return Direction::E;
  if (d == "W") return Direction::W;
  if (d == "N") return Direction::N;
  if (d == "S") return Direction::S;
  throw Error(ErrorKind::InvalidArgument, "direction must be one of E, W, N, S");
}

WalkState1D initial_1d(const ExperimentConfig& cfg) {
  const int site = cfg.site == 0 ? cfg.n / 2 : cfg.site;
  require(site >= 1 && site <= cfg.n, "site must lie in 1..n");
  return WalkState1D::delta(cfg.n, site, parse_component(cfg.component));
}

void check_n(const ExperimentConfig& cfg) { require(cfg.n >= 2, "--n must be at least 2"); }

void run_spectrum(const ExperimentConfig& cfg) {
  check_n(cfg);
  const auto coin = cfg.coin();
  const auto sp = compute_spectrum(cfg.n, coin);
  CsvTable t{{"k", "s", "theta_re", "theta_im", "lambda_re", "lambda_im", "abs_lambda", "residual"},
             {}};
  for (const auto& p : sp.points) {
    t.add({std::to_string(p.k), std::to_string(p.s), format_double(p.theta.real()),
           format_double(p.theta.imag()), format_double(p.lambda.real()),
           format_double(p.lambda.imag()), format_double(std::abs(p.lambda)),
           format_double(p.residual)});
  }
  // lambda = 0: Q kills L at site 1 and R at site n.
  for (auto [site, comp] : {std::pair{1, Component::L}, std::pair{cfg.n, Component::R}}) {
    const auto v = WalkState1D::delta(cfg.n, site, comp);
    const double res = eigen_residual(v.amplitudes(), 0.0, coin);
    t.add({"0", "0", "nan", "nan", "0", "0", "0", format_double(res)});
  }
  emit(cfg, t);
}

void run_evolve(const ExperimentConfig& cfg) {
  check_n(cfg);
  require(cfg.t >= 0 && cfg.stride >= 1, "--t must be >= 0 and --stride >= 1");
  Walker1D walker(initial_1d(cfg), cfg.coin());
  RMatrix carpet;
  const bool want_carpet = !cfg.pgm.empty();
  if (want_carpet) carpet = RMatrix(static_cast<std::size_t>(cfg.t / cfg.stride) + 1, cfg.n);
  for (std::int64_t t = 0;; ++t) {
    if (want_carpet && t % cfg.stride == 0) {
      const auto row = conditional_distribution(walker.state());
      std::copy(row.begin(), row.end(), carpet.values.begin() + (t / cfg.stride) * cfg.n);
    }
    if (t == cfg.t) break;
    walker.step();
  }
  const auto raw = site_probabilities(walker.state());
  const auto cond = conditional_distribution(walker.state());
  CsvTable tab{{"site", "probability", "conditional"}, {}};
  for (int j = 0; j < cfg.n; ++j) {
    tab.add({std::to_string(j + 1), format_double(raw[j]), format_double(cond[j])});
  }
  emit(cfg, tab);
  if (want_carpet) write_pgm(carpet, cfg.pgm, cfg.log_scale);
}

void run_entropy_scan(const ExperimentConfig& cfg) {
  check_n(cfg);
  require(cfg.t_max >= 0 && cfg.stride >= 1, "--t-max must be >= 0 and --stride >= 1");
  emit(cfg, entropy_table(entropy_series(cfg.n, cfg.coin(), initial_1d(cfg), cfg.t_max,
                                         cfg.stride)));
}

void run_revival(const ExperimentConfig& cfg) {
  check_n(cfg);
  require(!cfg.fractions.empty(), "--fractions is required");
  const auto coin = cfg.coin();
  // z = p/(8q) in units of tau n^2.
  std::vector<std::pair<int, int>> pq;
  for (auto [num, den] : parse_fractions(cfg.fractions)) {
    const int p = 8 * num;
    const int g = std::gcd(p, den);
    pq.emplace_back(p / g, den / g);
  }
  const auto sched = revival_times(cfg.n, coin, pq);
  const auto psi0 = initial_1d(cfg);
  const std::int64_t half = cfg.halfwidth > 0 ? cfg.halfwidth : 4 * static_cast<std::int64_t>(cfg.n);
  CsvTable tab{{"p", "q", "t_predicted", "t_refined", "rho", "entropy_at_min", "peak_count"}, {}};
  for (const auto& e : sched.entries) {
    // Missing refinements (--no-refine or no interior minimum) leave empty cells.
    std::string t_ref, rho, h, peaks;
    if (cfg.refine) {
      try {
        const auto est = estimate_rho(cfg.n, coin, e.p, e.q, psi0, half, cfg.window);
        t_ref = std::to_string(est.t_min);
        rho = format_double(est.rho);
        h = format_double(est.entropy);
        const auto state = evolve(psi0, coin, est.t_min).state;
        peaks = std::to_string(peak_count(conditional_distribution(state), cfg.prominence));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::NoMinimum) throw;
      }
    }
    tab.add({std::to_string(e.p), std::to_string(e.q), std::to_string(e.t_predicted), t_ref, rho, h,
             peaks});
  }
  emit(cfg, tab);
}

void run_heatmap(const ExperimentConfig& cfg) {
  check_n(cfg);
  require(cfg.t >= 0, "--t must be >= 0");
  const auto h = matrix_power_heatmap(cfg.n, cfg.coin(), cfg.t, cfg.dense_cap);
  const RMatrix& m = cfg.full ? h.full : h.sites;
  CsvTable tab{{"row", "col", "value"}, {}};
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      tab.add({std::to_string(r + 1), std::to_string(c + 1), format_double(m(r, c))});
    }
  }
  emit(cfg, tab);
  if (!cfg.pgm.empty()) write_pgm(m, cfg.pgm, cfg.log_scale);
}

void run_absorption(const ExperimentConfig& cfg) {
  require(cfg.m_min >= 2 && cfg.m_max >= cfg.m_min, "need 2 <= --m-min <= --m-max");
  const auto coin = cfg.coin();
  std::vector<double> p;
  for (int m = cfg.m_min; m <= cfg.m_max; ++m) p.push_back(absorption_probability(m, coin));
  const int offset = p.size() >= 2 ? absorption_index_offset(p, cfg.m_min) : 1;
  CsvTable tab{{"m", "label", "p", "recurrence_next"}, {}};
  for (std::size_t k = 0; k < p.size(); ++k) {
    const int m = cfg.m_min + static_cast<int>(k);
    tab.add({std::to_string(m), std::to_string(m + offset), format_double(p[k]),
             format_double(bach_borisov_next(p[k]))});
  }
  emit(cfg, tab);
}

void run_grover2d(const ExperimentConfig& cfg) {
  require(cfg.x >= 6 && cfg.y >= 6, "--x and --y must be at least 6");
  require(cfg.t_max >= 0 && cfg.stride >= 1, "--t-max must be >= 0 and --stride >= 1");
  const int ci = cfg.cell_i == 0 ? (cfg.x + 1) / 2 : cfg.cell_i;
  const int cj = cfg.cell_j == 0 ? (cfg.y + 1) / 2 : cfg.cell_j;
  require(ci > 1 && ci < cfg.x && cj > 1 && cj < cfg.y, "cell must lie inside the ring");
  auto phi0 = GroverState2D::delta(cfg.x, cfg.y, ci, cj, parse_direction(cfg.direction));
  std::vector<PlaquetteVector> vs;
  if (cfg.orthogonalize) {
    vs = localized_eigenvectors(cfg.x, cfg.y);
    const auto partners = parity_partners(vs);
    vs.insert(vs.end(), partners.begin(), partners.end());
    phi0 = orthogonalize_initial(phi0, vs);
  }
  if (cfg.stable) {
    const auto st = stable_distribution_2d(phi0, vs);
    CsvTable tab{{"i", "j", "probability"}, {}};
    RMatrix img(cfg.y, cfg.x);
    for (int i = 1; i <= cfg.x; ++i) {
      for (int j = 1; j <= cfg.y; ++j) {
        const double v = st.cells[static_cast<std::size_t>(i - 1) * cfg.y + (j - 1)];
        tab.add({std::to_string(i), std::to_string(j), format_double(v)});
        img(cfg.y - j, i - 1) = v;
      }
    }
    emit(cfg, tab);
    if (!cfg.pgm.empty()) write_pgm(img, cfg.pgm, cfg.log_scale);
    return;
  }
  emit(cfg, entropy_table(entropy_series_2d(phi0, cfg.t_max, cfg.stride)));
}

}  // namespace

void run(const ExperimentConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "spectrum") return run_spectrum(cfg);
  if (c == "evolve") return run_evolve(cfg);
  if (c == "entropy-scan") return run_entropy_scan(cfg);
  if (c == "revival") return run_revival(cfg);
  if (c == "heatmap") return run_heatmap(cfg);
  if (c == "absorption") return run_absorption(cfg);
  if (c == "grover2d") return run_grover2d(cfg);
  throw Error(ErrorKind::InvalidArgument, "unknown command '" + c + "'");
}

namespace {

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::NormViolation:
    case ErrorKind::DegenerateCoin:
      return kExitUsage;
    case ErrorKind::IOFailure:
      return kExitIO;
    default:
      return kExitNumerical;
  }
}

// Value of --config if present, so the file can seed the defaults before the
// real parse.
std::string find_config_path(int argc, char** argv) {
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--config" && k + 1 < argc) return argv[k + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

void apply_coin_name(ExperimentConfig& cfg, const std::string& name) {
  if (name == "hadamard") {
    cfg.a_re = cfg.b_re = 0.70710678118654757;
    cfg.a_im = cfg.b_im = 0.0;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown coin '" + name + "'");
  }
}

void parse_complex(const std::string& s, double& re, double& im) {
  const auto comma = s.find(',');
  try {
    re = std::stod(s.substr(0, comma));
    im = comma == std::string::npos ? 0.0 : std::stod(s.substr(comma + 1));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, "bad complex value '" + s + "' (use re,im)");
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  try {
    ExperimentConfig cfg;
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) cfg = load_config(config_path);

    CLI::App app{"Absorbing quantum walk experiments"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    std::string config_opt, save_config, coin_name, a_text, b_text;
    app.add_option("--config", config_opt, "key=value file read before the flags");
    app.add_option("--save-config", save_config, "write the effective configuration here");

    auto coin_opts = [&](CLI::App* sub) {
      sub->add_option("--coin", coin_name, "named coin (hadamard)");
      sub->add_option("--a", a_text, "coin entry a as re,im");
      sub->add_option("--b", b_text, "coin entry b as re,im");
      sub->add_option("--out", cfg.out, "CSV path (stdout if omitted)");
    };
    auto walk_opts = [&](CLI::App* sub) {
      sub->add_option("--n", cfg.n, "lattice sites");
      sub->add_option("--site", cfg.site, "initial site (0 = n/2)");
      sub->add_option("--component", cfg.component, "initial coin state R or L");
    };

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues, theta roots and residuals");
    coin_opts(spectrum);
    spectrum->add_option("--n", cfg.n, "lattice sites");

    auto* ev = app.add_subcommand("evolve", "site distribution after t steps");
    coin_opts(ev);
    walk_opts(ev);
    ev->add_option("--t", cfg.t, "steps");
    ev->add_option("--stride", cfg.stride, "carpet row spacing");
    ev->add_option("--pgm", cfg.pgm, "space-time carpet image");

    auto* scan = app.add_subcommand("entropy-scan", "entropy of the conditional distribution");
    coin_opts(scan);
    walk_opts(scan);
    scan->add_option("--t-max", cfg.t_max, "last step");
    scan->add_option("--stride", cfg.stride, "sampling stride");

    auto* rev = app.add_subcommand("revival", "predicted and entropy-refined revival times");
    coin_opts(rev);
    walk_opts(rev);
    rev->add_option("--fractions", cfg.fractions, "times as fractions of tau n^2, e.g. 1/8,1/4");
    rev->add_option("--window", cfg.window, "minimum window");
    rev->add_option("--halfwidth", cfg.halfwidth, "search half-width (0 = 4n)");
    rev->add_option("--prominence", cfg.prominence, "peak threshold relative to the maximum");
    rev->add_flag("!--no-refine", cfg.refine, "only print predicted times");

    auto* heat = app.add_subcommand("heatmap", "|Q^t|^2 by repeated squaring");
    coin_opts(heat);
    heat->add_option("--n", cfg.n, "lattice sites");
    heat->add_option("--t", cfg.t, "power");
    heat->add_option("--dense-cap", cfg.dense_cap, "largest allowed matrix dimension");
    heat->add_option("--pgm", cfg.pgm, "image path");
    heat->add_flag("--full", cfg.full, "coin-resolved 2n x 2n map instead of sites");
    heat->add_flag("!--linear", cfg.log_scale, "linear instead of log intensity");

    auto* abs = app.add_subcommand("absorption", "left absorption probability vs lattice size");
    coin_opts(abs);
    abs->add_option("--m-min", cfg.m_min, "smallest lattice");
    abs->add_option("--m-max", cfg.m_max, "largest lattice");

    auto* g2 = app.add_subcommand("grover2d", "absorbing Grover walk on a box");
    g2->add_option("--out", cfg.out, "CSV path (stdout if omitted)");
    g2->add_option("--x", cfg.x, "box width");
    g2->add_option("--y", cfg.y, "box height");
    g2->add_option("--cell-i", cfg.cell_i, "initial cell column (0 = center)");
    g2->add_option("--cell-j", cfg.cell_j, "initial cell row (0 = center)");
    g2->add_option("--direction", cfg.direction, "initial direction E, W, N or S");
    g2->add_option("--t-max", cfg.t_max, "last step");
    g2->add_option("--stride", cfg.stride, "sampling stride");
    g2->add_flag("!--keep-localized", cfg.orthogonalize, "skip orthogonalization");
    g2->add_flag("--stable", cfg.stable, "power-iterate to the stable distribution");
    g2->add_option("--pgm", cfg.pgm, "stable distribution image");
    g2->add_flag("!--linear", cfg.log_scale, "linear instead of log intensity");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? kExitOk : kExitUsage;
    }
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (!coin_name.empty()) apply_coin_name(cfg, coin_name);
    if (!a_text.empty()) parse_complex(a_text, cfg.a_re, cfg.a_im);
    if (!b_text.empty()) parse_complex(b_text, cfg.b_re, cfg.b_im);
    if (!save_config.empty()) write_text(save_config, to_config_text(cfg));

    if (const char* env = std::getenv("QWALK_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 0) {
        throw Error(ErrorKind::InvalidArgument, "QWALK_THREADS must be a nonnegative integer");
      }
      kernels::set_thread_limit(static_cast<int>(v));
    }
    if (cfg.command.empty()) {
      std::cerr << app.help();
      return kExitUsage;
    }
    run(cfg);
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "qwalk: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "qwalk: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace qwalk
