#include "spec2/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace spec2 {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream csv_open(const std::string& dir, const std::string& name,
                       const std::string& header) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name);
  if (!os)
    throw std::runtime_error("cannot open output file " + name + " in " + dir);
  os << header << '\n';
  return os;
}

// Bounded worker pool over [0, count); slot-indexed so results land
// deterministically no matter how threads interleave.
template <typename F>
void parallel_for(int count, int jobs, F&& f) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

Eigen::VectorXd make_grid(const ExperimentConfig& cfg) {
  const int n = std::max(cfg.grid_points, 16);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r[i] = cfg.grid_rmax * (i + 1) / n;
  return r;
}

int round_half_up(double x) { return (int)std::floor(x + 0.5); }

std::vector<SecondOrderPoint> solve_filtered(const RadialProblem& prob, int N,
                                             int M, double lo, double hi,
                                             double max_imag) {
  const PencilTriple p = assemble(prob, BasisSpec{N, M});
  return filter_points(second_order_spectrum(p), lo, hi, max_imag);
}

// Nearest-center continuation: the filtered point whose real part is
// closest to the tracked center.  Returns -1 on an empty set.
int nearest_point(const std::vector<SecondOrderPoint>& pts, double center) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(pts[i].lambda.real() - center);
    if (d < bd) {
      bd = d;
      best = (int)i;
    }
  }
  return best;
}

std::vector<double> galerkin_gap_eigenvalues(const PencilTriple& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(galerkin_matrix(p));
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()[i];
    if (v > -1.0 && v < 1.0) out.push_back(v);
  }
  return out;
}

void write_points_csv(const std::string& dir, const std::string& name,
                      const std::vector<SecondOrderPoint>& pts) {
  auto os = csv_open(dir, name, "re_lambda,im_lambda,enclosure_lo,enclosure_hi");
  for (const auto& pt : pts) {
    const Enclosure e = enclosure(pt);
    os << fmt17(pt.lambda.real()) << ',' << fmt17(pt.lambda.imag()) << ','
       << fmt17(e.lo()) << ',' << fmt17(e.hi()) << '\n';
  }
}

void write_spinor_csv(const std::string& dir, const std::string& name,
                      const RadialSpinor& s) {
  // The phase convention makes the imaginary content incidental; the CSV
  // carries the real parts, which is what the plots use.
  auto os = csv_open(dir, name, "r,upper,lower");
  for (Eigen::Index i = 0; i < s.r.size(); ++i)
    os << fmt17(s.r[i]) << ',' << fmt17(s.upper[i].real()) << ','
       << fmt17(s.lower[i].real()) << '\n';
}

void write_report_csv(const std::string& dir, const std::string& name,
                      const std::vector<EnclosureReport>& reports) {
  auto os = csv_open(dir, name, "value,classification,distance");
  for (const auto& r : reports)
    os << fmt17(r.value) << ',' << r.classification << ',' << fmt17(r.distance)
       << '\n';
}

}  // namespace

void ExperimentConfig::validate() const {
  potential.validate();
  if (kappa == 0) throw std::invalid_argument("config: kappa must be nonzero");
  if (!(window_lo < window_hi))
    throw std::invalid_argument("config: window_lo must be < window_hi");
  if (!(max_imag > 0)) throw std::invalid_argument("config: max_imag must be > 0");
  if (n_upper < 0 || n_lower < 0 || dim < 0)
    throw std::invalid_argument("config: negative basis size");
  if ((n_upper > 0) != (n_lower > 0))
    throw std::invalid_argument("config: set both nupper and nlower or neither");
  if (!(grid_rmax > 0) || grid_points < 16)
    throw std::invalid_argument("config: bad spinor grid");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (balance_step < 1) throw std::invalid_argument("config: bad balance_step");
  for (const auto& [p, q] : ratio_list)
    if (p < 1 || q < 1 || p >= q)
      throw std::invalid_argument("config: ratios must satisfy 0 < p/q < 1");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(),
               line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
    kv[key] = val;
  }
  return kv;
}

namespace {

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: bad number '" + s + "' for " + key);
  }
}

int to_int(const std::string& s, const std::string& key) {
  const double v = to_double(s, key);
  if (v != std::floor(v))
    throw std::invalid_argument("config: expected integer for " + key);
  return (int)v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  return out;
}

}  // namespace

void apply_config(ExperimentConfig& cfg,
                  const std::map<std::string, std::string>& kv) {
  std::string kind = cfg.potential.name();
  double gamma = cfg.potential.gamma, beta = cfg.potential.beta;
  for (const auto& [key, val] : kv) {
    if (key == "potential") {
      kind = val;
    } else if (key == "gamma") {
      gamma = to_double(val, key);
    } else if (key == "beta") {
      beta = to_double(val, key);
    } else if (key == "kappa") {
      cfg.kappa = to_int(val, key);
    } else if (key == "nupper") {
      cfg.n_upper = to_int(val, key);
    } else if (key == "nlower") {
      cfg.n_lower = to_int(val, key);
    } else if (key == "dim") {
      cfg.dim = to_int(val, key);
    } else if (key == "window") {
      const auto parts = split_commas(val);
      if (parts.size() != 2)
        throw std::invalid_argument("config: window wants 'lo,hi'");
      cfg.window_lo = to_double(parts[0], key);
      cfg.window_hi = to_double(parts[1], key);
    } else if (key == "max_imag") {
      cfg.max_imag = to_double(val, key);
    } else if (key == "residual_n_list") {
      cfg.residual_n_list.clear();
      for (const auto& p : split_commas(val))
        cfg.residual_n_list.push_back(to_int(p, key));
    } else if (key == "beta_list") {
      cfg.beta_list.clear();
      for (const auto& p : split_commas(val))
        cfg.beta_list.push_back(to_double(p, key));
    } else if (key == "gamma_list") {
      cfg.gamma_list.clear();
      for (const auto& p : split_commas(val))
        cfg.gamma_list.push_back(to_double(p, key));
    } else if (key == "n_list") {
      cfg.n_list.clear();
      for (const auto& p : split_commas(val)) cfg.n_list.push_back(to_int(p, key));
    } else if (key == "ratio_list") {
      cfg.ratio_list.clear();
      for (const auto& p : split_commas(val)) {
        const auto slash = p.find('/');
        if (slash == std::string::npos)
          throw std::invalid_argument("config: ratios look like 'p/q'");
        const int num = to_int(p.substr(0, slash), key);
        const int den = to_int(p.substr(slash + 1), key);
        if (num < 1 || den < 1 || num >= den)
          throw std::invalid_argument("config: ratios must satisfy 0 < p/q < 1");
        cfg.ratio_list.emplace_back(num, den);
      }
    } else if (key == "balance_step") {
      cfg.balance_step = to_int(val, key);
    } else if (key == "grid_rmax") {
      cfg.grid_rmax = to_double(val, key);
    } else if (key == "grid_points") {
      cfg.grid_points = to_int(val, key);
    } else if (key == "threshold") {
      cfg.pollution_threshold = to_double(val, key);
    } else if (key == "out") {
      cfg.out_dir = val;
    } else if (key == "jobs") {
      cfg.jobs = to_int(val, key);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (kind == "free")
    cfg.potential = PotentialSpec::free_particle();
  else if (kind == "coulomb")
    cfg.potential = PotentialSpec::coulomb(gamma);
  else if (kind == "subcoulomb")
    cfg.potential = PotentialSpec::sub_coulomb(gamma, beta);
  else if (kind == "invharm")
    cfg.potential = PotentialSpec::inverse_harmonic(gamma);
  else
    throw std::invalid_argument("config: unknown potential '" + kind + "'");
}

CoulombResult run_coulomb(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.potential.kind != PotentialKind::Coulomb)
    throw std::invalid_argument("run_coulomb: potential must be coulomb");
  const double gamma = cfg.potential.gamma;
  const RadialProblem prob{cfg.kappa, cfg.potential};

  int N = cfg.n_upper, M = cfg.n_lower;
  if (N == 0) {
    const int dim = cfg.dim > 0 ? cfg.dim : 70;
    N = dim / 2;
    M = dim - N;
  }

  CoulombResult res;
  res.filtered = solve_filtered(prob, N, M, cfg.window_lo, cfg.window_hi,
                                cfg.max_imag);
  for (const auto& pt : res.filtered) res.enclosures.push_back(enclosure(pt));

  const CoulombSpectrum sp = coulomb_spectrum(gamma, cfg.kappa);
  res.soundness = check_enclosures(res.enclosures, sp);
  for (const auto& r : res.soundness)
    if (r.classification != "SOUND") res.all_sound = false;

  // Table-style residual rows need the exact ground spinor: attractive
  // Coulomb with kappa = -1 only.
  const bool have_ground = cfg.kappa == -1 && gamma < 0;
  const Eigen::VectorXd grid = make_grid(cfg);
  RadialSpinor exact;
  double e0 = 0, d_e = 0;
  if (have_ground) {
    exact = coulomb_ground_state(gamma, grid);
    e0 = coulomb_eigenvalue(gamma, cfg.kappa, 0);
    d_e = coulomb_gap_distance(gamma, cfg.kappa);

    res.residual_table.resize(cfg.residual_n_list.size());
    parallel_for((int)cfg.residual_n_list.size(), cfg.jobs, [&](int i) {
      const int n = cfg.residual_n_list[i];
      const auto pts = solve_filtered(prob, n, n, -1.0, 1.0, 0.5);
      const int at = nearest_point(pts, e0);
      ResidualRow row;
      row.n = n;
      if (at >= 0) {
        const RadialSpinor s = eigenfunction(pts[at], BasisSpec{n, n}, grid);
        row.residual = subspace_residual(s, {exact});
        row.im_lambda = std::abs(pts[at].lambda.imag());
        row.bound = row.im_lambda / d_e;
      }
      res.residual_table[i] = row;
    });
  }

  if (!cfg.out_dir.empty()) {
    write_points_csv(cfg.out_dir, "points.csv", res.filtered);
    auto enc = csv_open(cfg.out_dir, "enclosures.csv", "center,radius,lo,hi");
    for (const auto& e : res.enclosures)
      enc << fmt17(e.center) << ',' << fmt17(e.radius) << ',' << fmt17(e.lo())
          << ',' << fmt17(e.hi()) << '\n';
    write_report_csv(cfg.out_dir, "soundness.csv", res.soundness);
    if (have_ground) {
      write_spinor_csv(cfg.out_dir, "spinor_exact.csv", exact);
      const int at = nearest_point(res.filtered, e0);
      if (at >= 0)
        write_spinor_csv(
            cfg.out_dir, "spinor_computed.csv",
            eigenfunction(res.filtered[at], BasisSpec{N, M}, grid));
      auto rt = csv_open(cfg.out_dir, "residuals.csv", "n,residual,bound");
      for (const auto& row : res.residual_table)
        rt << row.n << ',' << fmt17(row.residual) << ',' << fmt17(row.bound)
           << '\n';
    }
  }
  return res;
}

std::vector<SubCoulombRow> run_subcoulomb_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.potential.kind != PotentialKind::SubCoulomb)
    throw std::invalid_argument("run_subcoulomb_sweep: potential must be subcoulomb");
  std::vector<double> betas = cfg.beta_list;
  if (betas.empty())
    for (int i = 10; i >= 1; --i) betas.push_back(i / 10.0);
  for (const double b : betas)
    if (!(b > 0 && b <= 1))
      throw std::invalid_argument("run_subcoulomb_sweep: beta outside (0, 1]");

  int N = cfg.n_upper, M = cfg.n_lower;
  if (N == 0) {
    const int dim = cfg.dim > 0 ? cfg.dim : 30;
    N = dim / 2;
    M = dim - N;
  }

  // Independent solves, then sequential ground tracking from beta = 1
  // downward, seeded by the exact Coulomb ground energy.
  std::vector<int> order(betas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return betas[a] > betas[b]; });

  std::vector<std::vector<SecondOrderPoint>> sets(betas.size());
  parallel_for((int)betas.size(), cfg.jobs, [&](int i) {
    const RadialProblem prob{
        cfg.kappa, PotentialSpec::sub_coulomb(cfg.potential.gamma, betas[i])};
    sets[i] = solve_filtered(prob, N, M, cfg.window_lo, cfg.window_hi,
                             cfg.max_imag);
  });

  std::vector<SubCoulombRow> rows(betas.size());
  double center = coulomb_eigenvalue(cfg.potential.gamma, cfg.kappa, 0);
  for (const int i : order) {
    SubCoulombRow row;
    row.beta = betas[i];
    const int at = nearest_point(sets[i], center);
    if (at >= 0) {
      row.e0 = sets[i][at].lambda.real();
      row.im_lambda = std::abs(sets[i][at].lambda.imag());
      center = row.e0;
    }
    rows[i] = row;
  }

  if (!cfg.out_dir.empty()) {
    auto os = csv_open(cfg.out_dir, "subcoulomb.csv", "beta,e0,im_lambda");
    for (const auto& r : rows)
      os << fmt17(r.beta) << ',' << fmt17(r.e0) << ',' << fmt17(r.im_lambda)
         << '\n';
  }
  return rows;
}

std::vector<InverseHarmonicResult> run_inverse_harmonic_sweep(
    const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.potential.kind != PotentialKind::InverseHarmonic)
    throw std::invalid_argument("run_inverse_harmonic_sweep: potential must be invharm");
  std::vector<double> gammas = cfg.gamma_list;
  if (gammas.empty()) gammas.push_back(cfg.potential.gamma);

  int N = cfg.n_upper, M = cfg.n_lower;
  if (N == 0) {
    const int dim = cfg.dim > 0 ? cfg.dim : 120;
    N = dim / 2;
    M = dim - N;
  }

  std::vector<InverseHarmonicResult> out(gammas.size());
  std::vector<PencilTriple> pencils(gammas.size());
  parallel_for((int)gammas.size(), cfg.jobs, [&](int i) {
    InverseHarmonicResult r;
    r.gamma = gammas[i];
    const RadialProblem prob{cfg.kappa,
                             PotentialSpec::inverse_harmonic(gammas[i])};
    pencils[i] = assemble(prob, BasisSpec{N, M});
    const auto pts = filter_points(second_order_spectrum(pencils[i]),
                                   cfg.window_lo, cfg.window_hi, cfg.max_imag);
    for (const auto& pt : pts) r.enclosures.push_back(enclosure(pt));
    r.galerkin_gap = galerkin_gap_eigenvalues(pencils[i]);
    out[i] = r;
  });

  if (!cfg.out_dir.empty()) {
    auto enc = csv_open(cfg.out_dir, "enclosures.csv",
                        "gamma,center,radius,lo,hi");
    auto gal = csv_open(cfg.out_dir, "galerkin.csv", "gamma,value");
    for (const auto& r : out) {
      for (const auto& e : r.enclosures)
        enc << fmt17(r.gamma) << ',' << fmt17(e.center) << ',' << fmt17(e.radius)
            << ',' << fmt17(e.lo()) << ',' << fmt17(e.hi()) << '\n';
      for (const double v : r.galerkin_gap)
        gal << fmt17(r.gamma) << ',' << fmt17(v) << '\n';
    }
    // Spinors of the first three gap states at the strongest coupling.
    std::size_t strongest = 0;
    for (std::size_t i = 1; i < gammas.size(); ++i)
      if (std::abs(gammas[i]) > std::abs(gammas[strongest])) strongest = i;
    const auto pts =
        filter_points(second_order_spectrum(pencils[strongest]), cfg.window_lo,
                      cfg.window_hi, cfg.max_imag);
    const Eigen::VectorXd grid = make_grid(cfg);
    for (std::size_t s = 0; s < pts.size() && s < 3; ++s)
      write_spinor_csv(cfg.out_dir, "spinor_state" + std::to_string(s) + ".csv",
                       eigenfunction(pts[s], BasisSpec{N, M}, grid));
  }
  return out;
}

std::vector<BalanceRow> run_balance(const ExperimentConfig& cfg) {
  cfg.validate();
  const int dim = cfg.dim > 0 ? cfg.dim : 200;
  const int step = cfg.balance_step;
  std::vector<int> ns;
  for (int N = 2 * step; N <= dim - 2 * step; N += step) ns.push_back(N);
  if (ns.empty()) throw std::invalid_argument("run_balance: dim too small");

  const bool coulomb = cfg.potential.kind == PotentialKind::Coulomb;
  const double e0 =
      coulomb ? coulomb_eigenvalue(cfg.potential.gamma, cfg.kappa, 0)
              : std::numeric_limits<double>::quiet_NaN();
  const CoulombSpectrum sp =
      coulomb ? coulomb_spectrum(cfg.potential.gamma, cfg.kappa)
              : CoulombSpectrum{};

  std::vector<std::vector<SecondOrderPoint>> sets(ns.size());
  std::vector<std::vector<double>> gaps(ns.size());
  parallel_for((int)ns.size(), cfg.jobs, [&](int i) {
    const RadialProblem prob{cfg.kappa, cfg.potential};
    const PencilTriple p =
        assemble(prob, BasisSpec{ns[i], dim - ns[i]});
    sets[i] = filter_points(second_order_spectrum(p), -1.0, 1.0, 0.5);
    gaps[i] = galerkin_gap_eigenvalues(p);
  });

  // Track the ground eigenvalue across the sweep by nearest-center
  // continuation, seeded by the exact value when there is one.
  std::vector<BalanceRow> rows(ns.size());
  double center = coulomb ? e0 : 0.0;
  bool seeded = coulomb;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    BalanceRow row;
    row.n_upper = ns[i];
    row.n_lower = dim - ns[i];
    if (!seeded && !sets[i].empty()) {
      // no exact reference: seed with the sharpest point of the first slice
      int best = 0;
      for (std::size_t k = 1; k < sets[i].size(); ++k)
        if (std::abs(sets[i][k].lambda.imag()) <
            std::abs(sets[i][best].lambda.imag()))
          best = (int)k;
      center = sets[i][best].lambda.real();
      seeded = true;
    }
    const int at = nearest_point(sets[i], center);
    if (at >= 0) {
      row.im_lambda = std::abs(sets[i][at].lambda.imag());
      row.re_error = coulomb
                         ? std::abs(sets[i][at].lambda.real() - e0)
                         : std::numeric_limits<double>::quiet_NaN();
      center = sets[i][at].lambda.real();
    }
    std::vector<Enclosure> encl;
    for (const auto& pt : sets[i]) encl.push_back(enclosure(pt));
    const auto rep = pollution_report(gaps[i], encl, coulomb ? &sp : nullptr,
                                      cfg.pollution_threshold);
    for (const auto& e : rep) row.suspects += e.suspect ? 1 : 0;
    rows[i] = row;
  }

  if (!cfg.out_dir.empty()) {
    auto os = csv_open(cfg.out_dir, "balance.csv",
                       "n_upper,n_lower,im_lambda,re_error,suspects");
    for (const auto& r : rows)
      os << r.n_upper << ',' << r.n_lower << ',' << fmt17(r.im_lambda) << ','
         << fmt17(r.re_error) << ',' << r.suspects << '\n';
    auto gal = csv_open(cfg.out_dir, "galerkin_gap.csv", "n_upper,value");
    for (std::size_t i = 0; i < ns.size(); ++i)
      for (const double v : gaps[i]) gal << ns[i] << ',' << fmt17(v) << '\n';
  }
  return rows;
}

std::vector<ConvergenceSeries> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<int, int>> ratios = cfg.ratio_list;
  if (ratios.empty()) ratios.emplace_back(1, 2);
  std::vector<int> sizes = cfg.n_list;
  if (sizes.empty())
    for (int n = 40; n <= 400; n += 40) sizes.push_back(n);
  for (const int n : sizes)
    if (n < 4) throw std::invalid_argument("run_convergence: n too small");

  const bool coulomb = cfg.potential.kind == PotentialKind::Coulomb;
  const double seed_exact =
      coulomb ? coulomb_eigenvalue(cfg.potential.gamma, cfg.kappa, 0) : 0.0;

  struct Task {
    int ratio_idx, n, N, M;
  };
  std::vector<Task> tasks;
  for (std::size_t ri = 0; ri < ratios.size(); ++ri)
    for (const int n : sizes) {
      const int N = round_half_up((double)ratios[ri].first * n / ratios[ri].second);
      tasks.push_back({(int)ri, n, N, n - N});
    }
  std::vector<std::vector<SecondOrderPoint>> sets(tasks.size());
  parallel_for((int)tasks.size(), cfg.jobs, [&](int i) {
    const RadialProblem prob{cfg.kappa, cfg.potential};
    if (tasks[i].N < 1 || tasks[i].M < 1)
      throw std::invalid_argument("run_convergence: ratio leaves empty block");
    sets[i] = solve_filtered(prob, tasks[i].N, tasks[i].M, cfg.window_lo,
                             cfg.window_hi, cfg.max_imag);
  });

  std::vector<ConvergenceSeries> out(ratios.size());
  std::vector<double> centers(ratios.size());
  std::vector<bool> tracking(ratios.size(), false);
  for (std::size_t ri = 0; ri < ratios.size(); ++ri)
    out[ri].ratio = ratios[ri];
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const Task& tk = tasks[ti];
    ConvergenceSeries& series = out[tk.ratio_idx];
    double center;
    if (tracking[tk.ratio_idx]) {
      center = centers[tk.ratio_idx];
    } else if (coulomb) {
      center = seed_exact;
    } else {
      // no exact reference: seed with the sharpest point of the first slice
      if (sets[ti].empty()) continue;
      int best = 0;
      for (std::size_t k = 1; k < sets[ti].size(); ++k)
        if (std::abs(sets[ti][k].lambda.imag()) <
            std::abs(sets[ti][best].lambda.imag()))
          best = (int)k;
      center = sets[ti][best].lambda.real();
    }
    const int at = nearest_point(sets[ti], center);
    if (at < 0) continue;
    series.samples.emplace_back(tk.n, std::abs(sets[ti][at].lambda.imag()));
    centers[tk.ratio_idx] = sets[ti][at].lambda.real();
    tracking[tk.ratio_idx] = true;
  }
  for (auto& series : out)
    if (series.samples.size() >= 3) series.fit = fit_convergence(series.samples);

  if (!cfg.out_dir.empty()) {
    auto os = csv_open(cfg.out_dir, "convergence.csv", "ratio,n,im_lambda");
    auto ft = csv_open(cfg.out_dir, "fits.csv", "ratio,a,b");
    for (const auto& series : out) {
      const std::string rname = std::to_string(series.ratio.first) + "/" +
                                std::to_string(series.ratio.second);
      for (const auto& [n, im] : series.samples)
        os << rname << ',' << fmt17(n) << ',' << fmt17(im) << '\n';
      ft << rname << ',' << fmt17(series.fit.exponent) << ','
         << fmt17(series.fit.prefactor) << '\n';
    }
  }
  return out;
}

}  // namespace spec2
