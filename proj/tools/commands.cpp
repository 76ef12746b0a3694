#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "defeig/error.hpp"
#include "defeig/linalg.hpp"
#include "defeig/oracle.hpp"
#include "defeig/pseudospectrum.hpp"

#ifndef DEFEIG_VERSION
#define DEFEIG_VERSION "0.0.0"
#endif

namespace defeig::cli {

using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

// Plain text matrix: "defeig-matrix 1", "rows cols", then rows of "re im" pairs.
std::string matrix_to_string(const Matrix& m) {
  std::ostringstream os;
  os << "defeig-matrix 1\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << hexfloat(m(i, j).real()) << ' ' << hexfloat(m(i, j).imag());
    }
    os << '\n';
  }
  return os.str();
}

Matrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::kIo, "cannot open " + path);
  std::string magic;
  int version = 0;
  long long rows = 0;
  long long cols = 0;
  if (!(is >> magic >> version >> rows >> cols) || magic != "defeig-matrix" || rows < 0 || cols < 0) {
    fail(ErrorKind::kInvalidInput, "bad matrix file " + path);
  }
  Matrix m(rows, cols);
  std::string re;
  std::string im;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(is >> re >> im)) fail(ErrorKind::kInvalidInput, "truncated matrix file " + path);
      m(i, j) = Complex(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
    }
  }
  return m;
}

std::string csv_preamble(const std::string& command, const std::string& cmdline) {
  return "# defeig " + std::string(version()) + " " + command + ": " + cmdline + "\n";
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

json error_body(const std::string& command, const Error& e) {
  json j;
  j["command"] = command;
  j["version"] = version();
  j["success"] = false;
  j["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  return j;
}

template <class F>
int guarded(const std::string& command, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "defeig " << command << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "defeig " << command << ": " << e.what() << '\n';
    return exit_code(ErrorKind::kInvalidInput);
  }
}

json vec_json(const RealVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::vector<double> oracle_eigs_or_empty(const HermitianPencil& p) {
  try {
    return reference_solve(p).eigenvalues;
  } catch (const Error&) {
    return {};
  }
}

}  // namespace

const char* version() { return DEFEIG_VERSION; }

std::uint64_t parse_seed(const std::string& text) {
  require(!text.empty(), ErrorKind::kInvalidInput, "empty seed");
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &pos, 0);
  } catch (const std::exception&) {
    fail(ErrorKind::kInvalidInput, "bad seed '" + text + "'");
  }
  require(pos == text.size() && text.front() != '-', ErrorKind::kInvalidInput,
          "bad seed '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    require(end != tok.c_str() && *end == '\0', ErrorKind::kInvalidInput, "bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------- gen

int cmd_gen(const GenOptions& o, const std::string& cmdline, std::ostream& out, std::ostream& err) {
  return guarded("gen", err, [&] {
    std::vector<double> eigs = o.eigs;
    int n = o.n;
    if (o.preset == "fig3") {
      if (n <= 0) n = 10;
      eigs = repeated_eigenvalue_preset(n, o.seed);
    } else {
      require(o.preset.empty(), ErrorKind::kInvalidInput, "unknown preset '" + o.preset + "'");
      if (n <= 0) n = static_cast<int>(eigs.size());
    }
    require(n >= 1 && static_cast<int>(eigs.size()) == n, ErrorKind::kInvalidInput,
            "eigenvalue list length must equal n");
    GeneratedPencil g = generate_test_pencil(n, eigs, o.cond_target, o.seed);

    json meta;
    meta["recipe"] = "generate_test_pencil";
    meta["seed"] = o.seed;
    meta["cond_target"] = o.cond_target;
    meta["kappa_x"] = g.kappa_x;
    meta["eig_spec"] = eigs;
    if (o.preset == "fig3") {
      meta["preset"] = "fig3";
      meta["repeated_eigenvalue"] = 1.0;
    }
    meta["generator"] = std::string(version()) + " " + cmdline;
    PencilFile file{g.pencil, meta.dump()};
    emit(o.out, pencil_to_string(file, o.format), out);
    return 0;
  });
}

// ---------------------------------------------------------------- solve

int cmd_solve(const SolveOptions& o, const std::string& cmdline, std::ostream& out,
              std::ostream& err) {
  json rec;
  rec["command"] = "solve";
  rec["version"] = version();
  rec["cmdline"] = cmdline;
  try {
    const auto t_start = Clock::now();
    const PencilFile file = load_pencil(o.pencil);
    const HermitianPencil& p = file.pencil;

    const double scale = std::max({p.norm_a(), p.norm_b(), 1.0});
    const HermitianPencil ps = scale > 1.0 ? HermitianPencil(p.a() / scale, p.b() / scale) : p;

    const auto t_gamma = Clock::now();
    double gamma = 0.0;
    std::string gamma_source;
    if (o.gamma_lb) {
      gamma = *o.gamma_lb / scale;
      gamma_source = "user";
    } else {
      gamma = crawford_lower_bound(ps).gamma_lb;
      gamma_source = "crawford_lower_bound";
      require(gamma > 0.0, ErrorKind::kPrecondition, "pencil is not definite (Crawford bound 0)");
    }
    const double crawford_s = seconds_since(t_gamma);

    json params;
    params["pencil"] = o.pencil;
    params["n"] = p.n();
    params["xi"] = o.xi;
    params["gamma_lb"] = gamma;
    params["gamma_source"] = gamma_source;
    params["mode"] = to_string(o.mode);
    params["kind"] = to_string(o.kind);
    params["seed"] = o.seed;
    params["threads"] = o.threads;
    params["grid_log2"] = o.grid_log2;
    params["reuse_probe"] = o.reuse_probe;
    auto opt_json = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    params["overrides"] = {{"epsilon", opt_json(o.practical.epsilon)},
                           {"omega", opt_json(o.practical.omega)},
                           {"r", opt_json(o.practical.r)},
                           {"eta", opt_json(o.practical.eta)},
                           {"gamma", opt_json(o.practical.gamma)},
                           {"c", opt_json(o.practical.c)},
                           {"rank_threshold", opt_json(o.practical.rank_threshold)}};
    rec["parameters"] = params;
    rec["scale"] = scale;

    std::mutex mu;
    json splits = json::array();
    PipelineOptions popt;
    popt.mode = o.mode;
    popt.practical = o.practical;
    popt.grid_log2 = o.grid_log2;
    popt.threads = o.threads;
    popt.reuse_probe_factorization = o.reuse_probe;
    popt.observer = [&](const SplitEvent& ev) {
      json s;
      s["path"] = ev.path;
      s["depth"] = ev.depth;
      s["m"] = ev.parent->n();
      s["k"] = ev.outcome->k;
      s["grid_index"] = ev.outcome->grid_index;
      s["grid_value"] = ev.outcome->grid_value;
      s["refined"] = ev.outcome->refined;
      s["probes"] = ev.probes;
      s["halley_iters"] = ev.outcome->halley_iters;
      s["polish_iters"] = ev.outcome->polish_iters;
      s["epsilon"] = ev.epsilon;
      s["l0"] = ev.l0;
      s["coupling_a"] = ev.outcome->coupling_a;
      s["coupling_b"] = ev.outcome->coupling_b;
      std::lock_guard lock(mu);
      splits.push_back(std::move(s));
    };

    const auto t_solve = Clock::now();
    PipelineResult res = diagonalize_definite(ps, o.xi, gamma, o.kind, o.seed, popt);
    const double solve_s = seconds_since(t_solve);
    // deterministic order regardless of thread scheduling
    std::sort(splits.begin(), splits.end(),
              [](const json& a, const json& b) { return a["path"] < b["path"]; });

    const SolverParams& sp = res.params;
    rec["parameters"]["solver"] = {{"epsilon", sp.epsilon}, {"gamma", sp.gamma_lb}, {"c", sp.c},
                                   {"r", sp.r},             {"eta", sp.eta},        {"theta", sp.theta_fail},
                                   {"rank_threshold", sp.rank_threshold}};
    rec["parameters"]["grid"] = {{"z0", res.grid.z0},
                                 {"omega", res.grid.omega},
                                 {"count", res.grid.count},
                                 {"epsilon", res.grid.epsilon}};
    rec["perturbation"] = {{"kind", to_string(res.perturbation.kind)},
                           {"mu", res.perturbation.mu},
                           {"seed", res.perturbation.seed},
                           {"norm_v1", res.perturbation.norm_v1},
                           {"norm_v2", res.perturbation.norm_v2}};

    DiagonalizationResult& r = res.result;
    const RealVector la = r.lambda_a * scale;
    const RealVector lb = r.lambda_b * scale;
    const std::string x_path = o.out.empty() ? std::string() : o.out + ".x";
    json result;
    result["residual_a"] = r.residual_a * scale;
    result["residual_b"] = r.residual_b * scale;
    result["residual_a_scaled"] = r.residual_a;
    result["residual_b_scaled"] = r.residual_b;
    result["lambda_a"] = vec_json(la);
    result["lambda_b"] = vec_json(lb);
    result["eigenvalues"] = r.eigenvalues();
    result["recursion_depth"] = r.recursion_depth;
    result["splits"] = r.splits;
    result["total_halley_iters"] = r.total_halley_iters;
    result["x_path"] = x_path;
    rec["success"] = true;
    rec["result"] = result;
    rec["splits"] = splits;
    rec["warnings"] = res.warnings;
    rec["timings"] = {{"crawford_s", crawford_s},
                      {"solve_s", solve_s},
                      {"total_s", seconds_since(t_start)}};

    if (!x_path.empty()) write_file_atomic(x_path, matrix_to_string(r.x));
    emit(o.out, rec.dump(2) + "\n", out);
    return 0;
  } catch (const Error& e) {
    json body = error_body("solve", e);
    body["cmdline"] = cmdline;
    if (rec.contains("parameters")) body["parameters"] = rec["parameters"];
    const std::string text = body.dump(2) + "\n";
    try {
      emit(o.out, text, out);
    } catch (const Error&) {
      out << text;
    }
    err << "defeig solve: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

// ---------------------------------------------------------------- shatter

int cmd_shatter(const ShatterOptions& o, const std::string& cmdline, std::ostream& out,
                std::ostream& err) {
  return guarded("shatter", err, [&] {
    require(o.mu >= 0.0 && o.trials >= 1, ErrorKind::kInvalidInput, "need mu >= 0 and trials >= 1");
    const HermitianPencil base = o.noise_n > 0
                                     ? HermitianPencil(Matrix::Zero(o.noise_n, o.noise_n),
                                                       Matrix::Zero(o.noise_n, o.noise_n))
                                     : load_pencil(o.pencil).pencil;
    const bool noise = o.noise_n > 0;
    const double omega = o.omega.value_or(10.0 * o.mu);
    const double eps = o.epsilon.value_or(o.mu / 10.0);

    std::ostringstream csv;
    csv << csv_preamble("shatter", cmdline);
    csv << "trial,seed,mu,norm_v1,norm_v2,crawford_gamma,theta_star,min_gap,grid_omega,grid_epsilon,"
           "shattered,min_grid_margin\n";
    const RandomStream root(o.seed);
    for (int t = 0; t < o.trials; ++t) {
      RandomStream ts = root.substream(static_cast<std::uint64_t>(t));
      const Seed trial_seed = ts();
      PerturbationSpec spec;
      spec.kind = o.kind;
      spec.mu = o.mu;
      spec.seed = trial_seed;
      const PerturbedPencil pp = perturb(base, spec);
      const CrawfordEstimate est = crawford_lower_bound(pp.pencil);

      double gap = std::numeric_limits<double>::quiet_NaN();
      std::string shattered = "na";
      double margin = std::numeric_limits<double>::quiet_NaN();
      std::vector<double> eigs;
      if (est.gamma_lb > 0.0) eigs = oracle_eigs_or_empty(pp.pencil);
      if (eigs.size() >= 2) gap = min_eigenvalue_gap(eigs);
      if (!noise && !eigs.empty() && omega > 0.0 && eps > 0.0 && eps < est.gamma_lb) {
        const double left = eigs.front() - 2.0 * omega;
        const double right = eigs.back() + 2.0 * omega;
        ShatteringReport rep;
        if (o.fit_offset) {
          rep = fit_grid_offset(pp.pencil, eigs, omega, eps, est.gamma_lb, left, right).report;
        } else {
          const ShatteringGrid grid = practical_grid(left, right, omega, eps, trial_seed);
          rep = check_shattered(pp.pencil, grid, eps, est.gamma_lb, eigs);
        }
        shattered = rep.shattered ? "1" : "0";
        margin = rep.min_grid_margin;
      }
      csv << t << ',' << trial_seed << ',' << fmt(o.mu) << ',' << fmt(pp.record.norm_v1) << ','
          << fmt(pp.record.norm_v2) << ',' << fmt(est.gamma_lb) << ',' << fmt(est.theta_star) << ','
          << fmt(gap) << ',' << fmt(omega) << ',' << fmt(eps) << ',' << shattered << ','
          << fmt(margin) << '\n';
    }
    emit(o.out, csv.str(), out);
    return 0;
  });
}

// ---------------------------------------------------------------- pseudospec

int cmd_pseudospec(const PseudospecOptions& o, const std::string& cmdline, std::ostream& out,
                   std::ostream& err) {
  return guarded("pseudospec", err, [&] {
    require(o.samples >= 2 && o.hi > o.lo, ErrorKind::kInvalidInput,
            "need samples >= 2 and hi > lo");
    const HermitianPencil p = load_pencil(o.pencil).pencil;
    const double gamma = o.gamma_lb.value_or(crawford_lower_bound(p).gamma_lb);
    require(o.eps > 0.0 && o.eps < gamma, ErrorKind::kPrecondition,
            "eps must lie in (0, gamma_lb) for the pseudospectrum characterization");

    std::vector<std::pair<double, bool>> zs;
    for (int i = 0; i < o.samples; ++i) {
      zs.emplace_back(o.lo + (o.hi - o.lo) * i / (o.samples - 1), false);
    }
    for (double e : reference_solve(p).eigenvalues) {
      if (e >= o.lo && e <= o.hi) zs.emplace_back(e, true);
    }
    std::stable_sort(zs.begin(), zs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::ostringstream csv;
    csv << csv_preamble("pseudospec", cmdline);
    csv << "z,sigma_min,threshold,member,is_eigenvalue\n";
    for (const auto& [z, is_eig] : zs) {
      const double s = shifted_sigma_min(p, z);
      const double thr = o.eps * std::sqrt(1.0 + z * z);
      csv << fmt(z) << ',' << fmt(s) << ',' << fmt(thr) << ',' << (s <= thr ? 1 : 0) << ','
          << (is_eig ? 1 : 0) << '\n';
    }
    emit(o.out, csv.str(), out);
    return 0;
  });
}

// ---------------------------------------------------------------- verify

int cmd_verify(const VerifyOptions& o, const std::string& cmdline, std::ostream& out,
               std::ostream& err) {
  return guarded("verify", err, [&] {
    const HermitianPencil p = load_pencil(o.pencil).pencil;
    std::ifstream is(o.record);
    if (!is) fail(ErrorKind::kIo, "cannot open " + o.record);
    json rec;
    try {
      rec = json::parse(is);
    } catch (const std::exception& e) {
      fail(ErrorKind::kInvalidInput, std::string("bad run record: ") + e.what());
    }
    require(rec.value("success", false), ErrorKind::kInvalidInput, "run record reports a failure");
    const json& r = rec.at("result");
    std::string x_path = r.at("x_path").get<std::string>();
    require(!x_path.empty(), ErrorKind::kInvalidInput, "run record has no X file");
    const Matrix x = load_matrix(x_path);
    const auto la_v = r.at("lambda_a").get<std::vector<double>>();
    const auto lb_v = r.at("lambda_b").get<std::vector<double>>();
    RealVector la = Eigen::Map<const RealVector>(la_v.data(), static_cast<Index>(la_v.size()));
    RealVector lb = Eigen::Map<const RealVector>(lb_v.data(), static_cast<Index>(lb_v.size()));

    const auto [ra, rb] = backward_residuals(p, x, la, lb);
    DiagonalizationResult d;
    d.lambda_a = la;
    d.lambda_b = lb;
    const OracleSolution orc = reference_solve(p);
    const double chord = chordal_match(d.sorted_eigenvalues(), orc.eigenvalues);
    const double xi = rec.at("parameters").at("xi").get<double>();
    const double scale = rec.value("scale", 1.0);
    const bool pass = ra <= xi * scale && rb <= xi * scale;

    json v;
    v["command"] = "verify";
    v["version"] = version();
    v["cmdline"] = cmdline;
    v["residual_a"] = ra;
    v["residual_b"] = rb;
    v["tolerance"] = xi * scale;
    v["chordal_match"] = chord;
    v["oracle_kappa_x"] = orc.kappa_x;
    v["sigma_min_x"] = linalg::sigma_min(x);
    v["pass"] = pass;
    emit(o.out, v.dump(2) + "\n", out);
    if (!pass) fail(ErrorKind::kConvergence, "residuals exceed xi");
    return 0;
  });
}

// ---------------------------------------------------------------- bench

int cmd_bench(const BenchOptions& o, const std::string& cmdline, std::ostream& out,
              std::ostream& err) {
  return guarded("bench", err, [&] {
    require(!o.n_list.empty() && o.trials >= 1, ErrorKind::kInvalidInput, "need n values and trials");
    std::ostringstream csv;
    csv << csv_preamble("bench", cmdline);
    csv << "n,trial,level,splits,halley_iters,mean_halley_iters,epsilon_level,solve_s,"
           "recursion_depth,residual_a,residual_b\n";
    for (int n : o.n_list) {
      require(n >= 1, ErrorKind::kInvalidInput, "n must be positive");
      for (int t = 0; t < o.trials; ++t) {
        const Seed seed = RandomStream(o.seed).substream(static_cast<std::uint64_t>(n) << 20 | t)();
        RandomStream rng(seed);
        std::vector<double> eigs(static_cast<std::size_t>(n));
        for (double& e : eigs) e = rng.uniform(-1.0, 1.0);
        const GeneratedPencil g = generate_test_pencil(n, eigs, 1.0 + 9.0 * rng.uniform(), seed);
        const double gamma = crawford_lower_bound(g.pencil).gamma_lb;

        std::map<int, std::pair<int, int>> per_level;  // depth -> (splits, iters)
        std::map<int, double> eps_level;
        PipelineOptions popt;
        popt.observer = [&](const SplitEvent& ev) {
          auto& [s, it] = per_level[ev.depth];
          ++s;
          it += ev.outcome->halley_iters;
          eps_level[ev.depth] = ev.epsilon;
        };
        const auto t0 = Clock::now();
        const PipelineResult res =
            diagonalize_definite(g.pencil, o.xi, gamma, PerturbationKind::kGue, seed, popt);
        const double dt = seconds_since(t0);
        if (per_level.empty()) {
          csv << n << ',' << t << ",0,0,0,0,nan," << fmt(dt) << ',' << res.result.recursion_depth
              << ',' << fmt(res.result.residual_a) << ',' << fmt(res.result.residual_b) << '\n';
        }
        for (const auto& [level, v] : per_level) {
          csv << n << ',' << t << ',' << level << ',' << v.first << ',' << v.second << ','
              << fmt(static_cast<double>(v.second) / v.first) << ',' << fmt(eps_level[level]) << ','
              << fmt(dt) << ',' << res.result.recursion_depth << ','
              << fmt(res.result.residual_a) << ',' << fmt(res.result.residual_b) << '\n';
        }
      }
    }
    emit(o.out, csv.str(), out);
    return 0;
  });
}

// ---------------------------------------------------------------- argument parsing

namespace {

PerturbationKind parse_kind(const std::string& s) {
  if (s == "gue") return PerturbationKind::kGue;
  if (s == "diag") return PerturbationKind::kDiagonal;
  fail(ErrorKind::kInvalidInput, "unknown perturbation kind '" + s + "'");
}

SolverMode parse_mode(const std::string& s) {
  if (s == "practical") return SolverMode::kPractical;
  if (s == "theory") return SolverMode::kTheory;
  fail(ErrorKind::kInvalidInput, "unknown mode '" + s + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::string cmdline;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) cmdline += ' ';
    cmdline += argv[i];
  }

  CLI::App app{"defeig: diagonalization of definite Hermitian pencils"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string seed_text = "0";
  std::string kind_text = "gue";
  std::string mode_text = "practical";

  GenOptions gen;
  std::string gen_eigs;
  std::string gen_format = "hex";
  auto* g = app.add_subcommand("gen", "generate a test pencil (X^H L X, X^H X)");
  g->add_option("--n", gen.n, "dimension");
  g->add_option("--eigs", gen_eigs, "comma-separated eigenvalues");
  g->add_option("--preset", gen.preset, "named preset (fig3: two eigenvalues at +1)");
  g->add_option("--cond", gen.cond_target, "target condition number of X")->check(CLI::PositiveNumber);
  g->add_option("--seed", seed_text, "seed (decimal or 0x hex)");
  g->add_option("--format", gen_format, "hex or decimal")->check(CLI::IsMember({"hex", "decimal"}));
  g->add_option("--out", gen.out, "output pencil file (default stdout)");

  SolveOptions solve;
  double s_eps = 0.0;
  double s_eta = 0.0;
  double s_omega = 0.0;
  double s_r = 0.0;
  double s_thr = 0.0;
  double s_gamma = 0.0;
  auto* s = app.add_subcommand("solve", "diagonalize a pencil file");
  s->add_option("--pencil", solve.pencil, "input pencil file")->required();
  s->add_option("--xi", solve.xi, "target backward error");
  auto* s_gamma_opt = s->add_option("--gamma", s_gamma, "known Crawford lower bound");
  s->add_option("--mode", mode_text, "practical or theory");
  s->add_option("--kind", kind_text, "perturbation ensemble: gue or diag");
  auto* s_eps_opt = s->add_option("--eps", s_eps, "practical shattering epsilon");
  auto* s_eta_opt = s->add_option("--eta", s_eta, "practical target accuracy");
  auto* s_omega_opt = s->add_option("--omega", s_omega, "practical grid spacing");
  auto* s_r_opt = s->add_option("--r", s_r, "practical grid enclosure radius");
  auto* s_thr_opt = s->add_option("--rank-threshold", s_thr, "practical rank threshold");
  s->add_option("--grid-log2", solve.grid_log2, "practical grid size exponent");
  s->add_flag("--reuse-probe", solve.reuse_probe, "reuse the probe factorization for U_k");
  s->add_option("--seed", seed_text, "seed (decimal or 0x hex)");
  s->add_option("--threads", solve.threads, "recursion threads")->check(CLI::PositiveNumber);
  s->add_option("--out", solve.out, "RunRecord JSON path (X written to <out>.x)");

  ShatterOptions sh;
  double sh_omega = 0.0;
  double sh_eps = 0.0;
  auto* h = app.add_subcommand("shatter", "perturbation / shattering experiment");
  h->add_option("--pencil", sh.pencil, "input pencil file");
  h->add_option("--noise", sh.noise_n, "pure-noise mode: A = B = 0 of this size");
  h->add_option("--mu", sh.mu, "perturbation size")->required();
  h->add_option("--kind", kind_text, "gue or diag");
  h->add_option("--trials", sh.trials, "number of trials");
  h->add_option("--seed", seed_text, "seed (decimal or 0x hex)");
  auto* sh_omega_opt = h->add_option("--omega", sh_omega, "grid spacing (default 10 mu)");
  auto* sh_eps_opt = h->add_option("--eps", sh_eps, "shattering epsilon (default mu/10)");
  h->add_flag("--fit-offset", sh.fit_offset, "choose the grid offset from the oracle eigenvalues");
  h->add_option("--out", sh.out, "CSV path (default stdout)");

  PseudospecOptions ps;
  double ps_gamma = 0.0;
  auto* p = app.add_subcommand("pseudospec", "sample sigma_min(A - zB) on an interval");
  p->add_option("--pencil", ps.pencil, "input pencil file")->required();
  p->add_option("--eps", ps.eps, "pseudospectrum level")->required();
  p->add_option("--lo", ps.lo, "interval start");
  p->add_option("--hi", ps.hi, "interval end");
  p->add_option("--samples", ps.samples, "number of samples");
  auto* ps_gamma_opt = p->add_option("--gamma", ps_gamma, "known Crawford lower bound");
  p->add_option("--out", ps.out, "CSV path (default stdout)");

  VerifyOptions vf;
  auto* v = app.add_subcommand("verify", "check a solve RunRecord against the dense oracle");
  v->add_option("--pencil", vf.pencil, "input pencil file")->required();
  v->add_option("--result", vf.record, "RunRecord JSON from solve")->required();
  v->add_option("--out", vf.out, "JSON path (default stdout)");

  BenchOptions bn;
  std::string bn_list = "8,16,32,64";
  auto* b = app.add_subcommand("bench", "time the pipeline and record Halley iterations per level");
  b->add_option("--n-list", bn_list, "comma-separated dimensions");
  b->add_option("--trials", bn.trials, "trials per dimension");
  b->add_option("--xi", bn.xi, "target backward error");
  b->add_option("--seed", seed_text, "seed (decimal or 0x hex)");
  b->add_option("--out", bn.out, "CSV path (default stdout)");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : exit_code(ErrorKind::kInvalidInput);
  }

  try {
    const std::uint64_t seed = parse_seed(seed_text);
    if (*g) {
      gen.seed = seed;
      gen.eigs = parse_list(gen_eigs);
      gen.format = gen_format == "hex" ? NumberFormat::kHex : NumberFormat::kDecimal;
      return cmd_gen(gen, cmdline, out, err);
    }
    if (*s) {
      solve.seed = seed;
      solve.mode = parse_mode(mode_text);
      solve.kind = parse_kind(kind_text);
      if (*s_gamma_opt) solve.gamma_lb = s_gamma;
      if (*s_eps_opt) solve.practical.epsilon = s_eps;
      if (*s_eta_opt) solve.practical.eta = s_eta;
      if (*s_omega_opt) solve.practical.omega = s_omega;
      if (*s_r_opt) solve.practical.r = s_r;
      if (*s_thr_opt) solve.practical.rank_threshold = s_thr;
      return cmd_solve(solve, cmdline, out, err);
    }
    if (*h) {
      sh.seed = seed;
      sh.kind = parse_kind(kind_text);
      if (*sh_omega_opt) sh.omega = sh_omega;
      if (*sh_eps_opt) sh.epsilon = sh_eps;
      require(sh.noise_n > 0 || !sh.pencil.empty(), ErrorKind::kInvalidInput,
              "shatter needs --pencil or --noise");
      return cmd_shatter(sh, cmdline, out, err);
    }
    if (*p) {
      if (*ps_gamma_opt) ps.gamma_lb = ps_gamma;
      return cmd_pseudospec(ps, cmdline, out, err);
    }
    if (*v) return cmd_verify(vf, cmdline, out, err);
    if (*b) {
      bn.seed = seed;
      for (double x : parse_list(bn_list)) bn.n_list.push_back(static_cast<int>(x));
      return cmd_bench(bn, cmdline, out, err);
    }
  } catch (const Error& e) {
    err << "defeig: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return exit_code(ErrorKind::kInvalidInput);
}

}  // namespace defeig::cli
