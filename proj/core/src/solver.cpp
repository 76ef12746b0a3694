#include "defeig/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <sstream>

#include "defeig/error.hpp"
#include "defeig/halley.hpp"
#include "defeig/linalg.hpp"
#include "defeig/oracle.hpp"
#include "defeig/rrf.hpp"

namespace defeig {

const char* to_string(SolverMode mode) {
  return mode == SolverMode::kTheory ? "theory" : "practical";
}

DeltaValue compute_delta(const SolverParams& params, Index m, int zeta) {
  require(m >= 2 && zeta >= 1, ErrorKind::kInvalidInput, "compute_delta needs m >= 2 and zeta >= 1");
  const double n = static_cast<double>(params.n_top);
  const double mm = static_cast<double>(m);
  const double t = params.theta_fail;
  const double z = static_cast<double>(zeta);
  const double e = params.epsilon;
  const double g = params.gamma_lb;
  const double c = params.c;
  const double root = std::sqrt(t / (3.0 * (n - 1.0)));

  const double d1 = 4.0 * t / (4.0 * t + 3.0 * z * n * n * (n - 1.0));
  const double d2 = root * e * e * g * g / (800.0 * n * c * c * (g + c) * (g + c));
  const double d3 = root * params.eta * params.eta / (36.0 * n * mm * mm * c * c);

  DeltaValue out;
  out.raw = std::min({d1, d2, d3});
  out.value = out.raw;
  if (params.mode == SolverMode::kPractical && out.raw < params.delta_floor) {
    out.value = params.delta_floor;
    out.clamped = true;
  }
  return out;
}

double child_epsilon(double epsilon, double gamma_lb, double c) {
  require(epsilon > 0.0 && gamma_lb > 0.0 && c > 0.0, ErrorKind::kInvalidInput,
          "child_epsilon needs positive inputs");
  return 4.0 * epsilon * gamma_lb / (5.0 * (gamma_lb + c));
}

int zeta_for(std::uint64_t points) {
  require(points >= 1, ErrorKind::kSplitFailure, "empty grid window");
  // floor(log2 x + 1) = bit width of x for integers
  return static_cast<int>(std::bit_width(points));
}

double rank_threshold(const SolverParams& params, double delta, int zeta) {
  if (params.mode == SolverMode::kPractical) return params.rank_threshold;
  const double n = static_cast<double>(params.n_top);
  return 2.0 * std::sqrt(params.theta_fail / (3.0 * static_cast<double>(zeta) * (n - 1.0))) *
         (1.0 - delta) / n;
}

namespace {

struct HalleyOutput {
  HalleyState state;
  RRFResult plus;
  RealVector ratios;
  Index k = 0;
  int polish = 0;
};

// 2B_p, A_p + B_p for the right projector; 2B_p, A_p - B_p for the left one.
std::vector<Matrix> projector_factors(const HalleyState& s, int side) {
  return {2.0 * s.b_mat, side > 0 ? Matrix(s.a_mat + s.b_mat) : Matrix(s.a_mat - s.b_mat)};
}

bool ambiguous(const RealVector& ratios, double threshold) {
  // converged projectors give ratios far from the threshold on both sides
  for (Index i = 0; i < ratios.size(); ++i) {
    if (ratios(i) < threshold && ratios(i) > 1e-6 * threshold) return true;
  }
  return false;
}

void polish_step(HalleyOutput& h, double thr, RandomStream& rng);

HalleyOutput run_probe(const HermitianPencil& p, double g_val, const SolverParams& params,
                       double delta, int zeta, RandomStream& rng) {
  const double l0 = params.epsilon / (2.0 * params.r * params.c);
  double l_target = 1.0 - 2.0 * delta * params.gamma_lb / params.c;
  l_target = std::clamp(l_target, l0, 1.0);

  HalleyOutput out;
  out.state = ifdwh_run(p.a() - g_val * p.b(), 2.0 * params.r * p.b(), std::min(l0, 1.0), l_target,
                        params.max_halley_iters);
  const double thr = rank_threshold(params, delta, zeta);
  RandomStream sub = rng.substream(0);
  out.plus = grurv(projector_factors(out.state, +1), {-1, 1}, sub);
  out.ratios = diagonal_ratios(out.plus.r_factors[0], out.plus.r_factors[1]);
  out.k = (out.ratios.array() >= thr).count();
  while (params.mode == SolverMode::kPractical && params.polish_ambiguous &&
         out.state.iters < params.max_halley_iters && ambiguous(out.ratios, thr)) {
    polish_step(out, thr, rng);
  }
  return out;
}

RandomStream node_stream(Seed seed, std::uint64_t path) {
  return RandomStream(seed).substream(streams::kSolver).substream(path);
}

void polish_step(HalleyOutput& h, double thr, RandomStream& rng) {
  h.state = ifdwh_step(h.state, halley_coefficients(1.0));
  ++h.polish;
  RandomStream sub = rng.substream(static_cast<std::uint64_t>(h.polish));
  h.plus = grurv(projector_factors(h.state, +1), {-1, 1}, sub);
  h.ratios = diagonal_ratios(h.plus.r_factors[0], h.plus.r_factors[1]);
  h.k = (h.ratios.array() >= thr).count();
}

SplitOutcome bases(const HermitianPencil& p, double g_val, const HalleyOutput& h,
                   const SolverParams& params, RandomStream& rng) {
  const Index m = p.n();
  SplitOutcome out;
  out.grid_value = g_val;
  out.k = h.k;
  out.halley_iters = h.state.iters;
  out.polish_iters = h.polish;
  out.l_final = h.state.l;
  out.ratios = h.ratios;

  const std::vector<int> exps{-1, 1};
  const std::uint64_t tag = 1000 + 2 * static_cast<std::uint64_t>(h.polish);
  if (params.reuse_probe_factorization) {
    out.u_right = h.plus.u.leftCols(out.k);
  } else {
    RandomStream s = rng.substream(tag);
    out.u_right = grurv(projector_factors(h.state, +1), exps, s).u.leftCols(out.k);
  }
  RandomStream s = rng.substream(tag + 1);
  out.u_left_of = grurv(projector_factors(h.state, -1), exps, s).u.leftCols(m - out.k);
  if (out.k > 0 && out.k < m) {
    out.coupling_a = linalg::spectral_norm(out.u_right.adjoint() * p.a() * out.u_left_of);
    out.coupling_b = linalg::spectral_norm(out.u_right.adjoint() * p.b() * out.u_left_of);
  }
  return out;
}

SplitOutcome complete_split(const HermitianPencil& p, double g_val, HalleyOutput&& h,
                            const SolverParams& params, double delta, int zeta,
                            RandomStream& rng) {
  SplitOutcome out = bases(p, g_val, h, params, rng);
  if (params.mode != SolverMode::kPractical || !params.polish_ambiguous) return out;
  const double thr = rank_threshold(params, delta, zeta);
  const Index k0 = h.k;
  while (std::max(out.coupling_a, out.coupling_b) > params.eta / 2.0) {
    if (h.state.iters >= params.max_halley_iters) {
      std::ostringstream os;
      os << "split at " << g_val << " leaves coupling " << std::max(out.coupling_a, out.coupling_b)
         << " above eta/2 = " << params.eta / 2.0;
      fail(ErrorKind::kSplitFailure, os.str());
    }
    polish_step(h, thr, rng);
    require(h.k == k0, ErrorKind::kSplitFailure, "rank changed while polishing an accepted split");
    out = bases(p, g_val, h, params, rng);
  }
  return out;
}

}  // namespace

ProbeResult probe_gridpoint(const HermitianPencil& p, double g_val, const SolverParams& params,
                            double delta, int zeta, Seed seed) {
  RandomStream rng = RandomStream(seed).substream(streams::kSolver);
  HalleyOutput h = run_probe(p, g_val, params, delta, zeta, rng);
  return {h.k, h.state.iters, h.polish, h.state.l, std::move(h.ratios)};
}

SplitOutcome split_at_gridpoint(const HermitianPencil& p, double g_val, const SolverParams& params,
                                double delta, int zeta, Seed seed) {
  RandomStream rng = RandomStream(seed).substream(streams::kSolver);
  HalleyOutput h = run_probe(p, g_val, params, delta, zeta, rng);
  return complete_split(p, g_val, std::move(h), params, delta, zeta, rng);
}

namespace {

FoundSplit search(const HermitianPencil& p, const GridRange& range, const SolverParams& params,
                  double delta, int zeta, RandomStream& rng) {
  const Index m = p.n();
  const Index lo_k = m / 2;
  const Index hi_k = (m + 1) / 2;
  int probes = 0;

  auto probe = [&](double g) {
    RandomStream s = rng.substream(static_cast<std::uint64_t>(probes) + 1);
    ++probes;
    return std::pair{run_probe(p, g, params, delta, zeta, s), s};
  };
  auto accept = [&](double g, std::uint64_t idx, bool refined, HalleyOutput&& h, RandomStream& s,
                    GridRange right, GridRange left) {
    FoundSplit f;
    f.outcome = complete_split(p, g, std::move(h), params, delta, zeta, s);
    f.outcome.grid_index = idx;
    f.outcome.refined = refined;
    f.probes = probes;
    f.right = right;
    f.left = left;
    return f;
  };

  std::uint64_t lo = range.lo;
  std::uint64_t hi = range.hi;
  std::optional<std::uint64_t> too_many;  // largest probed index with k > hi_k
  std::optional<std::uint64_t> too_few;   // smallest probed index with k < lo_k
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const double g = range.point(mid);
    auto [h, s] = probe(g);
    if (h.k >= lo_k && h.k <= hi_k) {
      return accept(g, mid, false, std::move(h), s, range.right_of(mid), range.left_of(mid));
    }
    if (h.k > hi_k) {
      too_many = mid;
      lo = mid + 1;
    } else {
      too_few = mid;
      hi = mid;
    }
  }

  if (params.mode == SolverMode::kPractical && params.refine_on_straddle && too_many && too_few &&
      *too_few == *too_many + 1) {
    // Two or more eigenvalues share the cell (g_j, g_{j+1}); bisect it.
    const std::uint64_t j = *too_many;
    double a = range.point(j);
    double b = range.point(j + 1);
    for (int it = 0; it < 64; ++it) {
      const double g = 0.5 * (a + b);
      if (!(g > a && g < b)) break;
      auto [h, s] = probe(g);
      if (h.k >= lo_k && h.k <= hi_k) {
        GridRange right{range.grid, j + 1, range.hi};
        GridRange left{range.grid, range.lo, j + 1};
        return accept(g, j, true, std::move(h), s, right, left);
      }
      (h.k > hi_k ? a : b) = g;
    }
  }

  std::ostringstream os;
  os << "no grid point in [" << range.lo << ", " << range.hi << ") splits m = " << m
     << " eigenvalues into halves after " << probes << " probes";
  fail(ErrorKind::kSplitFailure, os.str());
}

}  // namespace

FoundSplit find_split(const HermitianPencil& p, const GridRange& range, const SolverParams& params,
                      Seed seed) {
  const Index m = p.n();
  require(m >= 2, ErrorKind::kInvalidInput, "find_split needs m >= 2");
  require(range.grid != nullptr && !range.empty(), ErrorKind::kSplitFailure, "empty grid window");
  const int zeta = zeta_for(range.size());
  const DeltaValue delta = compute_delta(params, m, zeta);
  RandomStream rng = node_stream(seed, 1);
  return search(p, range, params, delta.value, zeta, rng);
}

FoundSplit find_split(const HermitianPencil& p, const ShatteringGrid& grid,
                      const SolverParams& params, Seed seed) {
  return find_split(p, GridRange::whole(grid), params, seed);
}

namespace {

struct Node {
  Matrix x;
  RealVector lambda_a;
  RealVector lambda_b;
  int depth = 0;
  int halley_iters = 0;
  int splits = 0;
  bool delta_clamped = false;
};

Matrix compress(const Matrix& u, const Matrix& m) {
  return linalg::hermitian_part(u.adjoint() * m * u);
}

std::string path_string(std::uint64_t path) {
  std::string s;
  const int bits = static_cast<int>(std::bit_width(path)) - 1;
  for (int i = bits - 1; i >= 0; --i) s.push_back(((path >> i) & 1U) ? 'R' : 'L');
  return s.empty() ? "root" : s;
}

Node recurse(const HermitianPencil& p, const GridRange& range, const SolverParams& params,
             Seed seed, std::uint64_t path, int depth) {
  const Index m = p.n();
  Node out;
  if (m == 1) {
    out.x = Matrix::Ones(1, 1);
    out.lambda_a = RealVector::Constant(1, p.a()(0, 0).real());
    out.lambda_b = RealVector::Constant(1, p.b()(0, 0).real());
    return out;
  }

  FoundSplit split;
  DeltaValue delta;
  try {
    require(range.grid != nullptr && !range.empty(), ErrorKind::kSplitFailure,
            "empty grid window");
    const int zeta = zeta_for(range.size());
    delta = compute_delta(params, m, zeta);
    RandomStream rng = node_stream(seed, path);
    split = search(p, range, params, delta.value, zeta, rng);
  } catch (const Error& e) {
    throw Error(e.kind(), "at recursion path " + path_string(path) + ": " + e.what());
  }

  const SplitOutcome& s = split.outcome;
  const HermitianPencil right(compress(s.u_right, p.a()), compress(s.u_right, p.b()));
  const HermitianPencil left(compress(s.u_left_of, p.a()), compress(s.u_left_of, p.b()));

  if (params.observer) {
    SplitEvent ev;
    ev.path = path;
    ev.depth = depth;
    ev.parent = &p;
    ev.right = &right;
    ev.left = &left;
    ev.outcome = &s;
    ev.probes = split.probes;
    ev.epsilon = params.epsilon;
    ev.eta = params.eta;
    ev.delta = delta.value;
    ev.l0 = params.epsilon / (2.0 * params.r * params.c);
    ev.l_target = std::clamp(1.0 - 2.0 * delta.value * params.gamma_lb / params.c, ev.l0, 1.0);
    params.observer(ev);
  }

  SolverParams child = params;
  child.epsilon = child_epsilon(params.epsilon, params.gamma_lb, params.c);
  child.eta = params.eta / 2.0;

  const bool parallel = params.threads > 1 && (1 << (depth + 1)) <= params.threads && m >= 16;
  Node nr;
  Node nl;
  if (parallel) {
    auto fut = std::async(std::launch::async, [&] {
      return recurse(right, split.right, child, seed, path << 1 | 1U, depth + 1);
    });
    nl = recurse(left, split.left, child, seed, path << 1, depth + 1);
    nr = fut.get();
  } else {
    nr = recurse(right, split.right, child, seed, path << 1 | 1U, depth + 1);
    nl = recurse(left, split.left, child, seed, path << 1, depth + 1);
  }

  const Index k = s.k;
  out.x.resize(m, m);
  out.x.leftCols(k) = s.u_right * nr.x;
  out.x.rightCols(m - k) = s.u_left_of * nl.x;
  out.lambda_a.resize(m);
  out.lambda_a << nr.lambda_a, nl.lambda_a;
  out.lambda_b.resize(m);
  out.lambda_b << nr.lambda_b, nl.lambda_b;
  out.depth = 1 + std::max(nr.depth, nl.depth);
  out.halley_iters = s.halley_iters + nr.halley_iters + nl.halley_iters;
  out.splits = 1 + nr.splits + nl.splits;
  out.delta_clamped = delta.clamped || nr.delta_clamped || nl.delta_clamped;
  return out;
}

}  // namespace

DiagonalizationResult eig_dwh(const HermitianPencil& p, const ShatteringGrid& grid,
                              const SolverParams& params, Seed seed) {
  require(params.epsilon > 0.0 && params.gamma_lb > 0.0 && params.c > 0.0 && params.r > 0.0 &&
              params.eta > 0.0 && params.theta_fail > 0.0 && params.theta_fail < 1.0,
          ErrorKind::kInvalidInput, "solver parameters must be positive (theta in (0,1))");
  require(params.n_top >= p.n(), ErrorKind::kInvalidInput, "n_top must be at least the dimension");

  Node node = recurse(p, GridRange::whole(grid), params, seed, 1, 0);

  DiagonalizationResult out;
  out.x = std::move(node.x);
  out.lambda_a = std::move(node.lambda_a);
  out.lambda_b = std::move(node.lambda_b);
  out.recursion_depth = node.depth;
  out.total_halley_iters = node.halley_iters;
  out.splits = node.splits;
  if (node.delta_clamped) {
    std::ostringstream msg;
    msg << "delta below the practical floor; clamped to " << params.delta_floor;
    out.warnings.push_back(msg.str());
  }
  const auto [ra, rb] = backward_residuals(p, out);
  out.residual_a = ra;
  out.residual_b = rb;
  return out;
}

PipelineResult diagonalize_definite(const HermitianPencil& p, double xi, double gamma_lb,
                                    PerturbationKind kind, Seed seed,
                                    const PipelineOptions& options) {
  const Index n = p.n();
  const double nn = static_cast<double>(n);
  require(p.norm_a() <= 1.0 + 1e-12 && p.norm_b() <= 1.0 + 1e-12, ErrorKind::kInvalidInput,
          "diagonalize_definite needs ||A||_2, ||B||_2 <= 1 (rescale first)");
  require(xi > 0.0 && xi < 1.0, ErrorKind::kInvalidInput, "xi must lie in (0, 1)");
  require(gamma_lb > 0.0, ErrorKind::kInvalidInput, "gamma_lb must be positive");
  require(xi < nn * gamma_lb / std::sqrt(2.0), ErrorKind::kInvalidInput,
          "xi must be below n * gamma_lb / sqrt(2)");

  PipelineResult out;
  out.mu = xi / (12.0 * nn) * (1.0 - 1e-6);
  PerturbationSpec spec;
  spec.kind = kind;
  spec.mu = out.mu;
  spec.seed = seed;
  PerturbedPencil pert = perturb(p, spec);
  out.perturbation = pert.record;
  const HermitianPencil& pt = pert.pencil;

  SolverParams& sp = out.params;
  sp.n_top = n;
  sp.mode = options.mode;
  sp.threads = options.threads;
  sp.reuse_probe_factorization = options.reuse_probe_factorization;
  sp.observer = options.observer;

  if (options.mode == SolverMode::kTheory) {
    GridBuild gb = build_shattering_grid(n, out.mu, gamma_lb, seed);
    out.grid = gb.grid;
    out.warnings = gb.warnings;
    const double mu = out.mu;
    sp.epsilon = std::pow(mu, 8) / (6.0 * std::pow(nn, 11));
    sp.gamma_lb = gamma_lb / 2.0;
    sp.c = 3.0;
    sp.r = (3.0 * std::pow(nn, 7) + 2.0 * std::pow(mu, 6)) / (2.0 * mu * std::pow(nn, 5));
    sp.eta = xi / 2.0;
    sp.theta_fail = 1.0 / nn;
    if (n == 1) sp.theta_fail = 0.5;
  } else {
    const PracticalOverrides& o = options.practical;
    sp.c = o.c.value_or(pencil_norm(pt));
    sp.gamma_lb = o.gamma.value_or(gamma_lb / 2.0);
    if (o.r) {
      sp.r = *o.r;
    } else {
      const double smin = linalg::sigma_min(pt.b());
      require(smin > 0.0, ErrorKind::kPrecondition, "perturbed B is singular");
      sp.r = 1.1 * std::max(pt.norm_a(), 1e-300) / smin;
    }
    const double omega = o.omega.value_or(2.0 * sp.r * std::ldexp(1.0, -options.grid_log2));
    require(omega > 0.0 && omega < sp.r, ErrorKind::kInvalidInput, "grid spacing must lie in (0, r)");
    sp.epsilon = o.epsilon.value_or(1e-3 * omega * sp.c);
    sp.eta = o.eta.value_or(xi / 2.0);
    sp.theta_fail = n > 1 ? 1.0 / nn : 0.5;
    if (o.rank_threshold) sp.rank_threshold = *o.rank_threshold;
    out.grid = practical_grid(-sp.r + omega, sp.r - 2.0 * omega, omega, sp.epsilon, seed);
  }

  out.result = eig_dwh(pt, out.grid, sp, seed);
  // report the backward error against the caller's pencil
  const auto [ra, rb] = backward_residuals(p, out.result);
  out.result.residual_a = ra;
  out.result.residual_b = rb;
  for (const std::string& w : out.result.warnings) out.warnings.push_back(w);
  return out;
}

}  // namespace defeig
