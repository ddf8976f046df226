#pragma once

// Numeric cross-check of structural verdicts: sample real matrices from a
// pattern class and estimate the fixed modes of (A, B, C) under K by
// intersecting closed-loop spectra over random admissible gains.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <tuple>
#include <vector>

#include "sfmkit/analysis.hpp"
#include "sfmkit/error.hpp"
#include "sfmkit/system.hpp"

namespace sfmkit {

inline constexpr double min_sample_magnitude = 0.1;
inline constexpr double default_spectrum_tolerance = 1e-6;

struct NumericInstance {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd c;
};

struct FixedModeEstimate {
  std::vector<std::complex<double>> candidate_modes;
  std::size_t trials = 0;
  double tolerance = 0.0;
};

namespace detail {

/// SplitMix64 step, used to derive independent sub-seeds from one user seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform on [-1, -0.1] u [0.1, 1]. Bit-level mapping so the stream is the
/// same on every standard library.
inline double sample_nonzero(std::mt19937_64& rng) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double magnitude = min_sample_magnitude + (1.0 - min_sample_magnitude) * unit;
  return (rng() & 1U) ? -magnitude : magnitude;
}

inline Eigen::MatrixXd sample_with(const StructuralPattern& pattern, std::mt19937_64& rng) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pattern.rows()),
                                            static_cast<Eigen::Index>(pattern.cols()));
  for (const Entry& e : pattern.entries())
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = sample_nonzero(rng);
  return m;
}

inline std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("eigenvalue computation did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return std::tuple(x.real(), x.imag()) < std::tuple(y.real(), y.imag());
  });
  return out;
}

/// Keeps the candidates that pair with a distinct eigenvalue of `spec` within
/// `tol`; pairs are taken greedily in order of increasing distance.
inline std::vector<std::complex<double>> intersect_spectra(const std::vector<std::complex<double>>& candidates,
                                                           const std::vector<std::complex<double>>& spec,
                                                           double tol) {
  struct Pair {
    double dist;
    std::size_t c, s;
  };
  std::vector<Pair> pairs;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (std::size_t s = 0; s < spec.size(); ++s) {
      const double d = std::abs(candidates[c] - spec[s]);
      if (d <= tol) pairs.push_back({d, c, s});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return std::tie(x.dist, x.c, x.s) < std::tie(y.dist, y.c, y.s);
  });
  std::vector<char> c_used(candidates.size(), 0), s_used(spec.size(), 0);
  for (const Pair& p : pairs) {
    if (c_used[p.c] || s_used[p.s]) continue;
    c_used[p.c] = s_used[p.s] = 1;
  }
  std::vector<std::complex<double>> kept;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (c_used[c]) kept.push_back(candidates[c]);
  return kept;
}

}  // namespace detail

/// Real matrix in the class of `pattern`; deterministic in `seed`.
inline Eigen::MatrixXd sample_instance(const StructuralPattern& pattern, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::sample_with(pattern, rng);
}

inline NumericInstance sample_system(const StructuralSystem& sys, std::uint64_t seed) {
  return {sample_instance(sys.a(), detail::mix_seed(seed)), sample_instance(sys.b(), detail::mix_seed(seed + 1)),
          sample_instance(sys.c(), detail::mix_seed(seed + 2))};
}

/// Eigenvalues common to A + B K C for `trials` gains K drawn from [k]. The
/// tolerance scales with max(1, spectral radius of the first closed loop).
inline FixedModeEstimate estimate_fixed_modes(const NumericInstance& inst, const InformationPattern& k,
                                              std::size_t trials, double tol, std::uint64_t seed) {
  if (trials < 2) throw InvalidArgument("fixed-mode estimation needs at least 2 trials");
  if (inst.b.cols() != static_cast<Eigen::Index>(k.rows()) || inst.c.rows() != static_cast<Eigen::Index>(k.cols()))
    throw DimensionError("gain pattern " + k.shape_string() + " does not fit the numeric instance");
  std::mt19937_64 rng(detail::mix_seed(seed));
  auto closed_loop = [&] { return Eigen::MatrixXd(inst.a + inst.b * detail::sample_with(k, rng) * inst.c); };

  FixedModeEstimate est;
  est.trials = trials;
  est.candidate_modes = detail::spectrum(closed_loop());
  double radius = 1.0;
  for (const auto& z : est.candidate_modes) radius = std::max(radius, std::abs(z));
  est.tolerance = tol * radius;
  for (std::size_t t = 1; t < trials && !est.candidate_modes.empty(); ++t)
    est.candidate_modes = detail::intersect_spectra(est.candidate_modes, detail::spectrum(closed_loop()), est.tolerance);
  return est;
}

struct CrossValidation {
  bool structurally_feasible = false;
  bool numeric_fixed_modes = false;  // after the re-run, if one happened
  bool agree = false;
  bool reran = false;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tolerance = 0.0;
  FixedModeEstimate estimate;
};

/// Structural verdict vs. Monte-Carlo estimate on one sampled instance. A
/// feasible pattern whose estimate is non-empty is re-checked with twice the
/// trials and fresh gains before the disagreement stands.
inline CrossValidation cross_validate(const StructuralSystem& sys, const InformationPattern& k, std::size_t trials,
                                      double tol, std::uint64_t seed) {
  CrossValidation cv;
  cv.seed = seed;
  cv.trials = trials;
  cv.tolerance = tol;
  cv.structurally_feasible = is_feasible(sys, k);
  const NumericInstance inst = sample_system(sys, seed);
  cv.estimate = estimate_fixed_modes(inst, k, trials, tol, seed ^ 0x5bd1e995ULL);
  if (cv.structurally_feasible && !cv.estimate.candidate_modes.empty()) {
    cv.reran = true;
    cv.estimate = estimate_fixed_modes(inst, k, 2 * trials, tol, detail::mix_seed(seed ^ 0x27d4eb2fULL));
  }
  cv.numeric_fixed_modes = !cv.estimate.candidate_modes.empty();
  cv.agree = cv.structurally_feasible != cv.numeric_fixed_modes;
  return cv;
}

}  // namespace sfmkit
