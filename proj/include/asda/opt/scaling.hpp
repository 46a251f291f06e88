#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "asda/core/error.hpp"
#include "asda/core/value.hpp"

namespace asda::opt {

// Parameters of the error law  e(n) = D * n^(-alpha) + C.
struct ScalingLawParams {
  double coeff_d = 0.0;        // D
  double alpha = 0.0;          // pre-training rate
  double transfer_gap_c = 0.0; // irreducible error floor
  double fit_sse = 0.0;

  double error_at(double n) const {
    return coeff_d * std::pow(n, -alpha) + transfer_gap_c;
  }
};

struct SizeErrorPoint {
  double n = 0;  // dataset size
  double e = 0;  // test error
};

namespace detail {

struct FitEval {
  double d = 0, sse = 0;
};

// Closed-form nonnegative least squares for D given (alpha, C).
inline FitEval eval_fit(const std::vector<SizeErrorPoint>& pts, double alpha, double c) {
  double sxx = 0, sxy = 0;
  for (const SizeErrorPoint& p : pts) {
    double x = std::pow(p.n, -alpha);
    sxx += x * x;
    sxy += x * (p.e - c);
  }
  double d = sxx > 0 ? std::max(0.0, sxy / sxx) : 0.0;
  double sse = 0;
  for (const SizeErrorPoint& p : pts) {
    double r = p.e - d * std::pow(p.n, -alpha) - c;
    sse += r * r;
  }
  return {d, sse};
}

}  // namespace detail

constexpr double kAlphaGridLo = 0.05;
constexpr double kAlphaGridHi = 2.0;
constexpr double kAlphaGridStep = 0.01;
constexpr int kCGridSteps = 101;

// Grid search over (alpha, C) with D solved in closed form, then one local
// refinement pass at 10x resolution around the grid optimum. Bounded and
// deterministic, so a finer grid can check it independently.
inline ScalingLawParams fit_scaling_law(const std::vector<SizeErrorPoint>& points) {
  if (points.size() < 3) throw Error(Errc::InsufficientPoints, "need at least 3 points");
  double min_e = points[0].e;
  bool all_same_n = true;
  for (const SizeErrorPoint& p : points) {
    if (!(p.n >= 1)) throw Error(Errc::InvalidParams, "sizes must be >= 1");
    if (!(p.e > 0 && p.e < 1)) throw Error(Errc::InvalidParams, "errors must be in (0,1)");
    min_e = std::min(min_e, p.e);
    all_same_n = all_same_n && p.n == points[0].n;
  }
  if (all_same_n) throw Error(Errc::DegenerateFit, "all dataset sizes are equal");

  double c_step = min_e / kCGridSteps;
  double best_sse = 1e300, best_alpha = kAlphaGridLo, best_c = 0, best_d = 0;
  for (double alpha = kAlphaGridLo; alpha <= kAlphaGridHi + 1e-12; alpha += kAlphaGridStep)
    for (int j = 0; j < kCGridSteps; ++j) {
      double c = j * c_step;
      detail::FitEval fit = detail::eval_fit(points, alpha, c);
      if (fit.sse < best_sse) {
        best_sse = fit.sse;
        best_alpha = alpha;
        best_c = c;
        best_d = fit.d;
      }
    }

  // refinement at 10x resolution around the optimum
  double a_lo = std::max(kAlphaGridLo, best_alpha - kAlphaGridStep);
  double a_hi = std::min(kAlphaGridHi, best_alpha + kAlphaGridStep);
  double c_lo = std::max(0.0, best_c - c_step);
  double c_hi = std::min(min_e - 1e-12, best_c + c_step);
  for (double alpha = a_lo; alpha <= a_hi + 1e-12; alpha += kAlphaGridStep / 10.0)
    for (double c = c_lo; c <= c_hi + 1e-12; c += c_step / 10.0) {
      detail::FitEval fit = detail::eval_fit(points, alpha, c);
      if (fit.sse < best_sse) {
        best_sse = fit.sse;
        best_alpha = alpha;
        best_c = c;
        best_d = fit.d;
      }
    }

  ScalingLawParams out;
  out.coeff_d = best_d;
  out.alpha = best_alpha;
  out.transfer_gap_c = best_c;
  out.fit_sse = best_sse;
  return out;
}

// Inverts the law: the smallest n with predicted error <= e* = 1 - v_star.
inline std::uint64_t estimate_data_requirement(const ScalingLawParams& params, double v_star) {
  double e_star = 1.0 - v_star;
  if (!(e_star > params.transfer_gap_c))
    throw Error(Errc::Unreachable,
                "target error " + format_number(e_star) + " is at or below the transfer gap " +
                    format_number(params.transfer_gap_c));
  if (params.coeff_d <= 0 || params.alpha <= 0) return 1;
  double n = std::pow(params.coeff_d / (e_star - params.transfer_gap_c), 1.0 / params.alpha);
  if (!(n >= 1)) return 1;
  return std::uint64_t(std::ceil(n));
}

struct Decision {
  enum class Kind { IncreaseSize, ChangeSetting };
  Kind kind = Kind::IncreaseSize;
  std::uint64_t n_star = 0;  // only for IncreaseSize

  bool operator==(const Decision& o) const { return kind == o.kind && n_star == o.n_star; }
};

// Low alpha or a transfer gap at/above the target error means more data
// cannot help; otherwise grow to the inverted requirement.
inline Decision decide_action(const ScalingLawParams& params, double v_star, double alpha_min) {
  if (params.alpha < alpha_min || params.transfer_gap_c >= 1.0 - v_star)
    return {Decision::Kind::ChangeSetting, 0};
  return {Decision::Kind::IncreaseSize, estimate_data_requirement(params, v_star)};
}

}  // namespace asda::opt
