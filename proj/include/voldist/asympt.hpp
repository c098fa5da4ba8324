#pragma once

#include <span>
#include <vector>

#include "voldist/affine.hpp"
#include "voldist/volume_distance.hpp"

namespace voldist {

/// Log-log least-squares slope of values against ts. When every value sits
/// below `floor` the quantity vanishes identically (up to roundoff) and no
/// exponent is meaningful; `vanishing` is set and `exponent` is +inf.
struct OrderFit {
  double exponent = 0.0;
  bool vanishing = false;
};

OrderFit fit_order(std::span<const double> ts, std::span<const double> values, double floor);

/// t_k = t0 * ratio^k, k = 0..count-1.
std::vector<double> geometric_ladder(double t0, double ratio, int count);

/// Largest height t such that the section of the normalized body through
/// (0, ..., 0, t) parallel to z = 0 is admissible.
double admissible_reach(const Body& normalized, const Rules& rules);

struct CentroidCurveSample {
  double t = 0.0;
  Vec gamma;
  Vec Z;          // gamma - q - t xi (ambient, lies in T_qM)
  Vec Z_tangent;  // Z in the tangent basis of nf
  double b = 0.0;
};

/// Centroid of the section through q + t xi(q) parallel to T_qM.
CentroidCurveSample centroid_curve(const Body& body, const NormalForm& nf, double t, const Rules& rules);
CentroidCurveSample centroid_curve(const Body& body, const Vec& q, double t, const Rules& rules);

struct ExpansionFit {
  std::vector<double> ts;
  std::vector<Mat> Qs;       // normalized frame
  std::vector<double> bs;
  std::vector<Vec> centroids;  // section centroid offsets in normalized coordinates
  Mat Q0, Q1;
  int fit_points = 0;
  std::vector<double> residuals;  // |Q(t) - Q0 - t Q1|
  OrderFit order_resid;
  OrderFit order_Z;               // of |centroid offset|
};

/// Q = hessV / b of horizontal sections z = t of the normalized body, frame
/// centered at the section centroid.
ExpansionFit q_ladder(const Body& body, const NormalForm& nf, std::span<const double> ts, const Rules& rules);

/// Entrywise least squares Q ~ Q0 + t Q1 on the finest half (at least 4
/// points) of the ladder.
ExpansionFit fit_expansion(ExpansionFit fit);

struct LadderSpec {
  double t0 = 0.0;  // <= 0: 0.2 * admissible reach
  double ratio = 0.5;
  int count = 8;
};

struct RateReport {
  NormalForm nf;
  ExpansionFit fit;
  double q0_err = 0.0;             // |Q0 - I| (max entry)
  OrderFit order_first;            // of |Q(t) - I|
  OrderFit order_second;           // of |Q(t) - I - t A|
  double q1_err_minus_hS = 0.0;     // |Q1 + hS| / |hS|, with Q1 = A = -hS
  double q1_err_plus_hS = 0.0;      // |Q1 - hS| / |hS|, the opposite sign convention
  double q1_err_abs = 0.0;          // |Q1 + hS|
};

RateReport check_rate_theorem(const Body& body, const Vec& q, const Rules& rules, const LadderSpec& ladder = {});

struct CurveDerivatives {
  double t = 0.0;
  CentroidCurveSample sample;
  MinimizingPair pair;
  double v = 0.0;
  double v_t = 0.0;       // central difference along the centroid curve
  Vec Dv;                 // b n at the pair
  double diag_ratio = 0.0;
  double conormal_err = 0.0;
};

/// Derivative data of v along the centroid curve at parameter t.
CurveDerivatives curve_derivatives(const Body& body, const NormalForm& nf, double t, const Rules& rules,
                                   const SolverOptions& opts = {});

struct DiagonalReport {
  std::vector<double> ts;
  std::vector<double> ratios;
  OrderFit decay;
};

DiagonalReport check_diagonal(const Body& body, const Vec& q, std::span<const double> ts, const Rules& rules,
                              const SolverOptions& opts = {});

/// |Dv(p) - v_t nu(q)| / |Dv(p)| at p = gamma_q(t).
double check_grad_conormal(const Body& body, const Vec& q, double t, const Rules& rules,
                           const SolverOptions& opts = {});

}  // namespace voldist
