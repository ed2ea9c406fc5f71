#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lowmach/fixedpoint.hpp"

namespace lowmach {

struct SweepRow {
  double eps = 0;
  double norm_v_H3 = 0;
  double norm_theta_H3 = 0;
  double norm_eta_H2 = 0;
  double perturbation_total = 0;
  double div_v_over_eps_H1 = 0;
  double eta_plus_theta_over_eps_H2 = 0;
  double u_gap_H3 = 0;
  double pressure_gap_H2 = 0;
  double residual_total = 0;
  int outer_iters = 0;
  double wall_time = 0;
  bool converged = false;
  bool reference_fallback = false;  ///< gaps measured against the row's own (U, P)
  std::string failure;
};

struct RateFit {
  std::string column;
  double slope = 0;
  double intercept = 0;
  double residual = 0;
  int points = 0;
};

struct SweepOptions {
  FixedPointOptions solver;
  int workers = 1;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  VectorField U_ref;
  Field P_ref;
  double reference_residual = 0;
  bool reference_ok = false;
  std::vector<RateFit> fits;
  std::vector<SolveReport> reports;  ///< one per row, same order
};

/// Columns fitted after every sweep (when enough converged rows exist).
const std::vector<std::string>& fitted_columns();

/// Value of a numeric column by its CSV name.
double column_value(const SweepRow& row, const std::string& column);

/// Solves at every eps in `eps_list` (strictly decreasing) against one shared
/// incompressible reference. Throws InvalidParameter for a bad ladder and
/// GateViolation for eps above eps0 without force; per-row solver failures
/// are flagged in the rows.
SweepTable epsilon_sweep(const VectorField& f, const VectorField& g, const FluidParams& p_base,
                         const std::vector<double>& eps_list, const SweepOptions& opts);

/// Least-squares slope of log(value) against log(eps) over converged rows with
/// finite positive entries. Throws InsufficientData below three points.
RateFit fit_rate(const SweepTable& table, const std::string& column);
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values, const std::string& column = "");

/// (||u - U_ref||_3, ||P + (eta + theta)/eps - P_ref||_2).
std::pair<double, double> limit_compare(const SplitState& s, const VectorField& U_ref, const Field& P_ref,
                                        double eps);

struct SweepCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The sweep invariants: convergence of every row, reference residual,
/// monotone perturbation and gaps, the linear rate, and the halving of the
/// two scaled limit quantities on ladders spanning at least 8x.
std::vector<SweepCheck> sweep_invariants(const SweepTable& table);

extern const char* const kSweepCsvHeader;

/// One line per row in ladder order, %.17g numbers. wall_time_s is written as
/// 0 unless `timing` is set so that repeated runs compare byte for byte.
void write_sweep_csv(const SweepTable& table, std::ostream& out, bool timing = false);

}  // namespace lowmach
