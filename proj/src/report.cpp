#include "lowmach/report.hpp"

#include <Eigen/Core>

namespace lowmach {

using nlohmann::json;

namespace {

json versions() {
  return {{"lowmach", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

json energy_json(const EnergyDiagnostics& e) {
  return {{"B_quadratic", e.B_quadratic},
          {"lower_bound_norms", e.lower_bound_norms},
          {"coercivity_ratio", e.coercivity_ratio},
          {"skew_residual", e.skew_residual}};
}

json row_json(const SweepRow& r) {
  return {{"eps", r.eps},
          {"norm_v_H3", r.norm_v_H3},
          {"norm_theta_H3", r.norm_theta_H3},
          {"norm_eta_H2", r.norm_eta_H2},
          {"perturbation_total", r.perturbation_total},
          {"div_v_over_eps_H1", r.div_v_over_eps_H1},
          {"eta_plus_theta_over_eps_H2", r.eta_plus_theta_over_eps_H2},
          {"u_gap_H3", r.u_gap_H3},
          {"pressure_gap_H2", r.pressure_gap_H2},
          {"residual_total", r.residual_total},
          {"outer_iters", r.outer_iters},
          {"wall_time_s", r.wall_time},
          {"converged", r.converged},
          {"reference_fallback", r.reference_fallback},
          {"failure", r.failure}};
}

}  // namespace

json config_json(const RunConfig& c) {
  json modes = json::array();
  for (const auto& m : c.forcing_modes)
    modes.push_back({{"target", std::string(1, m.target)},
                     {"comp", m.comp == 0 ? "x" : "y"},
                     {"kx", m.kx},
                     {"ky", m.ky},
                     {"re", m.re},
                     {"im", m.im}});
  return {{"n", c.n},
          {"dealias_fraction", c.dealias_fraction},
          {"mu", c.mu},
          {"lambda", c.lambda},
          {"kappa", c.kappa},
          {"eps", c.eps},
          {"eps_list", c.eps_list},
          {"forcing", c.forcing},
          {"forcing_amplitude", c.forcing_amplitude},
          {"forcing_k", c.forcing_k},
          {"forcing_modes", modes},
          {"tol", c.tol},
          {"max_outer", c.max_outer},
          {"max_inner", c.max_inner},
          {"omega", c.omega},
          {"delta", c.delta},
          {"a0", c.a0},
          {"E", c.E},
          {"eps0", c.eps0},
          {"lin_gate", c.lin_gate},
          {"seed", c.seed},
          {"workers", c.workers},
          {"trials", c.trials},
          {"mms_case", c.mms_case},
          {"timing", c.timing},
          {"out", c.out}};
}

json residual_json(const ResidualReport& r) {
  json eqs = json::array();
  for (const auto& e : r.equations) eqs.push_back({{"name", e.name}, {"l2", e.l2}, {"h1", e.h1}, {"k0", e.k0}});
  return {{"total", r.total}, {"k0_total", r.k0_total()}, {"equations", eqs}};
}

json solve_report_json(const SolveReport& r, const RunConfig& config) {
  json diffs = json::array();
  for (const auto& d : r.diffs)
    diffs.push_back({{"dU_H1", d.dU_H1},
                     {"dv_H1", d.dv_H1},
                     {"dtheta_H1", d.dtheta_H1},
                     {"deta_L2", d.deta_L2},
                     {"total", d.total}});
  json membership = json::array();
  for (const auto& m : r.membership)
    membership.push_back({{"K0_ratios", m.K0_ratios},
                          {"v_theta_H3", m.v_theta_H3},
                          {"E_gate", m.E_gate},
                          {"inside_K1", m.inside_K1}});
  const SplitState& s = r.state;
  return {{"kind", "solve"},
          {"converged", r.converged},
          {"failure", r.failure},
          {"outer_iters", r.outer_iters},
          {"residual_transformed", r.residual_transformed},
          {"residual_primitive", r.residual_primitive},
          {"transformed", residual_json(r.transformed)},
          {"final_norm", r.final_norm},
          {"norms",
           {{"U_H3", sobolev_norm(s.U, 3)},
            {"P_H2", sobolev_norm(s.P, 2)},
            {"v_H3", sobolev_norm(s.v, 3)},
            {"eta_H2", sobolev_norm(s.eta, 2)},
            {"theta_H3", sobolev_norm(s.theta, 3)},
            {"mean_P", s.P.mean()},
            {"mean_eta", s.eta.mean()}}},
          {"diffs", diffs},
          {"contraction_ratios", r.contraction.ratios},
          {"contraction_geometric", r.contraction.geometric},
          {"k0_discard", r.k0_discard},
          {"membership", membership},
          {"energy_at_solution", energy_json(r.energy_at_solution)},
          {"coercivity",
           {{"trials", r.coercivity.trials},
            {"min_ratio", r.coercivity.min_ratio},
            {"max_ratio", r.coercivity.max_ratio},
            {"worst", energy_json(r.coercivity.worst)}}},
          {"wall_time_s", r.wall_time},
          {"config", config_json(config)},
          {"versions", versions()}};
}

json sweep_report_json(const SweepTable& t, const std::vector<SweepCheck>& checks, const RunConfig& config) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back(row_json(r));
  json fits = json::array();
  for (const auto& f : t.fits)
    fits.push_back(
        {{"column", f.column}, {"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"points", f.points}});
  json cs = json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json k0 = json::array();
  for (const auto& r : t.reports) k0.push_back(r.k0_discard.empty() ? json::array() : json(r.k0_discard.back()));
  return {{"kind", "sweep"},
          {"rows", rows},
          {"fits", fits},
          {"checks", cs},
          {"reference", {{"residual", t.reference_residual}, {"ok", t.reference_ok}}},
          {"final_k0_discard", k0},
          {"config", config_json(config)},
          {"versions", versions()}};
}

json mms_report_json(const MmsResult& m, const RunConfig& config) {
  json rows = json::array();
  for (const auto& r : m.rows) rows.push_back({{"quantity", r.quantity}, {"value", r.value}, {"threshold", r.threshold}});
  return {{"kind", "mms"},
          {"case", m.name},
          {"passed", m.passed},
          {"errors", rows},
          {"config", config_json(config)},
          {"versions", versions()}};
}

json check_report_json(const std::vector<CheckResult>& results, const RunConfig& config) {
  json rs = json::array();
  bool all = true;
  for (const auto& r : results) {
    rs.push_back({{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  return {{"kind", "check"}, {"passed", all}, {"results", rs}, {"config", config_json(config)}, {"versions", versions()}};
}

}  // namespace lowmach
