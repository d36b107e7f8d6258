#pragma once

// JSON forms of the library's reports. Every top-level document written by
// the command-line tool carries "schema": "1".

#include <json.hpp>

#include "pangles/altproj.hpp"
#include "pangles/ddm1d.hpp"
#include "pangles/io.hpp"
#include "pangles/projector_algebra.hpp"
#include "pangles/ritz.hpp"

namespace pangles {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline void to_json(json& j, const Cluster& c) { j = {{"value", c.value}, {"mult", c.mult}}; }

inline void to_json(json& j, const AngleMultiset& m) {
  j = json::array();
  for (const auto& c : m.entries()) j.push_back({{"theta", c.value}, {"mult", c.mult}});
}

inline void to_json(json& j, const CheckItem& c) {
  j = {{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}};
}

inline void to_json(json& j, const CheckResult& r) {
  j = {{"pass", r.pass()}, {"worst_margin", r.worst_margin()}, {"items", r.items}};
}

inline void to_json(json& j, const AngleReport& r) {
  j = {{"angles_fg", r.directed_fg},
       {"angles_gf", r.directed_gf},
       {"between", r.between},
       {"gap", r.gap},
       {"friedrichs_cos", optional_json(r.friedrichs_cos)},
       {"min_gap", optional_json(r.min_gap)},
       {"corner_dims",
        {{"m00", r.corner_dims.m00}, {"m01", r.corner_dims.m01}, {"m10", r.corner_dims.m10}, {"m11", r.corner_dims.m11}}},
       {"zero_cluster_nonempty", r.zero_cluster_nonempty}};
}

inline void to_json(json& j, const SpectrumReport& r) {
  j = {{"predicted", r.predicted},
       {"computed", r.computed},
       {"predicted_clusters", r.predicted_clusters},
       {"computed_clusters", r.computed_clusters},
       {"hausdorff", r.hausdorff},
       {"max_deviation", r.max_deviation},
       {"multiplicities_match", r.multiplicities_match},
       {"interval_enclosure", optional_json(r.interval_enclosure)},
       {"pass", r.pass}};
}

inline void to_json(json& j, const PolarW& w) {
  j = {{"W", matrix_to_json(w.W)},
       {"gap_ok", w.gap_ok},
       {"residuals",
        {{"orthogonality", w.residuals.orthogonality},
         {"polar", w.residuals.polar},
         {"product_equivalence", w.residuals.product_equivalence},
         {"projector_equivalence", optional_json(w.residuals.projector_equivalence)}}}};
}

/// Principal pair with the matched vectors in original coordinates.
inline void to_json(json& j, const PrincipalPair& p) {
  j = {{"theta", p.theta}, {"U", matrix_to_json(p.U.basis())}, {"V", matrix_to_json(p.V.basis())}};
}

inline void to_json(json& j, const InvariantPair& p) {
  j = {{"U", matrix_to_json(p.U.basis())},
       {"V", matrix_to_json(p.V.basis())},
       {"angles", p.angles},
       {"condition", p.condition},
       {"checks", p.checks}};
}

inline void to_json(json& j, const RitzReport& r) {
  j = {{"ritz_f", r.ritz_f},       {"ritz_g", r.ritz_g}, {"hausdorff", r.hausdorff},
       {"bound", r.bound},         {"margin", r.margin}, {"variant", to_string(r.variant)},
       {"contained", r.contained}, {"pass", r.pass}};
}

inline void to_json(json& j, const SolveTrace& t) {
  json steps = json::array();
  for (std::size_t k = 0; k < t.energy.size(); ++k)
    steps.push_back({{"k", k}, {"energy", t.energy[k]}, {"residual", t.residual_norms[k]}});
  j = {{"trace", std::move(steps)},
       {"iterations", t.iterations},
       {"iterations_to_tol", optional_json(t.iterations_to_tol)},
       {"breakdown", t.breakdown},
       {"limit_vector", std::vector<double>(t.limit_vector.data(), t.limit_vector.data() + t.limit_vector.size())},
       {"energy_identity_residual", optional_json(t.energy_identity_residual)},
       {"optimality_excess", optional_json(t.optimality_excess)},
       {"limit_error", optional_json(t.limit_error)}};
}

inline std::string trace_csv(const SolveTrace& t) {
  std::ostringstream out;
  out << std::setprecision(17) << "k,energy,residual\n";
  for (std::size_t k = 0; k < t.energy.size(); ++k) out << k << ',' << t.energy[k] << ',' << t.residual_norms[k] << '\n';
  return out.str();
}

inline void to_json(json& j, const DdmSummary& s) {
  j = {{"alpha", s.alpha},
       {"beta", s.beta},
       {"h", s.h},
       {"cos2_analytic", s.cos2_analytic},
       {"cos2_numeric", s.cos2_numeric},
       {"richardson_factor", s.richardson_factor},
       {"cg_iters_mult", optional_json(s.cg_iters_mult)},
       {"cg_iters_add", optional_json(s.cg_iters_add)},
       {"null_dim_add", s.null_dim_add},
       {"spectrum_mismatch_mult", s.spectrum_mismatch_mult},
       {"spectrum_mismatch_add", s.spectrum_mismatch_add}};
}

inline std::string ddm_summary_csv(const DdmSummary& s) {
  std::ostringstream out;
  out << std::setprecision(17)
      << "alpha,beta,h,cos2_analytic,cos2_numeric,richardson_factor,cg_iters_mult,cg_iters_add\n"
      << s.alpha << ',' << s.beta << ',' << s.h << ',' << s.cos2_analytic << ',' << s.cos2_numeric << ','
      << s.richardson_factor << ',' << (s.cg_iters_mult ? std::to_string(*s.cg_iters_mult) : "") << ','
      << (s.cg_iters_add ? std::to_string(*s.cg_iters_add) : "") << '\n';
  return out.str();
}

}  // namespace pangles
