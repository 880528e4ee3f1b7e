#include "pwave/report_json.hpp"

#include <cmath>

namespace pwave {
namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_or_null(v(i)));
  return a;
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vec(m.row(i).transpose())));
  return rows;
}

Json to_json(const std::vector<std::complex<double>>& values) {
  Json a = Json::array();
  for (const auto& z : values) a.push_back({z.real(), z.imag()});
  return a;
}

Json to_json(const BrinkmannPoint& p) { return {{"v", p.v}, {"x", to_json(p.x)}, {"u", p.u}}; }

Json to_json(const HeisElement& h) {
  return {{"alpha", to_json(h.alpha)}, {"beta", to_json(h.beta)}, {"z", h.z}};
}

Json to_json(const ConfGroupElement& g) {
  return {{"t_H", g.t_H}, {"t_L", g.t_L}, {"k", to_json(g.k)}, {"x", to_json(g.x)}};
}

Json to_json(const SpectralReport& r) {
  return {{"type", to_string(r.type)},
          {"eigenvalues", to_json(r.eigenvalues)},
          {"diagnostic", r.diagnostic}};
}

Json to_json(const FlatnessReport& r) {
  return {{"verdict", r.conformally_flat ? "conformally_flat" : "not_conformally_flat"},
          {"measure", r.measure},
          {"max_component", r.max_component},
          {"witness_point", to_json(r.witness_point)},
          {"witness_index", r.witness_index},
          {"tolerance", r.tolerance},
          {"dim", r.dim},
          {"samples", r.per_sample.size()}};
}

Json to_json(const ParallelReport& r) {
  return {{"field", r.field},
          {"max_norm", r.max_norm},
          {"witness_point", to_json(r.witness_point)},
          {"null_everywhere", r.null_everywhere},
          {"tolerance", r.tolerance},
          {"verdict", r.parallel && r.null_everywhere ? "parallel_null" : "fail"}};
}

Json to_json(const SimilarityReport& r) {
  return {{"name", r.name},
          {"factor", r.factor ? Json(*r.factor) : Json(nullptr)},
          {"max_residual", r.max_residual},
          {"samples", r.samples},
          {"verdict", to_string(r.verdict)},
          {"tolerance", r.tolerance}};
}

Json to_json(const PropernessReport& r, bool include_grid) {
  Json j = {{"cond_pL", r.cond_pL},
            {"cond_intersection_at_0", r.cond_intersection_at_0},
            {"cond_intersection_d0", r.cond_intersection_d0},
            {"cond_dim", r.cond_dim},
            {"dim_n0", r.dim_n0},
            {"rank_stacked", r.rank_stacked},
            {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
            {"min_transversality", number_or_null(r.min_transversality)},
            {"argmin_t", r.argmin_t},
            {"tail_min", number_or_null(r.tail_min)},
            {"grid", {{"t_min", r.grid.t_min}, {"t_max", r.grid.t_max}, {"count", r.grid.count}}},
            {"threshold", r.threshold},
            {"verdict", to_string(r.verdict)},
            {"reason", r.reason}};
  if (include_grid) j["d"] = r.d_values;
  return j;
}

Json to_json(const LatticeCertificate& c) {
  return {{"verdict", to_string(c.verdict)},
          {"char_poly", c.char_poly},
          {"max_integrality_defect", c.max_integrality_defect},
          {"offending_coefficient",
           c.offending_coefficient ? Json(*c.offending_coefficient) : Json(nullptr)},
          {"basis", to_json(c.basis)},
          {"integer_action", to_json(c.integer_action)},
          {"verification_residual", c.verification_residual},
          {"basis_condition", c.basis_condition},
          {"tolerance", c.tolerance},
          {"reason", c.reason}};
}

Json to_json(const GammaValidation& v) {
  return {{"abelian", v.abelian},
          {"max_commutator", v.max_commutator},
          {"normalized", v.normalized},
          {"normalization_residual", v.normalization_residual},
          {"center_free", v.center_free},
          {"issues", v.issues},
          {"ok", v.ok()}};
}

Json to_json(const OrbitReport& r) {
  return {{"min_displacement", number_or_null(r.min_displacement)},
          {"witness_word", r.witness_word},
          {"words_enumerated", r.words_enumerated},
          {"identity_words_skipped", r.identity_words_skipped},
          {"word_length", r.word_length},
          {"note", r.note}};
}

Json to_json(const GaugeReport& r) {
  Json per = Json::array();
  for (const auto& e : r.per_element)
    per.push_back({{"name", e.name},
                   {"residual", e.residual},
                   {"verdict", e.isometry ? "isometry" : "not_isometry"}});
  return {{"b", r.b},
          {"alpha", r.alpha},
          {"variant", to_string(r.variant)},
          {"tolerance", r.tolerance},
          {"samples", r.samples},
          {"per_element", per}};
}

Json to_json(const ContractionReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"min_norm", r.min_norm},
          {"max_norm", r.max_norm},
          {"iterations", r.norms.empty() ? 0 : r.norms.size() - 1}};
}

}  // namespace pwave
