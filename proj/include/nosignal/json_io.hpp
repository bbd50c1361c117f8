#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "nosignal/disentangler.hpp"
#include "nosignal/entangler.hpp"
#include "nosignal/linmaps.hpp"
#include "nosignal/qcore.hpp"
#include "nosignal/sigstat.hpp"
#include "nosignal/tunnel.hpp"

// JSON forms used by every report the tool emits:
//   complex scalar   {"re": x, "im": y}
//   state literal    {"basis": [labels...], "re": [...], "im": [...]}
//   complex matrix   {"re": [[...]], "im": [[...]]}
// Subsystem numbering in JSON is 1-based, matching the basis labels
// ("H1H2"); the C++ API is 0-based throughout.

namespace nosignal::jsonio {

using json = nlohmann::ordered_json;

inline json complex_json(const cplx& z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

inline json state_json(const qcore::StateVector& s) {
  json re = json::array(), im = json::array();
  for (const cplx& a : s.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  return json{{"basis", s.space().basis_labels()}, {"re", re}, {"im", im}};
}

inline json matrix_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return json{{"re", re}, {"im", im}};
}

inline json schmidt_json(const qcore::SchmidtReport& r, std::size_t slot_count) {
  json side_a = json::array(), side_b = json::array();
  std::vector<bool> in_a(slot_count, false);
  for (std::size_t slot : r.cut.side_a) in_a[slot] = true;
  for (std::size_t slot = 0; slot < slot_count; ++slot)
    (in_a[slot] ? side_a : side_b).push_back(slot + 1);
  return json{{"rank", r.rank},
              {"coefficients", r.coefficients},
              {"cut", json{{"side_a", side_a}, {"side_b", side_b}}}};
}

inline json gram_json(const linmaps::GramReport& r) {
  return json{{"gram", matrix_json(r.gram)},
              {"is_isometry", r.is_isometry},
              {"max_deviation", r.max_deviation},
              {"per_basis_norms", r.per_basis_norms}};
}

inline json witness_json(const linmaps::NonIsometryWitness& w,
                         const qcore::Space& domain) {
  json re = json::array(), im = json::array();
  for (const cplx& a : w.input) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  return json{
      {"input", json{{"basis", domain.basis_labels()}, {"re", re}, {"im", im}}},
      {"eigenvalue", w.eigenvalue},
      {"image_norm_sq", w.image_norm_sq},
      {"worst_entry", json{{"row", w.row + 1},
                           {"col", w.col + 1},
                           {"value", complex_json(w.gram_entry)}}}};
}

inline json factor_json(const linmaps::FactorReport& r) {
  return json{{"factorable", r.factorable},
              {"best_local_factor", matrix_json(r.best_local_factor)},
              {"residual", r.residual},
              {"acted_subsystem", r.acted + 1}};
}

inline json steps_json(const std::vector<disentangler::DerivationStep>& steps) {
  json out = json::array();
  for (const auto& s : steps)
    out.push_back(json{{"claim", s.claim},
                       {"lhs", complex_json(s.lhs)},
                       {"rhs", complex_json(s.rhs)},
                       {"tolerance", s.tolerance},
                       {"holds", s.holds}});
  return out;
}

inline json verdict_json(const disentangler::AuditVerdict& v,
                         const disentangler::ShiftReport& shift) {
  return json{
      {"coefficients", json{{"a", complex_json(v.coefficients.a)},
                            {"b", complex_json(v.coefficients.b)},
                            {"c", complex_json(v.coefficients.c)},
                            {"d", complex_json(v.coefficients.d)}}},
      {"unitarity_row1", v.unitarity_row1},
      {"unitarity_row2", v.unitarity_row2},
      {"contradiction", v.contradiction},
      {"signalling", v.signalling},
      {"narrative", steps_json(v.narrative)},
      {"receiver_shift", json{{"before", shift.before},
                              {"after", shift.after},
                              {"shift", shift.shift}}}};
}

inline json entangler_params_json(const entangler::Params& p) {
  json out{{"signs", p.signs()}, {"phase2", complex_json(p.phase2)}};
  if (p.general)
    out["general"] = json{{"a", complex_json(p.general->first)},
                          {"b", complex_json(p.general->second)}};
  else
    out["general"] = nullptr;
  return out;
}

inline json entangler_audit_json(const entangler::Audit& a) {
  json out{{"params", entangler_params_json(a.params)},
           {"gram_report", gram_json(a.gram)},
           {"single_input_check",
            json{{"input", "(|Psi1> + |Psi2>)/sqrt(2)"},
                 {"image_norm", a.single_input_norm},
                 {"passes", a.single_input_check_passes}}}};
  out["witness"] = a.witness
                       ? witness_json(*a.witness, entangler::span_space())
                       : json(nullptr);
  if (!a.completion.empty()) out["completion"] = a.completion;
  return out;
}

inline json entangler_demo_json(const entangler::DemoReport& d) {
  const std::size_t slots = d.initial.space().slot_count();
  return json{{"initial", state_json(d.initial)},
              {"output", state_json(d.output)},
              {"marginal_before", d.marginal_before},
              {"marginal_after", d.marginal_after},
              {"schmidt_before", schmidt_json(d.schmidt_before, slots)},
              {"schmidt_after", schmidt_json(d.schmidt_after, slots)},
              {"extension", "identity-on-complement"}};
}

inline json schedule_json(const tunnel::Schedule& schedule) {
  json out = json::array();
  for (const auto& seg : schedule.segments()) {
    json s{{"barrier", seg.barrier == tunnel::Barrier::open ? "open" : "blocked"},
           {"begin", seg.begin}};
    s["end"] = seg.end ? json(*seg.end) : json(nullptr);
    out.push_back(s);
  }
  return out;
}

inline json trace_json(const std::vector<tunnel::TraceSample>& samples) {
  json t = json::array(), p1 = json::array(), p2 = json::array();
  json re1 = json::array(), im1 = json::array();
  json re2 = json::array(), im2 = json::array();
  for (const auto& s : samples) {
    t.push_back(s.t);
    p1.push_back(s.p1);
    p2.push_back(s.p2);
    re1.push_back(s.amp1.real());
    im1.push_back(s.amp1.imag());
    re2.push_back(s.amp2.real());
    im2.push_back(s.amp2.imag());
  }
  return json{{"t", t},   {"p1", p1},   {"p2", p2},  {"re1", re1},
              {"im1", im1}, {"re2", re2}, {"im2", im2}};
}

inline json error_report_json(const sigstat::ErrorReport& r) {
  return json{{"type1", r.type1},
              {"type2", r.type2},
              {"total_min", r.total_min},
              {"best_threshold", r.best_threshold},
              {"rule", r.rule}};
}

inline json requirement_json(const sigstat::SampleRequirement& r) {
  json out{{"possible", r.possible}, {"found", r.found}};
  if (r.possible && r.found) {
    out["n"] = r.n;
    out["k_threshold"] = r.k_threshold;
    out["type1"] = r.type1;
    out["type2"] = r.type2;
  }
  return out;
}

inline json sim_report_json(const sigstat::SimReport& r) {
  return json{{"sent", r.sent},
              {"decoded", r.decoded},
              {"success_counts", r.success_counts},
              {"empirical_error_rate", r.empirical_error_rate},
              {"seed", r.seed},
              {"rule", r.rule}};
}

}  // namespace nosignal::jsonio
