#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gpbf/draws.hpp"
#include "gpbf/inference.hpp"

namespace gpbf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSpecVersion = "1";

inline Json to_json(const Diagnostic& d) {
  return Json{{"check", d.check},
              {"warning", d.warning},
              {"detail", d.detail},
              {"value", d.value}};
}

inline Json to_json(const BayesFactorResult& r) {
  return Json{{"method", to_string(r.method)},
              {"s_xi", r.s_xi},
              {"g", r.g},
              {"log_bf01", r.log_bf01},
              {"bf01", r.bf01()},
              {"log_m0", r.log_m0},
              {"log_m1", r.log_m1},
              {"post_prob_m0", r.post_prob_m0()},
              {"post_prob_m1", 1.0 - r.post_prob_m0()},
              {"mc_se", r.mc_se},
              {"ess", r.ess},
              {"n_eval", r.n_eval},
              {"jitter_events", r.jitter_events}};
}

inline Json to_json(const SignProbs& s) {
  return Json{{"p_pos", s.p_pos},     {"p_neg", s.p_neg},
              {"p_comp", s.p_comp},   {"n_pos", s.n_pos},
              {"n_neg", s.n_neg},     {"n_draws", s.n_draws}};
}

namespace detail {
inline Json bf_value(double v) {
  if (std::isinf(v)) return Json("inf");
  return Json(v);
}
}  // namespace detail

inline Json to_json(const OneSidedResult& r) {
  return Json{{"prior", to_json(r.prior)},
              {"posterior", to_json(r.posterior)},
              {"bf_pos_u", detail::bf_value(r.bf_pos_u)},
              {"bf_neg_u", detail::bf_value(r.bf_neg_u)},
              {"bf_comp_u", detail::bf_value(r.bf_comp_u)},
              {"bf_pos_neg", detail::bf_value(r.bf_pos_neg)},
              {"bf_pos_comp", detail::bf_value(r.bf_pos_comp)},
              {"bf_neg_comp", detail::bf_value(r.bf_neg_comp)},
              {"any_infinite", r.any_infinite},
              {"prior_zero_bound", r.prior_zero_bound}};
}

// Full machine-readable record of one CLI run.
struct RunReport {
  std::string command;
  Json config;
  Json dataset_summary;
  std::vector<Json> results;      // one BayesFactorResult per scale
  Json one_sided;                 // null unless cmd_onesided
  std::vector<std::string> artifacts;

  Json to_json() const {
    Json j;
    j["spec_version"] = kReportSpecVersion;
    j["command"] = command;
    j["config"] = config;
    j["dataset"] = dataset_summary;
    j["results"] = results;
    j["one_sided"] = one_sided.is_null() ? Json() : one_sided;
    j["artifacts"] = artifacts;
    return j;
  }
};

inline Json dataset_summary_json(const Dataset& d,
                                 const std::vector<Diagnostic>& diags) {
  Json arr = Json::array();
  for (const auto& dg : diags) arr.push_back(to_json(dg));
  return Json{{"n", d.n()},
              {"k", d.k()},
              {"range_x", d.range_x()},
              {"diagnostics", arr}};
}

}  // namespace gpbf
