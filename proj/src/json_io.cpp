#include "thetaver/json_io.hpp"

namespace thetaver {

using nlohmann::json;

json complex_to_json(const Complex& v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

json tau_to_json(const Eigen::MatrixXcd& tau) {
  const int g = static_cast<int>(tau.rows());
  json re = json::array(), im = json::array();
  for (int i = 0; i < g; ++i) {
    json rrow = json::array(), irow = json::array();
    for (int j = 0; j < g; ++j) {
      rrow.push_back(tau(i, j).real());
      irow.push_back(tau(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return json{{"g", g}, {"re", re}, {"im", im}};
}

PeriodMatrix tau_from_json(const json& j) {
  if (!j.contains("g") || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument("tau json: need fields g, re, im");
  const int g = j.at("g").get<int>();
  if (g < 1) throw std::invalid_argument("tau json: g >= 1 required");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != g || static_cast<int>(im.size()) != g)
    throw std::invalid_argument("tau json: matrix size mismatch");
  Eigen::MatrixXcd tau(g, g);
  for (int i = 0; i < g; ++i) {
    if (static_cast<int>(re.at(i).size()) != g || static_cast<int>(im.at(i).size()) != g)
      throw std::invalid_argument("tau json: matrix size mismatch");
    for (int k = 0; k < g; ++k)
      tau(i, k) = Complex(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
  }
  return PeriodMatrix(tau);
}

json jet_to_json(const ThetaJet& jet) {
  json grad = json::array(), hess = json::array();
  for (int i = 0; i < jet.grad.size(); ++i) grad.push_back(complex_to_json(jet.grad(i)));
  for (int i = 0; i < jet.hess.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < jet.hess.cols(); ++k) row.push_back(complex_to_json(jet.hess(i, k)));
    hess.push_back(row);
  }
  return json{{"value", complex_to_json(jet.value)},
              {"grad", grad},
              {"hess", hess},
              {"radius", jet.radius},
              {"tail_bound", jet.tail_bound}};
}

json report_to_json(const IdentityReport& r) {
  json out{{"identity_id", r.identity_id}, {"genus", r.genus},
           {"lhs", complex_to_json(r.lhs)}, {"rhs", complex_to_json(r.rhs)},
           {"residual", r.residual},       {"scale", r.scale},
           {"tol", r.tol},                 {"pass", r.pass},
           {"note", r.note}};
  if (r.tau.rows() > 0) out["tau"] = tau_to_json(r.tau);
  return out;
}

json estimate_to_json(const ConstantEstimate& e) {
  json samples = json::array();
  for (const auto& s : e.samples)
    samples.push_back(json{{"tau", tau_to_json(s.tau)},
                           {"ratio", complex_to_json(s.ratio)},
                           {"note", s.pair_note}});
  json out{{"identity_id", e.identity_id},
           {"genus", e.genus},
           {"value", complex_to_json(e.value)},
           {"dispersion", e.dispersion},
           {"samples", samples}};
  if (e.exact) out["exact"] = exact_constant_to_json(*e.exact);
  return out;
}

json profile_to_json(const ReducibilityProfile& p) {
  json entries = json::array();
  for (const auto& e : p.entries)
    entries.push_back(json{{"characteristic", e.ch.str()},
                           {"head_even", e.head_even},
                           {"designated_max", e.designated_max},
                           {"other_max", e.other_max}});
  return json{{"k", p.k},
              {"entries", entries},
              {"singular_values", p.singular_values},
              {"verdict", p.verdict}};
}

json series_to_json(const qf::FormalSeries& s) {
  json terms = json::array();
  for (const auto& [e, c] : qf::sorted_terms(s)) {
    json t{{"exps", e},
           {"re", c.re.str()},
           {"im", c.im.str()}};
    terms.push_back(t);
  }
  return json{{"genus", s.genus()},
              {"pi_weight", s.pi_weight()},
              {"order_bound", s.order_bound()},
              {"terms", terms}};
}

json exact_constant_to_json(const ExactConstant& c) {
  return json{{"r", c.r.str()}, {"s", c.s}, {"t", c.t}, {"value", complex_to_json(c.to_complex())}};
}

ExactConstant exact_constant_from_json(const json& j) {
  ExactConstant c;
  c.r = Rational(j.at("r").get<std::string>());
  c.s = j.at("s").get<int>();
  c.t = j.at("t").get<int>();
  return c;
}

json catalog_to_json(const Catalog& c) {
  json entries = json::array();
  for (const auto& [key, value] : c.entries())
    entries.push_back(json{{"identity_id", key.first},
                           {"genus", key.second},
                           {"constant", exact_constant_to_json(value)}});
  return json{{"constants", entries}};
}

Catalog catalog_from_json(const json& j) {
  Catalog cat = Catalog::builtin();
  for (const auto& e : j.at("constants"))
    cat.set(e.at("identity_id").get<std::string>(), e.at("genus").get<int>(),
            exact_constant_from_json(e.at("constant")));
  return cat;
}

}  // namespace thetaver
