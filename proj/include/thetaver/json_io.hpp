#pragma once
// JSON wire formats: tau matrices, jets, identity reports, constant
// estimates, series dumps, reducibility profiles.

#include <json.hpp>

#include "thetaver/identities.hpp"
#include "thetaver/qformal.hpp"
#include "thetaver/thetanum.hpp"

namespace thetaver {

nlohmann::json complex_to_json(const Complex& v);
nlohmann::json tau_to_json(const Eigen::MatrixXcd& tau);
// {"g": n, "re": [[...]], "im": [[...]]}
PeriodMatrix tau_from_json(const nlohmann::json& j);
nlohmann::json jet_to_json(const ThetaJet& jet);
nlohmann::json report_to_json(const IdentityReport& r);
nlohmann::json estimate_to_json(const ConstantEstimate& e);
nlohmann::json profile_to_json(const ReducibilityProfile& p);
nlohmann::json series_to_json(const qf::FormalSeries& s);
nlohmann::json exact_constant_to_json(const ExactConstant& c);
ExactConstant exact_constant_from_json(const nlohmann::json& j);
nlohmann::json catalog_to_json(const Catalog& c);
Catalog catalog_from_json(const nlohmann::json& j);  // entries merged over the built-ins

}  // namespace thetaver
