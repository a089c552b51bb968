#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "classicality/embedding.hpp"
#include "classicality/polytope.hpp"
#include "classicality/quantum.hpp"
#include "classicality/rational.hpp"
#include "classicality/scenario.hpp"
#include "classicality/sheaf.hpp"

namespace classicality::io {

using Json = nlohmann::json;

/// Every parser below throws SchemaError on malformed input.

/// "p/q" strings; integers and decimals are also accepted on input.
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);
/// Numbers, or rational strings converted to double.
double number_from_json(const Json& j);

/// {"rows","cols","re":[…],"im":[…]}, row-major; "im" may be omitted.
Json to_json(const quantum::ComplexMatrix& m);
quantum::ComplexMatrix matrix_from_json(const Json& j);

/// {"measurements":[{"label","outcomes"}], "contexts":[[…]], "tables":{"A,B":{"0,1":p}}}.
/// Tables may omit zero entries. Numbers are read exactly from their decimal
/// text; the model is floating only when the exact reading is not normalised.
std::variant<ExactModel, FloatModel> model_from_json(const Json& j);
Json to_json(const MeasurementScenario& s);
Json to_json(const ExactModel& m);
Json to_json(const FloatModel& m);

/// {"nX","nY","nA","nB","p":{"a,b|x,y":"p/q"}}.
polytope::Behaviour behaviour_from_json(const Json& j);
Json to_json(const polytope::Behaviour& b);
Json to_json(const polytope::FloatBehaviour& b);
Json to_json(const polytope::LinearInequality& ineq);

/// {"dim","states":[[…]],"effects":[[…]],"unit":[…],"sharp_contexts":[[…]]}.
embedding::Gpt gpt_from_json(const Json& j);
Json to_json(const embedding::Gpt& g);

/// Either {"bloch":[x,y,z], "q"?} for the six-decomposition instance, or
/// {"target":matrix, "components":[{"label","state"}], "orthogonal_pairs":[[i,j]],
///  "decompositions":[[[i,"w"],…]], "q"?}.
embedding::PrepEnsembleProblem prep_problem_from_json(const Json& j);

/// {"preparations":[…], "measurements":[{"label","outcomes":k}],
///  "stats":{"P":{"M":[p0,…]}}, "equivalences":[{"left":[["P","w"]],"right":[…]}]}
/// or {"bloch":{"P":[x,y,z]}, "equivalences":…} measured in X, Y, Z.
embedding::PreparationData preparation_data_from_json(const Json& j);

/// {"labels","weights","edges","projectors"?}.
polytope::OrthogonalityGraph graph_from_json(const Json& j);

/// Certificates: {"verdict", "primal"|"dual"} with rational strings.
Json certificate(const sheaf::SectionFeasibility& r, const MeasurementScenario& s);
Json certificate(const polytope::Membership& m);
Json certificate(const embedding::SharpEmbeddingResult& r);
Json certificate(const embedding::PrepNcResult& r);
Json certificate(const embedding::PuseyResult& r, const embedding::PreparationData& d);
Json to_json(const embedding::OntModel& m);

Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

}  // namespace classicality::io
