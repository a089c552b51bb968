#include <functional>

#include <gtest/gtest.h>

#include "classicality/error.hpp"
#include "classicality/io.hpp"

using namespace classicality;
using io::Json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::SchemaError;
}

}  // namespace

TEST(JsonScalars, RationalsTravelAsStrings) {
  EXPECT_EQ(io::to_json(Rational(3, 7)), Json("3/7"));
  EXPECT_EQ(io::rational_from_json(Json("3/7")), Rational(3, 7));
  EXPECT_EQ(io::rational_from_json(Json(2)), Rational(2));
  EXPECT_EQ(io::rational_from_json(Json::parse("0.1")), Rational(1, 10));
  EXPECT_DOUBLE_EQ(io::number_from_json(Json("1/4")), 0.25);
  EXPECT_EQ(code_of([] { io::rational_from_json(Json::array()); }), ErrorCode::SchemaError);
}

TEST(JsonMatrices, RoundTripWithAndWithoutImaginaryPart) {
  quantum::ComplexMatrix m(2, 3);
  m << quantum::Complex(1, 2), 3, 4, 5, quantum::Complex(0, -6), 7;
  EXPECT_EQ(io::matrix_from_json(io::to_json(m)), m);
  const auto real = io::matrix_from_json(Json::parse(R"({"rows":1,"cols":2,"re":[1,2]})"));
  EXPECT_EQ(real(0, 1), quantum::Complex(2, 0));
  EXPECT_EQ(code_of([] { io::matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"re":[1,2]})")); }),
            ErrorCode::SchemaError);
}

TEST(JsonModels, ExactTablesStayExactAndFloatsFallBack) {
  const auto exact = io::model_from_json(Json::parse(R"({
    "measurements":[{"label":"A","outcomes":2},{"label":"B","outcomes":["u","d"]}],
    "contexts":[["A","B"]],
    "tables":{"A,B":{"0,u":"1/3","1,d":"2/3"}}})"));
  ASSERT_TRUE(std::holds_alternative<ExactModel>(exact));
  const auto& m = std::get<ExactModel>(exact);
  EXPECT_EQ(m.table(0)[0], Rational(1, 3));
  EXPECT_EQ(m.table(0)[3], Rational(2, 3));
  const auto back = io::model_from_json(io::to_json(m));
  EXPECT_EQ(std::get<ExactModel>(back).table(0), m.table(0));

  const auto fl = io::model_from_json(Json::parse(R"({
    "measurements":[{"label":"A","outcomes":2}],
    "contexts":[["A"]],
    "tables":{"A":{"0":0.3333333333333333,"1":0.6666666666666666}}})"));
  EXPECT_TRUE(std::holds_alternative<FloatModel>(fl));
}

TEST(JsonModels, SchemaProblemsAreReported) {
  EXPECT_EQ(code_of([] { io::model_from_json(Json::parse(R"({"contexts":[]})")); }), ErrorCode::SchemaError);
  EXPECT_EQ(code_of([] {
              io::model_from_json(Json::parse(R"({"measurements":[{"label":"A","outcomes":2}],
                "contexts":[["A"]],"tables":{"A":{"0":"1/2","1":"1/3"}}})"));
            }),
            ErrorCode::SchemaError);
}

TEST(JsonBehaviours, RoundTrip) {
  const auto b = polytope::Behaviour::uniform(2, 2, 2, 2);
  const auto back = io::behaviour_from_json(io::to_json(b));
  EXPECT_EQ(back.data(), b.data());
  const auto ineq = io::to_json(polytope::chsh_inequality());
  EXPECT_EQ(ineq["bound"], Json("2"));
}

TEST(JsonGpt, RoundTripKeepsProbabilities) {
  embedding::Gpt g;
  g.dim = 2;
  g.states = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0.25, 0.75)};
  g.effects = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  g.unit = Eigen::Vector2d(1, 1);
  g.sharp_contexts = {{0, 1}};
  const auto back = io::gpt_from_json(io::to_json(g));
  EXPECT_LT((back.probability_table() - g.probability_table()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(back.sharp_contexts, g.sharp_contexts);
  EXPECT_EQ(code_of([] { io::gpt_from_json(Json::parse(R"({"dim":2})")); }), ErrorCode::SchemaError);
}

TEST(JsonPreparations, BlochShorthandBuildsSixDecompositions) {
  const auto p = io::prep_problem_from_json(Json::parse(R"({"bloch":[0,0,0.5]})"));
  EXPECT_EQ(p.decompositions.size(), 6u);
  EXPECT_EQ(p.q, Rational(1, 2));
  const auto d = io::preparation_data_from_json(Json::parse(R"({
    "bloch":{"z+":[0,0,1],"z-":[0,0,-1]},
    "equivalences":[{"left":[["z+","1/2"],["z-","1/2"]],"right":[["z-","1/2"],["z+","1/2"]]}]})"));
  EXPECT_EQ(d.preparations.size(), 2u);
  EXPECT_EQ(d.measurements.size(), 3u);
  EXPECT_EQ(d.equivalences.size(), 1u);
}

TEST(JsonCertificates, SectionCertificateNamesContextsAndOutcomes) {
  const auto s = polytope::bell_scenario(2, 2, 2, 2);
  const auto m = polytope::to_model(polytope::Behaviour::uniform(2, 2, 2, 2));
  const auto r = sheaf::solve_global_section(m);
  const auto c = io::certificate(r, s);
  EXPECT_EQ(c["verdict"], Json("feasible"));
  ASSERT_TRUE(c["primal"].is_object());
  for (const auto& [key, value] : c["primal"].items()) {
    EXPECT_NE(key.find("A0="), std::string::npos);
    EXPECT_TRUE(value.is_string());
  }
}
