#include "classicality/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "classicality/error.hpp"

namespace classicality::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string join(const std::vector<std::string>& parts, char sep = ',') {
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) s += sep;
    s += parts[k];
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

int int_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string string_from_json(const Json& j, const char* what) {
  if (!j.is_string()) schema(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) schema("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = number_from_json(j[k]);
  return v;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

/// Rational read of a JSON scalar: strings and numbers, numbers by their decimal text.
Rational exact_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return parse_rational(j.dump());
  schema("expected a number or rational string");
}

std::string assignment_key(const MeasurementScenario& s, const sheaf::GlobalAssignment& a) {
  std::vector<std::string> parts;
  for (std::size_t m = 0; m < a.size(); ++m) {
    parts.push_back(s.measurements()[m].label + "=" + s.measurements()[m].outcomes[a[m]]);
  }
  return join(parts);
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) { return exact_from_json(j); }

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  schema("expected a number");
}

Json to_json(const quantum::ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

quantum::ComplexMatrix matrix_from_json(const Json& j) {
  const int rows = int_from_json(field(j, "rows"), "rows");
  const int cols = int_from_json(field(j, "cols"), "cols");
  if (rows < 1 || cols < 1) schema("matrix dimensions must be positive");
  const Json& re = field(j, "re");
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (!re.is_array() || re.size() != n) schema("'re' must hold rows*cols entries");
  const bool has_im = j.contains("im");
  if (has_im && (!j["im"].is_array() || j["im"].size() != n)) schema("'im' must hold rows*cols entries");
  quantum::ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = number_from_json(re[k]);
    const double b = has_im ? number_from_json(j["im"][k]) : 0.0;
    m(static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols) = {a, b};
  }
  return m;
}

namespace {

MeasurementScenario scenario_from_json(const Json& j) {
  std::vector<Measurement> ms;
  const Json& jm = field(j, "measurements");
  if (!jm.is_array()) schema("'measurements' must be an array");
  for (const auto& m : jm) {
    Measurement x;
    x.label = string_from_json(field(m, "label"), "label");
    const Json& o = field(m, "outcomes");
    if (o.is_number_integer()) {
      for (int k = 0; k < o.get<int>(); ++k) x.outcomes.push_back(std::to_string(k));
    } else if (o.is_array()) {
      for (const auto& s : o) x.outcomes.push_back(s.is_string() ? s.get<std::string>() : s.dump());
    } else {
      schema("'outcomes' must be a count or a list");
    }
    ms.push_back(std::move(x));
  }
  std::vector<std::vector<std::string>> contexts;
  const Json& jc = field(j, "contexts");
  if (!jc.is_array()) schema("'contexts' must be an array");
  for (const auto& c : jc) {
    if (!c.is_array()) schema("each context must be an array of labels");
    std::vector<std::string> labels;
    for (const auto& l : c) labels.push_back(string_from_json(l, "context label"));
    contexts.push_back(std::move(labels));
  }
  try {
    return MeasurementScenario::create(std::move(ms), contexts);
  } catch (const Error& e) {
    schema(e.what());
  }
}

/// Table of context c as given: keys "o1,o2" in the file's listed order.
template <class Scalar, class Read>
std::vector<Table<Scalar>> tables_from_json(const MeasurementScenario& s, const Json& j, Read read) {
  const Json& jt = field(j, "tables");
  if (!jt.is_object()) schema("'tables' must be an object keyed by context");
  std::vector<Table<Scalar>> out;
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const auto& members = s.contexts()[c];
    const std::string key = s.context_key(c);
    if (!jt.contains(key)) schema("no table for context '" + key + "'");
    const Json& entries = jt[key];
    if (!entries.is_object()) schema("table '" + key + "' must be an object");
    Table<Scalar> t = Table<Scalar>::Zero(static_cast<Eigen::Index>(s.joint_size(members)));
    for (const auto& [outcome_key, value] : entries.items()) {
      const auto parts = split(outcome_key);
      if (parts.size() != members.size()) schema("outcome key '" + outcome_key + "' has the wrong arity");
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& os = s.measurements()[members[k]].outcomes;
        const auto it = std::find(os.begin(), os.end(), parts[k]);
        if (it == os.end()) schema("unknown outcome '" + parts[k] + "' in table '" + key + "'");
        idx.push_back(static_cast<std::size_t>(it - os.begin()));
      }
      t[static_cast<Eigen::Index>(s.encode(members, idx))] = read(value);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::variant<ExactModel, FloatModel> model_from_json(const Json& j) {
  const auto s = scenario_from_json(j);
  try {
    auto exact = ExactModel::create(s, tables_from_json<Rational>(s, j, exact_from_json));
    if (is_exactly_nondisturbing(exact)) return exact;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError || e.code() == ErrorCode::ShapeMismatch) throw;
  }
  try {
    return FloatModel::create(s, tables_from_json<double>(s, j, number_from_json));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schema(e.what());
  }
}

Json to_json(const MeasurementScenario& s) {
  Json ms = Json::array(), cs = Json::array();
  for (const auto& m : s.measurements()) ms.push_back({{"label", m.label}, {"outcomes", m.outcomes}});
  for (const auto& c : s.contexts()) {
    Json labels = Json::array();
    for (auto m : c) labels.push_back(s.measurements()[m].label);
    cs.push_back(labels);
  }
  return {{"measurements", ms}, {"contexts", cs}};
}

namespace {

template <class Scalar, class Write>
Json model_json(const EmpiricalModel<Scalar>& model, Write write) {
  const auto& s = model.scenario();
  Json j = to_json(s);
  Json tables = Json::object();
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const auto& members = s.contexts()[c];
    Json t = Json::object();
    for (Eigen::Index k = 0; k < model.table(c).size(); ++k) {
      const auto idx = s.decode(members, static_cast<std::size_t>(k));
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < idx.size(); ++i) parts.push_back(s.measurements()[members[i]].outcomes[idx[i]]);
      t[join(parts)] = write(model.table(c)[k]);
    }
    tables[s.context_key(c)] = t;
  }
  j["tables"] = tables;
  return j;
}

}  // namespace

Json to_json(const ExactModel& m) {
  return model_json(m, [](const Rational& r) { return to_json(r); });
}

Json to_json(const FloatModel& m) {
  return model_json(m, [](double v) { return Json(v); });
}

polytope::Behaviour behaviour_from_json(const Json& j) {
  const int nX = int_from_json(field(j, "nX"), "nX"), nY = int_from_json(field(j, "nY"), "nY");
  const int nA = int_from_json(field(j, "nA"), "nA"), nB = int_from_json(field(j, "nB"), "nB");
  if (nX < 1 || nY < 1 || nA < 2 || nB < 2) schema("behaviour shape out of range");
  const Json& p = field(j, "p");
  if (!p.is_object()) schema("'p' must be an object keyed by \"a,b|x,y\"");
  VectorXr v = VectorXr::Zero(static_cast<Eigen::Index>(nX) * nY * nA * nB);
  for (const auto& [key, value] : p.items()) {
    int a, b, x, y;
    char c1, c2, c3;
    std::istringstream in(key);
    if (!(in >> a >> c1 >> b >> c2 >> x >> c3 >> y) || c1 != ',' || c2 != '|' || c3 != ',') {
      schema("bad behaviour key '" + key + "'");
    }
    if (a < 0 || a >= nA || b < 0 || b >= nB || x < 0 || x >= nX || y < 0 || y >= nY) {
      schema("behaviour key '" + key + "' out of range");
    }
    v[polytope::Behaviour::index(nY, nA, nB, a, b, x, y)] = exact_from_json(value);
  }
  try {
    return polytope::Behaviour::create(nX, nY, nA, nB, std::move(v));
  } catch (const Error& e) {
    schema(e.what());
  }
}

namespace {

template <class B, class Write>
Json behaviour_json(const B& b, Write write) {
  Json p = Json::object();
  for (int x = 0; x < b.nX(); ++x) {
    for (int y = 0; y < b.nY(); ++y) {
      for (int a = 0; a < b.nA(); ++a) {
        for (int c = 0; c < b.nB(); ++c) {
          p[std::to_string(a) + "," + std::to_string(c) + "|" + std::to_string(x) + "," + std::to_string(y)] =
              write(b(a, c, x, y));
        }
      }
    }
  }
  return {{"nX", b.nX()}, {"nY", b.nY()}, {"nA", b.nA()}, {"nB", b.nB()}, {"p", p}};
}

}  // namespace

Json to_json(const polytope::Behaviour& b) {
  return behaviour_json(b, [](const Rational& r) { return to_json(r); });
}

Json to_json(const polytope::FloatBehaviour& b) {
  return behaviour_json(b, [](double v) { return Json(v); });
}

Json to_json(const polytope::LinearInequality& ineq) {
  Json coefficients = Json::object();
  for (int x = 0; x < ineq.nX; ++x) {
    for (int y = 0; y < ineq.nY; ++y) {
      for (int a = 0; a < ineq.nA; ++a) {
        for (int b = 0; b < ineq.nB; ++b) {
          const auto& c = ineq.coefficients[polytope::Behaviour::index(ineq.nY, ineq.nA, ineq.nB, a, b, x, y)];
          if (c != 0) {
            coefficients[std::to_string(a) + "," + std::to_string(b) + "|" + std::to_string(x) + "," +
                         std::to_string(y)] = to_json(c);
          }
        }
      }
    }
  }
  return {{"nX", ineq.nX},
          {"nY", ineq.nY},
          {"nA", ineq.nA},
          {"nB", ineq.nB},
          {"coefficients", coefficients},
          {"bound", to_json(ineq.bound)},
          {"kind", ineq.kind == polytope::InequalityKind::Bell ? "bell" : "noncontextuality"}};
}

embedding::Gpt gpt_from_json(const Json& j) {
  embedding::Gpt g;
  g.dim = int_from_json(field(j, "dim"), "dim");
  for (const auto& s : field(j, "states")) g.states.push_back(vector_from_json(s));
  for (const auto& e : field(j, "effects")) g.effects.push_back(vector_from_json(e));
  g.unit = vector_from_json(field(j, "unit"));
  if (j.contains("sharp_contexts")) {
    for (const auto& c : j["sharp_contexts"]) {
      if (!c.is_array()) schema("each sharp context must be an array of effect indices");
      std::vector<std::size_t> ctx;
      for (const auto& k : c) {
        const int i = int_from_json(k, "effect index");
        if (i < 0) schema("negative effect index");
        ctx.push_back(static_cast<std::size_t>(i));
      }
      g.sharp_contexts.push_back(std::move(ctx));
    }
  }
  try {
    g.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ShapeMismatch || e.code() == ErrorCode::InvalidScenario) schema(e.what());
    throw;
  }
  return g;
}

Json to_json(const embedding::Gpt& g) {
  Json states = Json::array(), effects = Json::array();
  for (const auto& s : g.states) states.push_back(vector_json(s));
  for (const auto& e : g.effects) effects.push_back(vector_json(e));
  return {{"dim", g.dim}, {"states", states}, {"effects", effects}, {"unit", vector_json(g.unit)},
          {"sharp_contexts", g.sharp_contexts}};
}

embedding::PrepEnsembleProblem prep_problem_from_json(const Json& j) {
  std::optional<Rational> q;
  if (j.contains("q")) q = exact_from_json(j["q"]);
  if (j.contains("bloch")) {
    const auto r = vector_from_json(j["bloch"]);
    if (r.size() != 3) schema("'bloch' must have three entries");
    if (r.norm() > 1.0 + 1e-12) schema("Bloch vector longer than 1");
    return embedding::six_decompositions(r, q);
  }
  embedding::PrepEnsembleProblem p;
  p.target = matrix_from_json(field(j, "target"));
  p.q = q.value_or(Rational(0));
  std::map<std::string, std::size_t> index;
  for (const auto& c : field(j, "components")) {
    const auto label = string_from_json(field(c, "label"), "label");
    index[label] = p.labels.size();
    p.labels.push_back(label);
    p.components.push_back(matrix_from_json(field(c, "state")));
  }
  auto component = [&](const Json& x) -> std::size_t {
    if (x.is_string()) {
      const auto it = index.find(x.get<std::string>());
      if (it == index.end()) schema("unknown component '" + x.get<std::string>() + "'");
      return it->second;
    }
    const int i = int_from_json(x, "component index");
    if (i < 0 || static_cast<std::size_t>(i) >= p.labels.size()) schema("component index out of range");
    return static_cast<std::size_t>(i);
  };
  if (j.contains("orthogonal_pairs")) {
    for (const auto& pr : j["orthogonal_pairs"]) {
      if (!pr.is_array() || pr.size() != 2) schema("orthogonal pairs have two members");
      p.orthogonal_pairs.emplace_back(component(pr[0]), component(pr[1]));
    }
  }
  for (const auto& d : field(j, "decompositions")) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (const auto& t : d) {
      if (!t.is_array() || t.size() != 2) schema("decomposition terms are [component, weight]");
      terms.emplace_back(component(t[0]), exact_from_json(t[1]));
    }
    p.decompositions.push_back(std::move(terms));
  }
  return p;
}

embedding::PreparationData preparation_data_from_json(const Json& j) {
  embedding::PreparationData d;
  std::map<std::string, std::size_t> index;
  if (j.contains("bloch")) {
    std::vector<std::string> labels;
    std::vector<Eigen::Matrix<Rational, 3, 1>> vs;
    for (const auto& [label, v] : j["bloch"].items()) {
      if (!v.is_array() || v.size() != 3) schema("Bloch vectors have three entries");
      Eigen::Matrix<Rational, 3, 1> b;
      for (int k = 0; k < 3; ++k) b[k] = exact_from_json(v[static_cast<std::size_t>(k)]);
      labels.push_back(label);
      vs.push_back(b);
    }
    d = embedding::qubit_xyz_data(labels, vs, {});
  } else {
    for (const auto& p : field(j, "preparations")) d.preparations.push_back(string_from_json(p, "preparation"));
    for (const auto& m : field(j, "measurements")) {
      d.measurements.push_back(string_from_json(field(m, "label"), "label"));
      d.outcome_counts.push_back(int_from_json(field(m, "outcomes"), "outcomes"));
    }
    const Json& stats = field(j, "stats");
    for (const auto& p : d.preparations) {
      const Json& per = field(stats, p.c_str());
      std::vector<VectorXr> row;
      for (std::size_t m = 0; m < d.measurements.size(); ++m) {
        const Json& dist = field(per, d.measurements[m].c_str());
        if (!dist.is_array() || dist.size() != static_cast<std::size_t>(d.outcome_counts[m])) {
          schema("statistics of " + p + " on " + d.measurements[m] + " have the wrong length");
        }
        VectorXr v(d.outcome_counts[m]);
        for (int k = 0; k < d.outcome_counts[m]; ++k) v[k] = exact_from_json(dist[static_cast<std::size_t>(k)]);
        row.push_back(std::move(v));
      }
      d.stats.push_back(std::move(row));
    }
  }
  for (std::size_t k = 0; k < d.preparations.size(); ++k) index[d.preparations[k]] = k;
  if (j.contains("equivalences")) {
    for (const auto& e : j["equivalences"]) {
      embedding::OperationalEquivalence eq;
      auto side = [&](const Json& s, auto& out) {
        for (const auto& t : s) {
          if (!t.is_array() || t.size() != 2) schema("equivalence terms are [preparation, weight]");
          const auto it = index.find(string_from_json(t[0], "preparation"));
          if (it == index.end()) schema("unknown preparation in equivalence");
          out.emplace_back(it->second, exact_from_json(t[1]));
        }
      };
      side(field(e, "left"), eq.left);
      side(field(e, "right"), eq.right);
      d.equivalences.push_back(std::move(eq));
    }
  }
  return d;
}

polytope::OrthogonalityGraph graph_from_json(const Json& j) {
  polytope::OrthogonalityGraph g;
  for (const auto& l : field(j, "labels")) g.labels.push_back(string_from_json(l, "label"));
  if (j.contains("weights")) {
    for (const auto& w : j["weights"]) g.weights.push_back(exact_from_json(w));
  } else {
    g.weights.assign(g.labels.size(), Rational(1));
  }
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) schema("edges have two endpoints");
    const int a = int_from_json(e[0], "edge endpoint"), b = int_from_json(e[1], "edge endpoint");
    if (a < 0 || b < 0) schema("negative edge endpoint");
    g.edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  if (j.contains("projectors")) {
    for (const auto& p : j["projectors"]) g.projectors.push_back(matrix_from_json(p));
  }
  try {
    g.validate();
  } catch (const Error& e) {
    schema(e.what());
  }
  return g;
}

Json certificate(const sheaf::SectionFeasibility& r, const MeasurementScenario& s) {
  Json j;
  if (r.verdict == sheaf::SectionVerdict::Feasible) {
    j["verdict"] = "feasible";
    Json primal = Json::object();
    for (Eigen::Index k = 0; k < r.primal.size(); ++k) {
      if (r.primal[k] != 0) {
        primal[assignment_key(s, sheaf::global_assignment(s, static_cast<std::uint64_t>(k)))] = to_json(r.primal[k]);
      }
    }
    j["primal"] = primal;
  } else {
    j["verdict"] = "infeasible";
    Json dual = Json::object();
    Eigen::Index row = 0;
    for (std::size_t c = 0; c < s.context_count(); ++c) {
      const auto& members = s.contexts()[c];
      for (std::size_t k = 0; k < s.joint_size(members); ++k, ++row) {
        if (r.dual[row] == 0) continue;
        const auto idx = s.decode(members, k);
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < idx.size(); ++i) parts.push_back(s.measurements()[members[i]].outcomes[idx[i]]);
        dual[s.context_key(c) + "|" + join(parts)] = to_json(r.dual[row]);
      }
    }
    j["dual"] = dual;
  }
  return j;
}

Json certificate(const polytope::Membership& m) {
  Json j;
  if (m.inside) {
    j["verdict"] = "inside";
    const auto vertices = m.weights.size() > 0 ? static_cast<std::size_t>(m.weights.size()) : 0;
    Json primal = Json::object();
    for (std::size_t k = 0; k < vertices; ++k) {
      if (m.weights[static_cast<Eigen::Index>(k)] != 0) primal[std::to_string(k)] = to_json(m.weights[static_cast<Eigen::Index>(k)]);
    }
    j["primal"] = primal;
  } else {
    j["verdict"] = "outside";
    j["dual"] = to_json(*m.separating);
    j["tight_vertex"] = m.tight_vertex;
  }
  return j;
}

Json certificate(const embedding::SharpEmbeddingResult& r) {
  Json j;
  switch (r.verdict) {
    case embedding::EmbedVerdict::Embeddable: {
      j["verdict"] = "embeddable";
      const auto& e = *r.embedding;
      Json iota = Json::array(), kappa = Json::array();
      for (Eigen::Index k = 0; k < e.d; ++k) {
        iota.push_back(vector_json(Eigen::VectorXd(e.iota.row(k).transpose())));
        kappa.push_back(vector_json(Eigen::VectorXd(e.kappa.row(k).transpose())));
      }
      j["certificate"] = {{"d", e.d}, {"iota", iota}, {"kappa", kappa}};
      break;
    }
    case embedding::EmbedVerdict::NotEmbeddable: {
      j["verdict"] = "not-embeddable";
      const auto& f = *r.refusal;
      Json y = Json::array(), b = Json::array();
      for (Eigen::Index k = 0; k < f.dual.size(); ++k) y.push_back(to_json(f.dual[k]));
      for (Eigen::Index k = 0; k < f.probabilities.size(); ++k) b.push_back(to_json(f.probabilities[k]));
      j["certificate"] = {{"state", f.state}, {"assignments", f.assignments}, {"probabilities", b}, {"dual", y}};
      break;
    }
    case embedding::EmbedVerdict::Unknown:
      j["verdict"] = "unknown";
      j["certificate"] = nullptr;
      break;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const embedding::OntModel& m) {
  auto table = [](const std::vector<std::string>& rows, const std::vector<std::vector<Rational>>& v) {
    Json t = Json::object();
    for (std::size_t k = 0; k < rows.size() && k < v.size(); ++k) {
      Json r = Json::array();
      for (const auto& x : v[k]) r.push_back(to_json(x));
      t[rows[k]] = r;
    }
    return t;
  };
  return {{"ontic", m.ontic}, {"mu", table(m.preparations, m.mu)}, {"xi", table(m.effects, m.xi)}};
}

Json certificate(const embedding::PrepNcResult& r) {
  Json j;
  j["verdict"] = r.feasible ? "feasible" : "infeasible";
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    Json x = {{"mask", c.mask}, {"zeroed", c.zeroed}, {"feasible", c.feasible}};
    if (!c.feasible) {
      Json y = Json::array();
      for (Eigen::Index k = 0; k < c.dual.size(); ++k) y.push_back(to_json(c.dual[k]));
      x["dual"] = y;
    }
    cases.push_back(x);
  }
  j["cases"] = cases;
  if (r.model) j["primal"] = to_json(*r.model);
  if (r.joint_dual.size() > 0) {
    Json y = Json::array();
    for (Eigen::Index k = 0; k < r.joint_dual.size(); ++k) y.push_back(to_json(r.joint_dual[k]));
    j["joint_dual"] = y;
  }
  return j;
}

Json certificate(const embedding::PuseyResult& r, const embedding::PreparationData& d) {
  Json j;
  j["verdict"] = r.verdict == embedding::PuseyVerdict::Contextual ? "contextual" : "inconclusive";
  Json vertices = Json::object();
  for (std::size_t p = 0; p < d.preparations.size() && p < r.vertex_counts.size(); ++p) {
    vertices[d.preparations[p]] = r.vertex_counts[p];
  }
  j["vertex_counts"] = vertices;
  j["equivalence_feasible"] = r.equivalence_feasible;
  j["joint_feasible"] = r.joint_feasible;
  if (r.joint_dual.size() > 0) {
    Json y = Json::array();
    for (Eigen::Index k = 0; k < r.joint_dual.size(); ++k) y.push_back(to_json(r.joint_dual[k]));
    j["dual"] = y;
  }
  return j;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::SchemaError, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace classicality::io
