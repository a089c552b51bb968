#include "classicality/classify.hpp"

#include <cmath>
#include <future>
#include <map>

#include "classicality/embedding.hpp"
#include "classicality/error.hpp"
#include "classicality/polytope.hpp"
#include "classicality/sheaf.hpp"

namespace classicality {

using io::Json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Undecided: return "undecided";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "?";
}

std::optional<std::string> check_implications(const ClassificationReport& r) {
  if (r.bell_local == Verdict::No && r.ks_noncontextual != Verdict::No) {
    return "Bell nonlocal but not Kochen-Specker contextual";
  }
  if (r.ks_noncontextual == Verdict::No && r.spekkens_noncontextual != Verdict::No) {
    return "Kochen-Specker contextual but not Spekkens contextual";
  }
  if (r.spekkens_noncontextual == Verdict::Yes) {
    if (r.ks_noncontextual != Verdict::Yes && r.ks_noncontextual != Verdict::Undecided) {
      return "Spekkens noncontextual but Kochen-Specker contextual";
    }
    if (r.bell_local != Verdict::Yes && r.bell_local != Verdict::NotApplicable) {
      return "Spekkens noncontextual but Bell nonlocal";
    }
  }
  if (r.bell_local == Verdict::Undecided) return "Bell verdict must be yes, no or not-applicable";
  if (r.ks_noncontextual == Verdict::NotApplicable || r.spekkens_noncontextual == Verdict::NotApplicable) {
    return "only the Bell verdict may be not-applicable";
  }
  return std::nullopt;
}

std::string detect_kind(const Json& input) {
  if (!input.is_object()) throw Error(ErrorCode::SchemaError, "input must be a JSON object");
  if (input.contains("kind")) {
    const auto k = input["kind"].is_string() ? input["kind"].get<std::string>() : std::string();
    if (k == "empirical" || k == "quantum" || k == "gpt" || k == "prep-ensemble") return k;
    throw Error(ErrorCode::SchemaError, "unknown input kind '" + k + "'");
  }
  if (input.contains("tables")) return "empirical";
  if (input.contains("effects")) return "gpt";
  if (input.contains("decompositions") || input.contains("bloch")) return "prep-ensemble";
  if (input.contains("state") || input.contains("ket")) return "quantum";
  throw Error(ErrorCode::SchemaError, "cannot tell the input kind");
}

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

/// Rewrites construction failures of user-supplied objects as schema errors.
template <class F>
auto guarded(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LatticeViolation || e.code() == ErrorCode::InvalidCertificate ||
        e.code() == ErrorCode::SchemaError) {
      throw;
    }
    schema(e.what());
  }
}

quantum::DensityMatrix state_from_json(const Json& input) {
  if (input.contains("state")) return quantum::DensityMatrix::from_matrix(io::matrix_from_json(input["state"]));
  if (input.contains("ket")) {
    const auto k = io::matrix_from_json(input["ket"]);
    if (k.cols() != 1) schema("'ket' must be a single column");
    return quantum::DensityMatrix::from_ket(k.col(0));
  }
  schema("quantum input needs 'state' or 'ket'");
}

/// {"label", "projectors":[…]} | {"label", "observable"} | {"label", "vector"}.
quantum::ProjectiveContext measurement_from_json(const Json& m) {
  if (!m.contains("label") || !m["label"].is_string()) schema("measurement needs a label");
  const auto label = m["label"].get<std::string>();
  if (m.contains("projectors")) {
    std::vector<quantum::ComplexMatrix> ps;
    for (const auto& p : m["projectors"]) ps.push_back(io::matrix_from_json(p));
    return quantum::ProjectiveContext::create(label, std::move(ps));
  }
  if (m.contains("observable")) return quantum::ProjectiveContext::spectral(label, io::matrix_from_json(m["observable"]));
  if (m.contains("vector")) {
    const auto v = io::matrix_from_json(m["vector"]);
    if (v.cols() != 1) schema("'vector' must be a single column");
    return quantum::ProjectiveContext::dichotomic(label, v.col(0).normalized());
  }
  schema("measurement '" + label + "' needs projectors, observable or vector");
}

std::vector<quantum::ProjectiveContext> measurements_from_json(const Json& list) {
  if (!list.is_array()) schema("measurement list must be an array");
  std::vector<quantum::ProjectiveContext> out;
  for (const auto& m : list) out.push_back(measurement_from_json(m));
  return out;
}

bool is_bipartite(const Json& input) { return input.contains("parties") && input["parties"].contains("dims"); }

struct QuantumInput {
  quantum::DensityMatrix state;
  FloatModel model;
  std::optional<polytope::FloatBehaviour> behaviour;
  std::vector<quantum::ComplexMatrix> local_states;  // reduced states of a bipartite input
};

QuantumInput parse_quantum(const Json& input) {
  const auto state = state_from_json(input);
  if (is_bipartite(input)) {
    const auto& parties = input["parties"];
    const auto& dims = parties["dims"];
    if (!dims.is_array() || dims.size() != 2) schema("'dims' must list two dimensions");
    const Eigen::Index dA = dims[0].get<int>(), dB = dims[1].get<int>();
    if (dA * dB != state.dim()) schema("party dimensions do not multiply to the state dimension");
    if (!parties.contains("alice") || !parties.contains("bob")) schema("bipartite input needs 'alice' and 'bob'");
    const auto alice = measurements_from_json(parties["alice"]);
    const auto bob = measurements_from_json(parties["bob"]);
    auto behaviour = polytope::behaviour_from_quantum(state, alice, bob);
    auto model = polytope::to_model(behaviour);
    return {state, std::move(model), std::move(behaviour),
            {quantum::partial_trace(state.matrix(), dA, dB, true), quantum::partial_trace(state.matrix(), dA, dB, false)}};
  }
  const auto ms = measurements_from_json(input.contains("measurements") ? input["measurements"] : Json());
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < ms.size(); ++k) index[ms[k].label()] = k;
  if (!input.contains("contexts") || !input["contexts"].is_array()) schema("quantum input needs 'contexts'");
  std::vector<std::vector<quantum::ProjectiveContext>> contexts;
  for (const auto& c : input["contexts"]) {
    std::vector<quantum::ProjectiveContext> ctx;
    for (const auto& l : c) {
      const auto it = index.find(l.get<std::string>());
      if (it == index.end()) schema("context names unknown measurement '" + l.get<std::string>() + "'");
      ctx.push_back(ms[it->second]);
    }
    contexts.push_back(std::move(ctx));
  }
  auto model = from_quantum(state, contexts);
  return {state, std::move(model), std::nullopt, {}};
}

struct KsOutcome {
  Verdict verdict = Verdict::Undecided;
  Json certificate;
  std::optional<sheaf::SectionFeasibility> section;
  std::string note;
};

KsOutcome ks_route(const ExactModel& model) {
  KsOutcome out;
  try {
    auto r = sheaf::solve_global_section(model);
    if (!sheaf::verify_certificate(model, r)) throw Error(ErrorCode::InvalidCertificate, "sheaf certificate rejected");
    out.verdict = r.verdict == sheaf::SectionVerdict::Feasible ? Verdict::Yes : Verdict::No;
    out.certificate = io::certificate(r, model.scenario());
    out.certificate["test"] = "global-section";
    out.section = std::move(r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ScenarioTooLarge) throw;
    out.note = e.what();
  }
  return out;
}

struct BellOutcome {
  Verdict verdict = Verdict::NotApplicable;
  Json certificate;
};

BellOutcome bell_route(const polytope::Behaviour& b) {
  const auto m = polytope::membership_lp(b);
  if (!polytope::verify_membership(b, m)) throw Error(ErrorCode::InvalidCertificate, "membership certificate rejected");
  BellOutcome out;
  out.verdict = m.inside ? Verdict::Yes : Verdict::No;
  out.certificate = io::certificate(m);
  out.certificate["test"] = "local-polytope";
  return out;
}

/// Ontological model read off a global section: λ = global assignment.
Json ontological_model(const ExactModel& model, const sheaf::SectionFeasibility& section) {
  const auto& s = model.scenario();
  const auto hv = sheaf::hv_model_from_section(section.primal, s);
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    if (hv.context_table(s, c) != model.table(c)) {
      throw Error(ErrorCode::InvalidCertificate, "hidden-variable model does not reproduce the tables");
    }
  }
  embedding::OntModel m;
  m.preparations = {"input"};
  m.mu.emplace_back();
  for (std::size_t k = 0; k < hv.hidden.size(); ++k) {
    m.ontic.push_back("lambda_" + std::to_string(k));
    m.mu[0].push_back(hv.weights[k]);
  }
  for (std::size_t j = 0; j < s.measurement_count(); ++j) {
    const auto& meas = s.measurements()[j];
    for (std::size_t o = 0; o < meas.outcomes.size(); ++o) {
      m.effects.push_back(meas.label + "=" + meas.outcomes[o]);
      std::vector<Rational> xi;
      for (const auto& h : hv.hidden) xi.emplace_back(h[j] == o ? 1 : 0);
      m.xi.push_back(std::move(xi));
    }
  }
  Json j = io::to_json(m);
  j["test"] = "ontological-model";
  j["verdict"] = "feasible";
  return j;
}

/// Preparation contextuality of a mixed qubit: the six-decomposition check on its Bloch vector.
std::optional<Json> mixed_qubit_route(const quantum::ComplexMatrix& rho, const std::string& who) {
  if (rho.rows() != 2) return std::nullopt;
  const Eigen::Vector3d r((rho * quantum::pauli_x()).trace().real(), (rho * quantum::pauli_y()).trace().real(),
                          (rho * quantum::pauli_z()).trace().real());
  if (r.norm() > 1.0 - 1e-9) return std::nullopt;
  const auto problem = embedding::six_decompositions(r);
  const auto result = embedding::prep_nc_check(problem);
  if (result.feasible || !embedding::verify_prep_nc(problem, result)) return std::nullopt;
  Json c = io::certificate(result);
  c["test"] = "preparation-noncontextuality";
  c["system"] = who;
  return c;
}

bool is_pure(const quantum::ComplexMatrix& rho) { return std::abs((rho * rho).trace().real() - 1.0) < 1e-9; }

std::string level_of(const ClassificationReport& r) {
  if (r.bell_local == Verdict::No) return "bell-nonlocal";
  if (r.ks_noncontextual == Verdict::No) return "ks-contextual";
  if (r.spekkens_noncontextual == Verdict::No) return "spekkens-contextual";
  if (r.spekkens_noncontextual == Verdict::Yes) return "spekkens-noncontextual";
  if (r.ks_noncontextual == Verdict::Yes) return "ks-noncontextual";
  return "undetermined";
}

ExactModel exact_of(const std::variant<ExactModel, FloatModel>& m) {
  if (const auto* e = std::get_if<ExactModel>(&m)) return *e;
  return to_exact(std::get<FloatModel>(m));
}

void classify_model(ClassificationReport& report, const ExactModel& model,
                    const std::optional<polytope::Behaviour>& behaviour) {
  auto ks_future = std::async(std::launch::async, [&] { return ks_route(model); });
  std::optional<BellOutcome> bell;
  if (behaviour) bell = bell_route(*behaviour);
  KsOutcome ks = ks_future.get();
  if (bell) {
    report.bell_local = bell->verdict;
    report.certificates.push_back(bell->certificate);
  }
  report.ks_noncontextual = ks.verdict;
  if (!ks.certificate.is_null()) report.certificates.push_back(ks.certificate);
  if (!ks.note.empty()) report.notes.push_back(ks.note);
  if (ks.verdict == Verdict::No) {
    report.spekkens_noncontextual = Verdict::No;
    report.notes.push_back("Kochen-Specker contextuality implies Spekkens contextuality");
  } else if (ks.verdict == Verdict::Yes) {
    report.spekkens_noncontextual = Verdict::Yes;
    report.certificates.push_back(ontological_model(model, *ks.section));
  }
}

}  // namespace

FloatModel quantum_input_model(const Json& input) {
  return guarded([&] { return parse_quantum(input).model; });
}

ClassificationReport classify(const Json& input, const RunConfig& config) {
  ClassificationReport report;
  report.kind = config.kind.empty() ? detect_kind(input) : config.kind;

  if (report.kind == "empirical") {
    const auto model = guarded([&] { return exact_of(io::model_from_json(input)); });
    std::optional<polytope::Behaviour> behaviour;
    if (input.contains("parties")) {
      const auto& p = input["parties"];
      if (!p.contains("alice") || !p.contains("bob")) schema("'parties' needs 'alice' and 'bob'");
      behaviour = polytope::as_behaviour(model, p["alice"].get<std::vector<std::string>>(),
                                         p["bob"].get<std::vector<std::string>>());
      if (!behaviour) schema("the declared parties do not form a Bell scenario");
    }
    classify_model(report, model, behaviour);
  } else if (report.kind == "quantum") {
    const auto q = guarded([&] { return parse_quantum(input); });
    const auto model = guarded([&] { return to_exact(q.model); });
    std::optional<polytope::Behaviour> behaviour;
    if (q.behaviour) behaviour = polytope::to_exact(*q.behaviour);
    classify_model(report, model, behaviour);
    if (report.ks_noncontextual != Verdict::No) {
      // A mixed qubit, or a bipartite input's mixed local qubit, is preparation contextual.
      std::vector<std::pair<quantum::ComplexMatrix, std::string>> systems;
      if (q.local_states.empty()) {
        systems.emplace_back(q.state.matrix(), "system");
      } else {
        systems.emplace_back(q.local_states[0], "alice");
        systems.emplace_back(q.local_states[1], "bob");
      }
      bool undecided = false;
      for (const auto& [rho, who] : systems) {
        if (auto c = mixed_qubit_route(rho, who)) {
          if (report.spekkens_noncontextual == Verdict::Yes) {
            // Drop the single-preparation ontological model; it no longer decides.
            Json kept = Json::array();
            for (auto& x : report.certificates) {
              if (x.value("test", "") != "ontological-model") kept.push_back(x);
            }
            report.certificates = kept;
          }
          report.spekkens_noncontextual = Verdict::No;
          report.certificates.push_back(*c);
          undecided = false;
          break;
        }
        if (!is_pure(rho)) undecided = true;
      }
      if (undecided && report.spekkens_noncontextual == Verdict::Yes) {
        report.spekkens_noncontextual = Verdict::Undecided;
        report.notes.push_back("mixed state beyond a qubit: preparation contextuality not decided");
        Json kept = Json::array();
        for (auto& x : report.certificates) {
          if (x.value("test", "") != "ontological-model") kept.push_back(x);
        }
        report.certificates = kept;
      }
    }
  } else if (report.kind == "gpt") {
    const auto gpt = guarded([&] { return io::gpt_from_json(input); });
    report.bell_local = Verdict::NotApplicable;
    if (!gpt.sharp_contexts.empty()) {
      const auto result = guarded([&] { return embedding::embed_sharp(gpt); });
      Json c = io::certificate(result);
      c["test"] = "sharp-embedding";
      report.certificates.push_back(c);
      // Kochen-Specker verdict on the models each state induces.
      Verdict ks = Verdict::Yes;
      for (std::size_t s = 0; s < gpt.states.size() && ks == Verdict::Yes; ++s) {
        const auto k = ks_route(embedding::induced_model(gpt, s));
        if (k.verdict != Verdict::Yes) {
          ks = k.verdict;
          if (!k.certificate.is_null()) {
            Json kc = k.certificate;
            kc["state"] = s;
            report.certificates.push_back(kc);
          }
        }
      }
      report.ks_noncontextual = ks;
      switch (result.verdict) {
        case embedding::EmbedVerdict::Embeddable: report.spekkens_noncontextual = Verdict::Yes; break;
        case embedding::EmbedVerdict::NotEmbeddable: report.spekkens_noncontextual = Verdict::No; break;
        case embedding::EmbedVerdict::Unknown: report.spekkens_noncontextual = Verdict::Undecided; break;
      }
      if (ks == Verdict::No) report.spekkens_noncontextual = Verdict::No;
      if (!result.note.empty()) report.notes.push_back(result.note);
    } else {
      embedding::SearchOptions opt;
      opt.seed = config.seed;
      opt.restarts = config.search_restarts;
      const auto result = guarded([&] { return embedding::embed_search(gpt, opt); });
      Json c = io::certificate(result);
      c["test"] = "embedding-search";
      report.certificates.push_back(c);
      report.ks_noncontextual = Verdict::Undecided;
      report.spekkens_noncontextual =
          result.verdict == embedding::EmbedVerdict::Embeddable ? Verdict::Yes : Verdict::Undecided;
      report.notes.push_back("no sharp contexts: Kochen-Specker verdict not decided");
    }
  } else if (report.kind == "prep-ensemble") {
    const auto problem = guarded([&] { return io::prep_problem_from_json(input); });
    const auto result = guarded([&] { return embedding::prep_nc_check(problem); });
    if (!embedding::verify_prep_nc(problem, result)) {
      throw Error(ErrorCode::InvalidCertificate, "preparation certificate rejected");
    }
    Json c = io::certificate(result);
    c["test"] = "preparation-noncontextuality";
    report.certificates.push_back(c);
    report.bell_local = Verdict::NotApplicable;
    report.ks_noncontextual = Verdict::Undecided;
    report.spekkens_noncontextual = result.feasible ? Verdict::Yes : Verdict::No;
    report.notes.push_back("preparation data only: Kochen-Specker verdict not decided");
  } else {
    schema("unknown input kind '" + report.kind + "'");
  }

  if (input.contains("flags") && input["flags"].value("classical", false)) {
    report.classical_flag_consistent = report.bell_local != Verdict::No && report.ks_noncontextual != Verdict::No &&
                                       report.spekkens_noncontextual != Verdict::No;
  }
  report.hierarchy_level = level_of(report);
  if (const auto violation = check_implications(report)) {
    throw Error(ErrorCode::LatticeViolation, *violation);
  }
  return report;
}

Json to_json(const ClassificationReport& r) {
  Json j = {{"kind", r.kind},
            {"bell_local", to_string(r.bell_local)},
            {"ks_noncontextual", to_string(r.ks_noncontextual)},
            {"spekkens_noncontextual", to_string(r.spekkens_noncontextual)},
            {"hierarchy_level", r.hierarchy_level},
            {"certificates", r.certificates},
            {"notes", r.notes}};
  if (r.classical_flag_consistent) j["classical_flag_consistent"] = *r.classical_flag_consistent;
  return j;
}

}  // namespace classicality
