// Command-line front end: one subcommand per tester, JSON or text output.
// Exit codes: 0 classified/ok, 1 other failure, 2 schema error, 3 lattice violation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "classicality/classify.hpp"
#include "classicality/embedding.hpp"
#include "classicality/error.hpp"
#include "classicality/io.hpp"
#include "classicality/polytope.hpp"
#include "classicality/qsl.hpp"
#include "classicality/quantum.hpp"
#include "classicality/scenario.hpp"
#include "classicality/sheaf.hpp"

using namespace classicality;
using io::Json;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string certificate;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--out", c.out, "Write the result here instead of stdout");
  app->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--emit-certificate", c.certificate, "Write the verdict certificate as JSON");
}

void text_lines(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) text_lines(v, prefix.empty() ? k : prefix + "." + k, os);
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

void emit(const Common& c, const Json& result, const Json& certificate = nullptr) {
  std::ostringstream os;
  if (c.format == "text") {
    text_lines(result, "", os);
  } else {
    os << result.dump(2) << '\n';
  }
  if (c.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw Error(ErrorCode::SchemaError, "cannot write '" + c.out + "'");
    f << os.str();
  }
  if (!c.certificate.empty()) io::write_file(c.certificate, certificate.is_null() ? result : certificate);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(std::stod(part));
  return out;
}

Json run_validate(const std::string& path) {
  const Json input = io::read_file(path);
  const auto kind = detect_kind(input);
  Json out = {{"valid", true}, {"kind", kind}};
  if (kind == "empirical") {
    const auto m = io::model_from_json(input);
    out["exact"] = std::holds_alternative<ExactModel>(m);
    if (const auto* f = std::get_if<FloatModel>(&m)) {
      const auto r = validate_no_disturbance(*f);
      out["no_disturbance"] = r.pass;
      out["worst_violation"] = r.worst_violation;
      if (!r.pass) out["valid"] = false;
    } else {
      out["no_disturbance"] = true;
    }
  } else if (kind == "quantum") {
    const auto m = quantum_input_model(input);
    out["contexts"] = m.scenario().context_count();
  } else if (kind == "gpt") {
    const auto g = io::gpt_from_json(input);
    out["dim"] = g.dim;
    out["states"] = g.states.size();
    out["effects"] = g.effects.size();
  } else {
    const auto p = io::prep_problem_from_json(input);
    out["components"] = p.components.size();
    out["decompositions"] = p.decompositions.size();
  }
  return out;
}

std::pair<Json, Json> run_kcbs() {
  const auto k = quantum::kcbs_construction();
  const auto state = quantum::DensityMatrix::from_ket(k.state);
  std::vector<std::vector<quantum::ProjectiveContext>> contexts;
  for (int j = 0; j < 5; ++j) {
    contexts.push_back({quantum::ProjectiveContext::dichotomic("A" + std::to_string(j), k.vectors[j]),
                        quantum::ProjectiveContext::dichotomic("A" + std::to_string((j + 1) % 5), k.vectors[(j + 1) % 5])});
  }
  const auto model = to_exact(from_quantum(state, contexts));
  const auto section = sheaf::solve_global_section(model);
  auto g = polytope::cycle_graph(5);
  for (const auto& v : k.vectors) g.projectors.push_back(quantum::outer(v));
  const auto csw = polytope::csw_inequality(g, state);
  Json cert = io::certificate(section, model.scenario());
  Json out = {{"kcbs_sum", k.kcbs_sum},
              {"kcbs_sum_closed_form", 5.0 - 4.0 * std::sqrt(5.0)},
              {"noncontextual_bound", quantum::KcbsConstruction::kNoncontextualBound},
              {"global_section", cert["verdict"]},
              {"csw", {{"lhs", csw.lhs}, {"bound", to_string(csw.bound)}, {"violated", csw.violated}}}};
  return {out, cert};
}

std::pair<Json, Json> run_chsh(double alpha, const std::string& angles) {
  std::vector<double> a = {0.0, 3 * std::numbers::pi / 4, 3 * std::numbers::pi / 2, std::numbers::pi / 4};
  if (!angles.empty()) {
    a = parse_list(angles);
    if (a.size() != 4) throw Error(ErrorCode::SchemaError, "--angles takes four comma-separated values");
  }
  const auto state = quantum::werner_state(alpha);
  const auto fb = polytope::chsh_behaviour(state, a[0], a[1], a[2], a[3]);
  const auto value = polytope::evaluate_inequality(polytope::chsh_inequality(), fb);
  const auto b = polytope::to_exact(fb);
  const auto m = polytope::membership_lp(b);
  Json cert = io::certificate(m);
  Json out = {{"alpha", alpha},
              {"angles", a},
              {"chsh_value", value.value},
              {"local_bound", 2},
              {"local", m.inside},
              {"behaviour", io::to_json(fb)}};
  if (m.separating) out["separating_inequality"] = io::to_json(*m.separating);
  return {out, cert};
}

std::pair<Json, Json> run_pm(std::uint64_t seed, int states) {
  const auto square = quantum::peres_mermin_square();
  // Sign of each row and column product, read off the operators themselves.
  std::array<int, 6> sign{};
  for (int i = 0; i < 3; ++i) {
    const quantum::ComplexMatrix row = square[i][0] * square[i][1] * square[i][2];
    const quantum::ComplexMatrix col = square[0][i] * square[1][i] * square[2][i];
    sign[i] = row(0, 0).real() > 0 ? 1 : -1;
    sign[3 + i] = col(0, 0).real() > 0 ? 1 : -1;
  }
  int satisfying = 0;
  for (int mask = 0; mask < 512; ++mask) {
    auto v = [&](int r, int c) { return (mask >> (3 * r + c)) & 1 ? -1 : 1; };
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      ok = ok && v(i, 0) * v(i, 1) * v(i, 2) == sign[i];
      ok = ok && v(0, i) * v(1, i) * v(2, i) == sign[3 + i];
    }
    satisfying += ok;
  }
  const auto set = polytope::peres_mermin_set();
  std::mt19937_64 rng(seed);
  Json verdicts = Json::array();
  Json cert;
  for (int s = 0; s < states; ++s) {
    const auto rho = quantum::random_density(4, rng);
    const auto model = to_exact(from_observables(rho, set));
    const auto r = sheaf::solve_global_section(model);
    verdicts.push_back(r.verdict == sheaf::SectionVerdict::Feasible ? "feasible" : "infeasible");
    if (s == 0) cert = io::certificate(r, model.scenario());
  }
  Json out = {{"assignments_checked", 512},
              {"assignments_satisfying", satisfying},
              {"product_signs", sign},
              {"random_states", states},
              {"seed", seed},
              {"global_section", verdicts}};
  return {out, cert};
}

std::pair<Json, Json> run_embed(const std::string& path, bool search, std::uint64_t seed, int restarts) {
  const auto gpt = io::gpt_from_json(io::read_file(path));
  embedding::SharpEmbeddingResult r;
  if (search || gpt.sharp_contexts.empty()) {
    embedding::SearchOptions opt;
    opt.seed = seed;
    opt.restarts = restarts;
    r = embedding::embed_search(gpt, opt);
  } else {
    r = embedding::embed_sharp(gpt);
  }
  Json out = io::certificate(r);
  out["route"] = search || gpt.sharp_contexts.empty() ? "search" : "sharp";
  out["seed"] = seed;
  return {out, out};
}

std::pair<Json, Json> run_prep_nc(const std::string& path, const std::string& bloch, const std::string& q) {
  Json input;
  if (!path.empty()) {
    input = io::read_file(path);
  } else {
    const auto r = parse_list(bloch.empty() ? "0,0,0" : bloch);
    if (r.size() != 3) throw Error(ErrorCode::SchemaError, "--bloch takes three values");
    input = {{"bloch", r}};
    if (!q.empty()) input["q"] = q;
  }
  const auto problem = io::prep_problem_from_json(input);
  const auto r = embedding::prep_nc_check(problem);
  Json out = io::certificate(r);
  out["q"] = to_string(problem.q);
  int open = 0;
  for (const auto& c : r.cases) open += c.feasible;
  out["cases_total"] = r.cases.size();
  out["cases_infeasible"] = static_cast<int>(r.cases.size()) - open;
  return {out, out};
}

std::pair<Json, Json> run_pusey(const std::string& path, const std::string& six) {
  embedding::PreparationData data;
  if (!path.empty()) {
    data = io::preparation_data_from_json(io::read_file(path));
  } else {
    const auto r = parse_list(six.empty() ? "0,0,0" : six);
    if (r.size() != 3) throw Error(ErrorCode::SchemaError, "--six-ensemble takes three values");
    data = embedding::six_ensemble_data(embedding::six_decompositions(Eigen::Vector3d(r[0], r[1], r[2])));
  }
  const auto r = embedding::pusey_incomplete_check(data);
  Json out = io::certificate(r, data);
  return {out, out};
}

std::pair<Json, Json> run_convert_bell(const std::string& path, bool kcbs) {
  polytope::OrthogonalityGraph g;
  if (kcbs || path.empty()) {
    g = polytope::cycle_graph(5);
    for (const auto& v : quantum::kcbs_construction().vectors) g.projectors.push_back(quantum::outer(v));
  } else {
    g = io::graph_from_json(io::read_file(path));
  }
  if (g.projectors.empty()) throw Error(ErrorCode::MissingProjectors, "the graph carries no projectors");
  const auto r = polytope::contextuality_to_bell(g, g.projectors.front().rows());
  Json out = {{"inequality", io::to_json(r.inequality)},
              {"quantum_value", r.quantum_value},
              {"bound", to_string(r.inequality.bound)},
              {"violated", r.quantum_value > to_double(r.inequality.bound) + 1e-9}};
  return {out, out};
}

Json run_qsl(const std::string& prep, const std::string& gates, const std::string& measure, std::uint64_t shots,
             std::uint64_t seed, bool extensions) {
  qsl::QslProgram p;
  const auto colon = prep.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::SchemaError, "--prep takes BASIS:VALUE, e.g. Z:0");
  p.prep_basis = qsl::parse_basis(prep.substr(0, colon));
  p.prep_value = std::stoi(prep.substr(colon + 1));
  std::stringstream in(gates);
  std::string g;
  while (std::getline(in, g, ',')) {
    if (!g.empty()) p.gates.push_back(qsl::parse_gate(g));
  }
  p.measure_basis = qsl::parse_basis(measure);
  p.shots = shots;
  p.seed = seed;
  p.extensions = extensions;
  const auto r = qsl::compare(p);
  return {{"freqs", r.freqs}, {"quantum", r.quantum}, {"fidelity", r.fidelity}, {"seed", r.seed},
          {"shots", r.shots}, {"counts", r.counts}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify scenarios by Bell locality, Kochen-Specker and Spekkens noncontextuality"};
  app.require_subcommand(1);
  Common common;

  std::string path;
  auto* validate = app.add_subcommand("validate", "Check an input file against its schema");
  validate->add_option("input", path, "Input JSON")->required();
  add_common(validate, common);

  auto* classify_cmd = app.add_subcommand("classify", "Classify an input file");
  classify_cmd->add_option("input", path, "Input JSON")->required();
  int restarts = 64;
  classify_cmd->add_option("--restarts", restarts, "Restarts for the embedding search");
  add_common(classify_cmd, common);

  auto* kcbs = app.add_subcommand("kcbs", "KCBS pentagram: sum, global section and CSW form");
  add_common(kcbs, common);

  double alpha = 1.0;
  std::string angles;
  auto* chsh = app.add_subcommand("chsh", "CHSH value and local-polytope membership for a Werner state");
  chsh->add_option("--alpha", alpha, "Werner visibility in [0,1]");
  chsh->add_option("--angles", angles, "a,b,c,d: Alice a,c and Bob b,d");
  add_common(chsh, common);

  int pm_states = 3;
  auto* pm = app.add_subcommand("pm-square", "Peres-Mermin square: assignment count and global sections");
  pm->add_option("--states", pm_states, "Random states to test");
  add_common(pm, common);

  bool search = false;
  auto* embed = app.add_subcommand("embed", "Simplex embedding of a GPT");
  embed->add_option("input", path, "GPT JSON")->required();
  embed->add_flag("--search", search, "Use the alternating-LP search even when sharp contexts are flagged");
  embed->add_option("--restarts", restarts, "Search restarts");
  add_common(embed, common);

  std::string bloch, q;
  auto* prep = app.add_subcommand("prep-nc", "Preparation noncontextuality of a mixed qubit");
  prep->add_option("input", path, "Problem JSON (optional)");
  prep->add_option("--bloch", bloch, "x,y,z of the mixed state");
  prep->add_option("--q", q, "Mixing parameter as p/q");
  add_common(prep, common);

  std::string six;
  auto* pusey = app.add_subcommand("pusey", "Contextuality test from incomplete preparation data");
  pusey->add_option("input", path, "Preparation data JSON (optional)");
  pusey->add_option("--six-ensemble", six, "x,y,z: use the six-decomposition instance");
  add_common(pusey, common);

  bool use_kcbs = false;
  auto* convert = app.add_subcommand("convert-bell", "Bell inequality from an orthogonality graph");
  convert->add_option("input", path, "Graph JSON (optional)");
  convert->add_flag("--kcbs", use_kcbs, "Use the KCBS pentagon");
  add_common(convert, common);

  auto* qsl_cmd = app.add_subcommand("qsl", "Two-bit qubit simulation");
  qsl_cmd->require_subcommand(1);
  std::string qsl_prep = "Z:0", qsl_gates, qsl_measure = "Z";
  std::uint64_t shots = 100000;
  bool extensions = false;
  auto* qsl_run = qsl_cmd->add_subcommand("run", "Run a prepare-gates-measure program");
  qsl_run->add_option("--prep", qsl_prep, "BASIS:VALUE");
  qsl_run->add_option("--gates", qsl_gates, "Comma-separated X, Z (H with --extensions)");
  qsl_run->add_option("--measure", qsl_measure, "X, Y or Z");
  qsl_run->add_option("--shots", shots, "Number of shots");
  qsl_run->add_flag("--extensions", extensions, "Allow the bit-swap gate");
  add_common(qsl_run, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const auto r = run_validate(path);
      emit(common, r);
      return r["valid"].get<bool>() ? 0 : 2;
    }
    if (classify_cmd->parsed()) {
      RunConfig config;
      config.seed = common.seed;
      config.search_restarts = restarts;
      const auto report = classify(io::read_file(path), config);
      Json out = to_json(report);
      out["seed"] = common.seed;
      emit(common, out, report.certificates);
      return 0;
    }
    if (kcbs->parsed()) {
      auto [out, cert] = run_kcbs();
      emit(common, out, cert);
    } else if (chsh->parsed()) {
      auto [out, cert] = run_chsh(alpha, angles);
      emit(common, out, cert);
    } else if (pm->parsed()) {
      auto [out, cert] = run_pm(common.seed, pm_states);
      emit(common, out, cert);
    } else if (embed->parsed()) {
      auto [out, cert] = run_embed(path, search, common.seed, restarts);
      emit(common, out, cert);
    } else if (prep->parsed()) {
      auto [out, cert] = run_prep_nc(path, bloch, q);
      emit(common, out, cert);
    } else if (pusey->parsed()) {
      auto [out, cert] = run_pusey(path, six);
      emit(common, out, cert);
    } else if (convert->parsed()) {
      auto [out, cert] = run_convert_bell(path, use_kcbs);
      emit(common, out, cert);
    } else if (qsl_run->parsed()) {
      emit(common, run_qsl(qsl_prep, qsl_gates, qsl_measure, shots, common.seed, extensions));
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    if (e.code() == ErrorCode::LatticeViolation) return 3;
    if (e.code() == ErrorCode::SchemaError) return 2;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
