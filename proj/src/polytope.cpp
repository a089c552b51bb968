#include "classicality/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "classicality/error.hpp"
#include "classicality/lp.hpp"

namespace classicality::polytope {

namespace {

template <class Scalar>
bool nonnegative_entry(Scalar& v) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (!(v >= -1e-12)) return false;
    v = std::max(v, 0.0);
    return true;
  } else {
    return v >= 0;
  }
}

template <class Scalar>
bool equal_within(const Scalar& a, const Scalar& b, double tol) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return std::abs(a - b) <= tol;
  } else {
    (void)tol;
    return a == b;
  }
}

}  // namespace

template <class Scalar>
BehaviourT<Scalar> BehaviourT<Scalar>::create(int nX, int nY, int nA, int nB, Vector p) {
  if (nX < 1 || nY < 1 || nA < 2 || nB < 2) {
    throw Error(ErrorCode::ShapeMismatch, "behaviour needs at least one setting and two outcomes per party");
  }
  if (p.size() != static_cast<Eigen::Index>(nX) * nY * nA * nB) {
    throw Error(ErrorCode::ShapeMismatch, "behaviour table has the wrong number of entries");
  }
  for (int x = 0; x < nX; ++x) {
    for (int y = 0; y < nY; ++y) {
      Scalar sum(0);
      for (int a = 0; a < nA; ++a) {
        for (int b = 0; b < nB; ++b) {
          Scalar& v = p[index(nY, nA, nB, a, b, x, y)];
          if (!nonnegative_entry(v)) throw Error(ErrorCode::InvalidState, "negative entry in behaviour");
          sum += v;
        }
      }
      if (!equal_within(sum, Scalar(1), 1e-12)) {
        throw Error(ErrorCode::InvalidState, "behaviour slice x=" + std::to_string(x) + ", y=" + std::to_string(y) +
                                                 " does not sum to 1");
      }
    }
  }
  return BehaviourT(nX, nY, nA, nB, std::move(p));
}

template <class Scalar>
BehaviourT<Scalar> BehaviourT<Scalar>::uniform(int nX, int nY, int nA, int nB) {
  const Eigen::Index n = static_cast<Eigen::Index>(nX) * nY * nA * nB;
  return create(nX, nY, nA, nB, Vector::Constant(n, Scalar(1) / Scalar(nA * nB)));
}

template <class Scalar>
Scalar BehaviourT<Scalar>::correlator(int x, int y) const {
  Scalar e(0);
  for (int a = 0; a < nA_; ++a) {
    for (int b = 0; b < nB_; ++b) {
      if ((a + b) % 2 == 0) {
        e += (*this)(a, b, x, y);
      } else {
        e -= (*this)(a, b, x, y);
      }
    }
  }
  return e;
}

template <class Scalar>
bool BehaviourT<Scalar>::is_no_signalling() const {
  constexpr double kTol = 1e-9;
  for (int x = 0; x < nX_; ++x) {
    for (int a = 0; a < nA_; ++a) {
      Scalar first(0);
      for (int b = 0; b < nB_; ++b) first += (*this)(a, b, x, 0);
      for (int y = 1; y < nY_; ++y) {
        Scalar m(0);
        for (int b = 0; b < nB_; ++b) m += (*this)(a, b, x, y);
        if (!equal_within(m, first, kTol)) return false;
      }
    }
  }
  for (int y = 0; y < nY_; ++y) {
    for (int b = 0; b < nB_; ++b) {
      Scalar first(0);
      for (int a = 0; a < nA_; ++a) first += (*this)(a, b, 0, y);
      for (int x = 1; x < nX_; ++x) {
        Scalar m(0);
        for (int a = 0; a < nA_; ++a) m += (*this)(a, b, x, y);
        if (!equal_within(m, first, kTol)) return false;
      }
    }
  }
  return true;
}

template class BehaviourT<Rational>;
template class BehaviourT<double>;

MeasurementScenario bell_scenario(int nX, int nY, int nA, int nB) {
  std::vector<Measurement> ms;
  auto outcomes = [](int n) {
    std::vector<std::string> o;
    for (int k = 0; k < n; ++k) o.push_back(std::to_string(k));
    return o;
  };
  for (int x = 0; x < nX; ++x) ms.push_back({"A" + std::to_string(x), outcomes(nA)});
  for (int y = 0; y < nY; ++y) ms.push_back({"B" + std::to_string(y), outcomes(nB)});
  std::vector<std::vector<std::string>> contexts;
  for (int x = 0; x < nX; ++x) {
    for (int y = 0; y < nY; ++y) contexts.push_back({"A" + std::to_string(x), "B" + std::to_string(y)});
  }
  return MeasurementScenario::create(std::move(ms), contexts);
}

namespace {

template <class Scalar>
EmpiricalModel<Scalar> behaviour_to_model(const BehaviourT<Scalar>& b) {
  MeasurementScenario s = bell_scenario(b.nX(), b.nY(), b.nA(), b.nB());
  std::vector<Table<Scalar>> tables;
  for (int x = 0; x < b.nX(); ++x) {
    for (int y = 0; y < b.nY(); ++y) {
      Table<Scalar> t(b.nA() * b.nB());
      for (int a = 0; a < b.nA(); ++a) {
        for (int bb = 0; bb < b.nB(); ++bb) t[a * b.nB() + bb] = b(a, bb, x, y);
      }
      tables.push_back(std::move(t));
    }
  }
  return EmpiricalModel<Scalar>::create(std::move(s), std::move(tables));
}

}  // namespace

ExactModel to_model(const Behaviour& b) { return behaviour_to_model(b); }
FloatModel to_model(const FloatBehaviour& b) { return behaviour_to_model(b); }

std::optional<Behaviour> as_behaviour(const ExactModel& model, const std::vector<std::string>& alice,
                                      const std::vector<std::string>& bob) {
  const auto& s = model.scenario();
  if (alice.empty() || bob.empty()) return std::nullopt;
  std::vector<std::size_t> ai, bi;
  try {
    for (const auto& l : alice) ai.push_back(s.index_of(l));
    for (const auto& l : bob) bi.push_back(s.index_of(l));
  } catch (const Error&) {
    return std::nullopt;
  }
  if (ai.size() + bi.size() != s.measurement_count()) return std::nullopt;
  const int nX = static_cast<int>(ai.size()), nY = static_cast<int>(bi.size());
  const int nA = static_cast<int>(s.outcome_count(ai[0])), nB = static_cast<int>(s.outcome_count(bi[0]));
  for (auto m : ai) {
    if (static_cast<int>(s.outcome_count(m)) != nA) return std::nullopt;
  }
  for (auto m : bi) {
    if (static_cast<int>(s.outcome_count(m)) != nB) return std::nullopt;
  }
  if (s.context_count() != static_cast<std::size_t>(nX * nY)) return std::nullopt;
  VectorXr p = VectorXr::Zero(static_cast<Eigen::Index>(nX) * nY * nA * nB);
  std::set<std::pair<int, int>> seen;
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const auto& members = s.contexts()[c];
    if (members.size() != 2) return std::nullopt;
    int x = -1, y = -1;
    std::size_t alice_pos = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      auto ax = std::find(ai.begin(), ai.end(), members[k]);
      auto by = std::find(bi.begin(), bi.end(), members[k]);
      if (ax != ai.end()) {
        x = static_cast<int>(ax - ai.begin());
        alice_pos = k;
      }
      if (by != bi.end()) y = static_cast<int>(by - bi.begin());
    }
    if (x < 0 || y < 0 || !seen.insert({x, y}).second) return std::nullopt;
    for (std::size_t i = 0; i < s.joint_size(members); ++i) {
      const auto o = s.decode(members, i);
      const int a = static_cast<int>(o[alice_pos]), b = static_cast<int>(o[1 - alice_pos]);
      p[Behaviour::index(nY, nA, nB, a, b, x, y)] = model.table(c)[static_cast<Eigen::Index>(i)];
    }
  }
  return Behaviour::create(nX, nY, nA, nB, std::move(p));
}

Behaviour to_exact(const FloatBehaviour& b) {
  const ExactModel exact = classicality::to_exact(to_model(b));
  std::vector<std::string> alice, bob;
  for (int x = 0; x < b.nX(); ++x) alice.push_back("A" + std::to_string(x));
  for (int y = 0; y < b.nY(); ++y) bob.push_back("B" + std::to_string(y));
  return *as_behaviour(exact, alice, bob);
}

FloatBehaviour to_float(const Behaviour& b) {
  Eigen::VectorXd p = to_double(b.data());
  for (int x = 0; x < b.nX(); ++x) {
    for (int y = 0; y < b.nY(); ++y) {
      double sum = 0.0;
      for (int a = 0; a < b.nA(); ++a) {
        for (int bb = 0; bb < b.nB(); ++bb) sum += p[Behaviour::index(b.nY(), b.nA(), b.nB(), a, bb, x, y)];
      }
      for (int a = 0; a < b.nA(); ++a) {
        for (int bb = 0; bb < b.nB(); ++bb) p[Behaviour::index(b.nY(), b.nA(), b.nB(), a, bb, x, y)] /= sum;
      }
    }
  }
  return FloatBehaviour::create(b.nX(), b.nY(), b.nA(), b.nB(), std::move(p));
}

FloatBehaviour behaviour_from_quantum(const quantum::DensityMatrix& state,
                                      const std::vector<quantum::ProjectiveContext>& alice,
                                      const std::vector<quantum::ProjectiveContext>& bob) {
  if (alice.empty() || bob.empty()) throw Error(ErrorCode::ShapeMismatch, "each party needs a measurement");
  const Eigen::Index dA = alice.front().dim(), dB = bob.front().dim();
  if (dA * dB != state.dim()) throw Error(ErrorCode::DimensionMismatch, "state does not factor as Alice ⊗ Bob");
  const int nA = static_cast<int>(alice.front().projectors().size());
  const int nB = static_cast<int>(bob.front().projectors().size());
  for (const auto& m : alice) {
    if (m.dim() != dA || static_cast<int>(m.projectors().size()) != nA) {
      throw Error(ErrorCode::ShapeMismatch, "Alice's measurements differ in shape");
    }
  }
  for (const auto& m : bob) {
    if (m.dim() != dB || static_cast<int>(m.projectors().size()) != nB) {
      throw Error(ErrorCode::ShapeMismatch, "Bob's measurements differ in shape");
    }
  }
  const int nX = static_cast<int>(alice.size()), nY = static_cast<int>(bob.size());
  Eigen::VectorXd p(static_cast<Eigen::Index>(nX) * nY * nA * nB);
  for (int x = 0; x < nX; ++x) {
    for (int y = 0; y < nY; ++y) {
      for (int a = 0; a < nA; ++a) {
        for (int b = 0; b < nB; ++b) {
          const quantum::ComplexMatrix effect = quantum::tensor(alice[static_cast<std::size_t>(x)].projectors()[static_cast<std::size_t>(a)],
                                                                bob[static_cast<std::size_t>(y)].projectors()[static_cast<std::size_t>(b)]);
          p[FloatBehaviour::index(nY, nA, nB, a, b, x, y)] =
              std::clamp((effect * state.matrix()).trace().real(), 0.0, 1.0);
        }
      }
    }
  }
  return FloatBehaviour::create(nX, nY, nA, nB, std::move(p));
}

FloatBehaviour chsh_behaviour(const quantum::DensityMatrix& state, double a, double b, double c, double d) {
  using quantum::ProjectiveContext;
  using quantum::spin_observable;
  return behaviour_from_quantum(
      state,
      {ProjectiveContext::from_observable("A0", spin_observable(a)), ProjectiveContext::from_observable("A1", spin_observable(c))},
      {ProjectiveContext::from_observable("B0", spin_observable(b)), ProjectiveContext::from_observable("B1", spin_observable(d))});
}

std::vector<LdVertex> enumerate_ld_vertices(int nX, int nY, int nA, int nB) {
  double count = std::pow(static_cast<double>(nA), nX) * std::pow(static_cast<double>(nB), nY);
  if (count > static_cast<double>(kMaxLdVertices)) {
    throw Error(ErrorCode::TooLarge, "more than 10^6 local deterministic vertices");
  }
  auto strategies = [](int settings, int outcomes) {
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<std::size_t>(settings), 0);
    while (true) {
      out.push_back(s);
      int k = settings - 1;
      while (k >= 0 && s[static_cast<std::size_t>(k)] == outcomes - 1) s[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
      ++s[static_cast<std::size_t>(k)];
    }
    return out;
  };
  const auto fs = strategies(nX, nA);
  const auto gs = strategies(nY, nB);
  std::vector<LdVertex> out;
  out.reserve(fs.size() * gs.size());
  for (const auto& f : fs) {
    for (const auto& g : gs) out.push_back({f, g});
  }
  return out;
}

Behaviour vertex_behaviour(const LdVertex& v, int nA, int nB) {
  const int nX = static_cast<int>(v.f.size()), nY = static_cast<int>(v.g.size());
  VectorXr p = VectorXr::Zero(static_cast<Eigen::Index>(nX) * nY * nA * nB);
  for (int x = 0; x < nX; ++x) {
    for (int y = 0; y < nY; ++y) {
      p[Behaviour::index(nY, nA, nB, v.f[static_cast<std::size_t>(x)], v.g[static_cast<std::size_t>(y)], x, y)] = 1;
    }
  }
  return Behaviour::create(nX, nY, nA, nB, std::move(p));
}

namespace {

void require_shape(const LinearInequality& ineq, int nX, int nY, int nA, int nB) {
  if (ineq.nX != nX || ineq.nY != nY || ineq.nA != nA || ineq.nB != nB ||
      ineq.coefficients.size() != static_cast<Eigen::Index>(nX) * nY * nA * nB) {
    throw Error(ErrorCode::ShapeMismatch, "inequality and behaviour shapes differ");
  }
}

// Value of the inequality on an LD vertex: one coefficient per (x, y).
Rational vertex_value(const LinearInequality& ineq, const LdVertex& v) {
  Rational s(0);
  for (int x = 0; x < ineq.nX; ++x) {
    for (int y = 0; y < ineq.nY; ++y) {
      s += ineq.coefficients[Behaviour::index(ineq.nY, ineq.nA, ineq.nB, v.f[static_cast<std::size_t>(x)],
                                              v.g[static_cast<std::size_t>(y)], x, y)];
    }
  }
  return s;
}

}  // namespace

InequalityValue<Rational> evaluate_inequality(const LinearInequality& ineq, const Behaviour& b) {
  require_shape(ineq, b.nX(), b.nY(), b.nA(), b.nB());
  InequalityValue<Rational> out{Rational(0), true};
  for (Eigen::Index i = 0; i < b.data().size(); ++i) {
    if (ineq.coefficients[i] != 0 && b.data()[i] != 0) out.value += ineq.coefficients[i] * b.data()[i];
  }
  out.satisfied = out.value <= ineq.bound;
  return out;
}

InequalityValue<double> evaluate_inequality(const LinearInequality& ineq, const FloatBehaviour& b) {
  require_shape(ineq, b.nX(), b.nY(), b.nA(), b.nB());
  const Eigen::VectorXd c = to_double(ineq.coefficients);
  InequalityValue<double> out{c.dot(b.data()), true};
  out.satisfied = out.value <= to_double(ineq.bound) + 1e-12;
  return out;
}

LinearInequality chsh_inequality() {
  LinearInequality ineq;
  ineq.nX = ineq.nY = ineq.nA = ineq.nB = 2;
  ineq.coefficients = VectorXr::Zero(16);
  ineq.bound = 2;
  ineq.kind = InequalityKind::Bell;
  const int sign_xy[2][2] = {{1, -1}, {1, 1}};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          ineq.coefficients[Behaviour::index(2, 2, 2, a, b, x, y)] = sign_xy[x][y] * ((a + b) % 2 == 0 ? 1 : -1);
        }
      }
    }
  }
  return ineq;
}

namespace {

using boost::multiprecision::mpz_int;

// Scales a nonzero rational vector to coprime integers.
Rational primitive_scale(const VectorXr& v) {
  mpz_int lcm_den = 1, gcd_num = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    lcm_den = boost::multiprecision::lcm(lcm_den, mpz_int(boost::multiprecision::denominator(v[i])));
    gcd_num = boost::multiprecision::gcd(gcd_num, mpz_int(abs(boost::multiprecision::numerator(v[i]))));
  }
  if (gcd_num == 0) return Rational(1);
  return Rational(lcm_den) / Rational(gcd_num);
}

}  // namespace

Membership membership_lp(const Behaviour& b) {
  const auto vertices = enumerate_ld_vertices(b.nX(), b.nY(), b.nA(), b.nB());
  const Eigen::Index rows = b.data().size();
  lp::Matrix<Rational> D = lp::Matrix<Rational>::Zero(rows, static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    for (int x = 0; x < b.nX(); ++x) {
      for (int y = 0; y < b.nY(); ++y) {
        D(Behaviour::index(b.nY(), b.nA(), b.nB(), vertices[j].f[static_cast<std::size_t>(x)],
                           vertices[j].g[static_cast<std::size_t>(y)], x, y),
          static_cast<Eigen::Index>(j)) = 1;
      }
    }
  }
  const auto solution = lp::find_feasible_point<Rational>(D, b.data());
  Membership out;
  if (solution.status == lp::Status::Optimal) {
    out.inside = true;
    out.weights = solution.x;
  } else {
    LinearInequality ineq;
    ineq.nX = b.nX();
    ineq.nY = b.nY();
    ineq.nA = b.nA();
    ineq.nB = b.nB();
    ineq.kind = InequalityKind::Bell;
    ineq.coefficients = solution.farkas * primitive_scale(solution.farkas);
    bool first = true;
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      const Rational value = vertex_value(ineq, vertices[j]);
      if (first || value > ineq.bound) {
        ineq.bound = value;
        out.tight_vertex = j;
        first = false;
      }
    }
    out.separating = std::move(ineq);
  }
  if (!verify_membership(b, out)) {
    throw Error(ErrorCode::InvalidCertificate, "membership certificate failed re-verification");
  }
  return out;
}

bool verify_membership(const Behaviour& b, const Membership& m) {
  const auto vertices = enumerate_ld_vertices(b.nX(), b.nY(), b.nA(), b.nB());
  if (m.inside) {
    if (m.weights.size() != static_cast<Eigen::Index>(vertices.size())) return false;
    VectorXr mix = VectorXr::Zero(b.data().size());
    Rational total(0);
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      const Rational& w = m.weights[static_cast<Eigen::Index>(j)];
      if (w < 0) return false;
      if (w == 0) continue;
      total += w;
      for (int x = 0; x < b.nX(); ++x) {
        for (int y = 0; y < b.nY(); ++y) {
          mix[Behaviour::index(b.nY(), b.nA(), b.nB(), vertices[j].f[static_cast<std::size_t>(x)],
                               vertices[j].g[static_cast<std::size_t>(y)], x, y)] += w;
        }
      }
    }
    return total == 1 && mix == b.data();
  }
  if (!m.separating) return false;
  const auto& ineq = *m.separating;
  bool attained = false;
  for (const auto& v : vertices) {
    const Rational value = vertex_value(ineq, v);
    if (value > ineq.bound) return false;
    attained = attained || value == ineq.bound;
  }
  return attained && !evaluate_inequality(ineq, b).satisfied;
}

Rational BadziagInequality::evaluate(const std::vector<Rational>& singles,
                                     const std::vector<Rational>& pair_correlators) const {
  if (singles.size() != static_cast<std::size_t>(n) || pair_correlators.size() != pairs.size()) {
    throw Error(ErrorCode::ShapeMismatch, "Badziag functional expects n singles and one value per pair");
  }
  Rational s(0);
  for (const auto& v : singles) s += v;
  Rational p(0);
  for (const auto& v : pair_correlators) p += v;
  return s - p / 2;
}

Rational BadziagInequality::evaluate_assignment(const std::vector<int>& values) const {
  std::vector<Rational> singles, products;
  for (int v : values) singles.emplace_back(v);
  for (const auto& [i, j] : pairs) products.emplace_back(values.at(i) * values.at(j));
  return evaluate(singles, products);
}

BadziagInequality badziag_inequality(int n, int d, const std::vector<std::vector<std::size_t>>& contexts) {
  if (n < 1) throw Error(ErrorCode::InvalidScenario, "Badziag functional needs at least one observable");
  if (d < 3) throw Error(ErrorCode::DegenerateContexts, "Badziag bound needs at least three contexts");
  BadziagInequality out;
  out.n = n;
  out.d = d;
  out.bound = Rational(n * (d - 2) - 2);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& c : contexts) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= static_cast<std::size_t>(n)) throw Error(ErrorCode::InvalidScenario, "context index out of range");
      for (std::size_t j = i + 1; j < c.size(); ++j) pairs.insert(std::minmax(c[i], c[j]));
    }
  }
  out.pairs.assign(pairs.begin(), pairs.end());
  return out;
}

void OrthogonalityGraph::validate() const {
  if (weights.size() != labels.size()) throw Error(ErrorCode::InvalidScenario, "one weight per vertex is required");
  if (!projectors.empty() && projectors.size() != labels.size()) {
    throw Error(ErrorCode::InvalidScenario, "one projector per vertex is required");
  }
  for (const auto& w : weights) {
    if (w < 0) throw Error(ErrorCode::InvalidScenario, "negative vertex weight");
  }
  for (const auto& [i, j] : edges) {
    if (i == j) throw Error(ErrorCode::InvalidScenario, "self-loop in orthogonality graph");
    if (i >= size() || j >= size()) throw Error(ErrorCode::InvalidScenario, "edge endpoint out of range");
  }
}

OrthogonalityGraph cycle_graph(std::size_t n) {
  OrthogonalityGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    g.labels.push_back("v" + std::to_string(i));
    g.weights.emplace_back(1);
    g.edges.emplace_back(i, (i + 1) % n);
  }
  return g;
}

namespace {

struct BranchAndBound {
  const std::vector<Rational>& weight;
  const std::vector<std::uint64_t>& neighbours;
  Rational best;
  std::uint64_t best_set = 0;

  void search(std::uint64_t candidates, std::uint64_t chosen, const Rational& value) {
    if (candidates == 0) {
      if (value > best) {
        best = value;
        best_set = chosen;
      }
      return;
    }
    Rational bound = value;
    for (std::uint64_t c = candidates; c; c &= c - 1) bound += weight[static_cast<std::size_t>(__builtin_ctzll(c))];
    if (bound <= best && best_set != 0) return;
    if (bound < best) return;
    const auto v = static_cast<std::size_t>(__builtin_ctzll(candidates));
    const std::uint64_t bit = std::uint64_t{1} << v;
    search(candidates & ~bit & ~neighbours[v], chosen | bit, value + weight[v]);
    search(candidates & ~bit, chosen, value);
  }
};

}  // namespace

IndependenceResult weighted_independence_number(const OrthogonalityGraph& g) {
  g.validate();
  if (g.size() > 40) throw Error(ErrorCode::TooLarge, "independence number limited to 40 vertices");
  const std::size_t n = g.size();
  // Heaviest vertices first so the bound tightens early; ties by index.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.weights[a] > g.weights[b]; });
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
  std::vector<Rational> weight(n);
  std::vector<std::uint64_t> neighbours(n, 0);
  for (std::size_t k = 0; k < n; ++k) weight[k] = g.weights[order[k]];
  for (const auto& [i, j] : g.edges) {
    neighbours[position[i]] |= std::uint64_t{1} << position[j];
    neighbours[position[j]] |= std::uint64_t{1} << position[i];
  }
  BranchAndBound bb{weight, neighbours, Rational(0), 0};
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  bb.search(all, 0, Rational(0));
  IndependenceResult out;
  out.value = bb.best;
  for (std::size_t k = 0; k < n; ++k) {
    if (bb.best_set >> k & 1) out.witness.push_back(order[k]);
  }
  std::sort(out.witness.begin(), out.witness.end());
  return out;
}

namespace {

Rational edge_weight(const OrthogonalityGraph& g, std::size_t i, std::size_t j) {
  return std::max(g.weights[i], g.weights[j]);
}

}  // namespace

CswResult csw_inequality(const OrthogonalityGraph& g, const ExactModel& model) {
  g.validate();
  const auto& s = model.scenario();
  std::vector<std::size_t> measurement(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) measurement[i] = s.index_of(g.labels[i]);
  auto probability_one = [&](MeasurementScenario::Context members) -> Rational {
    std::sort(members.begin(), members.end());
    for (std::size_t c = 0; c < s.context_count(); ++c) {
      const auto& ctx = s.contexts()[c];
      if (!std::includes(ctx.begin(), ctx.end(), members.begin(), members.end())) continue;
      const Table<Rational> m = marginalize(s, ctx, model.table(c), members);
      return m[0];
    }
    std::string what;
    for (auto k : members) what += " '" + s.measurements()[k].label + "'";
    throw Error(ErrorCode::LabelMismatch, "no context contains" + what);
  };
  Rational lhs(0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.weights[i] != 0) lhs += g.weights[i] * probability_one({measurement[i]});
  }
  for (const auto& [i, j] : g.edges) {
    lhs -= edge_weight(g, i, j) * probability_one({measurement[i], measurement[j]});
  }
  CswResult out;
  out.bound = weighted_independence_number(g).value;
  out.exact_lhs = lhs;
  out.lhs = to_double(lhs);
  out.violated = lhs > out.bound;
  return out;
}

CswResult csw_inequality(const OrthogonalityGraph& g, const quantum::DensityMatrix& state) {
  g.validate();
  if (g.projectors.size() != g.size()) throw Error(ErrorCode::MissingProjectors, "graph has no attached projectors");
  double lhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    lhs += to_double(g.weights[i]) * quantum::born_prob(state, g.projectors[i]);
  }
  for (const auto& [i, j] : g.edges) {
    const double joint = (state.matrix() * g.projectors[i] * g.projectors[j]).trace().real();
    lhs -= to_double(edge_weight(g, i, j)) * std::clamp(joint, 0.0, 1.0);
  }
  CswResult out;
  out.bound = weighted_independence_number(g).value;
  out.lhs = lhs;
  out.violated = lhs > to_double(out.bound) + 1e-12;
  return out;
}

BellFromContextuality contextuality_to_bell(const OrthogonalityGraph& g, Eigen::Index d) {
  g.validate();
  if (g.projectors.size() != g.size() || g.size() == 0) {
    throw Error(ErrorCode::MissingProjectors, "contextuality_to_bell needs one projector per vertex");
  }
  const int n = static_cast<int>(g.size());
  LinearInequality ineq;
  ineq.nX = ineq.nY = n;
  ineq.nA = ineq.nB = 2;
  ineq.kind = InequalityKind::Bell;
  ineq.coefficients = VectorXr::Zero(static_cast<Eigen::Index>(n) * n * 4);
  for (int i = 0; i < n; ++i) ineq.coefficients[Behaviour::index(n, 2, 2, 0, 0, i, i)] += g.weights[static_cast<std::size_t>(i)];
  for (const auto& [i, j] : g.edges) {
    const Rational half = edge_weight(g, i, j) / 2;
    ineq.coefficients[Behaviour::index(n, 2, 2, 0, 0, static_cast<int>(i), static_cast<int>(j))] -= half;
    ineq.coefficients[Behaviour::index(n, 2, 2, 0, 0, static_cast<int>(j), static_cast<int>(i))] -= half;
  }
  ineq.bound = weighted_independence_number(g).value;

  std::vector<quantum::ProjectiveContext> alice, bob;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& p = g.projectors[i];
    if (p.rows() != d) throw Error(ErrorCode::DimensionMismatch, "projector dimension differs from d");
    const quantum::ComplexMatrix id = quantum::identity(d);
    const quantum::ComplexMatrix conj = p.conjugate();
    alice.push_back(quantum::ProjectiveContext::create(g.labels[i], {p, id - p}));
    bob.push_back(quantum::ProjectiveContext::create(g.labels[i], {conj, id - conj}));
  }
  const auto state = quantum::DensityMatrix::from_ket(quantum::max_entangled(d));
  FloatBehaviour behaviour = behaviour_from_quantum(state, alice, bob);
  const double value = evaluate_inequality(ineq, behaviour).value;
  return {std::move(ineq), std::move(behaviour), value};
}

SdcReduction sic_to_sdc_reduction(const ObservableSet& set, std::size_t chosen, double eigenvalue) {
  if (chosen >= set.observables.size()) throw Error(ErrorCode::LabelMismatch, "chosen observable is not in the set");
  const auto spectrum = quantum::spectral_decomposition(set.observables[chosen]);
  std::optional<std::size_t> level;
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    if (std::abs(spectrum.eigenvalues[k] - eigenvalue) <= 1e-8) level = k;
  }
  if (!level) throw Error(ErrorCode::BadEigenvalue, "value is not an eigenvalue of the chosen observable");
  const auto& projector = spectrum.projectors[*level];
  // Lüders post-state of the first computational basis ket with nonzero overlap.
  SdcReduction out;
  for (Eigen::Index k = 0; k < projector.rows(); ++k) {
    const quantum::Ket v = projector * quantum::basis_ket(projector.rows(), k);
    if (v.norm() > 1e-6) {
      out.state = v / v.norm();
      break;
    }
  }
  std::vector<std::size_t> remap(set.observables.size());
  for (std::size_t i = 0, next = 0; i < set.observables.size(); ++i) {
    if (i == chosen) continue;
    remap[i] = next++;
    out.reduced.labels.push_back(set.labels[i]);
    out.reduced.observables.push_back(set.observables[i]);
  }
  std::set<std::vector<std::size_t>> seen;
  for (const auto& c : set.contexts) {
    std::vector<std::size_t> reduced;
    for (auto i : c) {
      if (i != chosen) reduced.push_back(remap[i]);
    }
    std::vector<std::size_t> key = reduced;
    std::sort(key.begin(), key.end());
    if (reduced.empty() || !seen.insert(key).second) continue;
    out.reduced.contexts.push_back(std::move(reduced));
  }
  return out;
}

ObservableSet peres_mermin_set() {
  const auto square = quantum::peres_mermin_square();
  const char* names[3][3] = {{"ZI", "IZ", "ZZ"}, {"IX", "XI", "XX"}, {"ZX", "XZ", "YY"}};
  ObservableSet out;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      out.labels.emplace_back(names[r][c]);
      out.observables.push_back(square[r][c]);
    }
  }
  for (std::size_t r = 0; r < 3; ++r) out.contexts.push_back({3 * r, 3 * r + 1, 3 * r + 2});
  for (std::size_t c = 0; c < 3; ++c) out.contexts.push_back({c, 3 + c, 6 + c});
  return out;
}

}  // namespace classicality::polytope
