#include "classicality/qsl.hpp"

#include <cmath>

#include "classicality/error.hpp"
#include "classicality/quantum.hpp"

namespace classicality::qsl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int coin(Rng& rng) { return static_cast<int>(rng() >> 63); }

int bit(int v) { return v & 1; }

/// +1 eigenvector (value 0) or −1 eigenvector (value 1) of the Pauli for `b`.
quantum::Ket eigenket(Basis b, int value) {
  const double h = 1.0 / std::sqrt(2.0);
  const quantum::Complex s = value == 0 ? 1.0 : -1.0;
  quantum::Ket k(2);
  switch (b) {
    case Basis::Z: k = quantum::basis_ket(2, value); break;
    case Basis::X: k << h, s * h; break;
    case Basis::Y: k << h, s * quantum::Complex(0, h); break;
  }
  return k;
}

quantum::ComplexMatrix gate_unitary(Gate g) {
  switch (g) {
    case Gate::X: return quantum::pauli_x();
    case Gate::Z: return quantum::pauli_z();
    case Gate::Swap: return (quantum::pauli_x() + quantum::pauli_z()) / std::sqrt(2.0);
  }
  return quantum::identity(2);
}

}  // namespace

Rng shot_rng(std::uint64_t seed, std::uint64_t shot) {
  return Rng(splitmix64(seed ^ splitmix64(shot)));
}

QslState prepare(Basis basis, int value, Rng& rng) {
  const int r = coin(rng);
  switch (basis) {
    case Basis::Z: return {bit(value), r};
    case Basis::X: return {r, bit(value)};
    case Basis::Y: return {r, r ^ bit(value)};
  }
  return {};
}

QslState apply_x(QslState s) { return {s.x0 ^ 1, s.p0}; }
QslState apply_z(QslState s) { return {s.x0, s.p0 ^ 1}; }
QslState apply_swap(QslState s) { return {s.p0, s.x0}; }

std::pair<int, QslState> measure(QslState s, Basis basis, Rng& rng) {
  const int r = coin(rng);
  switch (basis) {
    case Basis::Z: return {s.x0, {s.x0, r}};
    case Basis::X: return {s.p0, {r, s.p0}};
    case Basis::Y: {
      const int parity = s.x0 ^ s.p0;
      return {parity, {r, r ^ parity}};
    }
  }
  return {0, s};
}

std::array<int, 3> value_assignment(QslState s) {
  std::array<int, 3> v{};
  v[static_cast<int>(Basis::X)] = s.p0;
  v[static_cast<int>(Basis::Y)] = s.x0 ^ s.p0;
  v[static_cast<int>(Basis::Z)] = s.x0;
  return v;
}

QslComparison compare(const QslProgram& program) {
  if (program.shots == 0) throw Error(ErrorCode::InvalidScenario, "shots must be at least 1");
  if (program.prep_value != 0 && program.prep_value != 1) {
    throw Error(ErrorCode::InvalidScenario, "preparation value must be 0 or 1");
  }
  for (auto g : program.gates) {
    if (g == Gate::Swap && !program.extensions) {
      throw Error(ErrorCode::InvalidScenario, "the swap gate needs extensions enabled");
    }
  }
  QslComparison out;
  out.shots = program.shots;
  out.seed = program.seed;
  for (std::uint64_t shot = 0; shot < program.shots; ++shot) {
    Rng rng = shot_rng(program.seed, shot);
    QslState s = prepare(program.prep_basis, program.prep_value, rng);
    for (auto g : program.gates) {
      s = g == Gate::X ? apply_x(s) : g == Gate::Z ? apply_z(s) : apply_swap(s);
    }
    ++out.counts[static_cast<std::size_t>(measure(s, program.measure_basis, rng).first)];
  }
  quantum::Ket psi = eigenket(program.prep_basis, program.prep_value);
  for (auto g : program.gates) psi = gate_unitary(g) * psi;
  const auto state = quantum::DensityMatrix::from_ket(psi);
  double distance = 0.0;
  for (int k = 0; k < 2; ++k) {
    out.freqs[k] = static_cast<double>(out.counts[k]) / static_cast<double>(program.shots);
    out.quantum[k] = quantum::born_prob(state, quantum::outer(eigenket(program.measure_basis, k)));
    distance += std::abs(out.freqs[k] - out.quantum[k]);
  }
  out.fidelity = 1.0 - 0.5 * distance;
  return out;
}

Basis parse_basis(const std::string& text) {
  if (text == "X" || text == "x") return Basis::X;
  if (text == "Y" || text == "y") return Basis::Y;
  if (text == "Z" || text == "z") return Basis::Z;
  throw Error(ErrorCode::SchemaError, "unknown basis '" + text + "'");
}

std::string to_string(Basis b) {
  switch (b) {
    case Basis::X: return "X";
    case Basis::Y: return "Y";
    case Basis::Z: return "Z";
  }
  return "?";
}

Gate parse_gate(const std::string& text) {
  if (text == "X") return Gate::X;
  if (text == "Z") return Gate::Z;
  if (text == "H" || text == "swap") return Gate::Swap;
  throw Error(ErrorCode::SchemaError, "unknown gate '" + text + "'");
}

}  // namespace classicality::qsl
