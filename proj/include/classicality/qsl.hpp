#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace classicality::qsl {

enum class Basis { X, Y, Z };

/// Two classical bits standing in for a qubit. Outcome bit 0 ↔ eigenvalue +1.
struct QslState {
  int x0 = 0;  // computational bit
  int p0 = 0;  // phase bit

  friend bool operator==(const QslState&, const QslState&) = default;
};

/// X and Z flip the computational and phase bit. Swap exchanges the two bits
/// and is only accepted with extensions enabled; on the quantum side it is
/// compared against the Hadamard, which it matches for X and Z but not Y.
enum class Gate { X, Z, Swap };

struct QslProgram {
  Basis prep_basis = Basis::Z;
  int prep_value = 0;
  std::vector<Gate> gates;
  Basis measure_basis = Basis::Z;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  bool extensions = false;
};

using Rng = std::mt19937_64;

/// Independent stream for one shot: mt19937_64 seeded by splitmix64(seed ⊕ shot·golden).
Rng shot_rng(std::uint64_t seed, std::uint64_t shot);

/// Z: x0 = value, p0 random. X: p0 = value, x0 random. Y: x0 ⊕ p0 = value, x0 random.
QslState prepare(Basis basis, int value, Rng& rng);
QslState apply_x(QslState s);
QslState apply_z(QslState s);
QslState apply_swap(QslState s);

/// Z returns x0 and re-draws p0; X returns p0 and re-draws x0; Y returns
/// x0 ⊕ p0 and re-draws both bits keeping their parity.
std::pair<int, QslState> measure(QslState s, Basis basis, Rng& rng);

/// The outcome every measurement would give right now: Z ↦ x0, X ↦ p0, Y ↦ x0 ⊕ p0.
/// Indexed by Basis.
std::array<int, 3> value_assignment(QslState s);

struct QslComparison {
  std::array<std::uint64_t, 2> counts{};
  std::array<double, 2> freqs{};
  std::array<double, 2> quantum{};
  double fidelity = 0.0;  // 1 − ½ Σ |freq − quantum|
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Runs the program shot by shot and sets the frequencies beside the Born-rule
/// probabilities of the matching qubit circuit. Throws InvalidScenario when
/// shots = 0, the preparation value is not a bit, or Swap is used without extensions.
QslComparison compare(const QslProgram& program);

Basis parse_basis(const std::string& text);
std::string to_string(Basis b);
Gate parse_gate(const std::string& text);

}  // namespace classicality::qsl
