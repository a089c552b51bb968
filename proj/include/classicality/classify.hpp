#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "classicality/io.hpp"

namespace classicality {

enum class Verdict { Yes, No, Undecided, NotApplicable };

std::string to_string(Verdict v);

struct ClassificationReport {
  std::string kind;
  Verdict bell_local = Verdict::NotApplicable;
  Verdict ks_noncontextual = Verdict::Undecided;
  Verdict spekkens_noncontextual = Verdict::Undecided;
  std::string hierarchy_level;
  /// One entry per sub-test, each re-verified before it is recorded.
  io::Json certificates = io::Json::array();
  std::vector<std::string> notes;
  /// Present when the input declares itself classical; false if a verdict contradicts it.
  std::optional<bool> classical_flag_consistent;
};

struct RunConfig {
  std::string kind;  // empty: read "kind" from the input, or infer it
  std::uint64_t seed = 0;
  int search_restarts = 64;
};

/// Violation message, or nullopt when the report respects
/// bell = no ⇒ ks = no, ks = no ⇒ spekkens = no, and
/// spekkens = yes ⇒ ks ∈ {yes, undecided} ∧ bell ∈ {yes, not-applicable}.
std::optional<std::string> check_implications(const ClassificationReport& report);

/// "empirical", "quantum", "gpt" or "prep-ensemble". Throws SchemaError.
std::string detect_kind(const io::Json& input);

/// Runs the testers for the input kind and assembles the report. Throws
/// SchemaError for unusable input and LatticeViolation if the verdicts ever
/// break the implication lattice.
ClassificationReport classify(const io::Json& input, const RunConfig& config = {});

io::Json to_json(const ClassificationReport& report);

/// Single-system or bipartite quantum input as an empirical model; also used by `validate`.
FloatModel quantum_input_model(const io::Json& input);

}  // namespace classicality
