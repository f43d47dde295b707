#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ssfm/stability.hpp"

namespace ssfm {

struct ResonanceParams {
  int N = 2;
  double c2 = 1.0;
  double delta2 = 1.0;
  double s2 = 1.0;
  /// 0 selects varpi := omega; > 0 uses the constructed modified frequencies
  /// and checks max |varpi - omega| <= eps_hat.
  double eps_hat = 0.0;
  /// Keep enumerating after the first violation and collect every witness.
  bool exhaustive = false;
  std::size_t max_stored_witnesses = 1000;
};

/// Modes sharing one (exactly equal) modified-frequency value.
struct FrequencyClass {
  double varpi = 0.0;
  std::vector<std::size_t> members;  // indices into FrequencyTable::modes
  std::size_t representative = 0;    // member of smallest |j|
  long long min_norm2 = 0;
  long long max_norm2 = 0;
  std::size_t max_member = 0;        // member attaining max_norm2
  std::vector<long long> n_values;   // distinct n(j) in the class, sorted
};

/// Class-level combination vector: (class index, nonzero coefficient) pairs,
/// sorted by class index.
using ClassVector = std::vector<std::pair<std::size_t, int>>;

struct ResonanceWitness {
  ClassVector k;
  double delta = 0.0;
  std::size_t l_class = 0;  // class of the index l the inequality is checked at
  double lhs = 0.0;         // |l|^4 / prod |j|^{2|k_j|}
  double rhs = 0.0;         // c2 delta^{N/s2}
  double margin() const { return rhs - lhs; }
};

struct CompleteResonanceWitness {
  ClassVector k;
  double residual = 0.0;  // distance of h (k.varpi) to 2 pi Z
  std::string reason;
};

struct ResonanceReport {
  ResonanceParams params;
  std::string frequency_source;  // "omega" or "varpi"
  std::string quantifier_reading;
  std::vector<FrequencyClass> classes;

  bool part_a = false;
  double max_frequency_gap = 0.0;  // max |varpi - omega| (0 when varpi := omega)
  bool part_b = false;
  bool part_c = false;
  bool holds = false;
  bool enumeration_complete = false;
  std::string note;

  std::size_t vectors_checked = 0;
  std::size_t near_resonant = 0;  // vectors with delta <= delta2
  std::size_t complete_resonances = 0;
  std::size_t violations_b = 0;
  std::size_t violations_c = 0;

  std::optional<ResonanceWitness> tightest;  // smallest margin among checks
  std::vector<ResonanceWitness> witnesses_b;
  std::vector<CompleteResonanceWitness> witnesses_c;
};

/// Groups the modes of a table by exact frequency value.
std::vector<FrequencyClass> frequency_classes(const FrequencyTable& table,
                                              bool use_varpi);

/// Non-resonance check over all class-level vectors with 0 < |k|_1 <= N+1.
ResonanceReport check_assumption2(const FrequencyTable& table,
                                  const ResonanceParams& params);

/// |e^{i theta} - 1| / h with theta = h * sum_c k_c varpi_c.
double small_divisor(double theta, double h);

/// Distance of theta to the nearest multiple of 2 pi.
double distance_to_2pi_multiple(double theta);

}  // namespace ssfm
