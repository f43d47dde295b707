#include "ssfm/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace ssfm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// h (k.varpi) within this distance of 2 pi Z counts as a complete resonance.
constexpr double kCompleteResonanceTol = 1e-9 * kTwoPi;

class Enumerator {
 public:
  Enumerator(const FrequencyTable& table, ResonanceReport& report)
      : h_(table.params.h), report_(report), p_(report.params) {
    for (const auto& c : report_.classes) {
      freq_.push_back(c.varpi);
      min_norm2_.push_back(static_cast<double>(c.min_norm2));
      const double mx = static_cast<double>(c.max_norm2);
      max_norm2_sq_.push_back(mx * mx);
      n_of_class_.push_back(c.n_values.front());
    }
    exponent_ = static_cast<double>(p_.N) / p_.s2;
  }

  void run() {
    for (int m = 1; m <= p_.N + 1 && !stop_; ++m) recurse(0, m);
  }

  bool stopped() const { return stop_; }

 private:
  void recurse(std::size_t i, int remaining) {
    if (stop_) return;
    if (remaining == 0) {
      evaluate();
      return;
    }
    if (i == freq_.size()) return;
    recurse(i + 1, remaining);
    for (int a = 1; a <= remaining && !stop_; ++a) {
      for (int sign : {1, -1}) {
        current_.emplace_back(i, sign * a);
        recurse(i + 1, remaining - a);
        current_.pop_back();
        if (stop_) return;
      }
    }
  }

  void evaluate() {
    ++report_.vectors_checked;
    double sum = 0.0;
    for (const auto& [c, k] : current_) sum += k * freq_[c];
    const double theta = h_ * sum;
    const double delta = small_divisor(theta, h_);

    if (delta <= p_.delta2) {
      ++report_.near_resonant;
      double denom = 1.0;
      for (const auto& [c, k] : current_)
        denom *= std::pow(min_norm2_[c], std::abs(k));
      const double rhs = p_.c2 * std::pow(delta, exponent_);
      for (const auto& [c, k] : current_) {
        ResonanceWitness w{current_, delta, c, max_norm2_sq_[c] / denom, rhs};
        if (!report_.tightest || w.margin() < report_.tightest->margin())
          report_.tightest = w;
        if (w.lhs > w.rhs) {
          ++report_.violations_b;
          if (report_.witnesses_b.size() < p_.max_stored_witnesses)
            report_.witnesses_b.push_back(std::move(w));
          if (!p_.exhaustive) stop_ = true;
        }
      }
    }

    const double residual = distance_to_2pi_multiple(theta);
    if (residual <= kCompleteResonanceTol) {
      ++report_.complete_resonances;
      std::map<long long, long long> per_n;
      for (const auto& [c, k] : current_) per_n[n_of_class_[c]] += k;
      const bool balanced = std::all_of(per_n.begin(), per_n.end(),
                                        [](const auto& e) { return e.second == 0; });
      if (!balanced) {
        ++report_.violations_c;
        if (report_.witnesses_c.size() < p_.max_stored_witnesses)
          report_.witnesses_c.push_back(
              {current_, residual, "complete resonance with unbalanced n-class sums"});
        if (!p_.exhaustive) stop_ = true;
      }
    }
  }

  double h_;
  ResonanceReport& report_;
  const ResonanceParams& p_;
  std::vector<double> freq_;
  std::vector<double> min_norm2_;
  std::vector<double> max_norm2_sq_;
  std::vector<long long> n_of_class_;
  double exponent_ = 0.0;
  ClassVector current_;
  bool stop_ = false;
};

}  // namespace

double small_divisor(double theta, double h) {
  return std::abs(std::polar(1.0, theta) - cplx(1.0, 0.0)) / h;
}

double distance_to_2pi_multiple(double theta) {
  return std::abs(std::remainder(theta, kTwoPi));
}

std::vector<FrequencyClass> frequency_classes(const FrequencyTable& table,
                                              bool use_varpi) {
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < table.modes.size(); ++i) {
    const auto& m = table.modes[i];
    const auto& f = use_varpi ? m.varpi : m.omega;
    if (!f)
      throw std::invalid_argument("frequency_classes: frequency of mode " +
                                  mode_to_string(m.j) + " is undefined");
    groups[*f].push_back(i);
  }
  std::vector<FrequencyClass> classes;
  classes.reserve(groups.size());
  for (auto& [value, members] : groups) {
    FrequencyClass c;
    c.varpi = value;
    c.members = members;
    c.representative = members.front();
    c.min_norm2 = norm2(table.modes[members.front()].j);
    c.max_norm2 = c.min_norm2;
    c.max_member = members.front();
    for (std::size_t idx : members) {
      const long long q = norm2(table.modes[idx].j);
      if (q < c.min_norm2) {
        c.min_norm2 = q;
        c.representative = idx;
      }
      if (q > c.max_norm2) {
        c.max_norm2 = q;
        c.max_member = idx;
      }
      c.n_values.push_back(table.modes[idx].n);
    }
    std::sort(c.n_values.begin(), c.n_values.end());
    c.n_values.erase(std::unique(c.n_values.begin(), c.n_values.end()),
                     c.n_values.end());
    classes.push_back(std::move(c));
  }
  std::sort(classes.begin(), classes.end(),
            [&](const FrequencyClass& a, const FrequencyClass& b) {
              if (a.min_norm2 != b.min_norm2) return a.min_norm2 < b.min_norm2;
              return table.modes[a.representative].flat <
                     table.modes[b.representative].flat;
            });
  return classes;
}

ResonanceReport check_assumption2(const FrequencyTable& table,
                                  const ResonanceParams& params) {
  if (params.N < 2) throw std::invalid_argument("assumption 2: N must be >= 2");
  if (!(params.c2 > 0.0) || !(params.delta2 > 0.0) || !(params.s2 > 0.0))
    throw std::invalid_argument("assumption 2: c2, delta2, s2 must be > 0");
  if (!(params.eps_hat >= 0.0))
    throw std::invalid_argument("assumption 2: eps_hat must be >= 0");

  ResonanceReport r;
  r.params = params;
  r.quantifier_reading =
      "class-support: within a class of equal modified frequencies at most one "
      "member carries a nonzero coefficient";

  if (!table.omega_complete()) {
    r.frequency_source = "omega";
    r.note = "numerical frequencies undefined for some modes (linear stability fails)";
    return r;
  }

  const bool ell_zero = norm2(table.params.ell) == 0;
  bool use_varpi = false;
  if (!ell_zero) {
    r.params.eps_hat = 0.0;
    r.note = "ell != 0: varpi := omega, eps_hat := 0";
  } else if (params.eps_hat > 0.0) {
    if (!table.varpi_available || !table.eps_hat) {
      r.frequency_source = "varpi";
      r.note = "modified frequencies unavailable: " + table.varpi_note;
      return r;
    }
    use_varpi = true;
  }
  r.frequency_source = use_varpi ? "varpi" : "omega";
  r.max_frequency_gap = use_varpi ? *table.eps_hat : 0.0;
  r.part_a = r.max_frequency_gap <= r.params.eps_hat;

  r.classes = frequency_classes(table, use_varpi);

  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    if (r.classes[c].n_values.size() > 1) {
      ++r.violations_c;
      r.witnesses_c.push_back(
          {{{c, 1}}, 0.0,
           "class mixes n values " + std::to_string(r.classes[c].n_values[0]) +
               " and " + std::to_string(r.classes[c].n_values[1]) +
               ": k = +1/-1 on two members is a complete resonance"});
    }
  }

  // A class mixing several n values was reported above; its first n stands
  // in for the per-n bookkeeping during enumeration.
  if (r.violations_c == 0 || params.exhaustive) {
    Enumerator e(table, r);
    e.run();
    r.enumeration_complete = !e.stopped();
  }

  r.part_b = r.violations_b == 0 && r.enumeration_complete;
  r.part_c = r.violations_c == 0 && r.enumeration_complete;
  r.holds = r.part_a && r.part_b && r.part_c;
  return r;
}

}  // namespace ssfm
