#pragma once

#include <random>
#include <string>
#include <vector>

#include "qss/qstate.hpp"

namespace testutil {

// Haar-ish random pure state: i.i.d. complex Gaussian amplitudes, normalized.
inline qss::PureState random_state(const std::vector<std::string>& labels,
                                   std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  qss::PureState s;
  s.labels = labels;
  s.amps.resize(Eigen::Index(1) << labels.size());
  for (Eigen::Index i = 0; i < s.amps.size(); ++i) {
    s.amps[i] = std::complex<double>(nd(gen), nd(gen));
  }
  s.amps.normalize();
  return s;
}

// Measures every qubit (in label order) in the given bases and returns the
// outcome tuple packed MSB-first, using `gen` for the Born draws.
inline unsigned long sample_tuple(const qss::PureState& state,
                                  const std::vector<qss::Basis>& bases,
                                  std::mt19937_64& gen) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  qss::PureState cur = state;
  unsigned long bits = 0;
  for (std::size_t q = 0; q < bases.size(); ++q) {
    const std::string label = state.labels[q];
    auto [bit, rest] = qss::measure_one(cur, label, bases[q], ud(gen));
    bits = (bits << 1) | bit.value;
    cur = std::move(rest);
  }
  return bits;
}

}  // namespace testutil
