#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

// Exact pure-state engine for small (<= ~5 qubit) systems.
//
// Conventions used throughout:
//   * Qubits carry symbolic labels (e.g. "A", "B", "C'"); labels[0] addresses
//     the MOST significant bit of the amplitude index, so the amplitude at
//     index 0b01 of a state labeled {A, B} is the |0>_A |1>_B coefficient.
//   * Bit value 0 is the "+" eigenstate of its basis: |0>, |+x>, |+y>;
//     bit 1 is |1>, |-x>, |-y>.
//   * Bell-state order is PhiPlus, PhiMinus, PsiPlus, PsiMinus everywhere
//     (construction, decomposition, and cumulative sampling).
//   * PauliOp::XZ means "apply Z, then X":  XZ|0> = |1>,  XZ|1> = -|0>.
//   * All randomness is a caller-supplied uniform real in [0,1); the engine
//     holds no RNG state.  Cumulative sampling iterates outcomes in the fixed
//     canonical order (bit 0 then 1; Bell order as above), so identical draws
//     give identical transcripts.

namespace qss {

enum class Basis : std::uint8_t { Z, X, Y };
enum class BellOutcome : std::uint8_t { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
enum class PauliOp : std::uint8_t { I, X, Z, XZ };

// The four two-qubit signal states of the KKI-style protocol: the Bell states
// psi+ and phi-, plus their uniform superpositions
//   CapPsiPlus  = (phi- + psi+)/sqrt(2),  CapPhiMinus = (phi- - psi+)/sqrt(2).
enum class KkiSignal : std::uint8_t { PsiPlus, PhiMinus, CapPsiPlus, CapPhiMinus };

inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  throw std::logic_error("bad Basis tag");
}

inline const char* to_string(BellOutcome o) {
  switch (o) {
    case BellOutcome::PhiPlus: return "phi+";
    case BellOutcome::PhiMinus: return "phi-";
    case BellOutcome::PsiPlus: return "psi+";
    case BellOutcome::PsiMinus: return "psi-";
  }
  throw std::logic_error("bad BellOutcome tag");
}

inline const char* to_string(PauliOp p) {
  switch (p) {
    case PauliOp::I: return "I";
    case PauliOp::X: return "X";
    case PauliOp::Z: return "Z";
    case PauliOp::XZ: return "XZ";
  }
  throw std::logic_error("bad PauliOp tag");
}

inline const char* to_string(KkiSignal s) {
  switch (s) {
    case KkiSignal::PsiPlus: return "psi+";
    case KkiSignal::PhiMinus: return "phi-";
    case KkiSignal::CapPsiPlus: return "Psi+";
    case KkiSignal::CapPhiMinus: return "Phi-";
  }
  throw std::logic_error("bad KkiSignal tag");
}

constexpr std::array<BellOutcome, 4> kBellOrder = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

constexpr std::array<KkiSignal, 4> kKkiSignalOrder = {
    KkiSignal::PsiPlus, KkiSignal::PhiMinus, KkiSignal::CapPsiPlus,
    KkiSignal::CapPhiMinus};

// A classical measurement outcome (or key) bit.
struct Bit {
  std::uint8_t value = 0;

  constexpr Bit() = default;
  constexpr explicit Bit(bool one) : value(one ? 1 : 0) {}

  friend constexpr Bit operator^(Bit a, Bit b) {
    return Bit((a.value ^ b.value) != 0);
  }
  friend constexpr bool operator==(Bit a, Bit b) = default;
};

// Normalized pure state over n labeled qubits, dense over all 2^n amplitudes.
template <class Scalar = double>
struct BasicPureState {
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  std::vector<std::string> labels;  // labels[0] <-> most significant index bit
  Vector amps;

  int num_qubits() const { return static_cast<int>(labels.size()); }
  Eigen::Index dim() const { return amps.size(); }
};

using PureState = BasicPureState<double>;

namespace detail {

template <class Scalar>
std::complex<Scalar> imag_unit() {
  return std::complex<Scalar>(Scalar(0), Scalar(1));
}

// Amplitudes <0|b>, <1|b> of the requested eigenstate.
template <class Scalar>
std::array<std::complex<Scalar>, 2> ket2(Bit b, Basis basis) {
  using C = std::complex<Scalar>;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  const C i = imag_unit<Scalar>();
  switch (basis) {
    case Basis::Z:
      return b.value ? std::array<C, 2>{C(0), C(1)} : std::array<C, 2>{C(1), C(0)};
    case Basis::X:
      return b.value ? std::array<C, 2>{C(r), C(-r)} : std::array<C, 2>{C(r), C(r)};
    case Basis::Y:
      return b.value ? std::array<C, 2>{C(r), -i * r} : std::array<C, 2>{C(r), i * r};
  }
  throw std::logic_error("bad Basis tag");
}

// Two-qubit Bell amplitudes in MSB-first order (|00>, |01>, |10>, |11>).
template <class Scalar>
std::array<std::complex<Scalar>, 4> bell4(BellOutcome o) {
  using C = std::complex<Scalar>;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  switch (o) {
    case BellOutcome::PhiPlus: return {C(r), C(0), C(0), C(r)};
    case BellOutcome::PhiMinus: return {C(r), C(0), C(0), C(-r)};
    case BellOutcome::PsiPlus: return {C(0), C(r), C(r), C(0)};
    case BellOutcome::PsiMinus: return {C(0), C(r), C(-r), C(0)};
  }
  throw std::logic_error("bad BellOutcome tag");
}

// 2x2 matrix of a Pauli tag, column-major pairs {m00, m10, m01, m11}.
template <class Scalar>
std::array<std::complex<Scalar>, 4> pauli2(PauliOp p) {
  using C = std::complex<Scalar>;
  switch (p) {
    case PauliOp::I: return {C(1), C(0), C(0), C(1)};
    case PauliOp::X: return {C(0), C(1), C(1), C(0)};
    case PauliOp::Z: return {C(1), C(0), C(0), C(-1)};
    case PauliOp::XZ: return {C(0), C(1), C(-1), C(0)};  // X*Z: |0>->|1>, |1>->-|0>
  }
  throw std::logic_error("bad PauliOp tag");
}

// Bit of `index` addressed by label position `pos` (MSB-first packing).
inline int bit_at(Eigen::Index index, int pos, int n) {
  return static_cast<int>((index >> (n - 1 - pos)) & 1);
}

// In-place 2x2 update of the qubit at label position `pos`.
template <class Scalar>
void apply_2x2(typename BasicPureState<Scalar>::Vector& v, int pos, int n,
               const std::array<std::complex<Scalar>, 4>& m) {
  const Eigen::Index hi = Eigen::Index(1) << (n - 1 - pos);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if ((i & hi) != 0) continue;
    const auto a0 = v[i];
    const auto a1 = v[i | hi];
    v[i] = m[0] * a0 + m[2] * a1;
    v[i | hi] = m[1] * a0 + m[3] * a1;
  }
}

}  // namespace detail

// Position of `label` in the state's label list; throws if absent.
template <class Scalar>
int label_position(const BasicPureState<Scalar>& s, std::string_view label) {
  for (int i = 0; i < s.num_qubits(); ++i) {
    if (s.labels[i] == label) return i;
  }
  throw std::invalid_argument("no qubit labeled '" + std::string(label) + "'");
}

template <class Scalar>
Scalar state_norm(const BasicPureState<Scalar>& s) {
  return s.amps.norm();
}

// Checks the representation invariants: unique labels, 2^n amplitudes, finite
// entries, unit norm within 1e-12.  Throws std::invalid_argument on violation.
template <class Scalar>
void validate(const BasicPureState<Scalar>& s) {
  const int n = s.num_qubits();
  if (s.dim() != (Eigen::Index(1) << n)) {
    throw std::invalid_argument("amplitude count is not 2^(label count)");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (s.labels[i] == s.labels[j]) {
        throw std::invalid_argument("duplicate qubit label '" + s.labels[i] + "'");
      }
    }
  }
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (!std::isfinite(s.amps[i].real()) || !std::isfinite(s.amps[i].imag())) {
      throw std::invalid_argument("non-finite amplitude");
    }
  }
  // 1e-12 for double; widened only as far as the scalar's own precision demands.
  const Scalar tol = std::max(Scalar(1e-12),
                              Scalar(64) * std::numeric_limits<Scalar>::epsilon());
  if (std::abs(state_norm(s) - Scalar(1)) > tol) {
    throw std::invalid_argument("state norm differs from 1 beyond tolerance");
  }
}

// Single-qubit eigenstate |b> of `basis` carrying the given label.
template <class Scalar = double>
BasicPureState<Scalar> make_ket(Bit b, Basis basis, std::string label) {
  BasicPureState<Scalar> s;
  s.labels = {std::move(label)};
  const auto k = detail::ket2<Scalar>(b, basis);
  s.amps.resize(2);
  s.amps[0] = k[0];
  s.amps[1] = k[1];
  return s;
}

// Tensor product; a's labels come first (and stay most significant).
template <class Scalar>
BasicPureState<Scalar> tensor(const BasicPureState<Scalar>& a,
                              const BasicPureState<Scalar>& b) {
  for (const auto& la : a.labels) {
    for (const auto& lb : b.labels) {
      if (la == lb) {
        throw std::invalid_argument("tensor: overlapping label '" + la + "'");
      }
    }
  }
  BasicPureState<Scalar> out;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  out.amps = Eigen::kroneckerProduct(a.amps, b.amps).eval();
  return out;
}

// Three-qubit GHZ state (|000> + |111>)/sqrt(2).
template <class Scalar = double>
BasicPureState<Scalar> ghz3(std::string l0, std::string l1, std::string l2) {
  BasicPureState<Scalar> s;
  s.labels = {std::move(l0), std::move(l1), std::move(l2)};
  s.amps = BasicPureState<Scalar>::Vector::Zero(8);
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  s.amps[0] = r;
  s.amps[7] = r;
  validate(s);
  return s;
}

// The named two-qubit Bell state.
template <class Scalar = double>
BasicPureState<Scalar> bell(BellOutcome o, std::string l0, std::string l1) {
  BasicPureState<Scalar> s;
  s.labels = {std::move(l0), std::move(l1)};
  const auto k = detail::bell4<Scalar>(o);
  s.amps.resize(4);
  for (int i = 0; i < 4; ++i) s.amps[i] = k[i];
  validate(s);
  return s;
}

// One of the four two-qubit signal states (see KkiSignal).
template <class Scalar = double>
BasicPureState<Scalar> kki_source(KkiSignal sig, std::string l0, std::string l1) {
  switch (sig) {
    case KkiSignal::PsiPlus:
      return bell<Scalar>(BellOutcome::PsiPlus, std::move(l0), std::move(l1));
    case KkiSignal::PhiMinus:
      return bell<Scalar>(BellOutcome::PhiMinus, std::move(l0), std::move(l1));
    case KkiSignal::CapPsiPlus:
    case KkiSignal::CapPhiMinus: {
      const auto a = bell<Scalar>(BellOutcome::PhiMinus, l0, l1);
      const auto b = bell<Scalar>(BellOutcome::PsiPlus, l0, l1);
      BasicPureState<Scalar> s;
      s.labels = a.labels;
      const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
      s.amps = sig == KkiSignal::CapPsiPlus ? ((a.amps + b.amps) * r).eval()
                                            : ((a.amps - b.amps) * r).eval();
      validate(s);
      return s;
    }
  }
  throw std::logic_error("bad KkiSignal tag");
}

// Applies the Pauli tag to one qubit; norm is preserved.
template <class Scalar>
BasicPureState<Scalar> apply_pauli(const BasicPureState<Scalar>& s,
                                   std::string_view label, PauliOp p) {
  const int pos = label_position(s, label);
  BasicPureState<Scalar> out = s;
  detail::apply_2x2<Scalar>(out.amps, pos, s.num_qubits(), detail::pauli2<Scalar>(p));
  return out;
}

// Hermitian inner product <a|b>; label lists must match exactly.
template <class Scalar>
std::complex<Scalar> inner_product(const BasicPureState<Scalar>& a,
                                   const BasicPureState<Scalar>& b) {
  if (a.labels != b.labels) {
    throw std::invalid_argument("inner_product: label lists differ");
  }
  return a.amps.dot(b.amps);
}

// True iff |<a|b>| >= 1 - tol, i.e. equal up to a global phase.
template <class Scalar>
bool same_up_to_phase(const BasicPureState<Scalar>& a,
                      const BasicPureState<Scalar>& b, Scalar tol) {
  return std::abs(inner_product(a, b)) >= Scalar(1) - tol;
}

// Projective measurement of one qubit.  The outcome is sampled by the Born
// rule using the caller's uniform draw against the cumulative probability
// (bit 0 first); the measured qubit is removed from the returned state.
template <class Scalar>
std::pair<Bit, BasicPureState<Scalar>> measure_one(const BasicPureState<Scalar>& s,
                                                   std::string_view label,
                                                   Basis basis, Scalar rand01) {
  const int pos = label_position(s, label);
  const int n = s.num_qubits();
  using Vector = typename BasicPureState<Scalar>::Vector;

  // Unnormalized post-measurement vectors for outcomes 0 and 1.
  std::array<Vector, 2> proj;
  std::array<Scalar, 2> prob{};
  const Eigen::Index rdim = s.dim() / 2;
  const int keep_low = n - 1 - pos;
  const Eigen::Index low_mask = (Eigen::Index(1) << keep_low) - 1;
  for (int b = 0; b < 2; ++b) {
    const auto k = detail::ket2<Scalar>(Bit(b != 0), basis);
    proj[b].resize(rdim);
    for (Eigen::Index r = 0; r < rdim; ++r) {
      const Eigen::Index base = ((r >> keep_low) << (keep_low + 1)) | (r & low_mask);
      const Eigen::Index i0 = base;
      const Eigen::Index i1 = base | (Eigen::Index(1) << keep_low);
      proj[b][r] = std::conj(k[0]) * s.amps[i0] + std::conj(k[1]) * s.amps[i1];
    }
    prob[b] = proj[b].squaredNorm();
  }

  const int outcome = rand01 < prob[0] ? 0 : 1;
  BasicPureState<Scalar> rest;
  rest.labels = s.labels;
  rest.labels.erase(rest.labels.begin() + pos);
  rest.amps = proj[outcome] / std::sqrt(prob[outcome]);
  return {Bit(outcome != 0), std::move(rest)};
}

template <class Scalar>
struct BellBranch {
  BellOutcome outcome;
  Scalar probability;
  // Normalized residual on the remaining qubits; absent when probability ~ 0.
  std::optional<BasicPureState<Scalar>> residual;
};

// Deterministic expansion of the state in the Bell basis of the ordered pair
// (label0, label1): four branches in canonical Bell order whose probabilities
// sum to 1.  label0 addresses the first slot of each Bell ket.
template <class Scalar>
std::array<BellBranch<Scalar>, 4> bell_decompose(const BasicPureState<Scalar>& s,
                                                 std::string_view label0,
                                                 std::string_view label1) {
  const int p0 = label_position(s, label0);
  const int p1 = label_position(s, label1);
  if (p0 == p1) throw std::invalid_argument("bell_decompose: labels must differ");
  const int n = s.num_qubits();
  using Vector = typename BasicPureState<Scalar>::Vector;

  std::vector<std::string> rest_labels;
  for (int p = 0; p < n; ++p) {
    if (p != p0 && p != p1) rest_labels.push_back(s.labels[p]);
  }

  const Eigen::Index rdim = s.dim() / 4;
  std::array<Vector, 4> res;
  for (auto& v : res) v = Vector::Zero(rdim);

  std::array<std::array<std::complex<Scalar>, 4>, 4> kets;
  for (int o = 0; o < 4; ++o) kets[o] = detail::bell4<Scalar>(kBellOrder[o]);

  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    const int b0 = detail::bit_at(i, p0, n);
    const int b1 = detail::bit_at(i, p1, n);
    Eigen::Index r = 0;
    for (int p = 0; p < n; ++p) {
      if (p == p0 || p == p1) continue;
      r = (r << 1) | detail::bit_at(i, p, n);
    }
    for (int o = 0; o < 4; ++o) {
      res[o][r] += std::conj(kets[o][b0 * 2 + b1]) * s.amps[i];
    }
  }

  std::array<BellBranch<Scalar>, 4> out;
  for (int o = 0; o < 4; ++o) {
    const Scalar p = res[o].squaredNorm();
    out[o].outcome = kBellOrder[o];
    out[o].probability = p;
    if (p > Scalar(1e-24)) {
      BasicPureState<Scalar> st;
      st.labels = rest_labels;
      st.amps = res[o] / std::sqrt(p);
      out[o].residual = std::move(st);
    }
  }
  return out;
}

// Bell-state measurement of the ordered pair (label0, label1), sampled by the
// Born rule in canonical Bell order; both qubits are removed.
template <class Scalar>
std::pair<BellOutcome, BasicPureState<Scalar>> measure_bell(
    const BasicPureState<Scalar>& s, std::string_view label0,
    std::string_view label1, Scalar rand01) {
  auto branches = bell_decompose(s, label0, label1);
  Scalar cum = 0;
  const BellBranch<Scalar>* last_live = nullptr;
  for (const auto& br : branches) {
    if (br.residual) last_live = &br;
  }
  if (last_live == nullptr) throw std::logic_error("measure_bell: empty state");
  for (const auto& br : branches) {
    cum += br.probability;
    if (rand01 < cum && br.residual) {
      return {br.outcome, *br.residual};
    }
  }
  return {last_live->outcome, *last_live->residual};
}

// Exact joint Born distribution over all qubits measured in the given bases
// (one per label, in label order).  Entry i is the probability of the bit
// tuple packed MSB-first in label order.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> outcome_distribution(
    const BasicPureState<Scalar>& s, std::span<const Basis> bases) {
  if (static_cast<int>(bases.size()) != s.num_qubits()) {
    throw std::invalid_argument("outcome_distribution: need one basis per qubit");
  }
  auto v = s.amps;
  for (int pos = 0; pos < s.num_qubits(); ++pos) {
    // Rows of the change-of-basis matrix are the conjugated eigenbras.
    const auto k0 = detail::ket2<Scalar>(Bit(false), bases[pos]);
    const auto k1 = detail::ket2<Scalar>(Bit(true), bases[pos]);
    detail::apply_2x2<Scalar>(v, pos, s.num_qubits(),
                              {std::conj(k0[0]), std::conj(k1[0]),
                               std::conj(k0[1]), std::conj(k1[1])});
  }
  return v.cwiseAbs2();
}

// Same amplitudes under a permuted label order.
template <class Scalar>
BasicPureState<Scalar> reorder(const BasicPureState<Scalar>& s,
                               const std::vector<std::string>& new_labels) {
  const int n = s.num_qubits();
  if (static_cast<int>(new_labels.size()) != n) {
    throw std::invalid_argument("reorder: label count differs");
  }
  std::vector<int> old_pos(n);
  for (int q = 0; q < n; ++q) old_pos[q] = label_position(s, new_labels[q]);

  BasicPureState<Scalar> out;
  out.labels = new_labels;
  out.amps.resize(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    Eigen::Index j = 0;
    for (int q = 0; q < n; ++q) {
      j = (j << 1) | detail::bit_at(i, old_pos[q], n);
    }
    out.amps[j] = s.amps[i];
  }
  return out;
}

}  // namespace qss
