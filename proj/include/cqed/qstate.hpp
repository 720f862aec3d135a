// Labeled tensor-product pure states, operators on named subsystems,
// projective measurement and weighted pure-state mixtures.
//
// Every type here is templated on the complex scalar and is an immutable
// value once constructed. Basis index layout is row-major over the ordered
// subsystem list: the first subsystem is the most significant digit.
#ifndef CQED_QSTATE_HPP
#define CQED_QSTATE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqed {

/// Tolerance used for every normalization / unitarity / completeness check.
inline constexpr double kTolerance = 1e-12;

/// Basis level names. Polarization: h = 0, v = 1. Ensemble: G = 0, S = 1.
namespace level {
inline constexpr int h = 0;
inline constexpr int v = 1;
inline constexpr int G = 0;
inline constexpr int S = 1;
}  // namespace level

enum class SubsystemKind { PhotonPolarization, PhotonPath, EnsembleQubit };

struct Subsystem {
  std::string name;
  SubsystemKind kind = SubsystemKind::EnsembleQubit;
  int dimension = 2;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

inline Subsystem polarization(std::string name) {
  return {std::move(name), SubsystemKind::PhotonPolarization, 2};
}
inline Subsystem path(std::string name, int dimension = 2) {
  return {std::move(name), SubsystemKind::PhotonPath, dimension};
}
inline Subsystem ensemble(std::string name) {
  return {std::move(name), SubsystemKind::EnsembleQubit, 2};
}

namespace detail {

inline void validate_subsystems(const std::vector<Subsystem>& subsystems) {
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    if (subsystems[i].dimension < 2) {
      throw std::invalid_argument("subsystem '" + subsystems[i].name +
                                  "' must have dimension >= 2");
    }
    for (std::size_t j = i + 1; j < subsystems.size(); ++j) {
      if (subsystems[i].name == subsystems[j].name) {
        throw std::invalid_argument("duplicate subsystem label '" +
                                    subsystems[i].name + "'");
      }
    }
  }
}

inline Eigen::Index total_dimension(const std::vector<Subsystem>& subsystems) {
  Eigen::Index d = 1;
  for (const auto& s : subsystems) d *= s.dimension;
  return d;
}

inline std::vector<Eigen::Index> strides(const std::vector<Subsystem>& subsystems) {
  std::vector<Eigen::Index> out(subsystems.size(), 1);
  for (std::size_t i = subsystems.size(); i-- > 1;) {
    out[i - 1] = out[i] * subsystems[i].dimension;
  }
  return out;
}

inline int find(const std::vector<Subsystem>& subsystems, std::string_view name) {
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    if (subsystems[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace detail

template <typename Scalar>
class BasicPureState {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// The empty product: no subsystems, one amplitude equal to 1.
  BasicPureState() : amplitudes_(Vector::Ones(1)) {}

  BasicPureState(std::vector<Subsystem> subsystems, Vector amplitudes)
      : subsystems_(std::move(subsystems)), amplitudes_(std::move(amplitudes)) {
    detail::validate_subsystems(subsystems_);
    if (amplitudes_.size() != detail::total_dimension(subsystems_)) {
      throw std::invalid_argument("amplitude vector does not match subsystem dimensions");
    }
    if (norm2() > Real(1) + Real(kTolerance)) {
      throw std::invalid_argument("state norm exceeds 1");
    }
  }

  /// Product basis state with the given level on each subsystem.
  static BasicPureState basis(std::vector<Subsystem> subsystems, std::span<const int> levels,
                              Scalar amplitude = Scalar(1)) {
    detail::validate_subsystems(subsystems);
    Vector amps = Vector::Zero(detail::total_dimension(subsystems));
    amps(flat_index(subsystems, levels)) = amplitude;
    return BasicPureState(std::move(subsystems), std::move(amps));
  }

  static BasicPureState basis(std::vector<Subsystem> subsystems,
                              std::initializer_list<int> levels, Scalar amplitude = Scalar(1)) {
    return basis(std::move(subsystems), std::span<const int>(levels.begin(), levels.size()),
                 amplitude);
  }

  /// Superposition of basis tuples. Repeated tuples accumulate.
  static BasicPureState from_terms(
      std::vector<Subsystem> subsystems,
      std::initializer_list<std::pair<std::initializer_list<int>, Scalar>> terms) {
    detail::validate_subsystems(subsystems);
    Vector amps = Vector::Zero(detail::total_dimension(subsystems));
    for (const auto& [levels, amp] : terms) {
      amps(flat_index(subsystems, std::span<const int>(levels.begin(), levels.size()))) += amp;
    }
    return BasicPureState(std::move(subsystems), std::move(amps));
  }

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const Vector& amplitudes() const { return amplitudes_; }

  Scalar amplitude(std::span<const int> levels) const {
    return amplitudes_(flat_index(subsystems_, levels));
  }
  Scalar amplitude(std::initializer_list<int> levels) const {
    return amplitude(std::span<const int>(levels.begin(), levels.size()));
  }

  Real norm2() const { return amplitudes_.squaredNorm(); }

  /// Position of the named subsystem, or -1.
  int index_of(std::string_view name) const { return detail::find(subsystems_, name); }
  bool has(std::string_view name) const { return index_of(name) >= 0; }

  /// Rescaled to unit norm; a zero state is returned unchanged.
  BasicPureState normalized() const {
    const Real n = std::sqrt(norm2());
    if (n == Real(0)) return *this;
    return BasicPureState(subsystems_, amplitudes_ / n);
  }

  BasicPureState scaled(Scalar factor) const {
    return BasicPureState(subsystems_, amplitudes_ * factor);
  }

  static Eigen::Index flat_index(const std::vector<Subsystem>& subsystems,
                                 std::span<const int> levels) {
    if (levels.size() != subsystems.size()) {
      throw std::invalid_argument("basis tuple length does not match subsystem count");
    }
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] < 0 || levels[i] >= subsystems[i].dimension) {
        throw std::out_of_range("basis level out of range for '" + subsystems[i].name + "'");
      }
      idx = idx * subsystems[i].dimension + levels[i];
    }
    return idx;
  }

 private:
  std::vector<Subsystem> subsystems_;
  Vector amplitudes_;
};

/// Operator on an ordered set of subsystems. Its matrix uses the same
/// row-major basis layout as BasicPureState restricted to the support.
template <typename Scalar>
class BasicLinearOp {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicLinearOp(std::vector<Subsystem> support, Matrix matrix)
      : support_(std::move(support)), matrix_(std::move(matrix)) {
    detail::validate_subsystems(support_);
    if (support_.empty()) throw std::invalid_argument("operator needs a non-empty support");
    const auto d = detail::total_dimension(support_);
    if (matrix_.rows() != d || matrix_.cols() != d) {
      throw std::invalid_argument("operator matrix does not match its support dimensions");
    }
  }

  static BasicLinearOp identity(std::vector<Subsystem> support) {
    const auto d = detail::total_dimension(support);
    return BasicLinearOp(std::move(support), Matrix::Identity(d, d));
  }

  const std::vector<Subsystem>& support() const { return support_; }
  const Matrix& matrix() const { return matrix_; }

  bool is_unitary(Real tol = Real(kTolerance)) const {
    const auto d = matrix_.rows();
    return ((matrix_.adjoint() * matrix_) - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }

  /// Product of two operators on the same support: (*this) after `first`.
  BasicLinearOp after(const BasicLinearOp& first) const {
    if (first.support_ != support_) {
      throw std::invalid_argument("operator composition needs identical supports");
    }
    return BasicLinearOp(support_, matrix_ * first.matrix_);
  }

 private:
  std::vector<Subsystem> support_;
  Matrix matrix_;
};

template <typename Scalar>
struct BasicWeightedState {
  typename Eigen::NumTraits<Scalar>::Real weight;
  BasicPureState<Scalar> state;
};

/// Finite convex combination of normalized pure states on identical subsystems.
template <typename Scalar>
class BasicMixedEnsemble {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Term = BasicWeightedState<Scalar>;

  explicit BasicMixedEnsemble(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("mixed ensemble needs at least one term");
    Real total = 0;
    for (const auto& t : terms_) {
      if (t.weight < Real(0) || t.weight > Real(1) + Real(kTolerance)) {
        throw std::invalid_argument("mixture weight outside [0, 1]");
      }
      if (std::abs(t.state.norm2() - Real(1)) > Real(1e-10)) {
        throw std::invalid_argument("mixture component is not normalized");
      }
      if (t.state.subsystems() != terms_.front().state.subsystems()) {
        throw std::invalid_argument("mixture components live on different subsystems");
      }
      total += t.weight;
    }
    if (std::abs(total - Real(1)) > Real(kTolerance)) {
      throw std::invalid_argument("mixture weights do not sum to 1");
    }
  }

  /// Mixture of unnormalized branches weighted by their squared norms.
  /// Zero-norm branches are dropped.
  static BasicMixedEnsemble from_branches(const std::vector<BasicPureState<Scalar>>& branches) {
    Real total = 0;
    for (const auto& b : branches) total += b.norm2();
    if (total <= Real(0)) throw std::invalid_argument("all branches have zero norm");
    std::vector<Term> terms;
    for (const auto& b : branches) {
      if (b.norm2() > Real(0)) terms.push_back({b.norm2() / total, b.normalized()});
    }
    return BasicMixedEnsemble(std::move(terms));
  }

  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<Subsystem>& subsystems() const { return terms_.front().state.subsystems(); }

 private:
  std::vector<Term> terms_;
};

template <typename Scalar>
struct BasicMeasurementOutcome {
  int outcome;
  typename Eigen::NumTraits<Scalar>::Real probability;
  /// Renormalized post-measurement state (zero if the outcome has probability 0).
  BasicPureState<Scalar> post_state;
  /// Unnormalized branch; its squared norm is `probability`.
  BasicPureState<Scalar> branch;
};

// --- free functions --------------------------------------------------------

template <typename Scalar>
BasicPureState<Scalar> tensor(const BasicPureState<Scalar>& a, const BasicPureState<Scalar>& b) {
  std::vector<Subsystem> subs = a.subsystems();
  subs.insert(subs.end(), b.subsystems().begin(), b.subsystems().end());
  detail::validate_subsystems(subs);
  const auto& va = a.amplitudes();
  const auto& vb = b.amplitudes();
  typename BasicPureState<Scalar>::Vector out(va.size() * vb.size());
  for (Eigen::Index i = 0; i < va.size(); ++i) out.segment(i * vb.size(), vb.size()) = va(i) * vb;
  return BasicPureState<Scalar>(std::move(subs), std::move(out));
}

template <typename Scalar>
BasicLinearOp<Scalar> tensor(const BasicLinearOp<Scalar>& a, const BasicLinearOp<Scalar>& b) {
  std::vector<Subsystem> subs = a.support();
  subs.insert(subs.end(), b.support().begin(), b.support().end());
  detail::validate_subsystems(subs);
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  typename BasicLinearOp<Scalar>::Matrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
    }
  }
  return BasicLinearOp<Scalar>(std::move(subs), std::move(out));
}

/// Operator acting as `op` when `control` is at `control_level` and as the
/// identity otherwise. Support is `control` followed by op's support.
template <typename Scalar>
BasicLinearOp<Scalar> controlled(const Subsystem& control, int control_level,
                                 const BasicLinearOp<Scalar>& op) {
  if (control_level < 0 || control_level >= control.dimension) {
    throw std::out_of_range("control level out of range");
  }
  std::vector<Subsystem> subs{control};
  subs.insert(subs.end(), op.support().begin(), op.support().end());
  detail::validate_subsystems(subs);
  const auto d = op.matrix().rows();
  using Matrix = typename BasicLinearOp<Scalar>::Matrix;
  Matrix m = Matrix::Identity(d * control.dimension, d * control.dimension);
  m.block(control_level * d, control_level * d, d, d) = op.matrix();
  return BasicLinearOp<Scalar>(std::move(subs), std::move(m));
}

/// Operator action on a state, extended by the identity on every subsystem
/// outside the operator's support.
template <typename Scalar>
BasicPureState<Scalar> apply(const BasicLinearOp<Scalar>& op, const BasicPureState<Scalar>& s) {
  const auto& subs = s.subsystems();
  const auto stride = detail::strides(subs);
  const auto& support = op.support();

  std::vector<int> positions;
  for (const auto& sub : support) {
    const int p = detail::find(subs, sub.name);
    if (p < 0) throw std::invalid_argument("state has no subsystem '" + sub.name + "'");
    if (subs[p] != sub) {
      throw std::invalid_argument("kind or dimension mismatch on subsystem '" + sub.name + "'");
    }
    positions.push_back(p);
  }

  // Offset of each support basis index inside the full index.
  const auto d = op.matrix().rows();
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(d), 0);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::Index rem = k, off = 0;
    for (std::size_t j = support.size(); j-- > 0;) {
      off += (rem % support[j].dimension) * stride[positions[j]];
      rem /= support[j].dimension;
    }
    offsets[k] = off;
  }

  std::vector<bool> in_support(subs.size(), false);
  for (int p : positions) in_support[p] = true;

  const auto& in = s.amplitudes();
  typename BasicPureState<Scalar>::Vector out = in;
  typename BasicPureState<Scalar>::Vector gathered(d);
  for (Eigen::Index base = 0; base < in.size(); ++base) {
    bool is_base = true;
    for (std::size_t j = 0; j < subs.size() && is_base; ++j) {
      if (in_support[j] && (base / stride[j]) % subs[j].dimension != 0) is_base = false;
    }
    if (!is_base) continue;
    for (Eigen::Index k = 0; k < d; ++k) gathered(k) = in(base + offsets[k]);
    const typename BasicPureState<Scalar>::Vector result = op.matrix() * gathered;
    for (Eigen::Index k = 0; k < d; ++k) out(base + offsets[k]) = result(k);
  }
  return BasicPureState<Scalar>(subs, std::move(out));
}

/// Contracts subsystem `name` against the bra <bra| and removes it.
template <typename Scalar>
BasicPureState<Scalar> project(const BasicPureState<Scalar>& s, std::string_view name,
                               const typename BasicPureState<Scalar>::Vector& bra) {
  const int p = s.index_of(name);
  if (p < 0) throw std::invalid_argument("state has no subsystem '" + std::string(name) + "'");
  const auto& subs = s.subsystems();
  const int dim = subs[p].dimension;
  if (bra.size() != dim) throw std::invalid_argument("projection vector has wrong dimension");

  std::vector<Subsystem> rest = subs;
  rest.erase(rest.begin() + p);
  const auto stride = detail::strides(subs);
  Eigen::Index outer = 1;
  for (int j = 0; j < p; ++j) outer *= subs[j].dimension;
  const Eigen::Index inner = stride[p];

  const auto& in = s.amplitudes();
  typename BasicPureState<Scalar>::Vector out =
      BasicPureState<Scalar>::Vector::Zero(outer * inner);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (int l = 0; l < dim; ++l) {
      const Scalar c = Eigen::numext::conj(bra(l));
      if (c == Scalar(0)) continue;
      out.segment(o * inner, inner) += c * in.segment(o * inner * dim + l * inner, inner);
    }
  }
  return BasicPureState<Scalar>(std::move(rest), std::move(out));
}

template <typename Scalar>
BasicPureState<Scalar> project(const BasicPureState<Scalar>& s, std::string_view name, int lvl) {
  const int p = s.index_of(name);
  if (p < 0) throw std::invalid_argument("state has no subsystem '" + std::string(name) + "'");
  const int dim = s.subsystems()[p].dimension;
  if (lvl < 0 || lvl >= dim) throw std::invalid_argument("projection level out of range");
  typename BasicPureState<Scalar>::Vector bra = BasicPureState<Scalar>::Vector::Zero(dim);
  bra(lvl) = Scalar(1);
  return project(s, name, bra);
}

/// Projective measurement of one subsystem in an orthonormal basis. The
/// measured subsystem is removed from every post-measurement state.
template <typename Scalar>
std::vector<BasicMeasurementOutcome<Scalar>> measure(
    const BasicPureState<Scalar>& s, std::string_view name,
    const std::vector<typename BasicPureState<Scalar>::Vector>& basis) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const int p = s.index_of(name);
  if (p < 0) throw std::invalid_argument("state has no subsystem '" + std::string(name) + "'");
  const auto dim = static_cast<std::size_t>(s.subsystems()[p].dimension);
  if (basis.size() != dim) throw std::invalid_argument("measurement basis does not span subsystem");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (static_cast<std::size_t>(basis[i].size()) != dim) {
      throw std::invalid_argument("measurement basis vector has wrong dimension");
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Scalar ip = basis[i].dot(basis[j]);
      const Scalar expected = i == j ? Scalar(1) : Scalar(0);
      if (std::abs(ip - expected) > Real(kTolerance)) {
        throw std::invalid_argument("measurement basis is not orthonormal");
      }
    }
  }
  std::vector<BasicMeasurementOutcome<Scalar>> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto branch = project(s, name, basis[i]);
    const Real prob = branch.norm2();
    auto post = branch.normalized();
    out.push_back({static_cast<int>(i), prob, std::move(post), std::move(branch)});
  }
  return out;
}

/// Measurement in the computational basis of the subsystem.
template <typename Scalar>
std::vector<BasicMeasurementOutcome<Scalar>> measure(const BasicPureState<Scalar>& s,
                                                     std::string_view name) {
  const int p = s.index_of(name);
  if (p < 0) throw std::invalid_argument("state has no subsystem '" + std::string(name) + "'");
  const int dim = s.subsystems()[p].dimension;
  std::vector<typename BasicPureState<Scalar>::Vector> basis;
  for (int l = 0; l < dim; ++l) {
    basis.push_back(BasicPureState<Scalar>::Vector::Unit(dim, l));
  }
  return measure(s, name, basis);
}

/// Same state with subsystems permuted into the order given by `names`.
template <typename Scalar>
BasicPureState<Scalar> reorder(const BasicPureState<Scalar>& s,
                               const std::vector<std::string>& names) {
  const auto& subs = s.subsystems();
  if (names.size() != subs.size()) throw std::invalid_argument("reorder needs every subsystem");
  std::vector<Subsystem> target;
  std::vector<int> source_pos;
  for (const auto& n : names) {
    const int p = detail::find(subs, n);
    if (p < 0) throw std::invalid_argument("state has no subsystem '" + n + "'");
    target.push_back(subs[p]);
    source_pos.push_back(p);
  }
  detail::validate_subsystems(target);
  const auto src_stride = detail::strides(subs);
  const auto& in = s.amplitudes();
  typename BasicPureState<Scalar>::Vector out(in.size());
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    Eigen::Index rem = i, src = 0;
    for (std::size_t j = target.size(); j-- > 0;) {
      src += (rem % target[j].dimension) * src_stride[source_pos[j]];
      rem /= target[j].dimension;
    }
    out(i) = in(src);
  }
  return BasicPureState<Scalar>(std::move(target), std::move(out));
}

template <typename Scalar>
Scalar inner_product(const BasicPureState<Scalar>& bra, const BasicPureState<Scalar>& ket) {
  if (bra.subsystems() != ket.subsystems()) {
    throw std::invalid_argument("inner product of states on different subsystems");
  }
  return bra.amplitudes().dot(ket.amplitudes());
}

/// |<target|s>|^2, insensitive to global phase.
template <typename Scalar>
typename Eigen::NumTraits<Scalar>::Real fidelity(const BasicPureState<Scalar>& s,
                                                 const BasicPureState<Scalar>& target) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (std::abs(target.norm2() - Real(1)) > Real(1e-10)) {
    throw std::invalid_argument("fidelity target must be normalized");
  }
  return std::clamp<Real>(std::norm(inner_product(target, s)), Real(0), Real(1));
}

template <typename Scalar>
typename Eigen::NumTraits<Scalar>::Real fidelity(const BasicMixedEnsemble<Scalar>& m,
                                                 const BasicPureState<Scalar>& target) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Real f = 0;
  for (const auto& t : m.terms()) f += t.weight * fidelity(t.state, target);
  return std::clamp<Real>(f, Real(0), Real(1));
}

/// True when a = e^{i phi} b for a single phase phi, within `tol` per amplitude.
template <typename Scalar>
bool equal_up_to_global_phase(const BasicPureState<Scalar>& a, const BasicPureState<Scalar>& b,
                              typename Eigen::NumTraits<Scalar>::Real tol = kTolerance) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (a.subsystems() != b.subsystems()) return false;
  const Scalar ov = b.amplitudes().dot(a.amplitudes());
  Scalar phase(1);
  if (std::abs(ov) > Real(0)) phase = ov / std::abs(ov);
  return (a.amplitudes() - phase * b.amplitudes()).cwiseAbs().maxCoeff() <= tol;
}

using Complex = std::complex<double>;
using PureState = BasicPureState<Complex>;
using LinearOp = BasicLinearOp<Complex>;
using MixedEnsemble = BasicMixedEnsemble<Complex>;
using WeightedState = BasicWeightedState<Complex>;
using MeasurementOutcome = BasicMeasurementOutcome<Complex>;

/// Single-qubit ensemble gates.
inline LinearOp sigma_z(const Subsystem& qubit) {
  LinearOp::Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return LinearOp({qubit}, m);
}

inline LinearOp sigma_x(const Subsystem& qubit) {
  LinearOp::Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return LinearOp({qubit}, m);
}

inline LinearOp hadamard(const Subsystem& qubit) {
  const double s = 1.0 / std::sqrt(2.0);
  LinearOp::Matrix m(2, 2);
  m << s, s, s, -s;
  return LinearOp({qubit}, m);
}

/// {(|0> + |1>)/sqrt2, (|0> - |1>)/sqrt2}
inline std::vector<PureState::Vector> plus_minus_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  PureState::Vector plus(2), minus(2);
  plus << s, s;
  minus << s, -s;
  return {plus, minus};
}

}  // namespace cqed

#endif  // CQED_QSTATE_HPP
