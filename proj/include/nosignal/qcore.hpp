#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nosignal/common.hpp"

namespace nosignal::qcore {

/// Labeled tensor-product space: one symbol alphabet per subsystem slot.
///
/// Index convention: row-major over slots with slot 0 most significant.
/// For two polarisation slots the basis order is HH, HV, VH, VV.
class Space {
 public:
  using Slots = std::vector<std::vector<std::string>>;

  explicit Space(Slots slots)
      : slots_(std::move(slots)) {
    require(!slots_.empty(), "space needs at least one subsystem");
    for (const auto& alphabet : slots_) {
      require(!alphabet.empty(), "subsystem alphabet must not be empty");
      for (std::size_t i = 0; i < alphabet.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet.size(); ++j)
          require(alphabet[i] != alphabet[j], "duplicate symbol in alphabet");
    }
  }

  static Space photon_pair() { return Space(Slots{{"H", "V"}, {"H", "V"}}); }
  static Space single_photon() { return Space(Slots{{"H", "V"}}); }
  static Space boxes() { return Space(Slots{{"0", "1"}, {"0", "1"}}); }
  static Space spin_pair() { return Space(Slots{{"+", "-"}, {"+", "-"}}); }

  /// One anonymous slot with symbols "0".."dim-1".
  static Space generic(std::size_t dim) {
    std::vector<std::string> alphabet;
    for (std::size_t i = 0; i < dim; ++i) alphabet.push_back(std::to_string(i));
    return Space(Slots{std::move(alphabet)});
  }

  /// One slot with two named basis directions (abstract 2-dim spans).
  static Space span2(std::string first, std::string second) {
    return Space(Slots{{std::move(first), std::move(second)}});
  }

  std::size_t slot_count() const { return slots_.size(); }

  std::size_t dim() const {
    std::size_t d = 1;
    for (const auto& alphabet : slots_) d *= alphabet.size();
    return d;
  }

  const std::vector<std::string>& alphabet(std::size_t slot) const {
    require(slot < slots_.size(), "subsystem index out of range");
    return slots_[slot];
  }

  std::size_t symbol_index(std::size_t slot, std::string_view symbol) const {
    const auto& alphabet = this->alphabet(slot);
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == symbol) return i;
    throw validation_error("unknown symbol '" + std::string(symbol) +
                           "' for subsystem " + std::to_string(slot + 1));
  }

  std::size_t index_of(const std::vector<std::string>& symbols) const {
    require(symbols.size() == slots_.size(), "label arity mismatch");
    std::size_t index = 0;
    for (std::size_t s = 0; s < slots_.size(); ++s)
      index = index * slots_[s].size() + symbol_index(s, symbols[s]);
    return index;
  }

  /// Per-slot symbol indices of a basis index (most significant slot first).
  std::vector<std::size_t> digits(std::size_t index) const {
    require(index < dim(), "basis index out of range");
    std::vector<std::size_t> out(slots_.size());
    for (std::size_t s = slots_.size(); s-- > 0;) {
      out[s] = index % slots_[s].size();
      index /= slots_[s].size();
    }
    return out;
  }

  /// Printable label: symbols joined, each tagged with its 1-based slot
  /// number when there is more than one slot ("H1V2"); bare symbol otherwise.
  std::string label(std::size_t index) const {
    const auto d = digits(index);
    std::string out;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      out += slots_[s][d[s]];
      if (slots_.size() > 1) out += std::to_string(s + 1);
    }
    return out;
  }

  std::vector<std::string> basis_labels() const {
    std::vector<std::string> out;
    out.reserve(dim());
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(label(i));
    return out;
  }

  bool operator==(const Space& other) const { return slots_ == other.slots_; }

 private:
  std::vector<std::vector<std::string>> slots_;
};

/// Complex amplitude vector over a labeled space.
///
/// States accepted as physical carry Sum |a_i|^2 = 1 within eps_norm.
/// Unnormalized vectors (linear-map outputs before any verdict on them)
/// are permitted but flagged; nothing here ever renormalizes silently.
class StateVector {
 public:
  static StateVector physical(Space space, std::vector<cplx> amplitudes) {
    StateVector s(std::move(space), std::move(amplitudes));
    require(std::abs(s.norm() - 1.0) <= eps_norm,
            "state not normalized (norm = " + std::to_string(s.norm()) + ")");
    s.physical_ = true;
    return s;
  }

  /// No norm requirement; flagged physical only if the norm happens to be 1.
  static StateVector intermediate(Space space, std::vector<cplx> amplitudes) {
    StateVector s(std::move(space), std::move(amplitudes));
    s.physical_ = std::abs(s.norm() - 1.0) <= eps_norm;
    return s;
  }

  static StateVector basis(Space space, std::size_t index) {
    require(index < space.dim(), "basis index out of range");
    std::vector<cplx> amps(space.dim(), cplx(0, 0));
    amps[index] = cplx(1, 0);
    return physical(std::move(space), std::move(amps));
  }

  static StateVector basis(Space space, const std::vector<std::string>& symbols) {
    const std::size_t index = space.index_of(symbols);
    return basis(std::move(space), index);
  }

  const Space& space() const { return space_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx amplitude(std::size_t index) const {
    require(index < amps_.size(), "amplitude index out of range");
    return amps_[index];
  }
  std::size_t dim() const { return amps_.size(); }
  bool is_physical() const { return physical_; }

  double norm_sq() const {
    double total = 0.0;
    for (const cplx& a : amps_) total += std::norm(a);
    return total;
  }
  double norm() const { return std::sqrt(norm_sq()); }

 private:
  StateVector(Space space, std::vector<cplx> amplitudes)
      : space_(std::move(space)), amps_(std::move(amplitudes)) {
    require(amps_.size() == space_.dim(),
            "amplitude count does not match space dimension");
  }

  Space space_;
  std::vector<cplx> amps_;
  bool physical_ = false;
};

/// Linear combination of states on a common space (flagged by actual norm).
inline StateVector superpose(
    const std::vector<std::pair<cplx, StateVector>>& terms) {
  require(!terms.empty(), "superpose needs at least one term");
  const Space& space = terms.front().second.space();
  std::vector<cplx> amps(space.dim(), cplx(0, 0));
  for (const auto& [coeff, state] : terms) {
    require(state.space() == space, "superpose terms live on different spaces");
    for (std::size_t i = 0; i < amps.size(); ++i)
      amps[i] += coeff * state.amplitude(i);
  }
  return StateVector::intermediate(space, std::move(amps));
}

/// Tensor product on the concatenated space; amplitude (i,j) = a_i * b_j.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  require(a.is_physical() && b.is_physical(),
          "tensor requires normalized inputs");
  std::vector<std::vector<std::string>> slots;
  for (std::size_t s = 0; s < a.space().slot_count(); ++s)
    slots.push_back(a.space().alphabet(s));
  for (std::size_t s = 0; s < b.space().slot_count(); ++s)
    slots.push_back(b.space().alphabet(s));
  Space joint(std::move(slots));

  std::vector<cplx> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      amps[i * b.dim() + j] = a.amplitude(i) * b.amplitude(j);
  return StateVector::intermediate(std::move(joint), std::move(amps));
}

/// Born rule on a full joint outcome: |<outcome|s>|^2.
inline double born(const StateVector& s, const std::vector<std::string>& outcome) {
  require(s.is_physical(), "born requires a normalized state");
  return std::norm(s.amplitude(s.space().index_of(outcome)));
}

/// Outcome probability for one subsystem, ignoring the rest: the receiver's
/// observable statistics.
inline double marginal(const StateVector& s, std::size_t subsystem,
                       std::string_view symbol) {
  require(s.is_physical(), "marginal requires a normalized state");
  const std::size_t want = s.space().symbol_index(subsystem, symbol);
  double total = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (s.space().digits(i)[subsystem] == want)
      total += std::norm(s.amplitude(i));
  return total;
}

/// Bipartition: slots listed in side_a against all remaining slots.
struct BipartiteCut {
  std::vector<std::size_t> side_a;
};

struct SchmidtReport {
  std::size_t rank = 0;
  std::vector<double> coefficients;  // descending, non-negative
  BipartiteCut cut;
  // Schmidt vectors per coefficient, stored so that
  //   state = Sum_k coefficients[k] * left[k] (tensor) right[k].
  std::vector<std::vector<cplx>> left;
  std::vector<std::vector<cplx>> right;
};

namespace detail {

inline void validate_cut(const Space& space, const BipartiteCut& cut) {
  require(!cut.side_a.empty(), "cut side A must be non-empty");
  require(cut.side_a.size() < space.slot_count(),
          "cut side B must be non-empty");
  std::vector<bool> seen(space.slot_count(), false);
  for (std::size_t slot : cut.side_a) {
    require(slot < space.slot_count(), "cut slot index out of range");
    require(!seen[slot], "cut lists a slot twice");
    seen[slot] = true;
  }
}

}  // namespace detail

/// Schmidt decomposition across a bipartition: singular values of the
/// amplitude matrix reshaped along the cut. rank 1 <=> product state.
inline SchmidtReport schmidt(const StateVector& s, const BipartiteCut& cut) {
  require(s.is_physical(), "schmidt requires a normalized state");
  detail::validate_cut(s.space(), cut);

  const Space& space = s.space();
  std::vector<bool> in_a(space.slot_count(), false);
  for (std::size_t slot : cut.side_a) in_a[slot] = true;

  std::size_t dim_a = 1, dim_b = 1;
  for (std::size_t slot = 0; slot < space.slot_count(); ++slot)
    (in_a[slot] ? dim_a : dim_b) *= space.alphabet(slot).size();

  Eigen::MatrixXcd m(dim_a, dim_b);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto d = space.digits(i);
    std::size_t row = 0, col = 0;
    for (std::size_t slot = 0; slot < space.slot_count(); ++slot) {
      if (in_a[slot])
        row = row * space.alphabet(slot).size() + d[slot];
      else
        col = col * space.alphabet(slot).size() + d[slot];
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
        s.amplitude(i);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtReport report;
  report.cut = cut;
  const auto& sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    report.coefficients.push_back(sv(k));
    std::vector<cplx> u(dim_a), v(dim_b);
    for (std::size_t r = 0; r < dim_a; ++r)
      u[r] = svd.matrixU()(static_cast<Eigen::Index>(r), k);
    // m = U S V^adjoint, so the side-B Schmidt vector is conj(V col k).
    for (std::size_t c = 0; c < dim_b; ++c)
      v[c] = std::conj(svd.matrixV()(static_cast<Eigen::Index>(c), k));
    report.left.push_back(std::move(u));
    report.right.push_back(std::move(v));
  }
  report.rank = static_cast<std::size_t>(
      std::count_if(report.coefficients.begin(), report.coefficients.end(),
                    [](double c) { return c > eps_rank; }));
  return report;
}

/// Default cut for two-slot spaces: first subsystem against the second.
inline SchmidtReport schmidt(const StateVector& s) {
  require(s.space().slot_count() == 2,
          "default cut only defined for two-subsystem spaces");
  return schmidt(s, BipartiteCut{{0}});
}

}  // namespace nosignal::qcore
