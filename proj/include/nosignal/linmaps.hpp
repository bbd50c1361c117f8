#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nosignal/common.hpp"
#include "nosignal/qcore.hpp"

namespace nosignal::linmaps {

/// A linear map given by the images of the domain basis vectors — the same
/// representation the basis-by-basis device analysis uses. Images may be
/// unnormalized; nothing is forced at construction.
struct BasisMapSpec {
  qcore::Space domain;
  qcore::Space codomain;
  std::vector<std::vector<cplx>> images;  // images[j] = image of basis j

  static BasisMapSpec identity(const qcore::Space& space) {
    BasisMapSpec spec{space, space, {}};
    for (std::size_t j = 0; j < space.dim(); ++j) {
      std::vector<cplx> e(space.dim(), cplx(0, 0));
      e[j] = cplx(1, 0);
      spec.images.push_back(std::move(e));
    }
    return spec;
  }

  /// Columns of m become the basis images.
  static BasisMapSpec from_matrix(qcore::Space domain, qcore::Space codomain,
                                  const Eigen::MatrixXcd& m) {
    require(static_cast<std::size_t>(m.cols()) == domain.dim() &&
                static_cast<std::size_t>(m.rows()) == codomain.dim(),
            "matrix shape does not match the given spaces");
    BasisMapSpec spec{std::move(domain), std::move(codomain), {}};
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::vector<cplx> image(static_cast<std::size_t>(m.rows()));
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        image[static_cast<std::size_t>(i)] = m(i, j);
      spec.images.push_back(std::move(image));
    }
    return spec;
  }

  void validate() const {
    require(images.size() == domain.dim(),
            "need exactly one image per domain basis vector");
    for (const auto& image : images)
      require(image.size() == codomain.dim(),
              "image length does not match codomain dimension");
  }
};

inline Eigen::MatrixXcd matrix_of(const BasisMapSpec& spec) {
  spec.validate();
  Eigen::MatrixXcd m(spec.codomain.dim(), spec.domain.dim());
  for (std::size_t j = 0; j < spec.images.size(); ++j)
    for (std::size_t i = 0; i < spec.images[j].size(); ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          spec.images[j][i];
  return m;
}

/// Linear extension: image of s is Sum_j s_j * image_j. The output norm is
/// whatever linearity produces; the flag on the result records it.
inline qcore::StateVector extend(const BasisMapSpec& spec,
                                 const qcore::StateVector& s) {
  spec.validate();
  require(s.space() == spec.domain, "state is not in the map's domain space");
  std::vector<cplx> out(spec.codomain.dim(), cplx(0, 0));
  for (std::size_t j = 0; j < spec.images.size(); ++j) {
    const cplx coeff = s.amplitude(j);
    if (coeff == cplx(0, 0)) continue;
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += coeff * spec.images[j][i];
  }
  return qcore::StateVector::intermediate(spec.codomain, std::move(out));
}

/// Pairwise inner products of the basis images. A map preserves all inner
/// products (is an isometry) exactly when this matrix is the identity; that
/// is strictly stronger than checking norms of a few chosen inputs.
struct GramReport {
  Eigen::MatrixXcd gram;
  bool is_isometry = false;
  double max_deviation = 0.0;              // max |G - I| entry
  std::vector<double> per_basis_norms;     // norms of the images themselves
};

inline GramReport gram(const BasisMapSpec& spec) {
  spec.validate();
  const std::size_t n = spec.images.size();
  GramReport report;
  report.gram = Eigen::MatrixXcd(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx ip(0, 0);
      for (std::size_t k = 0; k < spec.images[i].size(); ++k)
        ip += std::conj(spec.images[i][k]) * spec.images[j][k];
      report.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ip;
      // Hermitian by construction, exact to conjugation of stored entries.
      report.gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          std::conj(ip);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    report.per_basis_norms.push_back(std::sqrt(
        report.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))
            .real()));
    for (std::size_t j = 0; j < n; ++j) {
      const cplx expected = (i == j) ? cplx(1, 0) : cplx(0, 0);
      report.max_deviation = std::max(
          report.max_deviation,
          std::abs(report.gram(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(j)) -
                   expected));
    }
  }
  report.is_isometry = report.max_deviation <= eps_unitary;
  return report;
}

/// Constructive refutation of isometry: a concrete normalized input whose
/// image norm is off, plus the worst Gram entry. Built deterministically
/// from the dominant eigenpair of G - I (image norm^2 of that eigenvector
/// is exactly 1 + lambda), no search involved.
struct NonIsometryWitness {
  std::vector<cplx> input;   // normalized domain coefficient vector
  double eigenvalue = 0.0;   // dominant eigenvalue lambda of G - I
  double image_norm_sq = 0.0;  // 1 + lambda
  std::size_t row = 0, col = 0;  // worst Gram entry
  cplx gram_entry;
};

inline std::optional<NonIsometryWitness> non_isometry_witness(
    const GramReport& report) {
  if (report.is_isometry) return std::nullopt;
  const Eigen::Index n = report.gram.rows();
  Eigen::MatrixXcd delta = report.gram - Eigen::MatrixXcd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(delta);
  require(solver.info() == Eigen::Success, "eigen decomposition failed");

  const double lo = solver.eigenvalues()(0);
  const double hi = solver.eigenvalues()(n - 1);
  // Ties (up to eigensolver noise) go to the positive eigenvalue, so the
  // witness reports a stretched image (norm^2 = 1 + lambda > 1).
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::max(std::abs(hi), std::abs(lo)));
  const Eigen::Index pick = (std::abs(hi) + tie >= std::abs(lo)) ? n - 1 : 0;

  NonIsometryWitness witness;
  witness.eigenvalue = solver.eigenvalues()(pick);
  witness.image_norm_sq = 1.0 + witness.eigenvalue;
  for (Eigen::Index i = 0; i < n; ++i)
    witness.input.push_back(solver.eigenvectors()(i, pick));

  double worst = -1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(delta(i, j)) > worst) {
        worst = std::abs(delta(i, j));
        witness.row = static_cast<std::size_t>(i);
        witness.col = static_cast<std::size_t>(j);
      }
  witness.gram_entry = report.gram(static_cast<Eigen::Index>(witness.row),
                                   static_cast<Eigen::Index>(witness.col));
  return witness;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Does a joint-space map act on one side only? Best least-squares fit of
/// M against A (x) I (or I (x) A), with the residual left in the report.
struct FactorReport {
  bool factorable = false;
  Eigen::MatrixXcd best_local_factor;
  double residual = 0.0;   // Frobenius norm of M minus the best fit
  std::size_t acted = 0;   // 0-based subsystem the candidate factor acts on
};

inline FactorReport local_factor(const Eigen::MatrixXcd& m, std::size_t dim_a,
                                 std::size_t dim_b, std::size_t acted) {
  require(m.rows() == m.cols(), "map matrix must be square");
  require(dim_a >= 1 && dim_b >= 1 &&
              static_cast<std::size_t>(m.rows()) == dim_a * dim_b,
          "matrix size does not match the subsystem dimensions");
  require(acted < 2, "acted subsystem must be 0 or 1");

  const Eigen::Index da = static_cast<Eigen::Index>(dim_a);
  const Eigen::Index db = static_cast<Eigen::Index>(dim_b);

  FactorReport report;
  report.acted = acted;
  if (acted == 0) {
    // M should be A (x) I: block (i,j) proportional to the identity.
    Eigen::MatrixXcd a(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        a(i, j) = m.block(i * db, j * db, db, db).trace() / double(db);
    report.best_local_factor = a;
    report.residual =
        (m - kron(a, Eigen::MatrixXcd::Identity(db, db))).norm();
  } else {
    // M should be I (x) A: trace out the first subsystem.
    Eigen::MatrixXcd a(db, db);
    for (Eigen::Index k = 0; k < db; ++k)
      for (Eigen::Index l = 0; l < db; ++l) {
        cplx sum(0, 0);
        for (Eigen::Index i = 0; i < da; ++i) sum += m(i * db + k, i * db + l);
        a(k, l) = sum / double(da);
      }
    report.best_local_factor = a;
    report.residual =
        (m - kron(Eigen::MatrixXcd::Identity(da, da), a)).norm();
  }
  report.factorable = report.residual <= eps_local;
  return report;
}

/// Extend a map given only on selected basis directions to the full space,
/// acting as the identity on the orthogonal complement. This is a choice,
/// not a consequence: reports that rely on it carry an explicit flag.
inline BasisMapSpec embed_identity_on_complement(
    const BasisMapSpec& sub, const qcore::Space& full,
    const std::vector<std::size_t>& positions) {
  sub.validate();
  require(sub.domain.dim() == sub.codomain.dim(),
          "identity extension needs a square sub-map");
  require(positions.size() == sub.domain.dim(),
          "need one full-space position per sub-map basis vector");
  std::vector<bool> used(full.dim(), false);
  for (std::size_t p : positions) {
    require(p < full.dim(), "embedding position out of range");
    require(!used[p], "duplicate embedding position");
    used[p] = true;
  }

  BasisMapSpec spec{full, full, {}};
  for (std::size_t j = 0; j < full.dim(); ++j) {
    std::vector<cplx> image(full.dim(), cplx(0, 0));
    image[j] = cplx(1, 0);
    spec.images.push_back(std::move(image));
  }
  for (std::size_t k = 0; k < positions.size(); ++k) {
    std::vector<cplx> image(full.dim(), cplx(0, 0));
    for (std::size_t l = 0; l < positions.size(); ++l)
      image[positions[l]] = sub.images[k][l];
    spec.images[positions[k]] = std::move(image);
  }
  return spec;
}

}  // namespace nosignal::linmaps
