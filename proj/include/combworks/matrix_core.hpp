#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "combworks/ext_real.hpp"

namespace combworks {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Shared numerical tolerances.
inline constexpr double kHermTol = 1e-10;     // max |A - A^dag| entry
inline constexpr double kTraceTol = 1e-10;    // |tr - 1|
inline constexpr double kPsdTol = 1e-10;      // allowed negative eigenvalue
inline constexpr double kEigClip = 1e-12;     // eigenvalues in [-clip, clip] treated as 0
inline constexpr double kSupportTol = 1e-9;   // rho-weight outside supp(sigma) flagging infinity
inline constexpr double kCombTol = 1e-8;      // causality-chain residual

double hermiticity_deviation(const ComplexMatrix& m);

/// (m + m^dag) / 2 as a fresh matrix (safe to assign back to m).
ComplexMatrix hermitize(const ComplexMatrix& m);

/// Unit-trace PSD Hermitian matrix. Construction checks hermiticity and
/// trace; the PSD check costs an eigendecomposition and is only run through
/// validate(), which boundary code (parsers, user input) calls explicitly.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis_state(int dim, int j);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

  /// Full invariant check (hermitian, trace 1, min eigenvalue >= -1e-10).
  /// Throws std::invalid_argument on violation.
  void validate() const;

 private:
  ComplexMatrix m_;
};

struct Spectrum {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns, orthonormal
};

// ---- tensor algebra over composite spaces -------------------------------
//
// A matrix on a composite space H_0 x H_1 x ... is indexed big-endian: the
// first slot varies slowest. All contraction code below assumes this order.

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors);

/// Trace out every slot not listed in `keep`; kept slots stay in the given
/// order. `dims` are the per-slot dimensions of `m`.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

/// Reorder tensor slots: new slot j carries old slot perm[j].
ComplexMatrix permute_systems(const ComplexMatrix& m, const std::vector<int>& dims,
                              const std::vector<int>& perm);

/// Lift an operator acting on the listed slots (in that order) to the full
/// space described by `dims`.
ComplexMatrix embed_on_slots(const ComplexMatrix& op, const std::vector<int>& dims,
                             const std::vector<int>& slots);

/// U . m . U^dag with U acting on the listed slots.
ComplexMatrix conjugate_on_slots(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const ComplexMatrix& u, const std::vector<int>& slots);

/// Unnormalized maximally entangled operator sum_{jk} |jj><kk| on two
/// dim-d slots.
ComplexMatrix max_entangled_op(int d);

/// Link product: contract the listed slots of `a` against the listed slots
/// of `b` (pairwise, equal dims), with the partial transpose applied on the
/// `a` side. Result slots: remaining slots of `a` then remaining slots of
/// `b`, each in original order.
ComplexMatrix link_contract(const ComplexMatrix& a, const std::vector<int>& dims_a,
                            const std::vector<int>& shared_a, const ComplexMatrix& b,
                            const std::vector<int>& dims_b, const std::vector<int>& shared_b);

// ---- spectral and entropic functionals ----------------------------------

/// Eigendecomposition of a Hermitian matrix (ascending eigenvalues).
/// Throws if the input exceeds the hermiticity tolerance.
Spectrum hermitian_eig(const ComplexMatrix& m);

/// Von Neumann entropy in nats, with 0 ln 0 := 0.
double vn_entropy(const DensityMatrix& rho);

/// Relative entropy S(rho||sigma) in nats. Infinite when rho puts more than
/// kSupportTol of weight outside the (clipped) support of sigma.
ExtReal rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Trace norm distance tr|a - b|, in [0, 2].
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Multipartite mutual information I(1:...:n) = sum_i S(rho_i) - S(rho),
/// in nats, for the subsystem split given by `dims`.
double multi_mutual_info(const DensityMatrix& rho, const std::vector<int>& dims);

}  // namespace combworks
