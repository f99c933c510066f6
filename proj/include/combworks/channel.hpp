#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "combworks/matrix_core.hpp"

namespace combworks {

struct ChannelValidation {
  double herm_dev = 0.0;
  double min_eigenvalue = 0.0;  // of the Choi matrix
  double tp_dev = 0.0;          // max |tr_out(choi) - I|
  bool pass = false;
};

/// CPTP map stored as a Choi matrix on (in, out) slots:
///   C = sum_{jk} |j><k|_in (x) E(|j><k|)_out   (unnormalized),
/// so trace preservation reads tr_out C = I_in.
class QuantumChannel {
 public:
  QuantumChannel(int dim_in, int dim_out, ComplexMatrix choi, bool validate = true);

  static QuantumChannel identity(int d);
  static QuantumChannel from_unitary(const ComplexMatrix& u);
  /// E(rho) = tr(rho) * out, for any input.
  static QuantumChannel fixed_output(int dim_in, const DensityMatrix& out);
  /// E(rho) = tr_env[ V rho V^dag ] with isometry V: d_in -> d_out * d_env.
  static QuantumChannel from_stinespring(const ComplexMatrix& isometry, int dim_out);
  /// Assemble the Choi by acting on a matrix-unit basis.
  static QuantumChannel from_function(int dim_in, int dim_out,
                                      const std::function<ComplexMatrix(const ComplexMatrix&)>& e);
  /// Haar-ish random channel with environment dimension env_dim.
  static QuantumChannel random(int d, int env_dim, std::uint64_t seed);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const ComplexMatrix& choi() const { return choi_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  ComplexMatrix apply_matrix(const ComplexMatrix& m) const;

  /// this after `first` (i.e. rho -> this(first(rho))).
  QuantumChannel compose_after(const QuantumChannel& first) const;
  QuantumChannel tensor_with(const QuantumChannel& other) const;

  ChannelValidation validation() const;
  /// Max absolute Choi entry difference.
  double choi_distance(const QuantumChannel& other) const;

 private:
  int dim_in_, dim_out_;
  ComplexMatrix choi_;
};

/// Haar-distributed unitary via QR of a Ginibre matrix.
ComplexMatrix random_unitary(int d, std::uint64_t seed);

/// Apply a square channel to the listed slots of a composite operator,
/// via the channel's Kraus decomposition.
ComplexMatrix apply_channel_on_slots(const ComplexMatrix& state, const std::vector<int>& dims,
                                     const QuantumChannel& e, const std::vector<int>& slots);

/// Kraus operators recovered from the Choi matrix (eigenvalues above 1e-12).
std::vector<ComplexMatrix> kraus_operators(const QuantumChannel& e);

}  // namespace combworks
