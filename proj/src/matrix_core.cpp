#include "combworks/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace combworks {

namespace {

long product_of(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

// Big-endian strides for a composite index.
std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

std::vector<int> complement_slots(int n, const std::vector<int>& subset) {
  std::vector<bool> in(n, false);
  for (int s : subset) in[s] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

void check_slots(const std::vector<int>& dims, const std::vector<int>& slots,
                 const char* what) {
  std::vector<bool> seen(dims.size(), false);
  for (int s : slots) {
    if (s < 0 || s >= static_cast<int>(dims.size()) || seen[s])
      throw std::invalid_argument(std::string(what) + ": bad slot list");
    seen[s] = true;
  }
}

// Enumerate composite indices of the sub-space spanned by `slots`, returning
// the flat offset each combination contributes in the full space.
std::vector<long> slot_offsets(const std::vector<int>& dims, const std::vector<long>& strides,
                               const std::vector<int>& slots) {
  long total = 1;
  for (int s : slots) total *= dims[s];
  std::vector<long> off(total, 0);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    long o = 0;
    for (int i = static_cast<int>(slots.size()) - 1; i >= 0; --i) {
      const int d = dims[slots[i]];
      o += (rem % d) * strides[slots[i]];
      rem /= d;
    }
    off[idx] = o;
  }
  return off;
}

}  // namespace

double hermiticity_deviation(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw std::invalid_argument("DensityMatrix: not square");
  if (!m_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
  if (hermiticity_deviation(m_) > kHermTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace().real() - 1.0) > kTraceTol || std::abs(m_.trace().imag()) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace != 1");
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("pure: zero vector");
  ComplexVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int dim, int j) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(j) = 1.0;
  return pure(v);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

void DensityMatrix::validate() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -kPsdTol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues()(0)));
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) out = tensor_product(out, factors[i]);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  const long total = product_of(dims);
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("partial_trace: dims do not match matrix size");
  check_slots(dims, keep, "partial_trace");
  const auto strides = strides_of(dims);
  const auto traced = complement_slots(static_cast<int>(dims.size()), keep);
  const auto keep_off = slot_offsets(dims, strides, keep);
  const auto tr_off = slot_offsets(dims, strides, traced);

  const long dk = static_cast<long>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (long t : tr_off) acc += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix permute_systems(const ComplexMatrix& m, const std::vector<int>& dims,
                              const std::vector<int>& perm) {
  const long total = product_of(dims);
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("permute_systems: dims do not match matrix size");
  if (perm.size() != dims.size()) throw std::invalid_argument("permute_systems: bad perm");
  check_slots(dims, perm, "permute_systems");

  const auto old_strides = strides_of(dims);
  std::vector<int> new_dims(dims.size());
  for (size_t j = 0; j < perm.size(); ++j) new_dims[j] = dims[perm[j]];
  const auto new_strides = strides_of(new_dims);

  std::vector<long> map(total);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx, old_idx = 0;
    for (size_t j = 0; j < new_dims.size(); ++j) {
      const long digit = rem / new_strides[j];
      rem %= new_strides[j];
      old_idx += digit * old_strides[perm[j]];
    }
    map[idx] = old_idx;
  }
  ComplexMatrix out(total, total);
  for (long r = 0; r < total; ++r)
    for (long c = 0; c < total; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

ComplexMatrix embed_on_slots(const ComplexMatrix& op, const std::vector<int>& dims,
                             const std::vector<int>& slots) {
  check_slots(dims, slots, "embed_on_slots");
  const auto strides = strides_of(dims);
  const long total = product_of(dims);
  long dsub = 1;
  for (int s : slots) dsub *= dims[s];
  if (op.rows() != dsub || op.cols() != dsub)
    throw std::invalid_argument("embed_on_slots: operator size mismatch");
  const auto sub_off = slot_offsets(dims, strides, slots);

  // For each full row index, decompose into (slot part, rest part); the
  // embedded operator couples only indices sharing the rest part.
  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  const auto rest = complement_slots(static_cast<int>(dims.size()), slots);
  const auto rest_off = slot_offsets(dims, strides, rest);
  for (long rr : rest_off)
    for (long i = 0; i < dsub; ++i)
      for (long j = 0; j < dsub; ++j) out(rr + sub_off[i], rr + sub_off[j]) = op(i, j);
  return out;
}

ComplexMatrix conjugate_on_slots(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const ComplexMatrix& u, const std::vector<int>& slots) {
  const ComplexMatrix lifted = embed_on_slots(u, dims, slots);
  return lifted * m * lifted.adjoint();
}

ComplexMatrix max_entangled_op(int d) {
  ComplexVector omega = ComplexVector::Zero(static_cast<long>(d) * d);
  for (int j = 0; j < d; ++j) omega(static_cast<long>(j) * d + j) = 1.0;
  return omega * omega.adjoint();
}

ComplexMatrix link_contract(const ComplexMatrix& a, const std::vector<int>& dims_a,
                            const std::vector<int>& shared_a, const ComplexMatrix& b,
                            const std::vector<int>& dims_b, const std::vector<int>& shared_b) {
  if (shared_a.size() != shared_b.size())
    throw std::invalid_argument("link_contract: shared lists differ in length");
  check_slots(dims_a, shared_a, "link_contract");
  check_slots(dims_b, shared_b, "link_contract");
  for (size_t i = 0; i < shared_a.size(); ++i)
    if (dims_a[shared_a[i]] != dims_b[shared_b[i]])
      throw std::invalid_argument("link_contract: shared dimension mismatch");

  const auto sa = strides_of(dims_a);
  const auto sb = strides_of(dims_b);
  const auto rest_a = complement_slots(static_cast<int>(dims_a.size()), shared_a);
  const auto rest_b = complement_slots(static_cast<int>(dims_b.size()), shared_b);
  const auto a_rest_off = slot_offsets(dims_a, sa, rest_a);
  const auto b_rest_off = slot_offsets(dims_b, sb, rest_b);
  const auto a_sh_off = slot_offsets(dims_a, sa, shared_a);
  const auto b_sh_off = slot_offsets(dims_b, sb, shared_b);

  const long da = static_cast<long>(a_rest_off.size());
  const long db = static_cast<long>(b_rest_off.size());
  const long dx = static_cast<long>(a_sh_off.size());

  // result[(ar,br),(ac,bc)] = sum_{x,y} A[(ar,y),(ac,x)] B[(y,br),(x,bc)]
  // (partial transpose over the shared space applied on the A side)
  ComplexMatrix out = ComplexMatrix::Zero(da * db, da * db);
  for (long ar = 0; ar < da; ++ar)
    for (long ac = 0; ac < da; ++ac)
      for (long br = 0; br < db; ++br)
        for (long bc = 0; bc < db; ++bc) {
          Complex acc = 0.0;
          for (long x = 0; x < dx; ++x)
            for (long y = 0; y < dx; ++y)
              acc += a(a_rest_off[ar] + a_sh_off[y], a_rest_off[ac] + a_sh_off[x]) *
                     b(b_sh_off[y] + b_rest_off[br], b_sh_off[x] + b_rest_off[bc]);
          out(ar * db + br, ac * db + bc) = acc;
        }
  return out;
}

Spectrum hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: not square");
  if (hermiticity_deviation(m) > kHermTol)
    throw std::invalid_argument("hermitian_eig: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Eigenvalues of a state, with the [-clip, clip] band flattened to zero so
// PSD noise cannot flip finite entropies to infinity.
RealVector clipped_state_eigenvalues(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) < kEigClip) ev(i) = 0.0;
  return ev;
}

}  // namespace

double vn_entropy(const DensityMatrix& rho) {
  const RealVector ev = clipped_state_eigenvalues(rho);
  double s = 0.0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) s -= ev(i) * std::log(ev(i));
  return std::max(0.0, s);
}

ExtReal rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("rel_entropy: dimension mismatch");
  const Spectrum ss = hermitian_eig(sigma.matrix());

  double weight_outside = 0.0;
  double cross = 0.0;  // tr[rho ln sigma] restricted to supp(sigma)
  for (int i = 0; i < ss.eigenvalues.size(); ++i) {
    const double lam = ss.eigenvalues(i);
    const double w =
        std::max(0.0, (ss.eigenvectors.col(i).adjoint() * rho.matrix() * ss.eigenvectors.col(i))(0, 0).real());
    if (lam <= kEigClip)
      weight_outside += w;
    else
      cross += w * std::log(lam);
  }
  if (weight_outside > kSupportTol) return ExtReal::infinity();

  const RealVector rv = clipped_state_eigenvalues(rho);
  double own = 0.0;
  for (int i = 0; i < rv.size(); ++i)
    if (rv(i) > 0.0) own += rv(i) * std::log(rv(i));
  return ExtReal::finite(std::max(0.0, own - cross));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double multi_mutual_info(const DensityMatrix& rho, const std::vector<int>& dims) {
  long total = 1;
  for (int d : dims) total *= d;
  if (total != rho.dim()) throw std::invalid_argument("multi_mutual_info: dims mismatch");
  double s_marg = 0.0;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    DensityMatrix mi(partial_trace(rho.matrix(), dims, {i}));
    s_marg += vn_entropy(mi);
  }
  return std::max(0.0, s_marg - vn_entropy(rho));
}

}  // namespace combworks
