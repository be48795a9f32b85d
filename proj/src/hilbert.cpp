#include "feqo/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "feqo/errors.hpp"
#include "feqo/linalg.hpp"

namespace feqo {

HalfIndex HalfIndex::from_value(double n) {
  const double twice = 2.0 * n;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-9) {
    throw DomainError("sideband index must be a multiple of 1/2, got " + std::to_string(n));
  }
  return HalfIndex(static_cast<int>(rounded));
}

std::string HalfIndex::label() const {
  const char sign = twice_ < 0 ? '-' : '+';
  const int mag = std::abs(twice_);
  if (mag % 2 == 0) return std::string(1, sign) + std::to_string(mag / 2);
  return std::string(1, sign) + std::to_string(mag) + "/2";
}

SidebandWindow symmetric_window(int levels) {
  if (levels < 2 || levels % 2 != 0) {
    throw DomainError("symmetric sideband window needs an even level count >= 2");
  }
  SidebandWindow w;
  for (int twice = -(levels - 1); twice <= levels - 1; twice += 2) w.push_back(HalfIndex::from_twice(twice));
  return w;
}

BasisSpec::BasisSpec(int num_electrons, SidebandWindow sidebands, int fock_cutoff)
    : num_electrons_(num_electrons), sidebands_(std::move(sidebands)), fock_cutoff_(fock_cutoff) {
  if (num_electrons_ < 1) throw DomainError("basis needs at least one electron");
  if (fock_cutoff_ < 0) throw DomainError("Fock cutoff must be >= 0");
  if (sidebands_.empty()) throw DomainError("sideband window is empty");
  for (std::size_t i = 1; i < sidebands_.size(); ++i) {
    if (sidebands_[i].twice() != sidebands_[i - 1].twice() + 2) {
      throw DomainError("sideband window must be strictly increasing in steps of 1");
    }
  }
  if (slot_of(kExcited) < 0 || slot_of(kGround) < 0) {
    throw DomainError("sideband window must contain the computational states -1/2 and +1/2");
  }
  Index dim = photon_dim();
  for (int i = 0; i < num_electrons_; ++i) dim *= sideband_count();
  dimension_ = dim;
}

Index BasisSpec::encode(const CompositeLabel& label) const {
  if (static_cast<int>(label.slots.size()) != num_electrons_) throw std::invalid_argument("label has wrong electron count");
  if (label.photons < 0 || label.photons > fock_cutoff_) throw std::out_of_range("photon number outside cutoff");
  Index flat = 0;
  for (int slot : label.slots) {
    if (slot < 0 || slot >= sideband_count()) throw std::out_of_range("sideband slot outside window");
    flat = flat * sideband_count() + slot;
  }
  return flat * photon_dim() + label.photons;
}

CompositeLabel BasisSpec::decode(Index flat) const {
  if (flat < 0 || flat >= dimension_) throw std::out_of_range("flat index outside basis");
  CompositeLabel label;
  label.photons = static_cast<int>(flat % photon_dim());
  flat /= photon_dim();
  label.slots.assign(num_electrons_, 0);
  for (int e = num_electrons_ - 1; e >= 0; --e) {
    label.slots[e] = static_cast<int>(flat % sideband_count());
    flat /= sideband_count();
  }
  return label;
}

int BasisSpec::slot_of(HalfIndex n) const {
  auto it = std::find(sidebands_.begin(), sidebands_.end(), n);
  return it == sidebands_.end() ? -1 : static_cast<int>(it - sidebands_.begin());
}

std::vector<Index> BasisSpec::subsystem_dims() const {
  std::vector<Index> dims(num_electrons_, sideband_count());
  dims.push_back(photon_dim());
  return dims;
}

BasisSpec make_basis(int num_electrons, const SidebandWindow& window, int fock_cutoff) {
  return BasisSpec(num_electrons, window, fock_cutoff);
}

StateVector::StateVector(BasisSpec basis, Eigen::VectorXcd amplitudes, double norm_tol)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != basis_.dimension()) {
    throw std::invalid_argument("state vector length does not match basis dimension");
  }
  const double n = amplitudes_.norm();
  if (!(std::abs(n - 1.0) <= norm_tol)) {
    throw ToleranceError("state vector norm " + std::to_string(n) + " deviates from 1 beyond tolerance");
  }
}

SubsystemSelector SubsystemSelector::all_electrons(const BasisSpec& basis) {
  SubsystemSelector s;
  s.electrons.resize(basis.num_electrons());
  std::iota(s.electrons.begin(), s.electrons.end(), 0);
  return s;
}

DensityOperator::DensityOperator(std::string label, std::vector<Index> dims, Eigen::MatrixXcd matrix)
    : label_(std::move(label)), dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("density matrix must be square");
  const Index expected = std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
  if (expected != matrix_.rows()) throw std::invalid_argument("density matrix size does not match subsystem dims");
  if (linalg::hermiticity_defect(matrix_) > 1e-10) throw ToleranceError("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-9) throw ToleranceError("density matrix trace deviates from 1");
  const auto spectrum = linalg::hermitian_eigenvalues(matrix_);
  if (spectrum.minCoeff() < -1e-10) throw ToleranceError("density matrix has negative eigenvalues");
}

DensityOperator DensityOperator::pure(std::string label, std::vector<Index> dims, const Eigen::VectorXcd& psi) {
  Eigen::MatrixXcd m = psi * psi.adjoint();
  return DensityOperator(std::move(label), std::move(dims), linalg::hermitian_part(m));
}

int default_fock_cutoff(double alpha_abs) {
  return static_cast<int>(std::ceil(alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0));
}

double poisson_tail(double mean, int cutoff) {
  if (mean <= 0.0) return 0.0;
  // Walk the pmf upward from cutoff+1 in log space until terms are negligible.
  double tail = 0.0;
  for (int m = cutoff + 1;; ++m) {
    const double term = std::exp(-mean + m * std::log(mean) - std::lgamma(m + 1.0));
    tail += term;
    if (m > mean && term < 1e-18 * std::max(tail, 1e-300)) break;
    if (m > cutoff + 100000) break;
  }
  return tail;
}

PhotonFactor coherent_state(Complex alpha, int fock_cutoff, double tail_tol) {
  if (fock_cutoff < 0) throw DomainError("Fock cutoff must be >= 0");
  const double mean = std::norm(alpha);
  const double tail = poisson_tail(mean, fock_cutoff);
  if (tail > tail_tol) {
    int required = fock_cutoff;
    while (poisson_tail(mean, required) > tail_tol) required = std::max(required + 1, required + required / 8);
    while (required > fock_cutoff + 1 && poisson_tail(mean, required - 1) <= tail_tol) --required;
    throw TruncationError("coherent state |alpha|=" + std::to_string(std::abs(alpha)) + " loses " +
                              std::to_string(tail) + " probability above Fock cutoff " + std::to_string(fock_cutoff) +
                              "; need cutoff >= " + std::to_string(required),
                          required);
  }
  PhotonFactor out;
  out.amplitudes.resize(fock_cutoff + 1);
  // a_0 = exp(-|alpha|^2/2), a_{m+1} = a_m alpha / sqrt(m+1). The log-domain
  // start covers amplitudes whose a_0 would underflow.
  if (mean < 1400.0) {
    out.amplitudes(0) = std::exp(-0.5 * mean);
    for (int m = 0; m < fock_cutoff; ++m) out.amplitudes(m + 1) = out.amplitudes(m) * alpha / std::sqrt(m + 1.0);
  } else {
    const double la = std::log(std::abs(alpha));
    const double phase = std::arg(alpha);
    for (int m = 0; m <= fock_cutoff; ++m) {
      out.amplitudes(m) = std::polar(std::exp(-0.5 * mean + m * la - 0.5 * std::lgamma(m + 1.0)), m * phase);
    }
  }
  out.amplitudes.normalize();
  return out;
}

PhotonFactor fock_state(int photons, int fock_cutoff) {
  if (photons < 0 || photons > fock_cutoff) throw DomainError("Fock state outside cutoff");
  PhotonFactor out;
  out.amplitudes = Eigen::VectorXcd::Zero(fock_cutoff + 1);
  out.amplitudes(photons) = 1.0;
  return out;
}

ElectronFactor sideband_state(const SidebandWindow& window, HalfIndex n) {
  auto it = std::find(window.begin(), window.end(), n);
  if (it == window.end()) throw DomainError("sideband " + n.label() + " not in window");
  ElectronFactor f;
  f.amplitudes = Eigen::VectorXcd::Zero(static_cast<Index>(window.size()));
  f.amplitudes(it - window.begin()) = 1.0;
  return f;
}

ElectronFactor qubit_state(const SidebandWindow& window, double theta) {
  ElectronFactor f = sideband_state(window, kExcited);
  f.amplitudes *= std::cos(0.5 * theta);
  f.amplitudes += std::sin(0.5 * theta) * sideband_state(window, kGround).amplitudes;
  return f;
}

StateVector tensor_product(const BasisSpec& basis, std::span<const ElectronFactor> electrons,
                           const PhotonFactor& photon) {
  if (static_cast<int>(electrons.size()) != basis.num_electrons()) {
    throw std::invalid_argument("tensor product needs one factor per electron");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (const auto& e : electrons) {
    if (e.amplitudes.size() != basis.sideband_count()) throw std::invalid_argument("electron factor size mismatch");
    psi = linalg::kron(psi, e.amplitudes);
  }
  if (photon.amplitudes.size() != basis.photon_dim()) throw std::invalid_argument("photon factor size mismatch");
  psi = linalg::kron(psi, photon.amplitudes);
  return StateVector(basis, std::move(psi));
}

namespace {

struct Split {
  std::vector<Index> kept_index;    // per flat index
  std::vector<Index> traced_index;  // per flat index
  Index kept_dim = 1;
  Index traced_dim = 1;
};

Split split_indices(const std::vector<Index>& dims, const std::vector<bool>& keep) {
  if (dims.size() != keep.size()) throw std::invalid_argument("keep mask size mismatch");
  Split s;
  Index total = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    total *= dims[k];
    (keep[k] ? s.kept_dim : s.traced_dim) *= dims[k];
  }
  s.kept_index.resize(total);
  s.traced_index.resize(total);
  std::vector<Index> digits(dims.size(), 0);
  for (Index flat = 0; flat < total; ++flat) {
    Index kept = 0, traced = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (keep[k]) kept = kept * dims[k] + digits[k];
      else traced = traced * dims[k] + digits[k];
    }
    s.kept_index[flat] = kept;
    s.traced_index[flat] = traced;
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++digits[k] < dims[k]) break;
      digits[k] = 0;
    }
  }
  return s;
}

std::vector<bool> keep_mask(const BasisSpec& basis, const SubsystemSelector& keep) {
  std::vector<bool> mask(basis.num_electrons() + 1, false);
  for (int e : keep.electrons) {
    if (e < 0 || e >= basis.num_electrons()) throw std::invalid_argument("electron index outside basis");
    if (mask[e]) throw std::invalid_argument("electron selected twice");
    mask[e] = true;
  }
  mask.back() = keep.photon;
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    throw std::invalid_argument("partial trace must keep at least one subsystem");
  }
  return mask;
}

std::string selector_label(const SubsystemSelector& keep) {
  std::string s;
  for (int e : keep.electrons) s += (s.empty() ? "e" : ",e") + std::to_string(e + 1);
  if (keep.photon) s += s.empty() ? "photon" : ",photon";
  return s;
}

std::vector<Index> kept_dims(const BasisSpec& basis, const std::vector<bool>& mask) {
  std::vector<Index> dims;
  auto all = basis.subsystem_dims();
  for (std::size_t k = 0; k < all.size(); ++k)
    if (mask[k]) dims.push_back(all[k]);
  return dims;
}

}  // namespace

Eigen::MatrixXcd reduce_pure(const Eigen::VectorXcd& psi, const std::vector<Index>& dims, const std::vector<bool>& keep) {
  const Split s = split_indices(dims, keep);
  if (static_cast<Index>(s.kept_index.size()) != psi.size()) throw std::invalid_argument("state size mismatch");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(s.kept_dim, s.traced_dim);
  for (Index i = 0; i < psi.size(); ++i) m(s.kept_index[i], s.traced_index[i]) = psi(i);
  Eigen::MatrixXcd rho = m * m.adjoint();
  return linalg::hermitian_part(rho);
}

Eigen::MatrixXcd reduce_mixed(const Eigen::MatrixXcd& rho, const std::vector<Index>& dims, const std::vector<bool>& keep) {
  const Split s = split_indices(dims, keep);
  const Index n = static_cast<Index>(s.kept_index.size());
  if (rho.rows() != n || rho.cols() != n) throw std::invalid_argument("density size mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(s.kept_dim, s.kept_dim);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (s.traced_index[i] == s.traced_index[j]) out(s.kept_index[i], s.kept_index[j]) += rho(i, j);
  return linalg::hermitian_part(out);
}

DensityOperator partial_trace(const StateVector& state, const SubsystemSelector& keep) {
  const auto& basis = state.basis();
  const auto mask = keep_mask(basis, keep);
  const auto dims = basis.subsystem_dims();
  return DensityOperator(selector_label(keep), kept_dims(basis, mask), reduce_pure(state.amplitudes(), dims, mask));
}

DensityOperator partial_trace(const DensityOperator& rho, const BasisSpec& basis, const SubsystemSelector& keep) {
  const auto mask = keep_mask(basis, keep);
  const auto dims = basis.subsystem_dims();
  return DensityOperator(selector_label(keep), kept_dims(basis, mask), reduce_mixed(rho.matrix(), dims, mask));
}

double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dimension() != sigma.dimension()) throw std::invalid_argument("fidelity operands differ in dimension");
  const Eigen::MatrixXcd root = linalg::hermitian_sqrt(rho.matrix());
  const Eigen::MatrixXcd inner = root * sigma.matrix() * root;
  const auto spectrum = linalg::hermitian_eigenvalues(inner);
  if (spectrum.minCoeff() < -1e-10) throw ToleranceError("fidelity kernel is not positive semidefinite");
  const double tr = spectrum.cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double von_neumann_entropy(const DensityOperator& rho) {
  return linalg::shannon_entropy(linalg::hermitian_eigenvalues(rho.matrix()));
}

std::map<HalfIndex, double> sideband_populations(const StateVector& state, int electron) {
  const auto& basis = state.basis();
  if (electron < 0 || electron >= basis.num_electrons()) throw std::invalid_argument("electron index outside basis");
  std::vector<double> p(basis.sideband_count(), 0.0);
  for (Index i = 0; i < basis.dimension(); ++i) p[basis.decode(i).slots[electron]] += std::norm(state.amplitudes()(i));
  std::map<HalfIndex, double> out;
  for (int s = 0; s < basis.sideband_count(); ++s) out[basis.sidebands()[s]] = p[s];
  return out;
}

double photon_mean(const StateVector& state) {
  const auto& amps = state.amplitudes();
  const Index pd = state.basis().photon_dim();
  double mean = 0.0;
  for (Index i = 0; i < amps.size(); ++i) mean += static_cast<double>(i % pd) * std::norm(amps(i));
  return mean;
}

HermitianOperator::Builder::Builder(BasisSpec basis) : basis_(std::move(basis)) {}

void HermitianOperator::Builder::add_diagonal(Index i, double value) {
  if (value != 0.0) upper_.emplace_back(i, i, Complex(value, 0.0));
}

void HermitianOperator::Builder::add_coupling(Index row, Index col, Complex value) {
  if (row == col) throw std::invalid_argument("add_coupling is for off-diagonal entries");
  if (value == Complex(0.0, 0.0)) return;
  // Store with row < col so duplicates from both orientations sum consistently.
  if (row > col) {
    std::swap(row, col);
    value = std::conj(value);
  }
  upper_.emplace_back(row, col, value);
}

HermitianOperator HermitianOperator::Builder::build() && {
  const Index n = basis_.dimension();
  // Sum duplicates on the upper triangle first, then mirror.
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> upper(n, n);
  upper.setFromTriplets(upper_.begin(), upper_.end());
  std::vector<Eigen::Triplet<Complex>> full;
  full.reserve(2 * upper.nonZeros());
  for (Index r = 0; r < upper.outerSize(); ++r) {
    for (Eigen::SparseMatrix<Complex, Eigen::RowMajor>::InnerIterator it(upper, r); it; ++it) {
      if (it.row() == it.col()) {
        full.emplace_back(it.row(), it.col(), Complex(it.value().real(), 0.0));
      } else {
        full.emplace_back(it.row(), it.col(), it.value());
        full.emplace_back(it.col(), it.row(), std::conj(it.value()));
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(full.begin(), full.end());
  m.makeCompressed();
  return HermitianOperator(std::move(basis_), std::move(m));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (!(basis_ == other.basis_)) throw std::invalid_argument("operators live on different bases");
  SparseMatrix m = matrix_ + other.matrix_;
  m.makeCompressed();
  return HermitianOperator(basis_, std::move(m));
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (!(basis_ == other.basis_)) throw std::invalid_argument("operators live on different bases");
  SparseMatrix m = matrix_ - other.matrix_;
  m.prune(Complex(0.0, 0.0), 0.0);
  m.makeCompressed();
  return HermitianOperator(basis_, std::move(m));
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  SparseMatrix m = matrix_ * Complex(factor, 0.0);
  return HermitianOperator(basis_, std::move(m));
}

double HermitianOperator::expectation(const Eigen::VectorXcd& psi) const {
  return psi.dot(matrix_ * psi).real();
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  SparseMatrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return c.norm();
}

double hermiticity_defect(const HermitianOperator& a) {
  SparseMatrix d = SparseMatrix(a.matrix().adjoint()) - a.matrix();
  double worst = 0.0;
  for (Index r = 0; r < d.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(d, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace feqo
