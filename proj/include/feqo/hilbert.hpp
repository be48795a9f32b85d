#pragma once

// Truncated (sideband window)^N x Fock Hilbert space: basis bookkeeping, pure
// states, reduced density operators and sparse Hermitian operators.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace feqo {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// Half-integer sideband label n, stored as 2n.
class HalfIndex {
 public:
  constexpr HalfIndex() = default;
  static constexpr HalfIndex from_twice(int twice) { return HalfIndex(twice); }
  static HalfIndex from_value(double n);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  // "+1/2", "-5/2", "+1", ...
  std::string label() const;

  constexpr HalfIndex operator+(int k) const { return HalfIndex(twice_ + 2 * k); }
  constexpr auto operator<=>(const HalfIndex&) const = default;

 private:
  constexpr explicit HalfIndex(int twice) : twice_(twice) {}
  int twice_ = 1;
};

inline constexpr HalfIndex kExcited = HalfIndex::from_twice(1);   // |e> = |+1/2>
inline constexpr HalfIndex kGround = HalfIndex::from_twice(-1);   // |g> = |-1/2>

using SidebandWindow = std::vector<HalfIndex>;

// Even number of levels centred on the qubit pair: 2 -> {-1/2, +1/2}, 6 -> {-5/2 .. +5/2}.
SidebandWindow symmetric_window(int levels);

struct CompositeLabel {
  std::vector<int> slots;  // per electron, position inside the sideband window
  int photons = 0;

  bool operator==(const CompositeLabel&) const = default;
};

// Electron 1 varies slowest, the photon number fastest.
class BasisSpec {
 public:
  BasisSpec(int num_electrons, SidebandWindow sidebands, int fock_cutoff);

  int num_electrons() const { return num_electrons_; }
  const SidebandWindow& sidebands() const { return sidebands_; }
  int sideband_count() const { return static_cast<int>(sidebands_.size()); }
  int fock_cutoff() const { return fock_cutoff_; }
  int photon_dim() const { return fock_cutoff_ + 1; }
  Index dimension() const { return dimension_; }

  Index encode(const CompositeLabel& label) const;
  CompositeLabel decode(Index flat) const;

  // Position of n inside the window, or -1.
  int slot_of(HalfIndex n) const;
  // Sizes of the tensor factors in codec order: electrons..., photon.
  std::vector<Index> subsystem_dims() const;

  bool operator==(const BasisSpec&) const = default;

 private:
  int num_electrons_;
  SidebandWindow sidebands_;
  int fock_cutoff_;
  Index dimension_;
};

BasisSpec make_basis(int num_electrons, const SidebandWindow& window, int fock_cutoff);

class StateVector {
 public:
  StateVector(BasisSpec basis, Eigen::VectorXcd amplitudes, double norm_tol = 1e-9);

  const BasisSpec& basis() const { return basis_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

 private:
  BasisSpec basis_;
  Eigen::VectorXcd amplitudes_;
};

// Which tensor factors survive a partial trace. Electron indices are 0-based.
struct SubsystemSelector {
  std::vector<int> electrons;
  bool photon = false;

  static SubsystemSelector all_electrons(const BasisSpec& basis);
  static SubsystemSelector electron(int index) { return {{index}, false}; }
  static SubsystemSelector photon_only() { return {{}, true}; }
};

class DensityOperator {
 public:
  DensityOperator(std::string label, std::vector<Index> dims, Eigen::MatrixXcd matrix);

  static DensityOperator pure(std::string label, std::vector<Index> dims, const Eigen::VectorXcd& psi);

  const std::string& label() const { return label_; }
  const std::vector<Index>& dims() const { return dims_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Index dimension() const { return matrix_.rows(); }
  double trace() const { return matrix_.trace().real(); }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  std::string label_;
  std::vector<Index> dims_;
  Eigen::MatrixXcd matrix_;
};

// Photon and single-electron factors used to assemble product states.
struct PhotonFactor {
  Eigen::VectorXcd amplitudes;
  int fock_cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
};

struct ElectronFactor {
  Eigen::VectorXcd amplitudes;  // over the sideband window
};

// Default Fock cutoff ceil(|alpha|^2 + 6|alpha| + 10).
int default_fock_cutoff(double alpha_abs);
// Poisson(mean) probability mass strictly above `cutoff`.
double poisson_tail(double mean, int cutoff);

PhotonFactor coherent_state(Complex alpha, int fock_cutoff, double tail_tol = 1e-8);
PhotonFactor fock_state(int photons, int fock_cutoff);

ElectronFactor sideband_state(const SidebandWindow& window, HalfIndex n);
// cos(theta/2)|e> + sin(theta/2)|g>
ElectronFactor qubit_state(const SidebandWindow& window, double theta);

StateVector tensor_product(const BasisSpec& basis, std::span<const ElectronFactor> electrons,
                           const PhotonFactor& photon);

// Generic partial trace over a tensor product with the given factor sizes.
Eigen::MatrixXcd reduce_pure(const Eigen::VectorXcd& psi, const std::vector<Index>& dims, const std::vector<bool>& keep);
Eigen::MatrixXcd reduce_mixed(const Eigen::MatrixXcd& rho, const std::vector<Index>& dims, const std::vector<bool>& keep);

DensityOperator partial_trace(const StateVector& state, const SubsystemSelector& keep);
DensityOperator partial_trace(const DensityOperator& rho, const BasisSpec& basis, const SubsystemSelector& keep);

double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double von_neumann_entropy(const DensityOperator& rho);

std::map<HalfIndex, double> sideband_populations(const StateVector& state, int electron);
double photon_mean(const StateVector& state);

// Sparse Hermitian matrix on a BasisSpec. Only the builder can create one, and
// it mirrors every off-diagonal entry, so A == A^dagger holds bit-for-bit.
class HermitianOperator {
 public:
  class Builder {
   public:
    explicit Builder(BasisSpec basis);
    void add_diagonal(Index i, double value);
    // Adds `value` at (row, col) and conj(value) at (col, row); row != col.
    void add_coupling(Index row, Index col, Complex value);
    HermitianOperator build() &&;

   private:
    BasisSpec basis_;
    std::vector<Eigen::Triplet<Complex>> upper_;
  };

  const BasisSpec& basis() const { return basis_; }
  const SparseMatrix& matrix() const { return matrix_; }
  Index dimension() const { return matrix_.rows(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator scaled(double factor) const;

  double expectation(const Eigen::VectorXcd& psi) const;

 private:
  HermitianOperator(BasisSpec basis, SparseMatrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {}

  BasisSpec basis_;
  SparseMatrix matrix_;
};

// Frobenius norm of [A, B]; an upper bound on the operator norm.
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);
double hermiticity_defect(const HermitianOperator& a);

}  // namespace feqo
