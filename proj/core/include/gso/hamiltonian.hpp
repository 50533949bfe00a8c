#ifndef GSO_HAMILTONIAN_HPP
#define GSO_HAMILTONIAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gso/geometry.hpp"

namespace gso {

// Qubit convention: qubit j is bit j counting from the most significant
// position of the n-bit label, i.e. bit(label, j) = (label >> (n-1-j)) & 1.

enum class BasisKind { FixedHW, BoundedHW, Explicit };

struct SubspaceBasis {
  int n = 0;
  BasisKind kind = BasisKind::Explicit;
  int k = 0;  // Hamming weight bound; unused for Explicit
  std::vector<std::uint32_t> labels;  // unique, ascending numeric order

  Eigen::Index dim() const { return static_cast<Eigen::Index>(labels.size()); }
  std::optional<Eigen::Index> index_of(std::uint32_t label) const;
  std::string label_string(Eigen::Index i) const;
};

struct PauliTerm {
  double coeff = 0.0;
  std::string word;  // over {I,X,Y,Z}, length n
};

struct PauliHamiltonian {
  int n = 0;
  std::vector<PauliTerm> terms;
};

struct NotRealHamiltonian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Real symmetric operator on the span of a subspace basis. Dense storage up
/// to kDenseLimit, sparse rows beyond.
class SubspaceHamiltonian {
 public:
  static constexpr Eigen::Index kDenseLimit = 4096;

  SubspaceHamiltonian(SubspaceBasis basis, Matrix dense);
  SubspaceHamiltonian(SubspaceBasis basis, Eigen::SparseMatrix<double> sparse);

  const SubspaceBasis& basis() const { return basis_; }
  Eigen::Index dim() const { return dim_; }
  bool is_dense() const { return dense_.size() > 0; }

  Vector apply(const Vector& x) const;
  double quad(const Vector& x) const { return x.dot(apply(x)); }
  double entry(Eigen::Index i, Eigen::Index j) const;

  double trace() const;
  double trace_sq() const;  // tr(H^2)
  double row_norm_sq(Eigen::Index j) const;

  const Matrix& dense() const;
  const Eigen::SparseMatrix<double>& sparse() const;

 private:
  SubspaceBasis basis_;
  Eigen::Index dim_ = 0;
  Matrix dense_;
  Eigen::SparseMatrix<double> sparse_;
};

struct FixedHW {
  int k;
};
struct BoundedHW {
  int k;
};

SubspaceBasis enumerate_basis(int n, FixedHW kind);
SubspaceBasis enumerate_basis(int n, BoundedHW kind);

/// Projects a Pauli sum onto span(basis) by bit algebra. Throws
/// NotRealHamiltonian if any matrix element keeps an imaginary part.
SubspaceHamiltonian project_pauli(const PauliHamiltonian& h, const SubspaceBasis& basis);

/// XXZ chain sum_j (X_j X_{j+1} + Y_j Y_{j+1} + delta Z_j Z_{j+1}), periodic,
/// paired with the half-filling basis.
std::pair<PauliHamiltonian, SubspaceBasis> build_xxz(int n, double delta);

/// Transverse-field Ising chain -sum_j (Z_j Z_{j+1} + h X_j), periodic,
/// paired with the bounded-HW(k) basis.
std::pair<PauliHamiltonian, SubspaceBasis> build_tfim(int n, double h, int k);

/// sqrt(alpha) on the Hartree label 1^k 0^{n-k}, the remainder spread evenly
/// over the other fixed-HW(k) labels.
AmplitudeState warm_start_state(int n, int k, double alpha);

struct GroundInfo {
  double e0 = 0.0;
  std::vector<AmplitudeState> basis;  // orthonormal, spans the degenerate subspace
};

/// Minimum eigenvalue and the eigenvectors within degeneracy_tol of it.
/// degeneracy_tol < 0 selects the default 1e-9 * max(1, |E0|).
GroundInfo exact_ground(const SubspaceHamiltonian& H, double degeneracy_tol = -1.0);

double fidelity_to_ground(const AmplitudeState& x, const std::vector<AmplitudeState>& ground_basis);

/// Projects H onto a one-dimensional symmetry sector of the dihedral group
/// (rotation and reflection of the labels): one normalized signed orbit sum
/// per orbit, with the sector chosen to minimize the reduced ground energy.
SubspaceHamiltonian symmetry_reduce(const SubspaceHamiltonian& H, int n);

// JSON interchange: {"n": int, "terms": [{"coeff": float, "pauli": "XZYI..."}],
//   "subspace": {"kind": "hw"|"hw_le"|"explicit", "k": int, "labels": [...]}}
std::pair<PauliHamiltonian, SubspaceBasis> load_pauli_json(const std::string& path);
void save_pauli_json(const std::string& path, const PauliHamiltonian& h, const SubspaceBasis& basis);

std::uint64_t binomial(int n, int k);

}  // namespace gso

#endif
