#include "gso/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_map>

#include <json.hpp>

namespace gso {

namespace {

using json = nlohmann::json;
using Complex = std::complex<double>;

int popcount32(std::uint32_t v) { return std::popcount(v); }

std::uint32_t rotate_label(std::uint32_t b, int n) {
  return static_cast<std::uint32_t>((b >> 1) | ((b & 1u) << (n - 1)));
}

std::uint32_t reflect_label(std::uint32_t b, int n) {
  std::uint32_t out = 0;
  for (int i = 0; i < n; ++i) {
    out = (out << 1) | (b & 1u);
    b >>= 1;
  }
  return out;
}

// Applies a Pauli word to |b>, returning the image label and its phase.
std::pair<std::uint32_t, Complex> apply_word(const std::string& word, std::uint32_t b, int n) {
  std::uint32_t out = b;
  Complex phase(1.0, 0.0);
  for (int q = 0; q < n; ++q) {
    const int bitpos = n - 1 - q;  // qubit q = bit q from the MSB
    const bool bit = (b >> bitpos) & 1u;
    switch (word[static_cast<std::size_t>(q)]) {
      case 'I':
        break;
      case 'X':
        out ^= (1u << bitpos);
        break;
      case 'Z':
        if (bit) phase = -phase;
        break;
      case 'Y':
        out ^= (1u << bitpos);
        phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        break;
      default:
        throw std::invalid_argument("Pauli word: invalid character");
    }
  }
  return {out, phase};
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::optional<Eigen::Index> SubspaceBasis::index_of(std::uint32_t label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return std::nullopt;
  return static_cast<Eigen::Index>(it - labels.begin());
}

std::string SubspaceBasis::label_string(Eigen::Index i) const {
  std::string s(static_cast<std::size_t>(n), '0');
  const std::uint32_t b = labels[static_cast<std::size_t>(i)];
  for (int q = 0; q < n; ++q) {
    if ((b >> (n - 1 - q)) & 1u) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

SubspaceBasis enumerate_basis(int n, FixedHW kind) {
  const int k = kind.k;
  if (n < 1 || n > 24) throw std::invalid_argument("enumerate_basis: n out of [1, 24]");
  if (k < 0 || k > n) throw std::invalid_argument("enumerate_basis: k out of [0, n]");
  SubspaceBasis basis;
  basis.n = n;
  basis.kind = BasisKind::FixedHW;
  basis.k = k;
  if (k == 0) {
    basis.labels = {0u};
    return basis;
  }
  const std::uint32_t limit = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::uint32_t v = (1u << k) - 1u;
  while (true) {
    basis.labels.push_back(v);
    if (v == (((1u << k) - 1u) << (n - k))) break;  // largest HW-k value
    // Gosper's hack: next integer with the same popcount.
    const std::uint32_t c = v & (~v + 1u);
    const std::uint32_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
    if (v > limit) break;
  }
  return basis;
}

SubspaceBasis enumerate_basis(int n, BoundedHW kind) {
  const int k = kind.k;
  if (n < 1 || n > 24) throw std::invalid_argument("enumerate_basis: n out of [1, 24]");
  if (k < 0 || k > n) throw std::invalid_argument("enumerate_basis: k out of [0, n]");
  SubspaceBasis basis;
  basis.n = n;
  basis.kind = BasisKind::BoundedHW;
  basis.k = k;
  for (int j = 0; j <= k; ++j) {
    SubspaceBasis fixed = enumerate_basis(n, FixedHW{j});
    basis.labels.insert(basis.labels.end(), fixed.labels.begin(), fixed.labels.end());
  }
  std::sort(basis.labels.begin(), basis.labels.end());
  return basis;
}

SubspaceHamiltonian::SubspaceHamiltonian(SubspaceBasis basis, Matrix dense)
    : basis_(std::move(basis)), dim_(dense.rows()), dense_(std::move(dense)) {
  if (dense_.rows() != dense_.cols())
    throw std::invalid_argument("SubspaceHamiltonian: matrix not square");
  if (basis_.dim() != 0 && basis_.dim() != dim_)
    throw std::invalid_argument("SubspaceHamiltonian: basis/matrix dimension mismatch");
  if ((dense_ - dense_.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("SubspaceHamiltonian: matrix is not symmetric");
}

SubspaceHamiltonian::SubspaceHamiltonian(SubspaceBasis basis, Eigen::SparseMatrix<double> sparse)
    : basis_(std::move(basis)), dim_(sparse.rows()), sparse_(std::move(sparse)) {
  if (sparse_.rows() != sparse_.cols())
    throw std::invalid_argument("SubspaceHamiltonian: matrix not square");
  if (basis_.dim() != 0 && basis_.dim() != dim_)
    throw std::invalid_argument("SubspaceHamiltonian: basis/matrix dimension mismatch");
  sparse_.makeCompressed();
  Eigen::SparseMatrix<double> diff = sparse_ - Eigen::SparseMatrix<double>(sparse_.transpose());
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) {
      if (it.value() != 0.0)
        throw std::invalid_argument("SubspaceHamiltonian: matrix is not symmetric");
    }
  }
}

Vector SubspaceHamiltonian::apply(const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("SubspaceHamiltonian::apply: dimension mismatch");
  return is_dense() ? Vector(dense_ * x) : Vector(sparse_ * x);
}

double SubspaceHamiltonian::entry(Eigen::Index i, Eigen::Index j) const {
  return is_dense() ? dense_(i, j) : sparse_.coeff(i, j);
}

double SubspaceHamiltonian::trace() const {
  if (is_dense()) return dense_.trace();
  double t = 0.0;
  for (Eigen::Index i = 0; i < dim_; ++i) t += sparse_.coeff(i, i);
  return t;
}

double SubspaceHamiltonian::trace_sq() const {
  // tr(H^2) = ||H||_F^2 for symmetric H.
  return is_dense() ? dense_.squaredNorm() : sparse_.squaredNorm();
}

double SubspaceHamiltonian::row_norm_sq(Eigen::Index j) const {
  if (is_dense()) return dense_.row(j).squaredNorm();
  return sparse_.row(j).squaredNorm();
}

const Matrix& SubspaceHamiltonian::dense() const {
  if (!is_dense()) throw std::logic_error("SubspaceHamiltonian: stored sparse");
  return dense_;
}

const Eigen::SparseMatrix<double>& SubspaceHamiltonian::sparse() const {
  if (is_dense()) throw std::logic_error("SubspaceHamiltonian: stored dense");
  return sparse_;
}

SubspaceHamiltonian project_pauli(const PauliHamiltonian& h, const SubspaceBasis& basis) {
  const Eigen::Index d = basis.dim();
  if (d == 0) throw std::invalid_argument("project_pauli: empty basis");
  for (const auto& term : h.terms) {
    if (static_cast<int>(term.word.size()) != h.n)
      throw std::invalid_argument("project_pauli: word length != n");
  }
  // Accumulate the upper triangle (i <= j); Hermiticity of real Pauli sums
  // makes the mirrored entries identical, so one triangle suffices.
  std::unordered_map<std::uint64_t, Complex> entries;
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::uint32_t bj = basis.labels[static_cast<std::size_t>(j)];
    for (const auto& term : h.terms) {
      auto [image, phase] = apply_word(term.word, bj, h.n);
      auto i = basis.index_of(image);
      if (!i || *i > j) continue;
      const std::uint64_t key =
          static_cast<std::uint64_t>(*i) * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(j);
      entries[key] += term.coeff * phase;
    }
  }
  for (const auto& [key, val] : entries) {
    if (val.imag() != 0.0) {
      const Eigen::Index i = static_cast<Eigen::Index>(key / static_cast<std::uint64_t>(d));
      const Eigen::Index j = static_cast<Eigen::Index>(key % static_cast<std::uint64_t>(d));
      throw NotRealHamiltonian("project_pauli: imaginary matrix element at (" +
                               basis.label_string(i) + ", " + basis.label_string(j) + ")");
    }
  }
  if (d <= SubspaceHamiltonian::kDenseLimit) {
    Matrix m = Matrix::Zero(d, d);
    for (const auto& [key, val] : entries) {
      const Eigen::Index i = static_cast<Eigen::Index>(key / static_cast<std::uint64_t>(d));
      const Eigen::Index j = static_cast<Eigen::Index>(key % static_cast<std::uint64_t>(d));
      m(i, j) = val.real();
      m(j, i) = val.real();
    }
    return SubspaceHamiltonian(basis, std::move(m));
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * entries.size());
  for (const auto& [key, val] : entries) {
    const Eigen::Index i = static_cast<Eigen::Index>(key / static_cast<std::uint64_t>(d));
    const Eigen::Index j = static_cast<Eigen::Index>(key % static_cast<std::uint64_t>(d));
    trips.emplace_back(i, j, val.real());
    if (i != j) trips.emplace_back(j, i, val.real());
  }
  Eigen::SparseMatrix<double> s(d, d);
  s.setFromTriplets(trips.begin(), trips.end());
  return SubspaceHamiltonian(basis, std::move(s));
}

std::pair<PauliHamiltonian, SubspaceBasis> build_xxz(int n, double delta) {
  if (n % 2 != 0) throw std::invalid_argument("build_xxz: n must be even");
  if (n < 4 || n > 16) throw std::invalid_argument("build_xxz: n out of [4, 16]");
  PauliHamiltonian h;
  h.n = n;
  for (int j = 0; j < n; ++j) {
    const int jn = (j + 1) % n;
    for (char p : {'X', 'Y', 'Z'}) {
      std::string w(static_cast<std::size_t>(n), 'I');
      w[static_cast<std::size_t>(j)] = p;
      w[static_cast<std::size_t>(jn)] = p;
      h.terms.push_back({p == 'Z' ? delta : 1.0, std::move(w)});
    }
  }
  return {std::move(h), enumerate_basis(n, FixedHW{n / 2})};
}

std::pair<PauliHamiltonian, SubspaceBasis> build_tfim(int n, double field, int k) {
  if (n < 3 || n > 24) throw std::invalid_argument("build_tfim: n out of [3, 24]");
  if (k < 0 || k > n) throw std::invalid_argument("build_tfim: k out of [0, n]");
  PauliHamiltonian h;
  h.n = n;
  for (int j = 0; j < n; ++j) {
    std::string zz(static_cast<std::size_t>(n), 'I');
    zz[static_cast<std::size_t>(j)] = 'Z';
    zz[static_cast<std::size_t>((j + 1) % n)] = 'Z';
    h.terms.push_back({-1.0, std::move(zz)});
    std::string x(static_cast<std::size_t>(n), 'I');
    x[static_cast<std::size_t>(j)] = 'X';
    h.terms.push_back({-field, std::move(x)});
  }
  return {std::move(h), enumerate_basis(n, BoundedHW{k})};
}

AmplitudeState warm_start_state(int n, int k, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("warm_start_state: alpha in (0,1)");
  SubspaceBasis basis = enumerate_basis(n, FixedHW{k});
  const Eigen::Index d = basis.dim();
  if (d == 1) throw std::invalid_argument("warm_start_state: C(n,k)=1, no remainder support");
  const std::uint32_t hartree = ((1u << k) - 1u) << (n - k);
  const auto idx = basis.index_of(hartree);
  Vector c = Vector::Constant(d, std::sqrt((1.0 - alpha) / static_cast<double>(d - 1)));
  c[*idx] = std::sqrt(alpha);
  return AmplitudeState::normalized(std::move(c));
}

namespace {

// Lanczos with full reorthogonalization; returns the lowest Ritz pair in the
// orthogonal complement of `deflate`.
std::pair<double, Vector> lanczos_lowest(const SubspaceHamiltonian& H,
                                         const std::vector<Vector>& deflate, int max_iter,
                                         double res_tol) {
  const Eigen::Index d = H.dim();
  std::mt19937_64 rng(0x5eed1234u + static_cast<unsigned>(deflate.size()));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(rng);
  for (const Vector& q : deflate) v -= q.dot(v) * q;
  v.normalize();

  const int m = std::min<int>(max_iter, static_cast<int>(d));
  Matrix V(d, m);
  Vector alpha(m), beta(m);
  int steps = 0;
  for (int j = 0; j < m; ++j) {
    V.col(j) = v;
    Vector w = H.apply(v);
    alpha[j] = v.dot(w);
    w -= alpha[j] * v;
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    // Full reorthogonalization, twice for safety.
    for (int pass = 0; pass < 2; ++pass) {
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
      for (const Vector& q : deflate) w -= q.dot(w) * q;
    }
    steps = j + 1;
    beta[j] = w.norm();
    if (beta[j] < 1e-13) break;
    v = w / beta[j];
  }
  Matrix T = Matrix::Zero(steps, steps);
  for (int j = 0; j < steps; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < steps) {
      T(j, j + 1) = beta[j];
      T(j + 1, j) = beta[j];
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  const double e0 = es.eigenvalues()[0];
  Vector x = V.leftCols(steps) * es.eigenvectors().col(0);
  x.normalize();
  const double resid = (H.apply(x) - e0 * x).norm();
  if (resid > res_tol * std::max(1.0, std::abs(e0))) {
    throw std::runtime_error("exact_ground: Lanczos did not converge after " +
                             std::to_string(steps) + " iterations, residual " +
                             std::to_string(resid));
  }
  return {e0, std::move(x)};
}

}  // namespace

GroundInfo exact_ground(const SubspaceHamiltonian& H, double degeneracy_tol) {
  GroundInfo info;
  if (H.is_dense()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.dense());
    info.e0 = es.eigenvalues()[0];
    const double tol =
        degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-9 * std::max(1.0, std::abs(info.e0));
    for (Eigen::Index i = 0; i < H.dim(); ++i) {
      if (es.eigenvalues()[i] <= info.e0 + tol) {
        info.basis.emplace_back(AmplitudeState::normalized(es.eigenvectors().col(i)));
      } else {
        break;
      }
    }
    return info;
  }
  if (H.dim() > 20000) throw std::invalid_argument("exact_ground: dimension above iterative cap");
  std::vector<Vector> found;
  auto [e0, x0] = lanczos_lowest(H, found, 500, 1e-10);
  info.e0 = e0;
  const double tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-9 * std::max(1.0, std::abs(e0));
  found.push_back(x0);
  // Deflate to pick up small ground-state degeneracies.
  for (int round = 0; round < 8; ++round) {
    double e;
    Vector x;
    try {
      std::tie(e, x) = lanczos_lowest(H, found, 500, 1e-10);
    } catch (const std::runtime_error&) {
      break;
    }
    if (e > info.e0 + tol) break;
    found.push_back(std::move(x));
  }
  for (const Vector& q : found) info.basis.emplace_back(AmplitudeState::normalized(q));
  return info;
}

double fidelity_to_ground(const AmplitudeState& x, const std::vector<AmplitudeState>& ground_basis) {
  double f = 0.0;
  for (const auto& g : ground_basis) {
    const double ip = x.coords().dot(g.coords());
    f += ip * ip;
  }
  return f;
}

SubspaceHamiltonian symmetry_reduce(const SubspaceHamiltonian& H, int n) {
  const SubspaceBasis& basis = H.basis();
  const Eigen::Index d = H.dim();
  if (basis.kind != BasisKind::FixedHW || basis.k != n / 2)
    throw std::invalid_argument("symmetry_reduce: basis must be fixed-HW(n/2)");

  // Index permutations for the two group generators.
  std::vector<Eigen::Index> rot(static_cast<std::size_t>(d)), refl(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::uint32_t b = basis.labels[static_cast<std::size_t>(i)];
    rot[static_cast<std::size_t>(i)] = *basis.index_of(rotate_label(b, n));
    refl[static_cast<std::size_t>(i)] = *basis.index_of(reflect_label(b, n));
  }

  // Invariance check: H[p(i)][p(j)] == H[i][j] for both generators.
  double scale = 0.0;
  auto check_entry = [&](Eigen::Index i, Eigen::Index j, double val) {
    const std::size_t si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
    if (std::abs(H.entry(rot[si], rot[sj]) - val) > 1e-12 * std::max(1.0, scale) ||
        std::abs(H.entry(refl[si], refl[sj]) - val) > 1e-12 * std::max(1.0, scale)) {
      throw std::invalid_argument("symmetry_reduce: H not invariant under the group action");
    }
  };
  if (H.is_dense()) {
    scale = H.dense().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) check_entry(i, j, H.dense()(i, j));
  } else {
    const auto& s = H.sparse();
    for (int k = 0; k < s.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it)
        scale = std::max(scale, std::abs(it.value()));
    for (int k = 0; k < s.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it)
        check_entry(it.row(), it.col(), it.value());
  }

  // Orbits under the dihedral group generated by rotation and reflection.
  std::vector<int> orbit_of(static_cast<std::size_t>(d), -1);
  std::vector<std::vector<Eigen::Index>> orbits;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (orbit_of[static_cast<std::size_t>(i)] >= 0) continue;
    const int id = static_cast<int>(orbits.size());
    std::vector<Eigen::Index> orbit, stack{i};
    orbit_of[static_cast<std::size_t>(i)] = id;
    while (!stack.empty()) {
      const Eigen::Index cur = stack.back();
      stack.pop_back();
      orbit.push_back(cur);
      for (Eigen::Index nxt : {rot[static_cast<std::size_t>(cur)], refl[static_cast<std::size_t>(cur)]}) {
        if (orbit_of[static_cast<std::size_t>(nxt)] < 0) {
          orbit_of[static_cast<std::size_t>(nxt)] = id;
          stack.push_back(nxt);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }

  // One symmetrized vector per orbit in each one-dimensional irrep of the
  // dihedral group: chi(rot) = omega, chi(refl) = p with omega, p in {+1,-1}.
  // The sector containing the ground state depends on the size (the XXZ
  // ground momentum alternates between 0 and pi with n/2), so build all four
  // and keep the one with the lowest reduced ground energy (trivial sector
  // wins ties).
  auto sector_vectors = [&](double omega, double p) {
    std::vector<Vector> vecs;
    std::vector<std::size_t> kept;
    for (std::size_t a = 0; a < orbits.size(); ++a) {
      Vector v = Vector::Zero(d);
      Eigen::Index cur = orbits[a].front();
      double sign = 1.0;
      for (int r = 0; r < n; ++r) {
        v[cur] += sign;
        v[refl[static_cast<std::size_t>(cur)]] += p * sign;
        cur = rot[static_cast<std::size_t>(cur)];
        sign *= omega;
      }
      const double norm = v.norm();
      if (norm < 1e-9) continue;  // orbit absent from this sector
      vecs.push_back(v / norm);
      kept.push_back(a);
    }
    return std::make_pair(std::move(vecs), std::move(kept));
  };
  auto project = [&](const std::vector<Vector>& vecs) {
    const Eigen::Index r = static_cast<Eigen::Index>(vecs.size());
    Matrix reduced(r, r);
    for (Eigen::Index a = 0; a < r; ++a) {
      const Vector w = H.apply(vecs[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b <= a; ++b) {
        const double ip = vecs[static_cast<std::size_t>(b)].dot(w);
        reduced(b, a) = ip;
        reduced(a, b) = ip;
      }
    }
    return reduced;
  };

  Matrix reduced;
  std::vector<std::size_t> kept_orbits;
  double best_e0 = std::numeric_limits<double>::infinity();
  for (const auto [omega, p] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}) {
    auto [vecs, kept] = sector_vectors(omega, p);
    if (vecs.empty()) continue;
    Matrix cand = project(vecs);
    const double e0 = Eigen::SelfAdjointEigenSolver<Matrix>(cand).eigenvalues().minCoeff();
    if (e0 < best_e0 - 1e-12 * std::max(1.0, std::abs(e0))) {
      best_e0 = e0;
      reduced = std::move(cand);
      kept_orbits = std::move(kept);
    }
  }
  const Eigen::Index r = reduced.rows();

  SubspaceBasis rbasis;
  rbasis.n = n;
  rbasis.kind = BasisKind::Explicit;
  rbasis.k = basis.k;
  for (std::size_t a : kept_orbits)
    rbasis.labels.push_back(basis.labels[static_cast<std::size_t>(orbits[a].front())]);
  std::vector<std::size_t> order(orbits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rbasis.labels[a] < rbasis.labels[b]; });
  Matrix perm = Matrix::Zero(r, r);
  std::vector<std::uint32_t> sorted_labels(orbits.size());
  for (Eigen::Index i = 0; i < r; ++i) {
    perm(static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]), i) = 1.0;
    sorted_labels[static_cast<std::size_t>(i)] = rbasis.labels[order[static_cast<std::size_t>(i)]];
  }
  rbasis.labels = std::move(sorted_labels);
  Matrix sorted = perm.transpose() * reduced * perm;
  // Exact symmetry after the permutation.
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < i; ++j) sorted(i, j) = sorted(j, i);
  return SubspaceHamiltonian(std::move(rbasis), std::move(sorted));
}

std::pair<PauliHamiltonian, SubspaceBasis> load_pauli_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_pauli_json: cannot open " + path);
  json j = json::parse(in);
  PauliHamiltonian h;
  h.n = j.at("n").get<int>();
  for (const auto& t : j.at("terms")) {
    PauliTerm term;
    term.coeff = t.at("coeff").get<double>();
    term.word = t.at("pauli").get<std::string>();
    if (!std::isfinite(term.coeff))
      throw std::invalid_argument("load_pauli_json: non-finite coefficient");
    if (static_cast<int>(term.word.size()) != h.n)
      throw std::invalid_argument("load_pauli_json: word length != n");
    h.terms.push_back(std::move(term));
  }
  const auto& sub = j.at("subspace");
  const std::string kind = sub.at("kind").get<std::string>();
  if (kind == "hw") return {std::move(h), enumerate_basis(h.n, FixedHW{sub.at("k").get<int>()})};
  if (kind == "hw_le")
    return {std::move(h), enumerate_basis(h.n, BoundedHW{sub.at("k").get<int>()})};
  if (kind == "explicit") {
    SubspaceBasis basis;
    basis.n = h.n;
    basis.kind = BasisKind::Explicit;
    for (const auto& l : sub.at("labels")) {
      const std::string s = l.get<std::string>();
      if (static_cast<int>(s.size()) != h.n)
        throw std::invalid_argument("load_pauli_json: label length != n");
      std::uint32_t v = 0;
      for (char ch : s) v = (v << 1) | static_cast<std::uint32_t>(ch == '1');
      basis.labels.push_back(v);
    }
    std::sort(basis.labels.begin(), basis.labels.end());
    basis.labels.erase(std::unique(basis.labels.begin(), basis.labels.end()), basis.labels.end());
    return {std::move(h), std::move(basis)};
  }
  throw std::invalid_argument("load_pauli_json: unknown subspace kind '" + kind + "'");
}

void save_pauli_json(const std::string& path, const PauliHamiltonian& h,
                     const SubspaceBasis& basis) {
  json j;
  j["n"] = h.n;
  j["terms"] = json::array();
  for (const auto& t : h.terms) j["terms"].push_back({{"coeff", t.coeff}, {"pauli", t.word}});
  json sub;
  switch (basis.kind) {
    case BasisKind::FixedHW:
      sub["kind"] = "hw";
      sub["k"] = basis.k;
      break;
    case BasisKind::BoundedHW:
      sub["kind"] = "hw_le";
      sub["k"] = basis.k;
      break;
    case BasisKind::Explicit: {
      sub["kind"] = "explicit";
      json labels = json::array();
      for (Eigen::Index i = 0; i < basis.dim(); ++i) labels.push_back(basis.label_string(i));
      sub["labels"] = std::move(labels);
      break;
    }
  }
  j["subspace"] = std::move(sub);
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace gso
