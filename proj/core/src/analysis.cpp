#include "gso/analysis.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "gso/gradients.hpp"

namespace gso {

ClosedFormVariances closed_form_variances(const SubspaceHamiltonian& H) {
  const double d = static_cast<double>(H.dim());
  const double tr = H.trace();
  const double tr2 = H.trace_sq();
  ClosedFormVariances out;
  out.var_loss = (d * tr2 - tr * tr) / (d * d * (d + 2.0) / 2.0);
  out.var_grad.resize(H.dim());
  const double denom = d * (d + 2.0) * (d + 4.0) / 4.0;
  for (Eigen::Index j = 0; j < H.dim(); ++j) {
    const double hj2 = H.row_norm_sq(j);
    const double hjj = H.entry(j, j);
    out.var_grad[j] =
        (d * (d + 2.0) * hj2 - 2.0 * (d + 2.0) * hjj * tr + tr * tr + 2.0 * tr2) / denom;
  }
  return out;
}

AmplitudeState sample_uniform_sphere(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(d);
  do {
    for (Eigen::Index i = 0; i < d; ++i) x[i] = gauss(rng);
  } while (x.norm() == 0.0);
  return AmplitudeState::normalized(std::move(x));
}

namespace {

// Power sums for one scalar stream: variance plus its delta-method SE.
struct MomentAccumulator {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  void add(double q) {
    s1 += q;
    s2 += q * q;
    s3 += q * q * q;
    s4 += q * q * q * q;
  }
  std::pair<double, double> variance_and_se(double n) const {
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    const double m4 = s4 / n - 4.0 * mean * (s3 / n) + 6.0 * mean * mean * (s2 / n) -
                      3.0 * mean * mean * mean * mean;
    const double se = std::sqrt(std::max(m4 - var * var, 0.0) / n);
    return {var, se};
  }
};

}  // namespace

VarianceReport mc_variances(const SubspaceHamiltonian& H, std::uint64_t samples,
                            std::mt19937_64& rng) {
  if (samples < 1) throw std::invalid_argument("mc_variances: need samples >= 1");
  const Eigen::Index d = H.dim();
  MomentAccumulator acc_loss;
  std::vector<MomentAccumulator> acc_grad(static_cast<std::size_t>(d));
  for (std::uint64_t s = 0; s < samples; ++s) {
    const AmplitudeState x = sample_uniform_sphere(d, rng);
    const Vector hx = H.apply(x.coords());
    const double l = x.coords().dot(hx);
    const Vector v = 2.0 * (hx - l * x.coords());
    acc_loss.add(l);
    for (Eigen::Index j = 0; j < d; ++j) acc_grad[static_cast<std::size_t>(j)].add(v[j]);
  }
  const double n = static_cast<double>(samples);
  VarianceReport rep;
  const ClosedFormVariances cf = closed_form_variances(H);
  rep.closed_form_var_loss = cf.var_loss;
  rep.closed_form_var_grad = cf.var_grad;
  std::tie(rep.mc_var_loss, rep.mc_var_loss_se) = acc_loss.variance_and_se(n);
  rep.mc_var_grad.resize(d);
  rep.mc_var_grad_se.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    std::tie(rep.mc_var_grad[j], rep.mc_var_grad_se[j]) =
        acc_grad[static_cast<std::size_t>(j)].variance_and_se(n);
  }
  rep.samples = samples;
  return rep;
}

double qite_equivalence_check(const AmplitudeState& x, const SubspaceHamiltonian& H, double eta) {
  const Eigen::Index d = H.dim();
  if (d > 64) throw std::invalid_argument("qite_equivalence_check: d must be <= 64");
  const Vector hx = H.apply(x.coords());
  const double l = x.coords().dot(hx);
  // W = 2 [H, |x><x|] = 2 (H x x^T - x x^T H).
  const Matrix w =
      2.0 * (hx * x.coords().transpose() - x.coords() * hx.transpose());
  const Vector flowed = Matrix(eta * w).exp() * x.coords();
  const Vector dl = 2.0 * (hx - l * x.coords());
  const double nn = dl.norm();
  Vector geo;
  if (nn == 0.0) {
    geo = x.coords();
  } else {
    geo = std::cos(eta * nn) * x.coords() + (std::sin(eta * nn) / nn) * dl;
  }
  return (flowed - geo).cwiseAbs().maxCoeff();
}

}  // namespace gso
