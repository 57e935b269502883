#include "polfock/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polfock/fock.hpp"

namespace polfock::oracle {

namespace {

struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// orthonormal Hermite polynomials (no gaussian), p_{k+1} =
// sqrt(2/(k+1)) x p_k - sqrt(k/(k+1)) p_{k-1}, evaluated through degree k_max
void hermite_poly_column(int k_max, double x, std::vector<double>& p) {
  p.resize(k_max + 1);
  p[0] = std::pow(std::numbers::pi, -0.25);
  if (k_max >= 1) p[1] = std::sqrt(2.0) * x * p[0];
  for (int k = 1; k < k_max; ++k)
    p[k + 1] = std::sqrt(2.0 / (k + 1)) * x * p[k] -
               std::sqrt(double(k) / (k + 1)) * p[k - 1];
}

// Golub-Welsch nodes for weight e^{-x^2}, Newton-polished on the degree-n
// orthonormal polynomial, with Christoffel-number weights
Quadrature gauss_hermite(int n) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double off = std::sqrt(0.5 * (i + 1));
    jac(i, i + 1) = off;
    jac(i + 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes = es.eigenvalues();
  q.weights.resize(n);

  std::vector<double> p;
  for (int i = 0; i < n; ++i) {
    double x = q.nodes[i];
    for (int it = 0; it < 3; ++it) {  // p_n(x) = 0, p_n' = sqrt(2n) p_{n-1}
      hermite_poly_column(n, x, p);
      x -= p[n] / (std::sqrt(2.0 * n) * p[n - 1]);
    }
    q.nodes[i] = x;
    hermite_poly_column(n - 1, x, p);
    double christoffel = 0.0;
    for (int k = 0; k < n; ++k) christoffel += p[k] * p[k];
    q.weights[i] = 1.0 / christoffel;
  }
  return q;
}

// orthonormal oscillator eigenfunctions without the Gaussian factor:
// phi_k(x) = h_k(x) e^{-x^2/2}, with h_{k+1} = sqrt(2/(k+1)) x h_k -
// sqrt(k/(k+1)) h_{k-1}
std::vector<double> hermite_functions_bare(int k_max, double x) {
  std::vector<double> h(k_max + 1);
  h[0] = std::pow(std::numbers::pi, -0.25);
  if (k_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < k_max; ++k) {
    h[k + 1] = std::sqrt(2.0 / (k + 1)) * x * h[k] -
               std::sqrt(double(k) / (k + 1)) * h[k - 1];
  }
  return h;
}

double overlap_with_nodes(int m, int n, double lambda, const Quadrature& q) {
  // integrand phi_m(x) phi_n(x - d), d = sqrt(2) lambda. Shifting to the
  // midpoint y = x - d/2 gives weight e^{-y^2} e^{-d^2/4} exactly, so the
  // remaining factor is polynomial and the quadrature is exact.
  const double d = std::numbers::sqrt2 * lambda;
  const double envelope = std::exp(-0.25 * d * d);
  double acc = 0.0;
  for (int i = 0; i < q.nodes.size(); ++i) {
    const double y = q.nodes[i];
    const auto hm = hermite_functions_bare(m, y + 0.5 * d);
    const auto hn = hermite_functions_bare(n, y - 0.5 * d);
    acc += q.weights[i] * hm[m] * hn[n];
  }
  return envelope * acc;
}

}  // namespace

double fc_overlap_quadrature(int m, int n, double lambda) {
  if (m < 0 || n < 0 || m > 40 || n > 40)
    throw std::invalid_argument("fc_overlap_quadrature supports m, n <= 40");
  if (std::abs(lambda) > 5.0)
    throw std::invalid_argument("fc_overlap_quadrature supports |lambda| <= 5");

  static const Quadrature q64 = gauss_hermite(64);
  static const Quadrature q96 = gauss_hermite(96);
  const double a = overlap_with_nodes(m, n, lambda, q64);
  const double b = overlap_with_nodes(m, n, lambda, q96);
  // both orders are formally exact (degree <= 80); the residual difference
  // is summation roundoff, which peaks near 1e-12 for |lambda| ~ 5
  if (std::abs(a - b) > 5e-12)
    throw std::runtime_error("fc_overlap_quadrature did not converge");
  return b;
}

Eigen::MatrixXcd assemble_dense_hamiltonian(const PotentialBuilder& v_builder,
                                            const RadialGrid& grid,
                                            int n_channels, double mass,
                                            const KineticBlocks* kinetic_blocks) {
  const int n_pts = grid.n_points;
  const int dim = n_pts * n_channels;
  const std::complex<double> im(0.0, 1.0);

  // plane-wave sums for the kinetic and momentum matrices
  const Eigen::VectorXd k = grid.momenta();
  Eigen::MatrixXcd t_mat = Eigen::MatrixXcd::Zero(n_pts, n_pts);
  Eigen::MatrixXcd p_mat = Eigen::MatrixXcd::Zero(n_pts, n_pts);
  const double dr = grid.dr();
  for (int i = 0; i < n_pts; ++i) {
    for (int l = 0; l < n_pts; ++l) {
      std::complex<double> t_acc(0.0, 0.0), p_acc(0.0, 0.0);
      for (int p = 0; p < n_pts; ++p) {
        const std::complex<double> phase = std::exp(im * k[p] * (dr * (i - l)));
        t_acc += phase * (k[p] * k[p] / (2.0 * mass));
        p_acc += phase * k[p];
      }
      t_mat(i, l) = t_acc / double(n_pts);
      p_mat(i, l) = p_acc / double(n_pts);
    }
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int c = 0; c < n_channels; ++c)
    h.block(c * n_pts, c * n_pts, n_pts, n_pts) = t_mat;

  const Eigen::VectorXd r = grid.points();
  for (int i = 0; i < n_pts; ++i) {
    Eigen::MatrixXd v = v_builder(r[i]);
    if (kinetic_blocks) v += kinetic_blocks->second_order;
    for (int c = 0; c < n_channels; ++c)
      for (int c2 = 0; c2 < n_channels; ++c2)
        h(c * n_pts + i, c2 * n_pts + i) += v(c, c2);
  }

  if (kinetic_blocks) {
    const int nf = static_cast<int>(kinetic_blocks->dc_ionic.rows());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_channels, n_channels);
    d.block(0, 0, nf, nf) = kinetic_blocks->dc_ionic;
    d.block(nf, nf, nf, nf) = kinetic_blocks->dc_covalent;
    // -i (P D + D P) / 2M with constant D reduces to -i P D / M
    for (int c = 0; c < n_channels; ++c)
      for (int c2 = 0; c2 < n_channels; ++c2)
        if (d(c, c2) != 0.0)
          h.block(c * n_pts, c2 * n_pts, n_pts, n_pts) +=
              (-im * d(c, c2) / mass) * p_mat;
  }
  return h;
}

Eigen::VectorXcd dense_exact_propagator(const Eigen::MatrixXcd& h_total,
                                        const Eigen::VectorXcd& psi0, double t) {
  const int dim = static_cast<int>(h_total.rows());
  if (dim > 4096)
    throw std::invalid_argument("dense_exact_propagator refuses dimensions > 4096");
  if (psi0.size() != dim)
    throw std::invalid_argument("state dimension does not match the Hamiltonian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_total);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense eigendecomposition failed");

  const std::complex<double> im(0.0, 1.0);
  Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * psi0;
  for (int j = 0; j < dim; ++j)
    coeff[j] *= std::exp(-im * es.eigenvalues()[j] * t);
  return es.eigenvectors() * coeff;
}

Eigen::MatrixXd finite_difference_dc(const DiabaticModel& model, int n_fock,
                                     double chi, double omega_c, double r,
                                     double dr, int state) {
  const FockSpace space(omega_c, n_fock);
  auto xi = [&](double rr) {
    const double mu = state == 0 ? model.mu_ionic(rr) : model.mu_covalent(rr);
    return -chi * mu / omega_c;
  };
  const double xi0 = xi(r);
  const Eigen::MatrixXd s_plus =
      overlap_matrix(space, Displacement{xi(r + dr) - xi0});
  const Eigen::MatrixXd s_minus =
      overlap_matrix(space, Displacement{xi(r - dr) - xi0});
  return (s_plus - s_minus) / (2.0 * dr);
}

}  // namespace polfock::oracle
