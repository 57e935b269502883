#include "polfock/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polfock {

FockSpace::FockSpace(double omega, int n) : omega_c(omega), n_max(n) {
  if (n_max < 2) throw std::invalid_argument("FockSpace needs n_max >= 2");
  if (!(omega_c > 0.0)) throw std::invalid_argument("FockSpace needs omega_c > 0");
}

LadderOps ladder_matrices(const FockSpace& space) {
  const int n = space.n_max;
  LadderOps ops;
  ops.create = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) ops.create(k + 1, k) = std::sqrt(k + 1.0);
  ops.annihilate = ops.create.transpose();
  ops.number = ops.create * ops.annihilate;
  return ops;
}

Eigen::MatrixXd overlap_matrix(const FockSpace& space, const Displacement& d) {
  const double lam = d.lambda;
  if (std::abs(lam) > d.sanity_limit) {
    std::ostringstream msg;
    msg << "displacement |lambda| = " << std::abs(lam)
        << " beyond the truncation sanity limit " << d.sanity_limit;
    throw std::invalid_argument(msg.str());
  }

  const int n = space.n_max;

  // The column recurrence amplifies roundoff by roughly a factor lambda per
  // column, so run it in extended precision and truncate at the end.
  using ld = long double;
  const ld laml = static_cast<ld>(lam);
  std::vector<ld> roots(n);
  for (int m = 0; m < n; ++m) roots[m] = sqrtl(static_cast<ld>(m));

  std::vector<ld> work(static_cast<size_t>(n) * n);
  auto at = [&](int m, int c) -> ld& { return work[static_cast<size_t>(c) * n + m]; };

  // first column: <m|D|0> = exp(-lam^2/2) lam^m / sqrt(m!)
  at(0, 0) = expl(-0.5L * laml * laml);
  for (int m = 1; m < n; ++m) at(m, 0) = laml / roots[m] * at(m - 1, 0);

  // remaining columns from  sqrt(n+1) S[m,n+1] = sqrt(m) S[m-1,n] - lam S[m,n]
  for (int col = 0; col + 1 < n; ++col) {
    const ld root = sqrtl(static_cast<ld>(col + 1));
    at(0, col + 1) = -laml * at(0, col) / root;
    for (int m = 1; m < n; ++m)
      at(m, col + 1) = (roots[m] * at(m - 1, col) - laml * at(m, col)) / root;
  }

  Eigen::MatrixXd s(n, n);
  for (int col = 0; col < n; ++col)
    for (int m = 0; m < n; ++m) s(m, col) = static_cast<double>(at(m, col));
  return s;
}

Eigen::MatrixXd pfs_derivative_coupling(const FockSpace& space, double dmu_dr,
                                        double chi) {
  const LadderOps ops = ladder_matrices(space);
  const double factor = -chi * dmu_dr / space.omega_c;
  return factor * (ops.create - ops.annihilate);
}

}  // namespace polfock
