#ifndef POLFOCK_GRID_HPP
#define POLFOCK_GRID_HPP

#include <Eigen/Dense>
#include <complex>

namespace polfock {

// Uniform periodic nuclear grid. R_i = r_min + i * dr with
// dr = (r_max - r_min) / n_points; n_points must be a power of two.
struct RadialGrid {
  double r_min;
  double r_max;
  int n_points;

  RadialGrid(double rmin, double rmax, int n);

  double dr() const { return (r_max - r_min) / n_points; }
  Eigen::VectorXd points() const;

  // conjugate momenta in standard DFT layout: k_j = 2 pi j / (N dr) for
  // j < N/2 and k_j - 2 pi / dr for j >= N/2
  Eigen::VectorXd momenta() const;
};

// Iterative in-place radix-2 FFT on a contiguous complex array; inverse
// transform carries the 1/N normalization so ifft(fft(x)) == x.
void fft(std::complex<double>* data, int n);
void ifft(std::complex<double>* data, int n);

}  // namespace polfock

#endif
