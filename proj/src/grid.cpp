#include "polfock/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace polfock {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

RadialGrid::RadialGrid(double rmin, double rmax, int n)
    : r_min(rmin), r_max(rmax), n_points(n) {
  if (!(rmax > rmin)) throw std::invalid_argument("grid needs r_max > r_min");
  if (!is_power_of_two(n))
    throw std::invalid_argument("grid n_points must be a power of two");
}

Eigen::VectorXd RadialGrid::points() const {
  Eigen::VectorXd r(n_points);
  const double d = dr();
  for (int i = 0; i < n_points; ++i) r[i] = r_min + i * d;
  return r;
}

Eigen::VectorXd RadialGrid::momenta() const {
  Eigen::VectorXd k(n_points);
  const double dk = 2.0 * std::numbers::pi / (n_points * dr());
  for (int j = 0; j < n_points; ++j)
    k[j] = (j < n_points / 2) ? j * dk : (j - n_points) * dk;
  return k;
}

namespace {

// forward twiddles exp(-2 pi i j / n), j < n/2, cached per transform size
const std::vector<std::complex<double>>& twiddles(int n) {
  thread_local std::vector<std::pair<int, std::vector<std::complex<double>>>> cache;
  for (const auto& entry : cache)
    if (entry.first == n) return entry.second;
  std::vector<std::complex<double>> tw(n / 2);
  for (int j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * std::numbers::pi * j / n;
    tw[j] = {std::cos(ang), std::sin(ang)};
  }
  cache.emplace_back(n, std::move(tw));
  return cache.back().second;
}

void fft_core(std::complex<double>* a, int n, bool inverse) {
  // bit reversal permutation
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const auto& tw = twiddles(n);
  for (int len = 2; len <= n; len <<= 1) {
    const int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> w =
            inverse ? std::conj(tw[k * stride]) : tw[k * stride];
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

void fft(std::complex<double>* data, int n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("fft size must be a power of two");
  fft_core(data, n, false);
}

void ifft(std::complex<double>* data, int n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("fft size must be a power of two");
  fft_core(data, n, true);
  const double inv = 1.0 / n;
  for (int i = 0; i < n; ++i) data[i] *= inv;
}

}  // namespace polfock
