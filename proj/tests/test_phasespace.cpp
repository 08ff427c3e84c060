#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hvlab/error.hpp"
#include "hvlab/grid.hpp"
#include "hvlab/spectral.hpp"

using namespace hvlab;
using std::numbers::pi;

TEST_CASE("grid spacings follow the definitions") {
  const auto g = make_grid(1, 16.0, 8, 0.5);
  CHECK(g.h == doctest::Approx(2.0));
  CHECK(g.dv() == doctest::Approx(pi / 16).epsilon(1e-15));
  CHECK(g.x_nodes.front() == doctest::Approx(-8.0));
  CHECK(g.v_nodes[4] == 0.0);
  CHECK(g.h * g.M == 16.0);

  const auto small = make_grid(1, 1.0, 2, 1.0, 2);
  CHECK(small.x_nodes[0] == doctest::Approx(-0.5));
  CHECK(small.x_nodes[1] == doctest::Approx(0.0));
  CHECK(small.dv() == doctest::Approx(2 * pi));

  const auto fine = make_grid(1, 16.0, 256, 1.0 / 64);
  CHECK(fine.dv() == doctest::Approx(0.006135923151542565).epsilon(1e-14));
  CHECK(fine.v_max() == doctest::Approx(pi * fine.eps * 256 / 16));
}

TEST_CASE("make_grid rejects bad shapes naming the field") {
  auto field_of = [](auto&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  CHECK(field_of([] { make_grid(1, 16.0, 9, 0.5); }) == "M");
  CHECK(field_of([] { make_grid(1, 16.0, 6, 0.5); }) == "M");
  CHECK(field_of([] { make_grid(1, -1.0, 8, 0.5); }) == "L");
  CHECK(field_of([] { make_grid(1, 1.0, 8, 0.0); }) == "eps");
  CHECK(field_of([] { make_grid(2, 1.0, 8, 0.5); }) == "d");
}

TEST_CASE("spectral derivative") {
  const double L = 16.0;
  const auto g = make_grid(1, L, 256, 0.1);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(g.M, 3.0), s(g.M), gauss(g.M);
  for (int i = 0; i < g.M; ++i) {
    s[i] = std::sin(2 * pi * g.x_nodes[i] / L);
    gauss[i] = std::exp(-g.x_nodes[i] * g.x_nodes[i]);
  }
  CHECK(spectral::spectral_derivative(c, L).cwiseAbs().maxCoeff() < 1e-13);

  const auto ds = spectral::spectral_derivative(s, L);
  double err = 0.0;
  for (int i = 0; i < g.M; ++i) err = std::max(err, std::abs(ds[i] - 2 * pi / L * std::cos(2 * pi * g.x_nodes[i] / L)));
  CHECK(err < 1e-13);

  // central differences, h^2 truncation: h = 1/16 leaves ~1e-3, so compare on a fine FD mesh of the analytic f
  const auto dg = spectral::spectral_derivative(gauss, L);
  const double fd_h = 1e-4;
  err = 0.0;
  for (int i = 0; i < g.M; ++i) {
    const double x = g.x_nodes[i];
    const double fd = (std::exp(-(x + fd_h) * (x + fd_h)) - std::exp(-(x - fd_h) * (x - fd_h))) / (2 * fd_h);
    err = std::max(err, std::abs(dg[i] - fd));
  }
  CHECK(err < 1e-6);

  // commutes with a one-cell cyclic shift
  Eigen::VectorXd shifted(g.M);
  for (int i = 0; i < g.M; ++i) shifted[(i + 1) % g.M] = gauss[i];
  const auto d_shift = spectral::spectral_derivative(shifted, L);
  err = 0.0;
  for (int i = 0; i < g.M; ++i) err = std::max(err, std::abs(d_shift[(i + 1) % g.M] - dg[i]));
  CHECK(err < 1e-14);
}

TEST_CASE("matrix derivative axes") {
  const int M = 32;
  const double L = 2 * pi;
  Eigen::MatrixXd f(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) f(i, j) = std::sin(i * L / M) * std::cos(2 * j * L / M);
  const auto d0 = spectral::spectral_derivative(f, 0, L);
  const auto d1 = spectral::spectral_derivative(f, 1, L);
  double e0 = 0.0, e1 = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      e0 = std::max(e0, std::abs(d0(i, j) - std::cos(i * L / M) * std::cos(2 * j * L / M)));
      e1 = std::max(e1, std::abs(d1(i, j) + 2 * std::sin(i * L / M) * std::sin(2 * j * L / M)));
    }
  }
  CHECK(e0 < 1e-13);
  CHECK(e1 < 1e-13);
}

TEST_CASE("fft round trip and Parseval") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (int M : {8, 30, 128, 384}) {
    Eigen::VectorXcd f(M);
    for (auto& z : f) z = {n(rng), n(rng)};
    const auto F = spectral::fft(f);
    CHECK((spectral::ifft(F) - f).norm() / f.norm() < 1e-12);
    const double h = 0.3;
    const double lhs = h * f.squaredNorm();
    const double rhs = h / M * F.squaredNorm();
    CHECK(std::abs(lhs - rhs) / lhs < 1e-12);
  }
}

TEST_CASE("periodic convolution") {
  const int M = 32;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  Eigen::VectorXd f(M);
  for (auto& x : f) x = n(rng);
  CHECK((spectral::periodic_convolve(f, Eigen::VectorXcd::Ones(M)) - f).norm() < 1e-13);
  CHECK(spectral::periodic_convolve(f, Eigen::VectorXcd::Zero(M)).norm() == 0.0);

  // spike at 0 returns the kernel; generic f against the direct circular sum
  Eigen::VectorXd kernel(M);
  for (int i = 0; i < M; ++i) kernel[i] = std::exp(-0.1 * std::min(i, M - i));
  const Eigen::VectorXcd khat = spectral::fft(kernel.cast<cplx>());
  Eigen::VectorXd spike = Eigen::VectorXd::Zero(M);
  spike[0] = 1.0;
  CHECK((spectral::periodic_convolve(spike, khat) - kernel).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) direct[i] += kernel[(i - j + M) % M] * f[j];
  CHECK((spectral::periodic_convolve(f, khat) - direct).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(spectral::periodic_convolve(f, Eigen::VectorXcd::Ones(M + 2)), GridMismatchError);
}

TEST_CASE("fourier shift translates band-limited data") {
  const double L = 10.0;
  const int M = 64;
  Eigen::VectorXd f(M);
  for (int i = 0; i < M; ++i) f[i] = std::cos(2 * pi * 3 * i / M) + 0.5 * std::sin(2 * pi * i / M);
  const double shift = 0.37;
  const auto g = spectral::fourier_shift(f, shift, L);
  double err = 0.0;
  for (int i = 0; i < M; ++i) {
    const double x = i * L / M - shift;
    err = std::max(err, std::abs(g[i] - (std::cos(2 * pi * 3 * x / L) + 0.5 * std::sin(2 * pi * x / L))));
  }
  CHECK(err < 1e-13);
}
