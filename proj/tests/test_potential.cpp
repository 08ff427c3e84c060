#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hvlab/error.hpp"
#include "hvlab/mean_field.hpp"
#include "hvlab/potential.hpp"
#include "hvlab/spectral.hpp"

using namespace hvlab;
using std::numbers::pi;

namespace {

SpatialDensity gaussian_density(const PhaseSpaceGrid& g, double width, double x0 = 0.0) {
  SpatialDensity rho{g, Eigen::VectorXd(g.M)};
  for (int i = 0; i < g.M; ++i) rho.values[i] = std::exp(-(g.x_nodes[i] - x0) * (g.x_nodes[i] - x0) / (2 * width * width));
  rho.values /= g.h * rho.values.sum();
  return rho;
}

}  // namespace

TEST_CASE("potential parameters are validated") {
  CHECK_THROWS_AS(make_potential(0.5, 1), ConfigError);
  CHECK_THROWS_AS(make_potential(0.0, 1), ConfigError);
  CHECK_THROWS_AS(make_potential(0.25, 0), ConfigError);
  CHECK_THROWS_AS(make_potential(0.25, 1, 2), ConfigError);
  CHECK_NOTHROW(make_potential(0.25, -1, 3));
}

TEST_CASE("weights") {
  for (double a : {0.1, 0.25, 0.4}) {
    const auto v = make_potential(a, 1);
    CHECK(fdll_weight(v, 2.0) / fdll_weight(v, 1.0) == doctest::Approx(std::pow(2.0, -1 - a)).epsilon(1e-14));
    // analytic normalization: int_0^inf r^{-1-a} e^{-1/(2 r^2)} dr = 2^{a/2 - 1} Gamma(a/2)
    CHECK(fdll_normalization(a, 1) == doctest::Approx(std::pow(2.0, 1 - a / 2) / std::tgamma(a / 2)).epsilon(1e-10));
    const auto dec = make_fdll(make_potential(a, 1, 3));
    CHECK(dec.full_weight(1.0) == doctest::Approx(dec.c * std::pow(2 / pi, 1.5)).epsilon(1e-14));
    CHECK(dec.full_weight(2.0) / dec.full_weight(1.0) == doctest::Approx(std::pow(2.0, -(4 + a))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(fdll_weight(make_potential(0.25, 1), 0.0), DomainError);
}

TEST_CASE("reconstruction") {
  const auto d3 = make_fdll(make_potential(0.25, 1, 3));
  CHECK(fdll_reconstruct(d3, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
  const auto d1 = make_fdll(make_potential(0.25, 1));
  CHECK(fdll_reconstruct(d1, 4.0) == doctest::Approx(0.7071).epsilon(1e-3));
  CHECK(fdll_reconstruct(make_fdll(make_potential(0.4, 1)), 0.1) == doctest::Approx(2.5119).epsilon(1e-2));
  for (double a : {0.1, 0.25, 0.4}) {
    const auto dec = make_fdll(make_potential(a, 1));
    for (double x : {0.05, 0.3, 1.7, 6.0}) {
      for (double lam : {2.0, 4.0}) {
        CHECK(fdll_reconstruct(dec, lam * x) ==
              doctest::Approx(std::pow(lam, -a) * fdll_reconstruct(dec, x)).epsilon(1e-3));
      }
    }
  }
  CHECK_THROWS_AS(fdll_reconstruct(d1, 0.0), DomainError);
}

TEST_CASE("z reduction") {
  CHECK(z_reduction_constant(1.0, 1).constant == doctest::Approx(1.2533141373155).epsilon(1e-12));
  CHECK(z_reduction_constant(1.0, 3).constant == doctest::Approx(1.9687012432153).epsilon(1e-12));
  for (int d : {1, 3}) {
    CHECK(z_reduction_constant(2.0, d).constant / z_reduction_constant(1.0, d).constant ==
          doctest::Approx(std::pow(2.0, d)));
  }
  // brute force per axis: the d = 3 integral factorizes over coordinates
  for (double r : {0.5, 1.0, 2.0}) {
    const double x = 0.3, y = -0.8;
    double acc = 0.0;
    const double dz = 1e-3;
    for (double z = -30.0; z <= 30.0; z += dz) acc += std::exp(-(x - z) * (x - z) / (r * r) - (y - z) * (y - z) / (r * r));
    acc *= dz;
    for (int d : {1, 3}) {
      const auto zr = z_reduction_constant(r, d);
      const double closed = zr.constant * std::exp(-d * (x - y) * (x - y) / (zr.widened_scale * zr.widened_scale));
      CHECK(std::pow(acc, d) == doctest::Approx(closed).epsilon(1e-8));
    }
  }
}

TEST_CASE("mean field") {
  const auto g = make_grid(1, 12.0, 256, 1.0 / 16);
  const auto pot = make_potential(0.25, 1);
  const MeanField field(g, pot);
  const auto dec = make_fdll(pot);

  SUBCASE("kernel table") {
    const auto& t = field.kernel_table();
    CHECK(t.size() == g.M + 1);
    CHECK(t[0] == doctest::Approx(fdll_reconstruct(dec, g.h / 2)).epsilon(1e-14));
    for (int o : {1, 7, 100}) CHECK(t[o] == doctest::Approx(std::pow(o * g.h, -0.25)).epsilon(1e-3));
  }
  SUBCASE("direct summation") {
    const auto rho = gaussian_density(g, 0.8, 0.5);
    const auto U = field.potential(rho);
    const auto& t = field.kernel_table();
    double err = 0.0;
    for (int i = 0; i < g.M; ++i) {
      double acc = 0.0;
      for (int j = 0; j < g.M; ++j) acc += t[std::abs(i - j)] * rho.values[j];
      err = std::max(err, std::abs(U[i] - g.h * acc));
    }
    CHECK(err < 1e-12);
    CHECK(field.interaction_energy(rho) == doctest::Approx(0.5 * g.h * U.dot(rho.values)).epsilon(1e-14));
    CHECK((mean_field_potential(rho, pot) - U).norm() == doctest::Approx(0.0).epsilon(1e-13));
  }
  SUBCASE("symmetry, sign and monotone tail") {
    const auto rho = gaussian_density(g, 0.8);
    CHECK(std::abs(field.force(rho)[g.M / 2]) < 1e-12);
    SpatialDensity box{g, Eigen::VectorXd::Zero(g.M)};
    for (int i = 0; i < g.M; ++i) box.values[i] = std::abs(g.x_nodes[i]) <= 1.0 ? 1.0 : 0.0;
    box.values /= g.h * box.values.sum();
    const auto U = field.potential(box);
    for (int i = g.M / 2 + 1; i + 1 < g.M; ++i) {
      if (g.x_nodes[i] > 1.0) CHECK(U[i + 1] < U[i]);
    }
    const MeanField attract(g, make_potential(0.25, -1));
    CHECK((attract.potential(box) + U).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("far field of a narrow bump") {
    const auto rho = gaussian_density(g, 0.05);
    const auto U = field.potential(rho);
    const int i2 = g.M / 2 + static_cast<int>(std::lround(2.0 / g.h));
    CHECK(U[i2] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-2));
  }
  SUBCASE("linearity") {
    const auto r1 = gaussian_density(g, 0.5, -1.0);
    const auto r2 = gaussian_density(g, 1.2, 2.0);
    SpatialDensity mix{g, 0.3 * r1.values - 1.7 * r2.values};
    const Eigen::VectorXd lhs = field.potential(mix);
    const Eigen::VectorXd rhs = 0.3 * field.potential(r1) - 1.7 * field.potential(r2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("force is the derivative of the potential") {
    const auto rho = gaussian_density(g, 0.7, 0.3);
    const auto f = field.fields(rho, true);
    CHECK((f.E - field.force(rho)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f.E - force_field(rho, pot)).cwiseAbs().maxCoeff() < 1e-13);
    // fourth-order central differences of U in the interior
    double err = 0.0;
    for (int i = 2; i + 2 < g.M; ++i) {
      const double fd = (-f.U[i + 2] + 8 * f.U[i + 1] - 8 * f.U[i - 1] + f.U[i - 2]) / (12 * g.h);
      err = std::max(err, std::abs(fd - f.E[i]));
    }
    CHECK(err < 1e-4);
    // half-grid force sits between its neighbours
    for (int i = g.M / 4; i < 3 * g.M / 4; ++i) {
      CHECK(f.E_half[i] == doctest::Approx(0.5 * (f.E[i] + f.E[i + 1])).epsilon(1e-2));
    }
  }
}
