#include "doctest.h"

#include "taxis/field_io.hpp"
#include "taxis/mesh_ops.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace taxis;

namespace {
constexpr double kPi = std::numbers::pi;

FaceField random_interior_faces(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FaceField F(g);
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int i = 1; i < g.nx(); ++i)
      F.comp(0)[F.xface(i, iy)] = dist(rng);
  if (g.dim() == 2)
    for (int j = 1; j < g.ny(); ++j)
      for (int ix = 0; ix < g.nx(); ++ix)
        F.comp(1)[F.yface(ix, j)] = dist(rng);
  return F;
}
} // namespace

TEST_CASE("integrate: constants and linear exactness") {
  Grid g2(2, {2.0, 3.0}, {32, 48});
  ScalarField zero(g2, 0.0);
  CHECK(integrate(zero) == 0.0);
  ScalarField one(g2, 1.0);
  CHECK(integrate(one) == doctest::Approx(6.0).epsilon(1e-14));

  // midpoint rule is exact for linear integrands
  Grid g1(1, {1.0, 1.0}, {64, 1});
  ScalarField ramp(g1);
  ramp.fill_from([](double x, double) { return x; });
  CHECK(std::abs(integrate(ramp) - 0.5) < 1e-15);
}

TEST_CASE("gradient_neumann: constants, Taylor oracle, boundary zeros") {
  Grid g(1, {1.0, 1.0}, {128, 1});
  ScalarField c(g, 3.7);
  FaceField gc = gradient_neumann(c);
  for (double v : gc.comp(0)) CHECK(v == 0.0);

  ScalarField f(g);
  f.fill_from([](double x, double) { return std::cos(kPi * x); });
  FaceField grad = gradient_neumann(f);
  const double h = g.spacing(0);
  // central difference of cos: error bounded by pi^3 h^2 / 24 (Taylor)
  const double tol = std::pow(kPi, 3) * h * h / 24.0 * 1.05;
  for (int i = 1; i < g.nx(); ++i) {
    const double x = i * h;
    const double exact = -kPi * std::sin(kPi * x);
    CHECK(std::abs(grad.comp(0)[i] - exact) <= tol);
  }
  CHECK(grad.comp(0)[0] == 0.0);
  CHECK(grad.comp(0)[g.nx()] == 0.0);
  CHECK(grad.boundary_faces_zero());
}

TEST_CASE("divergence: zero field, conservation, manufactured Laplacian") {
  Grid g(2, {1.0, 1.0}, {24, 24});
  FaceField zero(g);
  ScalarField div0 = divergence(zero);
  for (std::size_t i = 0; i < div0.size(); ++i) CHECK(div0[i] == 0.0);

  std::mt19937 rng(20240811);
  FaceField F = random_interior_faces(g, rng);
  CHECK(std::abs(integrate(divergence(F))) <=
        1e-13 * static_cast<double>(g.num_cells()));

  // gradient of a quadratic reproduces its Laplacian on interior cells
  ScalarField q(g);
  q.fill_from([](double x, double y) { return x * x + 2.0 * y * y; });
  ScalarField lap = divergence(gradient_neumann(q));
  for (int iy = 1; iy < g.ny() - 1; ++iy)
    for (int ix = 1; ix < g.nx() - 1; ++ix)
      CHECK(lap.at(ix, iy) == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("discrete Laplacian: second-order convergence on cos*cos") {
  double prev_err = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 16 << level;
    Grid g(2, {1.0, 1.0}, {n, n});
    ScalarField f(g);
    f.fill_from([](double x, double y) {
      return std::cos(kPi * x) * std::cos(kPi * y);
    });
    ScalarField lap = laplacian_neumann(f);
    double err = 0.0;
    for (int iy = 1; iy < n - 1; ++iy)
      for (int ix = 1; ix < n - 1; ++ix) {
        const double x = g.center(0, ix), y = g.center(1, iy);
        const double exact = -2.0 * kPi * kPi * std::cos(kPi * x) * std::cos(kPi * y);
        err = std::max(err, std::abs(lap.at(ix, iy) - exact));
      }
    if (level > 0) CHECK(prev_err / err >= 3.5);
    prev_err = err;
  }
}

TEST_CASE("gauss_green_residual: telescoping zero and injected boundary flux") {
  Grid g(2, {1.0, 2.0}, {20, 28});
  std::mt19937 rng(7);
  FaceField F = random_interior_faces(g, rng);
  ScalarField divF = divergence(F);

  ScalarField one(g, 1.0);
  CHECK(std::abs(gauss_green_residual(F, divF, one)) <=
        1e-13 * static_cast<double>(g.num_cells()));

  ScalarField phi(g);
  phi.fill_from([](double x, double y) { return std::sin(x) + y * y; });
  CHECK(std::abs(gauss_green_residual(F, divF, phi)) <=
        1e-12 * static_cast<double>(g.num_cells()));

  FaceField zeroF(g);
  ScalarField div_zero = divergence(zeroF);
  CHECK(gauss_green_residual(zeroF, div_zero, phi) == 0.0);

  // inject boundary fluxes; the pairing must equal the direct boundary sum
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int iy = 0; iy < g.ny(); ++iy) {
    F.comp(0)[F.xface(0, iy)] = dist(rng);
    F.comp(0)[F.xface(g.nx(), iy)] = dist(rng);
  }
  for (int ix = 0; ix < g.nx(); ++ix) {
    F.comp(1)[F.yface(ix, 0)] = dist(rng);
    F.comp(1)[F.yface(ix, g.ny())] = dist(rng);
  }
  divF = divergence(F);
  const double residual = gauss_green_residual(F, divF, phi);
  const double oracle = boundary_flux_integral(F, phi);
  CHECK(residual == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("snapshot io: bit-exact round trip") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int dim = 1; dim <= 2; ++dim) {
    Grid g = dim == 1 ? Grid(1, {1.0 / 3.0, 1.0}, {37, 1})
                      : Grid(2, {1.0 / 3.0, 0.7}, {12, 9});
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
    const std::string path =
        (std::filesystem::temp_directory_path() / "taxis_io_test.field").string();
    write_field(path, f);
    ScalarField back = read_field(path);
    REQUIRE(back.grid() == g);
    for (std::size_t i = 0; i < f.size(); ++i) {
      REQUIRE(back[i] == f[i]); // bitwise
    }
    // second write must be byte-identical
    const std::string path2 =
        (std::filesystem::temp_directory_path() / "taxis_io_test2.field").string();
    write_field(path2, back);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS(Grid(3, {1, 1}, {4, 4}));
  CHECK_THROWS(Grid(1, {1, 1}, {1, 1}));
  CHECK_THROWS(Grid(2, {1, 1}, {2, 1}));
  CHECK_THROWS(Grid(1, {-1, 1}, {8, 1}));
}
