#include "tsol/catalog.hpp"
#include "tsol/wedge.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tsol;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector rising(double up, double angle) {
  const double s = std::sqrt(1.0 - up * up);
  return vec({s * std::cos(angle), s * std::sin(angle), up});
}

}  // namespace

TEST_CASE("vertical and transverse predicates") {
  CHECK(is_vertical(vec({1, 0, 0})));
  CHECK_FALSE(is_vertical(vec({0, 0, 1})));
  CHECK_FALSE(is_vertical(Vector(vec({1, 0, 1}) / std::sqrt(2.0))));
  CHECK(is_transverse(vec({1, 0, 0}), vec({0, 1, 0})));
  CHECK_FALSE(is_transverse(vec({1, 0, 0}), vec({-1, 0, 0})));
  CHECK_FALSE(is_transverse(vec({1, 0, 0}), vec({1, 0, 0})));
  CHECK_THROWS_AS(Halfspace(vec({0, 0, 0}), vec({1, 1, 0})), std::invalid_argument);
}

TEST_CASE("normal form of a pair") {
  const Vector zero = Vector::Zero(3);
  const auto [nf, motion] = normalize_pair(Halfspace(zero, vec({1, 0, 0})), Halfspace(zero, vec({0, 1, 0})));
  CHECK(nf.xi == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(nf.eta == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(normalize_pair(Halfspace(zero, vec({1, 0, 0})), Halfspace(zero, vec({1, 0, 0}))),
                  std::invalid_argument);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  int tested = 0;
  while (tested < 100) {
    Vector w1 = Vector::Zero(4), w2 = Vector::Zero(4), b1(4), b2(4);
    for (Index i = 0; i < 3; ++i) w1(i) = g(rng), w2(i) = g(rng);
    w1.normalize();
    w2.normalize();
    if (std::abs(w1.dot(w2)) > 0.999) continue;
    ++tested;
    for (Index i = 0; i < 4; ++i) b1(i) = g(rng), b2(i) = g(rng);
    const auto [f, m] = normalize_pair(Halfspace(b1, w1), Halfspace(b2, w2));
    CHECK(f.xi * f.xi + f.eta * f.eta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.xi > 0.0);
    CHECK(f.eta > 0.0);
    Vector n1 = Vector::Zero(4), n2 = Vector::Zero(4);
    n1(0) = f.xi, n1(1) = f.eta, n2(0) = f.xi, n2(1) = -f.eta;
    CHECK((m.inverse_direction(n1) - w1).norm() <= 1e-10);
    CHECK((m.inverse_direction(n2) - w2).norm() <= 1e-10);
    CHECK((m.apply_direction(Vector::Unit(4, 3)) - Vector::Unit(4, 3)).norm() <= 1e-12);
    CHECK(std::abs((m.shift - b1).dot(w1)) <= 1e-10);
    CHECK(std::abs((m.shift - b2).dot(w2)) <= 1e-10);
  }
}

TEST_CASE("existence verdicts") {
  CHECK(wedge_existence(rising(0.3, 0.0), rising(0.3, 2.0)).label() == "bowl");
  CHECK(wedge_existence(rising(0.3, 0.0), rising(0.3, 2.0)).exists);
  const WedgeVerdict v = wedge_existence(vec({1, 0, 0}), vec({0, 1, 0}));
  CHECK_FALSE(v.exists);
  CHECK(v.label() == "bi-halfspace");
  CHECK_FALSE(wedge_existence(rising(-0.1, 0.0), rising(0.5, 1.0)).exists);
  CHECK(wedge_existence(vec({1, 0, 0}), vec({-1, 0, 0})).label() == "vertical_plane");
  CHECK(wedge_existence(vec({1, 0, 0}), rising(0.4, 1.0)).label() == "tilted_grim_reaper");
}

TEST_CASE("verdict symmetry and rotation invariance") {
  const double ups[] = {-0.5, 0.0, 0.5};
  for (double u1 : ups) {
    for (double u2 : ups) {
      for (double a : {0.0, 1.0, std::numbers::pi}) {
        const Vector w1 = rising(u1, 0.3), w2 = rising(u2, 0.3 + a);
        const auto v = wedge_existence(w1, w2);
        CHECK(wedge_existence(w2, w1).rule == v.rule);
        const Eigen::Matrix3d q = Eigen::AngleAxisd(0.77, Eigen::Vector3d::UnitZ()).toRotationMatrix();
        CHECK(wedge_existence(q * w1, q * w2).rule == v.rule);
        if (u1 == 0.0 && u2 == 0.0) CHECK(v.exists == !is_transverse(w1, w2));
      }
    }
  }
}

TEST_CASE("containment checks") {
  Vector lo(2), hi(2);
  lo << -1.5, -1.0;
  hi << 1.5, 1.0;
  const SurfaceSample gr = graph_geometry(grim_reaper(2, GridSpec::box(lo, hi, 0.05)));
  const std::vector<Halfspace> slab = {Halfspace(vec({-std::numbers::pi / 2, 0, 0}), vec({1, 0, 0})),
                                       Halfspace(vec({std::numbers::pi / 2, 0, 0}), vec({-1, 0, 0}))};
  CHECK_FALSE(containment_check(gr, slab));
  const Bowl b(2, 4.0);
  const SurfaceSample bs = graph_geometry(bowl_patch(b, GridSpec::box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0), 0.1)));
  const auto witness = containment_check(bs, {Halfspace(Vector::Zero(3), vec({1, 0, 0}))});
  REQUIRE(witness);
  CHECK(bs.points(*witness, 0) < 0.0);
  CHECK_FALSE(containment_check(bs, {}));
}

TEST_CASE("cutoff profile and bounds") {
  const Cutoff c(2.0, 1.0, 3.0);
  CHECK(Cutoff::psi(0.5) == 0.0);
  CHECK(Cutoff::psi(1.0) == 0.0);
  CHECK(Cutoff::psi(2.0) == 1.0);
  CHECK(Cutoff::psi(1.5) == doctest::Approx(0.5));
  for (double t = 1.01; t < 2.0; t += 0.01) {
    CHECK(Cutoff::psi(t + 0.01) >= Cutoff::psi(t));
    const double fd = (Cutoff::psi(t + 1e-6) - Cutoff::psi(t - 1e-6)) / 2e-6;
    CHECK(Cutoff::psi_prime(t) == doctest::Approx(fd).epsilon(1e-5));
    const double fd2 = (Cutoff::psi_prime(t + 1e-6) - Cutoff::psi_prime(t - 1e-6)) / 2e-6;
    CHECK(Cutoff::psi_second(t) == doctest::Approx(fd2).epsilon(1e-4));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 500; ++k) {
    Vector x(3);
    for (Index i = 0; i < 3; ++i) x(i) = u(rng);
    CHECK(c.gradient(x).norm() <= c.gradient_bound() + 1e-12);
    CHECK(std::abs(c.laplacian(x)) <= c.laplacian_bound(3) + 1e-12);
    if (x.norm() <= 2.0) CHECK(c.value(x) == 0.0);
    if (x.norm() >= 4.0) CHECK(c.value(x) == 1.0);
  }
  CHECK_THROWS_AS(Cutoff(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("probe on a wedge-clipped vertical plane") {
  const double R = 1.0, xi = 0.6, c = 0.3, a = R / xi - c;
  const WedgeNormalForm nf{xi, std::sqrt(1.0 - xi * xi)};
  Vector lo(2), hi(2);
  lo << -0.5, -0.05 * a;
  hi << 0.5, 0.05 * a;
  const SurfaceSample s = graph_geometry(vertical_plane_patch(c, GridSpec::box(lo, hi, 0.05 * a / 10)));
  const OYProbeResult r = oy_probe(s, nf, R, std::nullopt);
  CHECK(r.contradiction);
  for (const auto& row : r.rows) {
    CHECK(row.f <= R / xi);
    CHECK(row.f >= 0.0);
    const double d = row.f;
    if (row.region == ProbeRegion::InV) CHECK(row.laplacian == doctest::Approx(a * a / (d * d * d)).epsilon(1e-9));
  }
  lo << -0.5, 2.0;
  hi << 0.5, 2.2;
  const SurfaceSample far = graph_geometry(vertical_plane_patch(c, GridSpec::box(lo, hi, 0.05)));
  CHECK_THROWS_AS(oy_probe(far, nf, R, std::nullopt), std::invalid_argument);
}
