#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "attkit/design.hpp"
#include "support/generators.hpp"

using namespace attkit;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kGain = 0.95 / std::sqrt(5.0);
}  // namespace

TEST_CASE("gap bounds, isotropic designs") {
  const WeightMatrix wi = WeightMatrix::identity();
  // Frozen from a high-precision evaluation of the closed forms.
  CHECK(delta_bound(Design::D1, wi, kGain) ==
        doctest::Approx(0.03893512627794511).epsilon(1e-12));
  CHECK(delta_bound(Design::D2, wi, kGain) ==
        doctest::Approx(0.39463971557837463).epsilon(1e-12));
  CHECK_THROWS_AS(delta_bound(Design::D1, wi, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(delta_bound(Design::D1, wi, 0.75), std::invalid_argument);
}

TEST_CASE("eigenvalue functional branches") {
  // (1,2,3): the branch test is +1, so the ratio form applies.
  const WeightMatrix wd = WeightMatrix::from_matrix(Mat3::diagonal(1.0, 2.0, 3.0));
  CHECK(lambda_branch(wd) == doctest::Approx(0.2).epsilon(1e-14));

  // The second study's weight takes the product form.
  const WeightMatrix wv = testgen::example_weight();
  CHECK(lambda_branch(wv) == doctest::Approx(0.140025812902387).epsilon(1e-10));
  CHECK(delta_bound(Design::D3, wv, kGain) ==
        doctest::Approx(0.009220767256235013).epsilon(1e-10));
  CHECK(delta_bound(Design::D4, wv, kGain) ==
        doctest::Approx(0.011039113500291964).epsilon(1e-10));

  CHECK_THROWS_AS(lambda_branch(WeightMatrix::identity()), std::invalid_argument);
  CHECK_THROWS_AS(delta_bound(Design::D3, WeightMatrix::identity(), kGain),
                  std::invalid_argument);
}

TEST_CASE("axis selection") {
  const WeightMatrix wd = WeightMatrix::from_matrix(Mat3::diagonal(1.0, 2.0, 3.0));
  const Vec3 u = choose_axis_d3(wd);
  CHECK(std::abs(u.norm() - 1.0) <= 1e-12);
  CHECK(std::abs(u.dot(wd.eigenvector(0))) <= 1e-12);
  CHECK(u.dot(wd.eigenvector(1)) * u.dot(wd.eigenvector(1)) ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(u.dot(wd.eigenvector(2)) * u.dot(wd.eigenvector(2)) ==
        doctest::Approx(0.6).epsilon(1e-12));

  // Negative-branch projections: all three components engaged, frozen from
  // the closed form.
  const WeightMatrix wv = testgen::example_weight();
  const Vec3 uv = choose_axis_d3(wv);
  CHECK(std::abs(uv.norm() - 1.0) <= 1e-12);
  const double p0 = uv.dot(wv.eigenvector(0)), p1 = uv.dot(wv.eigenvector(1)),
               p2 = uv.dot(wv.eigenvector(2));
  CHECK(p0 * p0 == doctest::Approx(0.024510410750544387).epsilon(1e-9));
  CHECK(p1 * p1 == doctest::Approx(0.14285714285714285).epsilon(1e-9));
  CHECK(p2 * p2 == doctest::Approx(0.8326324463923127).epsilon(1e-9));
  CHECK(p0 * p0 + p1 * p1 + p2 * p2 == doctest::Approx(1.0).epsilon(1e-12));

  // Synthetic positive-branch spectrum exercising the other formula on a
  // rotated (non-diagonal) weight.
  std::mt19937_64 rng(testgen::kTestSeed);
  const Mat3 b = random_rotation(rng).matrix();
  const Mat3 a = b * Mat3::diagonal(0.3, 1.1, 2.9) * b.transposed();
  const WeightMatrix wr = WeightMatrix::from_matrix((a + a.transposed()) * 0.5);
  CHECK(wr.eigenvalue(1) * wr.eigenvalue(2) -
            wr.eigenvalue(0) * (wr.eigenvalue(1) + wr.eigenvalue(2)) >
        0.0);
  const Vec3 ur = choose_axis_d3(wr);
  CHECK(std::abs(ur.dot(wr.eigenvector(0))) <= 1e-10);
  const double share = wr.eigenvalue(1) / (wr.eigenvalue(1) + wr.eigenvalue(2));
  CHECK(ur.dot(wr.eigenvector(1)) * ur.dot(wr.eigenvector(1)) ==
        doctest::Approx(share).epsilon(1e-9));
}

TEST_CASE("configuration synthesis") {
  const HybridConfig c1 = make_config(Design::D1, WeightMatrix::identity(), kGain, 0.8);
  CHECK(c1.q_count() == 6);
  CHECK(c1.delta == doctest::Approx(0.031148101022356085).epsilon(1e-12));
  CHECK(c1.kind == PotentialKind::U);
  for (std::size_t p = 0; p < 3; ++p)
    CHECK((c1.warp.nu(p) + c1.warp.nu(p + 3)).norm() <= 1e-15);

  const HybridConfig c3 = make_config(Design::D3, testgen::example_weight(), kGain, 0.8);
  CHECK(c3.q_count() == 2);
  CHECK((c3.warp.nu(0) + c3.warp.nu(1)).norm() <= 1e-15);
  CHECK(c3.kind == PotentialKind::U);

  CHECK_THROWS_AS(make_config(Design::D1, WeightMatrix::identity(), kGain, 1.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_config(Design::D3, WeightMatrix::identity(), kGain, 0.8),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_config(Design::D1, WeightMatrix::identity(), 0.72, 0.8),
                  std::invalid_argument);
}

TEST_CASE("the canonical gain is admissible for every weight") {
  std::mt19937_64 rng(testgen::kTestSeed);
  for (int i = 0; i < 500; ++i) {
    const WeightMatrix w = WeightMatrix::from_matrix(testgen::random_symmetric_weight(rng));
    CHECK(kGain < k_bar(w.xi()));
  }
}

TEST_CASE("hysteresis logic") {
  const HybridConfig c = make_config(Design::D1, WeightMatrix::identity(), kGain, 0.8);

  // All indices flow at the identity.
  for (std::size_t q = 0; q < c.q_count(); ++q) CHECK(in_flow(c, Rotation(), q));

  // Ties resolve to the smallest index.
  const std::vector<double> tie{0.5, 0.3, 0.3, 0.9, 1.0, 0.7};
  CHECK(argmin_index(tie) == 1);
  const std::vector<double> all_equal{0.4, 0.4, 0.4};
  CHECK(argmin_index(all_equal) == 0);

  // Overlap band: gap exactly delta is in both sets.
  const std::vector<double> band{0.0, c.delta};
  CHECK(in_flow_values(band, 1, c.delta));
  CHECK(in_jump_values(band, 1, c.delta));
}

TEST_CASE("engineered mid-gap state jumps and decreases the potential") {
  const HybridConfig c = make_config(Design::D1, WeightMatrix::identity(), kGain, 0.8);
  const Vec3 axis = Vec3{1.0, 1.0, 1.0}.normalized();
  const std::size_t q = 0;

  // Scan then bisect the rotation angle until the hysteresis gap sits
  // around 1.5 delta for index 0.
  auto gap_at = [&](double theta) {
    const std::vector<double> phis = phi_all(c, angle_axis_to_rot(theta, axis));
    return phis[q] - *std::min_element(phis.begin(), phis.end());
  };
  double lo = 0.0, hi = kPi;
  bool found = false;
  for (double th = 0.0; th <= kPi; th += 0.01) {
    if (gap_at(th) >= 1.5 * c.delta) {
      hi = th;
      lo = th - 0.01;
      found = true;
      break;
    }
  }
  REQUIRE(found);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap_at(mid) < 1.5 * c.delta ? lo : hi) = mid;
  }
  const Rotation x = angle_axis_to_rot(hi, axis);
  CHECK(gap_at(hi) >= 1.5 * c.delta - 1e-9);

  CHECK_FALSE(in_flow(c, x, q));
  CHECK(in_jump(c, x, q));
  const std::size_t qn = jump_map(c, x, q);
  const std::vector<double> phis = phi_all(c, x);
  CHECK(phis[q] - phis[qn] >= c.delta);
  CHECK(in_flow(c, x, qn));  // lands in the flow set
}
