#include "attkit/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace attkit {

const char* to_string(Design d) {
  switch (d) {
    case Design::D1: return "d1";
    case Design::D2: return "d2";
    case Design::D3: return "d3";
    case Design::D4: return "d4";
  }
  return "?";
}

namespace {

void require_distinct(const WeightMatrix& w, const char* who) {
  if (!w.has_distinct_eigenvalues())
    throw std::invalid_argument(std::string(who) + ": weight matrix needs distinct eigenvalues");
}

double branch_test(const WeightMatrix& w) {
  const double l1 = w.eigenvalue(0), l2 = w.eigenvalue(1), l3 = w.eigenvalue(2);
  return l2 * l3 - l1 * l2 - l1 * l3;
}

}  // namespace

double lambda_branch(const WeightMatrix& w) {
  require_distinct(w, "lambda_branch");
  const double l1 = w.eigenvalue(0), l2 = w.eigenvalue(1), l3 = w.eigenvalue(2);
  if (branch_test(w) >= 0.0) return l1 / (l2 + l3);
  const double pair_sum = 2.0 * (l1 * l2 + l1 * l3 + l2 * l3);
  return 4.0 * l1 * l2 * l3 / ((l2 + l3) * pair_sum);
}

double delta_bound(Design d, const WeightMatrix& w, double k) {
  if (!(k > 0.0) || k >= k_bar(w.xi()))
    throw std::invalid_argument("delta_bound: k outside (0, k_bar)");
  switch (d) {
    case Design::D1: {
      const double s = -1.0 + std::sqrt(1.0 + 4.0 * k * k);
      return s * s * s / (24.0 * k * k * k * k);
    }
    case Design::D2:
      return 2.0 * std::sqrt(delta_bound(Design::D1, w, k));
    case Design::D3: {
      require_distinct(w, "delta_bound");
      const double lam = lambda_branch(w);
      const double k2 = k * k;
      const double vbar = (-1.0 + std::sqrt(1.0 + 4.0 * k2 * w.xi() * lam)) / (2.0 * k2 * lam);
      return 4.0 * k2 * vbar * vbar * (1.0 - k2 * vbar * vbar) * lam;
    }
    case Design::D4: {
      const double d3 = delta_bound(Design::D3, w, k);
      const double one_minus_xi = 1.0 - w.xi();
      return 2.0 * (-std::sqrt(one_minus_xi) + std::sqrt(one_minus_xi + d3));
    }
  }
  throw std::invalid_argument("delta_bound: unknown design");
}

Vec3 choose_axis_d3(const WeightMatrix& w) {
  require_distinct(w, "choose_axis_d3");
  const double l1 = w.eigenvalue(0), l2 = w.eigenvalue(1), l3 = w.eigenvalue(2);
  double c[3];
  if (branch_test(w) >= 0.0) {
    // Zero projection on the first eigenvector, the rest split by
    // eigenvalue share (unit norm forces the index pair {2, 3}).
    c[0] = 0.0;
    c[1] = std::sqrt(l2 / (l2 + l3));
    c[2] = std::sqrt(l3 / (l2 + l3));
  } else {
    const double pair_sum = 2.0 * (l1 * l2 + l1 * l3 + l2 * l3);
    c[0] = std::sqrt(std::max(1.0 - 4.0 * l2 * l3 / pair_sum, 0.0));
    c[1] = std::sqrt(std::max(1.0 - 4.0 * l1 * l3 / pair_sum, 0.0));
    c[2] = std::sqrt(std::max(1.0 - 4.0 * l1 * l2 / pair_sum, 0.0));
  }
  Vec3 u = c[0] * w.eigenvector(0) + c[1] * w.eigenvector(1) + c[2] * w.eigenvector(2);
  return u.normalized();
}

HybridConfig make_config(Design d, const WeightMatrix& w, double k, double delta_fraction) {
  if (!(delta_fraction > 0.0) || delta_fraction >= 1.0)
    throw std::invalid_argument("make_config: delta_fraction outside (0, 1)");
  const double bound = delta_bound(d, w, k);
  std::vector<Vec3> axes;
  if (d == Design::D1 || d == Design::D2) {
    axes = {Vec3::unit_x(), Vec3::unit_y(), Vec3::unit_z(),
            -Vec3::unit_x(), -Vec3::unit_y(), -Vec3::unit_z()};
  } else {
    const Vec3 u = choose_axis_d3(w);
    axes = {u, -u};
  }
  return HybridConfig{d, WarpParams::make(w, k, std::move(axes)), delta_fraction * bound, bound,
                      design_kind(d)};
}

std::vector<double> phi_all(const HybridConfig& c, const Rotation& x) {
  return phi_composite_all(c.warp, c.kind, x);
}

bool in_flow_values(std::span<const double> phi, std::size_t q, double delta) {
  const double mn = *std::min_element(phi.begin(), phi.end());
  return phi[q] - mn <= delta;
}

bool in_jump_values(std::span<const double> phi, std::size_t q, double delta) {
  const double mn = *std::min_element(phi.begin(), phi.end());
  return phi[q] - mn >= delta;
}

std::size_t argmin_index(std::span<const double> phi) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < phi.size(); ++i)
    if (phi[i] < phi[best]) best = i;
  return best;
}

bool in_flow(const HybridConfig& c, const Rotation& x, std::size_t q) {
  return in_flow_values(phi_all(c, x), q, c.delta);
}

bool in_jump(const HybridConfig& c, const Rotation& x, std::size_t q) {
  return in_jump_values(phi_all(c, x), q, c.delta);
}

std::size_t jump_map(const HybridConfig& c, const Rotation& x, std::size_t q) {
  (void)q;
  return argmin_index(phi_all(c, x));
}

}  // namespace attkit
