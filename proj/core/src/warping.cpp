#include "attkit/warping.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "attkit/sampling.hpp"

namespace attkit {
namespace {

std::atomic<std::uint64_t> g_clamp_count{0};

}  // namespace

double clamped_warp_arg(double v) {
  constexpr double lim = 1.0 - 1e-15;
  if (v > lim || v < -lim) {
    g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    return std::clamp(v, -lim, lim);
  }
  return v;
}

double k_bar(double xi) {
  if (!(xi > 0.0) || xi > 1.0) throw std::invalid_argument("k_bar: xi must be in (0, 1]");
  return 1.0 / std::sqrt(6.0 - std::max(1.0, 4.0 * xi * xi));
}

GammaBounds gamma_bounds(double k) {
  return {1.0 - k * k - k * std::sqrt(1.0 - k * k), 1.0 + k + k * k / 4.0};
}

WarpParams WarpParams::make(WeightMatrix weight, double k, std::vector<Vec3> axes) {
  if (k < 0.0 || k >= k_bar(weight.xi()))
    throw std::invalid_argument("WarpParams: k outside [0, k_bar)");
  if (axes.empty()) throw std::invalid_argument("WarpParams: empty axis table");
  for (const Vec3& a : axes)
    if (std::abs(a.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("WarpParams: axes must be unit norm");
  return WarpParams{std::move(weight), k, std::move(axes)};
}

std::uint64_t warp_clamp_count() { return g_clamp_count.load(std::memory_order_relaxed); }
void reset_warp_clamp_count() { g_clamp_count.store(0, std::memory_order_relaxed); }

Rotation warp_rotation_for_value(const WarpParams& p, double u, std::size_t q) {
  const double angle = 2.0 * std::asin(clamped_warp_arg(p.k * u));
  return angle_axis_to_rot(angle, p.nu(q));
}

Rotation warp_rotation(const WarpParams& p, const Rotation& x, std::size_t q) {
  return warp_rotation_for_value(p, u_potential(p.weight, x), q);
}

Rotation gamma(const WarpParams& p, const Rotation& x, std::size_t q) {
  return x * warp_rotation(p, x, q);
}

Mat3 theta_matrix(const WarpParams& p, const Rotation& x, std::size_t q) {
  const double u = u_potential(p.weight, x);
  const Rotation rq = warp_rotation_for_value(p, u, q);
  const double ku = p.k * u;
  const double coeff = p.k / (p.weight.lambda_max_bar() * std::sqrt(1.0 - ku * ku));
  return rq.matrix().transposed() + coeff * Mat3::outer(p.nu(q), psi(p.weight.a() * x.matrix()));
}

double phi_composite(const WarpParams& p, PotentialKind kind, const Rotation& x, std::size_t q) {
  const Rotation g = gamma(p, x, q);
  return kind == PotentialKind::U ? u_potential(p.weight, g) : v_potential(p.weight, g);
}

std::vector<double> phi_composite_all(const WarpParams& p, PotentialKind kind,
                                      const Rotation& x) {
  const double u = u_potential(p.weight, x);
  std::vector<double> out(p.q_count());
  for (std::size_t q = 0; q < p.q_count(); ++q) {
    const Rotation g = x * warp_rotation_for_value(p, u, q);
    out[q] = kind == PotentialKind::U ? u_potential(p.weight, g) : v_potential(p.weight, g);
  }
  return out;
}

Mat3 grad_phi_composite(const WarpParams& p, PotentialKind kind, const Rotation& x,
                        std::size_t q) {
  const Rotation g = gamma(p, x, q);
  const Mat3 theta = theta_matrix(p, x, q);
  const Vec3 psi_ag = psi(p.weight.a() * g.matrix());
  const Mat3 grad_u =
      x.matrix() * hat(theta.transposed() * psi_ag) * (1.0 / (4.0 * p.weight.lambda_max_bar()));
  if (kind == PotentialKind::U) return grad_u;
  const double phi_u = u_potential(p.weight, g);
  if (phi_u >= 1.0 - kSingularityGuard)
    throw SingularityFault("grad_phi_composite: V-kind gradient at the singular set");
  return grad_u * (1.0 / std::sqrt(1.0 - phi_u));
}

AlphaEstimate estimate_alphas(const WarpParams& p, PotentialKind kind, double delta,
                              std::size_t n_samples, std::uint64_t seed, int n_threads) {
  AlphaEstimate est;
  const GammaBounds gb = gamma_bounds(p.k);
  est.alpha1 = p.weight.xi() * gb.low;
  est.alpha2 = (kind == PotentialKind::U ? 1.0 : 2.0) * gb.high;
  est.samples = n_samples;

  n_threads = std::max(1, n_threads);
  struct Partial {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double phi_lo = std::numeric_limits<double>::infinity();
    double phi_hi = 0.0;
    std::size_t kept = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(n_threads));

  auto worker = [&](int tid) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(tid + 1));
    Partial& acc = partials[static_cast<std::size_t>(tid)];
    const std::size_t begin = n_samples * static_cast<std::size_t>(tid) /
                              static_cast<std::size_t>(n_threads);
    const std::size_t end = n_samples * static_cast<std::size_t>(tid + 1) /
                            static_cast<std::size_t>(n_threads);
    std::uniform_int_distribution<std::size_t> pick_q(0, p.q_count() - 1);
    for (std::size_t i = begin; i < end; ++i) {
      const Rotation x = random_rotation(rng);
      const double dist = rotation_distance(x);
      if (dist < 1e-8) continue;  // ratio is 0/0 at identity
      const std::size_t q = pick_q(rng);
      const std::vector<double> phis = phi_composite_all(p, kind, x);
      // The value sandwich holds everywhere, not just on the flow set.
      acc.phi_lo = std::min(acc.phi_lo, phis[q] / dist);
      acc.phi_hi = std::max(acc.phi_hi, phis[q] / dist);
      const double mn = *std::min_element(phis.begin(), phis.end());
      if (phis[q] - mn > delta) continue;  // outside the flow set
      const Mat3 grad = grad_phi_composite(p, kind, x, q);
      const double ratio = frobenius_inner(grad, grad) / dist;
      acc.lo = std::min(acc.lo, ratio);
      acc.hi = std::max(acc.hi, ratio);
      ++acc.kept;
    }
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (std::thread& th : pool) th.join();
  }
  // min/max merge is associative, so the thread split does not change the
  // result for a fixed seed and thread count.
  est.alpha3 = std::numeric_limits<double>::infinity();
  est.alpha1_sampled = std::numeric_limits<double>::infinity();
  for (const Partial& part : partials) {
    est.alpha3 = std::min(est.alpha3, part.lo);
    est.alpha4 = std::max(est.alpha4, part.hi);
    est.alpha1_sampled = std::min(est.alpha1_sampled, part.phi_lo);
    est.alpha2_sampled = std::max(est.alpha2_sampled, part.phi_hi);
    est.flow_samples += part.kept;
  }
  return est;
}

}  // namespace attkit
