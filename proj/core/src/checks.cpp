#include "attkit/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "attkit/sampling.hpp"

namespace attkit {
namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct Tracker {
  double worst = 0.0;
  void update(double err) { worst = std::max(worst, err); }
};

CheckResult make_result(const std::string& name, bool passed, const std::string& detail) {
  return {name, passed, detail};
}

CheckResult bounded(const std::string& name, double worst, double tol, std::size_t n) {
  return make_result(name, worst <= tol,
                     "max err " + sci(worst) + " (tol " + sci(tol) + ", " + std::to_string(n) +
                         " samples)");
}

Mat3 random_general_mat(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
  return a;
}

// Symmetric positive semidefinite A, unit scale.
Mat3 random_psd_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(0.05, 2.0);
  const Mat3 b = random_rotation(rng).matrix();
  const Mat3 a = b * Mat3::diagonal(lam(rng), lam(rng), lam(rng)) * b.transposed();
  return (a + a.transposed()) * 0.5;
}

// Symmetric A (unit scale) with (tr(A) I - A)/2 positive definite.
WeightMatrix random_weight(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(-0.5, 2.0);
  for (;;) {
    const Rotation basis = random_rotation(rng);
    const double l0 = lam(rng), l1 = lam(rng), l2 = lam(rng);
    const double tr = l0 + l1 + l2;
    const double lmax = std::max({l0, l1, l2});
    if (0.5 * (tr - lmax) < 0.01) continue;  // abar margin
    const Mat3 b = basis.matrix();
    const Mat3 a = b * Mat3::diagonal(l0, l1, l2) * b.transposed();
    return WeightMatrix::from_matrix((a + a.transposed()) * 0.5);
  }
}

struct DesignCase {
  Design design;
  HybridConfig config;
};

double canonical_k() { return 0.95 / std::sqrt(5.0); }

WeightMatrix example_weight() {
  const Vec3 a1 = Vec3{1.0, -1.0, 1.0}.normalized();
  const Vec3 a2 = Vec3::unit_z();
  const Vec3 a3 = a1.cross(a2);
  const Vec3 verts[3] = {a1, a2, a3};
  const double rho[3] = {1.0, 3.0, 1.0};
  return WeightMatrix::from_vectors(verts, rho);
}

std::vector<DesignCase> canonical_designs() {
  const WeightMatrix wi = WeightMatrix::identity();
  const WeightMatrix wv = example_weight();
  const double k = canonical_k();
  std::vector<DesignCase> out;
  out.push_back({Design::D1, make_config(Design::D1, wi, k, 0.8)});
  out.push_back({Design::D2, make_config(Design::D2, wi, k, 0.8)});
  out.push_back({Design::D3, make_config(Design::D3, wv, k, 0.8)});
  out.push_back({Design::D4, make_config(Design::D4, wv, k, 0.8)});
  return out;
}

// Steers X so that gamma(X, q) equals the target (fixed-point iteration on
// the warp angle; the warp angle depends on X only through u_potential, so
// the map contracts quickly).
Rotation warp_preimage(const WarpParams& p, const Rotation& target, std::size_t q) {
  Rotation x = target;
  for (int it = 0; it < 200; ++it) {
    const Rotation r = warp_rotation(p, x, q);
    const Rotation next = target * r.transposed();
    const double move = (next.matrix() - x.matrix()).frobenius_norm();
    x = next;
    if (move < 1e-15) break;
  }
  return x;
}

}  // namespace

CheckList run_identity_checks(const CheckOptions& opt) {
  const std::size_t n = opt.quick ? 200 : 1000;
  std::mt19937_64 rng(opt.seed);
  CheckList out;

  Tracker hat_sq, hat_cross, hat_anti, trace_hat, inner_hat, shift7;
  Tracker lem1_trace, lem1_psi;
  Tracker lem2_trace, lem2_psi;
  Tracker lem3_sandwich, lem3_psi_norm, lem3_alpha, lem3_quad, lem3_frob;
  Tracker lem4_trace, lem4_psi;
  Tracker dist_eps, psi_norm_x, quat_hom, quat_round;

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 u = random_vec(rng), v = random_vec(rng);
    const Mat3 a = random_general_mat(rng);
    const Rotation x = random_rotation(rng);

    hat_sq.update((hat(u) * hat(u) - (Mat3::outer(u, u) - Mat3::identity() * u.squared_norm()))
                      .frobenius_norm());
    hat_cross.update(
        (hat(u.cross(v)) - (Mat3::outer(v, u) - Mat3::outer(u, v))).frobenius_norm());
    hat_anti.update((hat(u) * v + hat(v) * u).norm());
    trace_hat.update(std::abs((a * hat(u)).trace() + 2.0 * psi(a).dot(u)));
    inner_hat.update(std::abs(frobenius_inner(hat(v), hat(u)) - 2.0 * u.dot(v)));
    shift7.update((a * hat(u) + hat(u) * a.transposed() + hat(a.transposed() * u) -
                   a.trace() * hat(u))
                      .frobenius_norm());

    // Flow derivative of the mismatch holds for any square weight.
    lem1_trace.update(
        std::abs(-(a * x.matrix() * hat(u)).trace() - 2.0 * psi(a * x.matrix()).dot(u)));

    // The remaining identities take a symmetric weight (the skew-projection
    // derivative in particular needs A = A^T for its printed form).
    const WeightMatrix w = random_weight(rng);
    const Mat3 dskew =
        w.a() * x.matrix() * hat(u) + hat(u) * x.matrix().transposed() * w.a();
    lem1_psi.update((psi(dskew) * 0.5 - e_matrix(w.a(), x) * u).norm());
    const UnitQuaternion q = rot_to_quat(x);
    lem2_trace.update(
        std::abs(trace_error(w.a(), x) - 4.0 * q.eps.dot(w.abar() * q.eps)));
    const Vec3 rhs26 = 2.0 * ((w.abar() * q.eps) * q.eta - q.eps.cross(w.abar() * q.eps));
    lem2_psi.update((psi(w.a() * x.matrix()) - rhs26).norm());

    const double dist = rotation_distance(x);
    const double te = trace_error(w.a(), x);
    lem3_sandwich.update(std::max(4.0 * w.lambda_min_bar() * dist - te,
                                  te - 4.0 * w.lambda_max_bar() * dist));
    double alpha = 1.0;
    if (q.eps.norm() > 1e-12) {
      const Vec3 axis = q.eps.normalized();
      const Vec3 bax = w.abar() * axis;
      const double c = axis.dot(bax) / bax.norm();
      alpha = 1.0 - dist * c * c;
    }
    lem3_psi_norm.update(std::abs(psi(w.a() * x.matrix()).squared_norm() -
                                  alpha * trace_error(w.aunder(), x)));
    lem3_alpha.update(std::max((1.0 - dist) - alpha,
                               alpha - (1.0 - w.xi() * w.xi() * dist)));
    const Mat3 em = e_matrix(w.a(), x);
    lem3_quad.update(std::max(
        0.0, v.dot((Mat3::identity() * w.lambda_min_bar() - em) * v) - 0.5 * te * v.squared_norm()));
    // The Frobenius bound needs a positive semidefinite weight (an
    // indefinite A with positive definite abar violates it; every weight
    // this system builds is a sum of outer products, hence PSD).
    const Mat3 apsd = random_psd_matrix(rng);
    const Mat3 apsd_bar = (Mat3::identity() * apsd.trace() - apsd) * 0.5;
    lem3_frob.update(std::max(
        0.0, e_matrix(apsd, x).frobenius_norm() - apsd_bar.frobenius_norm()));

    // Rank-accumulated weights and two rotations.
    {
      std::uniform_int_distribution<int> nv(1, 5);
      std::uniform_real_distribution<double> rr(0.1, 2.0);
      const int m = nv(rng);
      Mat3 acc = Mat3::zero();
      std::vector<Vec3> vs(static_cast<std::size_t>(m));
      std::vector<double> rho(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) {
        vs[static_cast<std::size_t>(j)] = random_vec(rng);
        rho[static_cast<std::size_t>(j)] = rr(rng);
        acc = acc + rho[static_cast<std::size_t>(j)] *
                        Mat3::outer(vs[static_cast<std::size_t>(j)], vs[static_cast<std::size_t>(j)]);
      }
      const Rotation y = random_rotation(rng);
      const Mat3 xyt = x.matrix() * y.matrix().transposed();
      double sum_sq = 0.0;
      Vec3 sum_cross = Vec3::zero();
      for (int j = 0; j < m; ++j) {
        const Vec3 xv = x.transposed() * vs[static_cast<std::size_t>(j)];
        const Vec3 yv = y.transposed() * vs[static_cast<std::size_t>(j)];
        sum_sq += rho[static_cast<std::size_t>(j)] * (xv - yv).squared_norm();
        sum_cross += rho[static_cast<std::size_t>(j)] * xv.cross(yv);
      }
      lem4_trace.update(std::abs((acc * (Mat3::identity() - xyt)).trace() - 0.5 * sum_sq));
      lem4_psi.update((psi(acc * xyt) - 0.5 * (y.matrix() * sum_cross)).norm());
    }

    dist_eps.update(std::abs(dist - q.eps.squared_norm()));
    psi_norm_x.update(std::abs(psi(x.matrix()).squared_norm() - 4.0 * dist * (1.0 - dist)));

    const UnitQuaternion q2 = random_quaternion(rng);
    quat_hom.update((quat_to_rot(q).matrix() * quat_to_rot(q2).matrix() -
                     quat_to_rot(quat_mul(q, q2)).matrix())
                        .frobenius_norm());
    quat_round.update((quat_to_rot(rot_to_quat(x)).matrix() - x.matrix()).frobenius_norm());
  }

  // Dense pass over the mismatch inequalities alone (they are the ones the
  // closed-loop bounds lean on).
  Tracker dense;
  const std::size_t nd = opt.quick ? 10000 : 100000;
  {
    std::mt19937_64 rng2(opt.seed + 7);
    for (std::size_t i = 0; i < nd; ++i) {
      const WeightMatrix w = random_weight(rng2);
      const Rotation x = random_rotation(rng2);
      const UnitQuaternion q = rot_to_quat(x);
      const double dist = rotation_distance(x);
      const double te = trace_error(w.a(), x);
      dense.update(std::max(4.0 * w.lambda_min_bar() * dist - te,
                            te - 4.0 * w.lambda_max_bar() * dist));
      double alpha = 1.0;
      if (q.eps.norm() > 1e-12) {
        const Vec3 axis = q.eps.normalized();
        const Vec3 bax = w.abar() * axis;
        const double c = axis.dot(bax) / bax.norm();
        alpha = 1.0 - dist * c * c;
      }
      dense.update(std::abs(psi(w.a() * x.matrix()).squared_norm() -
                            alpha * trace_error(w.aunder(), x)));
      dense.update(std::max((1.0 - dist) - alpha, alpha - (1.0 - w.xi() * w.xi() * dist)));
      const Mat3 em = e_matrix(w.a(), x);
      const Vec3 v = random_vec(rng2);
      dense.update(std::max(0.0, v.dot((Mat3::identity() * w.lambda_min_bar() - em) * v) -
                                     0.5 * te * v.squared_norm()));
      const Mat3 apsd = random_psd_matrix(rng2);
      dense.update(std::max(0.0, e_matrix(apsd, x).frobenius_norm() -
                                     ((Mat3::identity() * apsd.trace() - apsd) * 0.5)
                                         .frobenius_norm()));
    }
  }

  const double tol = 1e-12;
  out.push_back(bounded("identity.mismatch-bounds-dense", dense.worst, tol, nd));
  out.push_back(bounded("identity.hat-square", hat_sq.worst, tol, n));
  out.push_back(bounded("identity.hat-cross", hat_cross.worst, tol, n));
  out.push_back(bounded("identity.hat-antisymmetry", hat_anti.worst, tol, n));
  out.push_back(bounded("identity.trace-hat-psi", trace_hat.worst, tol, n));
  out.push_back(bounded("identity.skew-inner-product", inner_hat.worst, tol, n));
  out.push_back(bounded("identity.trace-shift", shift7.worst, tol, n));
  out.push_back(bounded("identity.mismatch-derivative", lem1_trace.worst, tol, n));
  out.push_back(bounded("identity.psi-derivative", lem1_psi.worst, tol, n));
  out.push_back(bounded("identity.quaternion-mismatch", lem2_trace.worst, tol, n));
  out.push_back(bounded("identity.quaternion-psi", lem2_psi.worst, tol, n));
  out.push_back(bounded("identity.mismatch-sandwich", lem3_sandwich.worst, tol, n));
  out.push_back(bounded("identity.psi-norm-factorization", lem3_psi_norm.worst, tol, n));
  out.push_back(bounded("identity.alpha-range", lem3_alpha.worst, tol, n));
  out.push_back(bounded("identity.e-matrix-quadratic", lem3_quad.worst, tol, n));
  out.push_back(bounded("identity.e-matrix-frobenius", lem3_frob.worst, tol, n));
  out.push_back(bounded("identity.weighted-mismatch", lem4_trace.worst, tol, n));
  out.push_back(bounded("identity.weighted-psi", lem4_psi.worst, tol, n));
  out.push_back(bounded("identity.distance-quaternion", dist_eps.worst, tol, n));
  out.push_back(bounded("identity.psi-norm-distance", psi_norm_x.worst, tol, n));
  out.push_back(bounded("identity.quaternion-homomorphism", quat_hom.worst, tol, n));
  out.push_back(bounded("identity.quaternion-roundtrip", quat_round.worst, tol, n));
  return out;
}

CheckList run_gradient_checks(const CheckOptions& opt) {
  const std::size_t n = opt.quick ? 50 : 200;
  const double h = 1e-6;
  CheckList out;
  for (const DesignCase& dc : canonical_designs()) {
    std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(dc.design));
    std::uniform_int_distribution<std::size_t> pick_q(0, dc.config.q_count() - 1);
    std::size_t accepted = 0, violations = 0, attempts = 0;
    double worst_ratio = 0.0;
    while (accepted < n && ++attempts < 1000 * n) {
      const Rotation x = random_rotation(rng);
      const std::size_t q = pick_q(rng);
      const std::vector<double> phis = phi_all(dc.config, x);
      if (!in_flow_values(phis, q, dc.config.delta)) continue;
      ++accepted;
      const Vec3 u = random_unit_vec(rng);
      const Rotation xp = x * exp_so3(u * h);
      const Rotation xm = x * exp_so3(u * -h);
      const double fd = (phi_composite(dc.config.warp, dc.config.kind, xp, q) -
                         phi_composite(dc.config.warp, dc.config.kind, xm, q)) /
                        (2.0 * h);
      const Mat3 grad = grad_phi_composite(dc.config.warp, dc.config.kind, x, q);
      const double an = frobenius_inner(grad, x.matrix() * hat(u));
      const double err = std::abs(fd - an);
      const double allowed = std::max(1e-5 * std::abs(an), 1e-9);
      worst_ratio = std::max(worst_ratio, err / allowed);
      if (err > allowed) ++violations;
    }
    out.push_back(make_result(
        std::string("gradient.finite-difference.") + to_string(dc.design),
        violations == 0 && accepted == n,
        "worst err/allowed " + sci(worst_ratio) + " over " + std::to_string(accepted) +
            " directions"));
  }
  return out;
}

CheckList run_warp_bound_checks(const CheckOptions& opt) {
  const std::size_t n = opt.quick ? 10000 : 100000;
  CheckList out;
  for (const DesignCase& dc : canonical_designs()) {
    std::mt19937_64 rng(opt.seed + 17 * static_cast<std::uint64_t>(dc.design));
    const WarpParams& p = dc.config.warp;
    const GammaBounds gb = gamma_bounds(p.k);
    std::uniform_int_distribution<std::size_t> pick_q(0, p.q_count() - 1);

    std::size_t bound_violations = 0, value_violations = 0;
    double min_det = std::numeric_limits<double>::infinity();
    const double a1 = p.weight.xi() * gb.low;
    const double a2 = (dc.config.kind == PotentialKind::U ? 1.0 : 2.0) * gb.high;
    Tracker quat_err;
    for (std::size_t i = 0; i < n; ++i) {
      const Rotation x = random_rotation(rng);
      const std::size_t q = pick_q(rng);
      const double dist = rotation_distance(x);
      const Rotation g = gamma(p, x, q);
      const double gd = rotation_distance(g);
      if (gd < gb.low * dist - 1e-12 || gd > gb.high * dist + 1e-12) ++bound_violations;
      const double phi = phi_composite(p, dc.config.kind, x, q);
      if (phi < a1 * dist - 1e-12 || phi > a2 * dist + 1e-12) ++value_violations;
      min_det = std::min(min_det, std::abs(theta_matrix(p, x, q).determinant()));

      if (i < 10000) {
        // Quaternion form of the warp, compared up to the global sign.
        const UnitQuaternion qx = rot_to_quat(x);
        const double uval = u_potential(p.weight, x);
        const double ku = p.k * uval;
        const double c = std::sqrt(1.0 - ku * ku);
        const Vec3 nu = p.nu(q);
        const double eta_pred = qx.eta * c - ku * qx.eps.dot(nu);
        const Vec3 eps_pred = ku * qx.eta * nu + c * qx.eps + ku * qx.eps.cross(nu);
        const UnitQuaternion qg = rot_to_quat(g);
        const double direct =
            std::abs(eta_pred - qg.eta) + (eps_pred - qg.eps).norm();
        const double flipped =
            std::abs(eta_pred + qg.eta) + (eps_pred + qg.eps).norm();
        quat_err.update(std::min(direct, flipped));
      }
    }
    const std::string tag = std::string(".") + to_string(dc.design);
    out.push_back(make_result("warp.distance-sandwich" + tag, bound_violations == 0,
                              std::to_string(bound_violations) + " violations in " +
                                  std::to_string(n) + " samples"));
    out.push_back(make_result("warp.value-sandwich" + tag, value_violations == 0,
                              std::to_string(value_violations) + " violations in " +
                                  std::to_string(n) + " samples"));
    out.push_back(make_result("warp.transport-full-rank" + tag, min_det > 1e-3,
                              "min |det| " + sci(min_det) + " (floor 1e-3)"));
    out.push_back(bounded("warp.quaternion-form" + tag, quat_err.worst, 1e-12,
                          std::min<std::size_t>(n, 10000)));

    // Transport identity, finite differences.
    const double h = 1e-6;
    std::size_t fd_violations = 0;
    double worst_ratio = 0.0;
    const std::size_t nfd = opt.quick ? 50 : 200;
    for (std::size_t i = 0; i < nfd; ++i) {
      const Rotation x = random_rotation(rng);
      const std::size_t q = pick_q(rng);
      const Vec3 u = random_unit_vec(rng);
      const Mat3 num = (gamma(p, x * exp_so3(u * h), q).matrix() -
                        gamma(p, x * exp_so3(u * -h), q).matrix()) *
                       (1.0 / (2.0 * h));
      const Mat3 an = gamma(p, x, q).matrix() * hat(theta_matrix(p, x, q) * u);
      const double err = (num - an).frobenius_norm();
      const double allowed = std::max(1e-5 * an.frobenius_norm(), 1e-9);
      worst_ratio = std::max(worst_ratio, err / allowed);
      if (err > allowed) ++fd_violations;
    }
    out.push_back(make_result("warp.transport-identity" + tag, fd_violations == 0,
                              "worst err/allowed " + sci(worst_ratio)));

    const double id_err =
        (gamma(p, Rotation(), 0).matrix() - Mat3::identity()).frobenius_norm();
    out.push_back(bounded("warp.identity-fixed-point" + tag, id_err, 1e-15, 1));
  }
  return out;
}

CheckList run_synergy_checks(const CheckOptions& opt) {
  const std::size_t n = opt.quick ? 10000 : 100000;
  CheckList out;
  for (const DesignCase& dc : canonical_designs()) {
    std::mt19937_64 rng(opt.seed + 31 * static_cast<std::uint64_t>(dc.design));
    const HybridConfig& c = dc.config;
    const WarpParams& p = c.warp;
    std::uniform_int_distribution<std::size_t> pick_q(0, p.q_count() - 1);
    std::uniform_real_distribution<double> small_angle(0.0, 0.5);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    // Eigenvector axes of the weight (every direction qualifies for the
    // isotropic designs, so draw randomly there).
    auto draw_half_turn_axis = [&](std::mt19937_64& r) {
      if (p.weight.eigen_degeneracy() == 3) return random_unit_vec(r);
      std::uniform_int_distribution<int> pick(0, 2);
      Vec3 v = p.weight.eigenvector(pick(r));
      if (coin(r) < 0.5) v = -v;
      return v;
    };

    std::size_t accepted = 0, attempts = 0;
    double max_phi_u = 0.0;
    while (accepted < n && ++attempts < 1000 * n) {
      Rotation x = Rotation();
      if (coin(rng) < 0.7) {
        x = random_rotation(rng);
      } else {
        // Adversarial: a half turn about a critical axis, perturbed.
        const Vec3 v = draw_half_turn_axis(rng);
        x = quat_to_rot(UnitQuaternion::from_parts(0.0, v)) *
            angle_axis_to_rot(small_angle(rng), random_unit_vec(rng));
      }
      const std::size_t q = pick_q(rng);
      const std::vector<double> phis = phi_all(c, x);
      if (!in_flow_values(phis, q, c.delta)) continue;
      ++accepted;
      max_phi_u = std::max(max_phi_u, u_potential(p.weight, gamma(p, x, q)));
    }
    const double margin = 1.0 - max_phi_u;
    const std::string tag = std::string(".") + to_string(dc.design);
    out.push_back(make_result("synergy.flow-set-exclusion" + tag,
                              margin > 0.0 && accepted == n,
                              "margin " + sci(margin) + " over " + std::to_string(accepted) +
                                  " flow samples"));

    // States steered exactly onto the critical set must sit in the jump set
    // with a full hysteresis gap.
    double min_gap = std::numeric_limits<double>::infinity();
    std::size_t steered = 0, not_on_spi = 0;
    const std::size_t n_axes = opt.quick ? 10 : 40;
    for (std::size_t ia = 0; ia < n_axes; ++ia) {
      const Vec3 v = draw_half_turn_axis(rng);
      for (std::size_t q = 0; q < p.q_count(); ++q) {
        const Rotation target =
            quat_to_rot(UnitQuaternion::from_parts(0.0, v)) *
            angle_axis_to_rot(coin(rng) * 1e-7, random_unit_vec(rng));
        const Rotation x = warp_preimage(p, target, q);
        if (!in_s_pi(p.weight, gamma(p, x, q), 1e-6)) {
          ++not_on_spi;
          continue;
        }
        ++steered;
        const std::vector<double> phis = phi_all(c, x);
        const double gap = phis[q] - *std::min_element(phis.begin(), phis.end());
        min_gap = std::min(min_gap, gap);
      }
    }
    out.push_back(make_result(
        "synergy.critical-gap" + tag, steered > 0 && min_gap >= c.delta && not_on_spi == 0,
        "min gap/delta " + sci(min_gap / c.delta) + " over " + std::to_string(steered) +
            " steered states"));

    // A jump always lands strictly inside the flow set.
    std::size_t jump_samples = 0, bad_landing = 0;
    for (std::size_t i = 0; i < (opt.quick ? 2000u : 20000u); ++i) {
      const Rotation x = random_rotation(rng);
      const std::vector<double> phis = phi_all(c, x);
      for (std::size_t q = 0; q < p.q_count(); ++q) {
        if (!in_jump_values(phis, q, c.delta)) continue;
        ++jump_samples;
        const std::size_t qn = argmin_index(phis);
        if (in_jump_values(phis, qn, c.delta)) ++bad_landing;
      }
    }
    out.push_back(make_result("synergy.post-jump-membership" + tag, bad_landing == 0,
                              std::to_string(jump_samples) + " jump states, " +
                                  std::to_string(bad_landing) + " bad landings"));
  }
  return out;
}

CheckList run_explicit_oracle_checks(const CheckOptions& opt) {
  const std::size_t n = opt.quick ? 200 : 1000;
  CheckList out;
  const WeightMatrix wv = example_weight();
  const double k = canonical_k();
  const HybridConfig c3 = make_config(Design::D3, wv, k, 0.8);
  const HybridConfig c4 = make_config(Design::D4, wv, k, 0.8);

  const Vec3 a1 = Vec3{1.0, -1.0, 1.0}.normalized();
  const Vec3 a2 = Vec3::unit_z();
  const Vec3 a3 = a1.cross(a2);
  MeasurementSet meas;
  meas.inertial = {a1, a2, a3};
  meas.rho = {1.0, 3.0, 1.0};
  meas.body.resize(3);

  std::mt19937_64 rng(opt.seed + 101);
  std::uniform_int_distribution<std::size_t> pick_q(0, 1);

  Tracker phi_err, beta_err, vartheta_err, phi4_err, beta4_err, k0_beta_err, k0_phi_err;
  Tracker smooth1_err;
  std::size_t v_compared = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rotation r = random_rotation(rng);
    const Rotation rhat = random_rotation(rng);
    const std::size_t q = pick_q(rng);
    for (int j = 0; j < 3; ++j) meas.body[static_cast<std::size_t>(j)] = r.transposed() * meas.inertial[static_cast<std::size_t>(j)];
    meas.omega_y = Vec3::zero();
    const Rotation rtilde = r * rhat.transposed();

    const ExplicitTerms et = explicit_terms(wv, k, c3.warp.nu(q), rhat, meas);
    vartheta_err.update(std::abs(et.vartheta - u_potential(wv, rtilde)));
    phi_err.update(std::abs(et.phi_bar - phi_composite(c3.warp, PotentialKind::U, rtilde, q)));
    beta_err.update((et.beta_bar - beta_from_attitude(c3, rhat, rtilde, q)).norm());

    // Non-smooth variant, away from its singular set.
    if (et.phi_bar < 0.999) {
      ++v_compared;
      const double phi4 = 2.0 * (1.0 - std::sqrt(1.0 - et.phi_bar));
      phi4_err.update(std::abs(phi4 - phi_composite(c4.warp, PotentialKind::V, rtilde, q)));
      const Vec3 beta4 = et.beta_bar * (1.0 / std::sqrt(1.0 - et.phi_bar));
      beta4_err.update((beta4 - beta_from_attitude(c4, rhat, rtilde, q)).norm());
    }

    // k = 0 degenerations.
    const ExplicitTerms et0 = explicit_terms(wv, 0.0, c3.warp.nu(q), rhat, meas);
    Vec3 smooth2_beta = Vec3::zero();
    double smooth2_phi = 0.0;
    for (int j = 0; j < 3; ++j) {
      const Vec3 pred = rhat.transposed() * meas.inertial[static_cast<std::size_t>(j)];
      smooth2_beta += meas.rho[static_cast<std::size_t>(j)] * meas.body[static_cast<std::size_t>(j)].cross(pred);
      smooth2_phi += meas.rho[static_cast<std::size_t>(j)] *
                     (meas.body[static_cast<std::size_t>(j)] - pred).squared_norm();
    }
    smooth2_beta *= 1.0 / (8.0 * wv.lambda_max_bar());
    smooth2_phi *= 1.0 / (8.0 * wv.lambda_max_bar());
    k0_beta_err.update((et0.beta_bar - smooth2_beta).norm());
    k0_phi_err.update(std::abs(et0.phi_bar - smooth2_phi));

    // Reconstruction-driven design degenerates to the isotropic smooth law.
    const WarpParams warp0 =
        WarpParams::make(WeightMatrix::identity(), 0.0, {Vec3::unit_x(), Vec3::unit_y()});
    const Mat3 grad0 = grad_phi_composite(warp0, PotentialKind::U, rtilde, 0);
    const Vec3 beta_h1k0 = rhat.transposed() * vee(rtilde.matrix().transposed() * grad0);
    const Vec3 beta_s1 = rhat.transposed() * psi(rtilde.matrix()) * 0.25;
    smooth1_err.update((beta_h1k0 - beta_s1).norm());
  }

  out.push_back(bounded("oracle.explicit-phi", phi_err.worst, 1e-10, n));
  out.push_back(bounded("oracle.explicit-beta", beta_err.worst, 1e-10, n));
  out.push_back(bounded("oracle.vartheta-scale", vartheta_err.worst, 1e-12, n));
  out.push_back(bounded("oracle.explicit-phi-nonsmooth", phi4_err.worst, 1e-10, v_compared));
  out.push_back(bounded("oracle.explicit-beta-nonsmooth", beta4_err.worst, 1e-10, v_compared));
  out.push_back(bounded("oracle.k0-matches-vector-law", k0_beta_err.worst, 1e-12, n));
  out.push_back(bounded("oracle.k0-phi-matches", k0_phi_err.worst, 1e-12, n));
  out.push_back(bounded("oracle.k0-matches-smooth-gradient", smooth1_err.worst, 1e-12, n));
  return out;
}

CheckList run_projection_checks(const CheckOptions& opt) {
  const std::size_t n = opt.quick ? 2000 : 10000;
  std::mt19937_64 rng(opt.seed + 211);
  std::uniform_real_distribution<double> radius(0.05, 2.0);
  std::uniform_real_distribution<double> scale(0.0, 2.0);
  Tracker p2_err, p3_err, tangency, inside_exact;
  for (std::size_t i = 0; i < n; ++i) {
    const double bbar = radius(rng);
    const Vec3 mu = random_vec(rng, 2.0);
    const Vec3 bhat = random_unit_vec(rng) * (scale(rng) * bbar);
    const Vec3 pr = proj_ball(mu, bhat, bbar);

    if (bhat.norm() < bbar || bhat.dot(mu) <= 0.0) {
      inside_exact.update((pr - mu).norm());  // exact pass-through
    } else {
      tangency.update(std::abs(bhat.dot(pr)) / std::max(bhat.norm() * mu.norm(), 1e-30));
    }
    p3_err.update(std::max(0.0, pr.norm() - mu.norm()));
    const Vec3 b_true = random_unit_vec(rng) * (bbar * scale(rng) / 2.0);
    if (b_true.norm() <= bbar)
      p2_err.update(std::max(0.0, (bhat - b_true).dot(pr) - (bhat - b_true).dot(mu)));
  }
  CheckList out;
  out.push_back(bounded("projection.pass-through-exact", inside_exact.worst, 0.0, n));
  out.push_back(bounded("projection.boundary-tangency", tangency.worst, 1e-12, n));
  out.push_back(bounded("projection.non-expansive", p3_err.worst, 1e-12, n));
  out.push_back(bounded("projection.error-decrease", p2_err.worst, 1e-12, n));
  return out;
}

CheckList run_executor_checks(const CheckOptions& opt) {
  CheckList out;
  for (int which = 1; which <= 2; ++which) {
    ScenarioConfig cfg = default_example(which);
    if (opt.quick) cfg.t_end = 8.0;
    const RunResult res = run(cfg);
    const double budget = 1e-8 * cfg.dt;
    for (std::size_t im = 0; im < cfg.modes.size(); ++im) {
      const ModeStats& st = res.stats[im];
      const std::string tag =
          "executor." + cfg.name + "." + to_string(cfg.modes[im]);
      out.push_back(make_result(tag + ".energy-monotone", st.max_l0_flow_increase <= budget,
                                "max flow increase " + sci(st.max_l0_flow_increase) +
                                    " (budget " + sci(budget) + ")"));
      if (is_hybrid(cfg.modes[im])) {
        const bool isotropic = cfg.modes[im] == ObserverMode::Hybrid1 ||
                               cfg.modes[im] == ObserverMode::Hybrid2;
        const WeightMatrix w =
            isotropic ? WeightMatrix::identity()
                      : WeightMatrix::from_vectors(cfg.inertial, cfg.rho);
        const double delta =
            cfg.delta_fraction * delta_bound(mode_design(cfg.modes[im]), w, cfg.k);
        const bool drop_ok =
            st.jump_count == 0 || st.min_jump_drop >= delta - 1e-9;
        out.push_back(make_result(tag + ".jump-drop", drop_ok,
                                  "min drop " + sci(st.min_jump_drop) + " vs delta " +
                                      sci(delta) + ", " + std::to_string(st.jump_count) +
                                      " jumps"));
        const long budget_jumps =
            static_cast<long>(std::ceil(st.l0_initial / delta));
        out.push_back(make_result(tag + ".jump-budget", st.jump_count <= budget_jumps,
                                  std::to_string(st.jump_count) + " jumps <= " +
                                      std::to_string(budget_jumps)));
        out.push_back(make_result(tag + ".no-late-jumps", st.jumps_after_converged == 0,
                                  std::to_string(st.jumps_after_converged) +
                                      " jumps after convergence"));
      } else {
        out.push_back(make_result(tag + ".no-jumps", st.jump_count == 0,
                                  std::to_string(st.jump_count) + " jumps"));
      }
      out.push_back(make_result(tag + ".orthonormality", st.max_orth_drift <= 1e-8,
                                "max estimate drift " + sci(st.max_orth_drift)));
    }
    out.push_back(make_result("executor." + cfg.name + ".truth-orthonormality",
                              res.truth_max_orth_drift <= 1e-8,
                              "max truth drift " + sci(res.truth_max_orth_drift)));
    out.push_back(make_result("executor." + cfg.name + ".warp-clamps",
                              res.warp_clamp_events == 0,
                              std::to_string(res.warp_clamp_events) + " clamp activations"));
  }
  return out;
}

CheckList run_all_checks(const CheckOptions& opt) {
  CheckList out;
  for (auto fn : {run_identity_checks, run_gradient_checks, run_warp_bound_checks,
                  run_synergy_checks, run_explicit_oracle_checks, run_projection_checks,
                  run_executor_checks}) {
    CheckList part = fn(opt);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace attkit
