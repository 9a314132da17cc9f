#include "rmtraj/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmtraj {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kAcceptRatio = 0.25;
constexpr double kMaxLinearizationHorizon = 0.25;  // m
constexpr int kMaxQpSweeps = 400;
constexpr double kQpTolerance = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

double hinge(double x) { return x > 0.0 ? x : 0.0; }

double smoothness(const Eigen::MatrixXd& x) {
  double total = 0.0;
  for (Eigen::Index t = 1; t < x.rows(); ++t) total += (x.row(t) - x.row(t - 1)).squaredNorm();
  return total;
}

double waypoint_penalty(const ArmModel& arm, const Scene& scene, const Configuration& q, double d_safe,
                        std::vector<LinkBox>& boxes) {
  link_boxes(arm, q, boxes);
  double total = 0.0;
  for (const LinkBox& b : boxes) {
    for (const ConvexShape& obs : scene.obstacles) {
      if (aabb_gap(b.bounds, obs.bounds()) >= d_safe) continue;
      total += hinge(d_safe - signed_distance(b.corners, obs.vertices()));
    }
  }
  return total;
}

double penalty(const Eigen::MatrixXd& x, const ArmModel& arm, const Scene& scene, double d_safe) {
  std::vector<LinkBox> boxes;
  double total = 0.0;
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    total += waypoint_penalty(arm, scene, x.row(t).transpose(), d_safe, boxes);
  }
  return total;
}

// Linearized hinge max(0, r - g . delta_t) on interior waypoint t.
struct HingeRow {
  int t;
  Eigen::VectorXd g;
  double r;
};

struct Linearization {
  std::vector<HingeRow> hinges;
  double endpoint_penalty = 0.0;
};

// Signed-distance rows for every (link, obstacle) pair within `horizon` of
// the margin at each interior waypoint; gradients by central differences.
Linearization linearize(const Eigen::MatrixXd& x, const ArmModel& arm, const Scene& scene,
                        double d_safe, double horizon) {
  Linearization lin;
  const int T = static_cast<int>(x.rows());
  const int K = arm.dof();
  std::vector<LinkBox> boxes;
  lin.endpoint_penalty = waypoint_penalty(arm, scene, x.row(0).transpose(), d_safe, boxes) +
                         waypoint_penalty(arm, scene, x.row(T - 1).transpose(), d_safe, boxes);

  struct Near {
    int link;
    const ConvexShape* obs;
    double sd;
  };
  std::vector<Near> near;
  std::vector<std::vector<LinkBox>> plus(K), minus(K);
  for (int t = 1; t + 1 < T; ++t) {
    const Configuration q = x.row(t).transpose();
    link_boxes(arm, q, boxes);
    near.clear();
    int max_link = -1;
    for (int l = 0; l < K; ++l) {
      for (const ConvexShape& obs : scene.obstacles) {
        if (aabb_gap(boxes[l].bounds, obs.bounds()) >= d_safe + horizon) continue;
        const double sd = signed_distance(boxes[l].corners, obs.vertices());
        if (sd >= d_safe + horizon) continue;
        near.push_back({l, &obs, sd});
        max_link = l;
      }
    }
    if (near.empty()) continue;
    for (int j = 0; j <= max_link; ++j) {
      Configuration qp = q, qm = q;
      qp[j] += kFdStep;
      qm[j] -= kFdStep;
      link_boxes(arm, qp, plus[j]);
      link_boxes(arm, qm, minus[j]);
    }
    for (const Near& n : near) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(K);
      for (int j = 0; j <= n.link; ++j) {
        const double sp = signed_distance(plus[j][n.link].corners, n.obs->vertices());
        const double sm = signed_distance(minus[j][n.link].corners, n.obs->vertices());
        g[j] = (sp - sm) / (2.0 * kFdStep);
      }
      lin.hinges.push_back({t - 1, std::move(g), d_safe - n.sd});
    }
  }
  return lin;
}

// Smoothness gradient at the interior waypoints, (T-2) x K.
Eigen::MatrixXd smoothness_gradient(const Eigen::MatrixXd& x) {
  const Eigen::Index m = x.rows() - 2;
  Eigen::MatrixXd c(m, x.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    c.row(i) = 2.0 * (2.0 * x.row(i + 1) - x.row(i) - x.row(i + 2));
  }
  return c;
}

// Convex subproblem over interior displacements D ((T-2) x K):
//   min  sum_t |x_{t+1} + D_{t+1} - x_t - D_t|^2 + mu * sum_h max(0, r_h - g_h . D_{t_h})
//   s.t. box_lo <= D <= box_hi, optional |step| <= vmax per joint.
// The smoothness Hessian is P = 2 (L kron I) with L = tridiag(-1, 2, -1), so
// P^-1 = (1/2) L^-1 kron I has a closed form. The dual is a box-constrained
// concave quadratic, maximized by cyclic coordinate ascent (Hildreth); each
// row update moves the primal D in closed form.
class TrustRegionQp {
 public:
  TrustRegionQp(const Eigen::MatrixXd& x, const Linearization& lin, const ArmModel& arm, double mu,
                std::optional<double> vmax)
      : m_(static_cast<int>(x.rows()) - 2), k_(static_cast<int>(x.cols())) {
    // (L^-1)_{ij} = min(i,j) (m + 1 - max(i,j)) / (m + 1), 1-based.
    linv_.resize(m_, m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        linv_(i, j) = static_cast<double>(std::min(i, j) + 1) * (m_ - std::max(i, j)) / (m_ + 1);
      }
    }
    unconstrained_ = -0.5 * linv_ * smoothness_gradient(x);

    joint_lo_.resize(m_, k_);
    joint_hi_.resize(m_, k_);
    for (int t = 0; t < m_; ++t) {
      for (int k = 0; k < k_; ++k) {
        joint_lo_(t, k) = arm.limits()[k].lo - x(t + 1, k);
        joint_hi_(t, k) = arm.limits()[k].hi - x(t + 1, k);
      }
    }
    for (int t = 0; t < m_; ++t) {
      for (int k = 0; k < k_; ++k) single_.push_back({k, t, 1.0, -1, 0.0, 0.0, 0.0, 0.0, -kInf, kInf});
    }
    boxes_ = single_.size();
    if (vmax) {
      for (int s = 0; s + 1 < m_ + 2; ++s) {
        for (int k = 0; k < k_; ++k) {
          const int a = s - 1;  // interior index of waypoint s
          const int b = s;      // interior index of waypoint s + 1
          const bool has_a = a >= 0, has_b = b < m_;
          if (!has_a && !has_b) continue;
          const double d = x(s + 1, k) - x(s, k);
          SingleRow row{k, has_a ? a : b, has_a ? -1.0 : 1.0, has_a && has_b ? b : -1, 1.0,
                        -*vmax - d, *vmax - d, 0.0, -kInf, kInf};
          single_.push_back(row);
        }
      }
    }
    for (SingleRow& row : single_) {
      row.rho = 0.5 * row.c0 * row.c0 * linv_(row.t0, row.t0);
      if (row.t1 >= 0) {
        row.rho += 0.5 * (row.c1 * row.c1 * linv_(row.t1, row.t1) +
                          2.0 * row.c0 * row.c1 * linv_(row.t0, row.t1));
      }
    }
    for (const HingeRow& h : lin.hinges) {
      const double rho = 0.5 * h.g.squaredNorm() * linv_(h.t, h.t);
      if (rho <= 0.0) continue;  // pair insensitive to this waypoint
      hinges_.push_back({&h, rho, -mu});
    }
  }

  /// Solves with the trust region half-width `trust`; dual values persist
  /// between calls as a warm start.
  Eigen::MatrixXd solve(double trust) {
    for (size_t i = 0; i < boxes_; ++i) {
      SingleRow& row = single_[i];
      row.lo = std::max(-trust, joint_lo_(row.t0, row.k));
      row.hi = std::min(trust, joint_hi_(row.t0, row.k));
    }
    Eigen::MatrixXd d = unconstrained_;
    for (const SingleRow& row : single_) apply(d, row, row.nu);
    for (const DualHinge& h : hinges_) apply(d, h, h.nu);

    for (int sweep = 0; sweep < kMaxQpSweeps; ++sweep) {
      double change = 0.0;
      for (SingleRow& row : single_) {
        double s = row.c0 * d(row.t0, row.k);
        if (row.t1 >= 0) s += row.c1 * d(row.t1, row.k);
        const double next = std::clamp(project(row.nu, s, row.lo, row.hi, row.rho), row.nu_lo, row.nu_hi);
        const double delta = next - row.nu;
        if (delta != 0.0) {
          apply(d, row, delta);
          row.nu = next;
          change = std::max(change, std::abs(delta) * row.rho);
        }
      }
      for (DualHinge& h : hinges_) {
        const double s = d.row(h.row->t).dot(h.row->g);
        const double next = std::clamp(project(h.nu, s, h.row->r, kInf, h.rho), h.nu_lo, 0.0);
        const double delta = next - h.nu;
        if (delta != 0.0) {
          apply(d, h, delta);
          h.nu = next;
          change = std::max(change, std::abs(delta) * h.rho);
        }
      }
      if (change < kQpTolerance) break;
    }
    return repair(std::move(d));
  }

 private:
  // One row, a . D in [lo, hi], with a supported on joint k at one or two
  // interior waypoints.
  struct SingleRow {
    int k;
    int t0;
    double c0;
    int t1;
    double c1;
    double lo, hi;
    double nu;
    double nu_lo, nu_hi;
    double rho = 0.0;
  };
  struct DualHinge {
    const HingeRow* row;
    double rho;
    double nu_lo;
    double nu = 0.0;
  };

  // Exact coordinate maximizer of the dual for a two-sided row.
  static double project(double nu, double s, double lo, double hi, double rho) {
    const double up = nu + (s - hi) / rho;
    if (up > 0.0) return up;
    const double down = nu + (s - lo) / rho;
    if (down < 0.0) return down;
    return 0.0;
  }

  // D -= delta * P^-1 a
  void apply(Eigen::MatrixXd& d, const SingleRow& row, double delta) const {
    d.col(row.k) -= (0.5 * delta * row.c0) * linv_.col(row.t0);
    if (row.t1 >= 0) d.col(row.k) -= (0.5 * delta * row.c1) * linv_.col(row.t1);
  }
  void apply(Eigen::MatrixXd& d, const DualHinge& h, double delta) const {
    d.noalias() -= (0.5 * delta) * linv_.col(h.row->t) * h.row->g.transpose();
  }

  // Dual ascent stops short of exact feasibility: clip to the box, then
  // shrink toward D = 0 (always feasible) until every step bound holds.
  Eigen::MatrixXd repair(Eigen::MatrixXd d) const {
    for (size_t i = 0; i < boxes_; ++i) {
      const SingleRow& row = single_[i];
      d(row.t0, row.k) = std::clamp(d(row.t0, row.k), row.lo, row.hi);
    }
    double scale = 1.0;
    for (size_t i = boxes_; i < single_.size(); ++i) {
      const SingleRow& row = single_[i];
      double s = row.c0 * d(row.t0, row.k);
      if (row.t1 >= 0) s += row.c1 * d(row.t1, row.k);
      if (s > row.hi) scale = std::min(scale, std::max(0.0, row.hi) / s);
      if (s < row.lo) scale = std::min(scale, std::min(0.0, row.lo) / s);
    }
    return scale < 1.0 ? Eigen::MatrixXd(scale * d) : d;
  }

  int m_;
  int k_;
  Eigen::MatrixXd linv_;
  Eigen::MatrixXd unconstrained_;
  Eigen::MatrixXd joint_lo_, joint_hi_;
  std::vector<SingleRow> single_;
  size_t boxes_ = 0;
  std::vector<DualHinge> hinges_;
};

double model_penalty(const Linearization& lin, const Eigen::MatrixXd& d) {
  double total = lin.endpoint_penalty;
  for (const HingeRow& h : lin.hinges) {
    total += hinge(h.r - (d.rows() > 0 ? d.row(h.t).dot(h.g) : 0.0));
  }
  return total;
}

double linearization_horizon(const ArmModel& arm, double trust) {
  return std::min(kMaxLinearizationHorizon, trust * arm.total_length());
}

}  // namespace

double smoothness_cost(const Trajectory& traj) { return smoothness(traj.waypoints); }

double collision_penalty(const Trajectory& traj, const ArmModel& arm, const Scene& scene,
                         double d_safe) {
  return penalty(traj.waypoints, arm, scene, d_safe);
}

bool velocity_limit_satisfied(const Trajectory& traj, double vmax) {
  for (int t = 1; t < traj.size(); ++t) {
    if ((traj.waypoints.row(t) - traj.waypoints.row(t - 1)).cwiseAbs().maxCoeff() > vmax) return false;
  }
  return true;
}

Eigen::MatrixXd merit_gradient(const Trajectory& traj, const ArmModel& arm, const Scene& scene,
                               double d_safe, double mu) {
  const Eigen::MatrixXd& x = traj.waypoints;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  if (x.rows() < 3) return grad;
  grad.middleRows(1, x.rows() - 2) = smoothness_gradient(x);
  const Linearization lin = linearize(x, arm, scene, d_safe, 0.0);
  for (const HingeRow& h : lin.hinges) {
    if (h.r > 0.0) grad.row(h.t + 1) -= mu * h.g.transpose();
  }
  return grad;
}

OptResult optimize(const Trajectory& seed, const ArmModel& arm, const Scene& scene,
                   const OptParams& params) {
  const auto clock_start = std::chrono::steady_clock::now();
  const int T = seed.size();
  if (T < 2) throw std::invalid_argument("optimize: seed needs at least 2 waypoints");
  if (seed.dof() != arm.dof()) throw std::invalid_argument("optimize: seed dof does not match arm");
  for (int t = 0; t < T; ++t) {
    if (!arm.within_limits(seed.at(t), 1e-9)) {
      throw std::invalid_argument("optimize: seed waypoint " + std::to_string(t) +
                                  " violates joint limits");
    }
  }
  if (params.vmax && !velocity_limit_satisfied(seed, *params.vmax)) {
    throw std::invalid_argument("optimize: seed violates the velocity bound");
  }

  OptResult result;
  Eigen::MatrixXd x = seed.waypoints;
  double mu = params.mu0;
  double smooth = smoothness(x);
  double pen = penalty(x, arm, scene, params.d_safe);
  double merit = smooth + mu * pen;
  bool inner_converged = T == 2;

  if (T > 2) {
    double trust = params.trust_region_init;
    for (int round = 0; round < params.max_penalty_rounds; ++round) {
      result.merit_log.push_back({round, mu, merit});
      inner_converged = false;
      for (int it = 0; it < params.max_inner_iters; ++it) {
        const Linearization lin =
            linearize(x, arm, scene, params.d_safe, linearization_horizon(arm, trust));
        ++result.iterations;
        TrustRegionQp qp(x, lin, arm, mu, params.vmax);
        const double model_at_zero = smooth + mu * model_penalty(lin, Eigen::MatrixXd());
        bool accepted = false;
        double true_improve = 0.0;
        while (trust >= params.trust_min) {
          const Eigen::MatrixXd d = qp.solve(trust);
          Eigen::MatrixXd cand = x;
          cand.middleRows(1, T - 2) += d;
          const double cand_smooth = smoothness(cand);
          const double model_improve = model_at_zero - (cand_smooth + mu * model_penalty(lin, d));
          if (model_improve <= 1e-3 * params.convergence_tol) break;
          const double cand_pen = penalty(cand, arm, scene, params.d_safe);
          const double cand_merit = cand_smooth + mu * cand_pen;
          true_improve = merit - cand_merit;
          if (true_improve > 0.0 && true_improve >= kAcceptRatio * model_improve) {
            x = std::move(cand);
            smooth = cand_smooth;
            pen = cand_pen;
            merit = cand_merit;
            trust *= params.trust_expand;
            accepted = true;
            result.merit_log.push_back({round, mu, merit});
            break;
          }
          trust *= params.trust_shrink;
        }
        if (!accepted || true_improve < params.convergence_tol) {
          inner_converged = true;
          break;
        }
      }
      if (pen == 0.0 || round + 1 == params.max_penalty_rounds) break;
      mu *= params.mu_growth;
      merit = smooth + mu * pen;
      trust = std::max(trust, params.trust_region_init);
    }
  }

  result.converged = inner_converged && pen == 0.0;
  result.final_cost = merit;
  result.trajectory = Trajectory(std::move(x));
  const std::vector<Configuration> path = result.trajectory.to_path();
  result.collision_free = !trajectory_in_collision(arm, scene, path).in_collision;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return result;
}

}  // namespace rmtraj
