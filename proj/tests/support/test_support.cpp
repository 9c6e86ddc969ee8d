#include "test_support.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace testsupport {

namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

bool ray_hits_triangle(const Vector3d& origin, const Vector3d& dir,
                       const Vector3d& a, const Vector3d& b,
                       const Vector3d& c) {
  const Vector3d e1 = b - a;
  const Vector3d e2 = c - a;
  const Vector3d p = dir.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14) return false;
  const double inv = 1.0 / det;
  const Vector3d t = origin - a;
  const double u = t.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vector3d q = t.cross(e1);
  const double v = dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  return e2.dot(q) * inv > 1e-12;
}

bool point_inside(const physdyn::PartMesh& mesh, const Vector3d& point,
                  const Vector3d& dir) {
  int hits = 0;
  for (const auto& t : mesh.triangles) {
    if (ray_hits_triangle(point, dir, mesh.vertices[t[0]], mesh.vertices[t[1]],
                          mesh.vertices[t[2]])) {
      ++hits;
    }
  }
  return hits % 2 == 1;
}

Matrix3d point_inertia(const Vector3d& r) {
  return r.squaredNorm() * Matrix3d::Identity() - r * r.transpose();
}

}  // namespace

TempDir::TempDir() {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / "physdyn_test_XXXXXX")
          .string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

McMassEstimate raycast_mc_mass(const physdyn::PartMesh& mesh, double mass,
                               int samples, unsigned seed) {
  Vector3d lo = mesh.vertices.front();
  Vector3d hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  lo.array() -= 1e-6;
  hi.array() += 1e-6;
  const Vector3d extent = hi - lo;
  // Slightly skewed ray direction so axis-aligned faces are hit transversally.
  const Vector3d dir = Vector3d(0.0331, 0.0471, 0.9983).normalized();

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vector3d> inside;
  inside.reserve(samples / 2);
  Vector3d sum = Vector3d::Zero();
  for (int i = 0; i < samples; ++i) {
    const Vector3d p =
        lo + Vector3d(unit(rng), unit(rng), unit(rng)).cwiseProduct(extent);
    if (point_inside(mesh, p, dir)) {
      inside.push_back(p);
      sum += p;
    }
  }

  McMassEstimate est;
  est.samples_inside = static_cast<int>(inside.size());
  if (inside.empty()) return est;
  est.volume = extent.prod() * static_cast<double>(inside.size()) / samples;
  est.com = sum / static_cast<double>(inside.size());
  Matrix3d acc = Matrix3d::Zero();
  for (const auto& p : inside) acc += point_inertia(p - est.com);
  est.inertia = mass * acc / static_cast<double>(inside.size());
  return est;
}

McMassEstimate sample_tet_mass(const Vector3d& p0, const Vector3d& p1,
                               const Vector3d& p2, const Vector3d& p3,
                               double mass, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(1e-300, 1.0);

  std::vector<Vector3d> points;
  points.reserve(samples);
  Vector3d sum = Vector3d::Zero();
  for (int i = 0; i < samples; ++i) {
    // Dirichlet(1,1,1,1) barycentric weights: uniform over the tetrahedron.
    double w[4];
    double total = 0.0;
    for (double& wk : w) {
      wk = -std::log(unit(rng));
      total += wk;
    }
    const Vector3d p =
        (w[0] * p0 + w[1] * p1 + w[2] * p2 + w[3] * p3) / total;
    points.push_back(p);
    sum += p;
  }

  McMassEstimate est;
  est.samples_inside = samples;
  est.volume =
      std::abs((p1 - p0).cross(p2 - p0).dot(p3 - p0)) / 6.0;
  est.com = sum / static_cast<double>(samples);
  Matrix3d acc = Matrix3d::Zero();
  for (const auto& p : points) acc += point_inertia(p - est.com);
  est.inertia = mass * acc / static_cast<double>(samples);
  return est;
}

MatrixXd fd_point_jacobian(const physdyn::KinematicTree& tree,
                           const VectorXd& q, int part,
                           const Vector3d& rest_point, double eps) {
  MatrixXd jac(3, q.size());
  VectorXd qp = q;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    qp[i] = q[i] + eps;
    const Vector3d plus =
        physdyn::forward_kinematics(tree, qp).world_point(part, rest_point);
    qp[i] = q[i] - eps;
    const Vector3d minus =
        physdyn::forward_kinematics(tree, qp).world_point(part, rest_point);
    qp[i] = q[i];
    jac.col(i) = (plus - minus) / (2.0 * eps);
  }
  return jac;
}

MatrixXd fd_angular_jacobian(const physdyn::KinematicTree& tree,
                             const VectorXd& q, int part, double eps) {
  const Matrix3d rot = physdyn::forward_kinematics(tree, q).part_rotation[part];
  MatrixXd jac(3, q.size());
  VectorXd qp = q;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    qp[i] = q[i] + eps;
    const Matrix3d plus =
        physdyn::forward_kinematics(tree, qp).part_rotation[part];
    qp[i] = q[i] - eps;
    const Matrix3d minus =
        physdyn::forward_kinematics(tree, qp).part_rotation[part];
    qp[i] = q[i];
    const Matrix3d w = (plus - minus) / (2.0 * eps) * rot.transpose();
    jac.col(i) = 0.5 * Vector3d(w(2, 1) - w(1, 2), w(0, 2) - w(2, 0),
                                w(1, 0) - w(0, 1));
  }
  return jac;
}

EnumBoxLsq enumerate_box_lsq(const MatrixXd& a, const VectorXd& b,
                             const VectorXd& lower, const VectorXd& upper) {
  const int n = static_cast<int>(a.cols());
  if (n > 9) throw std::invalid_argument("enumerate_box_lsq: too many columns");

  EnumBoxLsq best;
  best.objective = std::numeric_limits<double>::infinity();

  long combos = 1;
  for (int i = 0; i < n; ++i) combos *= 3;

  std::vector<int> state(n);  // 0 lower, 1 upper, 2 free
  for (long code = 0; code < combos; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
    }

    VectorXd x(n);
    VectorXd rhs = b;
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      if (state[i] == 0) {
        x[i] = lower[i];
        rhs -= a.col(i) * lower[i];
      } else if (state[i] == 1) {
        x[i] = upper[i];
        rhs -= a.col(i) * upper[i];
      } else {
        free_idx.push_back(i);
      }
    }

    if (!free_idx.empty()) {
      MatrixXd af(a.rows(), free_idx.size());
      for (size_t k = 0; k < free_idx.size(); ++k) {
        af.col(k) = a.col(free_idx[k]);
      }
      const VectorXd xf =
          af.completeOrthogonalDecomposition().solve(rhs);
      bool feasible = true;
      for (size_t k = 0; k < free_idx.size(); ++k) {
        const int i = free_idx[k];
        const double tol = 1e-9 * (1.0 + std::abs(upper[i] - lower[i]));
        if (xf[k] < lower[i] - tol || xf[k] > upper[i] + tol) {
          feasible = false;
          break;
        }
        x[i] = std::clamp(xf[k], lower[i], upper[i]);
      }
      if (!feasible) continue;
    }

    const double objective = (a * x - b).squaredNorm();
    if (objective < best.objective) {
      best.objective = objective;
      best.x = x;
    }
  }
  return best;
}

physdyn::MotionSequence sinusoid_motion(int dof_count, double fps,
                                        double seconds, unsigned seed,
                                        double amplitude, double max_hz) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> freq(0.1, max_hz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

  struct Wave {
    double a, w, p;
  };
  std::vector<std::array<Wave, 3>> waves(dof_count);
  for (int d = 0; d < dof_count; ++d) {
    const double scale = (d < 3 ? 0.25 : 1.0) * amplitude / 3.0;
    for (auto& wave : waves[d]) {
      wave = {scale * amp(rng), 2.0 * M_PI * freq(rng), phase(rng)};
    }
  }

  physdyn::MotionSequence motion;
  motion.fps = fps;
  const int frames = static_cast<int>(std::lround(fps * seconds)) + 1;
  motion.q.resize(frames, dof_count);
  for (int f = 0; f < frames; ++f) {
    const double t = f / fps;
    for (int d = 0; d < dof_count; ++d) {
      double v = 0.0;
      for (const auto& wave : waves[d]) {
        v += wave.a * std::sin(wave.w * t + wave.p);
      }
      motion.q(f, d) = v;
    }
  }
  return motion;
}

VectorXd random_vector(std::mt19937& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace testsupport
