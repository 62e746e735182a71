#include "slabprobe/solver/stiffness.hpp"

#include <fmt/format.h>

#include "slabprobe/error.hpp"

namespace slabprobe::solver {

Eigen::Matrix<double, 3, 2> hat_gradients(const Vec2& a, const Vec2& b, const Vec2& c) {
  Eigen::Matrix<double, 3, 2> g;
  g << b.y() - c.y(), c.x() - b.x(),
       c.y() - a.y(), a.x() - c.x(),
       a.y() - b.y(), b.x() - a.x();
  return g / cross(b - a, c - a);
}

Eigen::Matrix3d element_matrix(const Vec2& a, const Vec2& b, const Vec2& c, double gamma) {
  const double twice_area = cross(b - a, c - a);
  // Rows are grad(lambda_i) * 2|T|.
  Eigen::Matrix<double, 3, 2> g;
  g << b.y() - c.y(), c.x() - b.x(),
       c.y() - a.y(), a.x() - c.x(),
       a.y() - b.y(), b.x() - a.x();
  return (gamma / (2.0 * twice_area)) * (g * g.transpose());
}

StiffnessSystem::StiffnessSystem(std::shared_ptr<const geometry::TriMesh> mesh, const probe::GammaField& gamma)
    : mesh_(std::move(mesh)) {
  const auto& m = *mesh_;
  const int n = static_cast<int>(m.vertex_count());

  is_dirichlet_ = m.dirichlet_mask();
  std::vector<int>& local = interior_index_;
  local.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (is_dirichlet_[v]) {
      dirichlet_.push_back(v);
    } else {
      local[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }

  std::vector<int> dirichlet_slot(n, -1);
  for (std::size_t i = 0; i < dirichlet_.size(); ++i) dirichlet_slot[dirichlet_[i]] = static_cast<int>(i);

  std::vector<Eigen::Triplet<double>> full, ii, id;
  full.reserve(9 * m.triangle_count());
  element_gamma_.resize(m.triangle_count());
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    const Vec2& a = m.vertices[tri[0]];
    const Vec2& b = m.vertices[tri[1]];
    const Vec2& c = m.vertices[tri[2]];
    const double g = gamma.value((a + b + c) / 3.0);
    if (!(g > 0.0) || !(cross(b - a, c - a) > 0.0)) {
      throw Error(fmt::format("mesh or gamma invalid: triangle {} has gamma {} or non-positive area", t, g));
    }
    element_gamma_[t] = g;
    const Eigen::Matrix3d ke = element_matrix(a, b, c, g);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int r = tri[i];
        const int s = tri[j];
        full.emplace_back(r, s, ke(i, j));
        if (is_dirichlet_[r]) continue;
        if (is_dirichlet_[s]) {
          id.emplace_back(local[r], dirichlet_slot[s], ke(i, j));
        } else {
          ii.emplace_back(local[r], local[s], ke(i, j));
        }
      }
    }
  }
  const auto ni = static_cast<Eigen::Index>(interior_.size());
  const auto nd = static_cast<Eigen::Index>(dirichlet_.size());
  k_full_.resize(n, n);
  k_full_.setFromTriplets(full.begin(), full.end());
  k_ii_.resize(ni, ni);
  k_ii_.setFromTriplets(ii.begin(), ii.end());
  k_id_.resize(ni, nd);
  k_id_.setFromTriplets(id.begin(), id.end());

  if (ni > 0) {
    factor_.compute(k_ii_);
    if (factor_.info() != Eigen::Success) throw Error("mesh or gamma invalid: interior stiffness block is not SPD");
  }
  mesh_hash_ = m.hash();
  gamma_hash_ = gamma.hash();
}

Eigen::VectorXd StiffnessSystem::solve_interior(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != static_cast<Eigen::Index>(interior_.size())) throw Error("interior right-hand side has wrong size");
  if (interior_.empty()) return rhs;
  Eigen::VectorXd x = factor_.solve(rhs);
  if (factor_.info() != Eigen::Success) throw Error("back-substitution failed");
  return x;
}

Eigen::VectorXd StiffnessSystem::solve_dirichlet_real(const Eigen::VectorXd& nodal) const {
  return solve_dirichlet_real(nodal, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior_.size())));
}

Eigen::VectorXd StiffnessSystem::solve_dirichlet_real(const Eigen::VectorXd& nodal, const Eigen::VectorXd& load) const {
  if (nodal.size() != static_cast<Eigen::Index>(node_count())) throw Error("mesh mismatch: data size differs from node count");
  Eigen::VectorXd ud(dirichlet_.size());
  for (std::size_t i = 0; i < dirichlet_.size(); ++i) ud[i] = nodal[dirichlet_[i]];
  const Eigen::VectorXd ui = solve_interior(load - k_id_ * ud);
  Eigen::VectorXd u(node_count());
  for (std::size_t i = 0; i < dirichlet_.size(); ++i) u[dirichlet_[i]] = ud[i];
  for (std::size_t i = 0; i < interior_.size(); ++i) u[interior_[i]] = ui[i];
  return u;
}

std::shared_ptr<const StiffnessSystem> assemble(std::shared_ptr<const geometry::TriMesh> mesh,
                                                const probe::GammaField& gamma) {
  return std::make_shared<const StiffnessSystem>(std::move(mesh), gamma);
}

FieldSolution solve_dirichlet(const StiffnessSystem& system, std::span<const std::complex<double>> data) {
  if (data.size() != system.node_count()) throw Error("mesh mismatch: data size differs from node count");
  Eigen::VectorXd re(data.size()), im(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    re[i] = data[i].real();
    im[i] = data[i].imag();
  }
  return {system.solve_dirichlet_real(re), system.solve_dirichlet_real(im)};
}

double dirichlet_energy(const StiffnessSystem& system, const FieldSolution& field) {
  if (field.size() != system.node_count()) throw Error("mesh mismatch: field size differs from node count");
  const auto& k = system.matrix();
  return field.re.dot(k * field.re) + field.im.dot(k * field.im);
}

double element_energy(const geometry::TriMesh& mesh, std::span<const double> element_gamma,
                      std::span<const int> triangles, const FieldSolution& field) {
  if (field.size() < mesh.vertex_count()) throw Error("mesh mismatch: field shorter than node count");
  double total = 0.0;
  for (int t : triangles) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Matrix3d ke =
        element_matrix(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]], element_gamma[t]);
    const Eigen::Vector3d re(field.re[tri[0]], field.re[tri[1]], field.re[tri[2]]);
    const Eigen::Vector3d im(field.im[tri[0]], field.im[tri[1]], field.im[tri[2]]);
    total += re.dot(ke * re) + im.dot(ke * im);
  }
  return total;
}

double dtn_pairing(const StiffnessSystem& system, std::span<const double> f, std::span<const double> g) {
  if (f.size() != system.node_count() || g.size() != system.node_count()) {
    throw Error("mesh mismatch: data size differs from node count");
  }
  const Eigen::VectorXd uf = system.solve_dirichlet_real(Eigen::Map<const Eigen::VectorXd>(f.data(), f.size()));
  const Eigen::VectorXd ug = system.solve_dirichlet_real(Eigen::Map<const Eigen::VectorXd>(g.data(), g.size()));
  return uf.dot(system.matrix() * ug);
}

}  // namespace slabprobe::solver
