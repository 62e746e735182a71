#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "slabprobe/geometry/mesh.hpp"
#include "slabprobe/probe/gamma_field.hpp"

namespace slabprobe::solver {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Gradients of the three P1 hat functions of a triangle (one per row).
Eigen::Matrix<double, 3, 2> hat_gradients(const Vec2& a, const Vec2& b, const Vec2& c);

/// P1 element stiffness matrix gamma * |T| * grad(lambda_i) . grad(lambda_j).
Eigen::Matrix3d element_matrix(const Vec2& a, const Vec2& b, const Vec2& c, double gamma);

/// Assembled and factorized conductivity operator on one mesh. Nodes on
/// SLAB_TOP, SLAB_BOTTOM and LATERAL edges are Dirichlet; CAVITY edges are
/// natural. Immutable once built; solves may run concurrently.
class StiffnessSystem {
 public:
  StiffnessSystem(std::shared_ptr<const geometry::TriMesh> mesh, const probe::GammaField& gamma);

  const geometry::TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const geometry::TriMesh>& mesh_ptr() const { return mesh_; }
  std::size_t node_count() const { return mesh_->vertex_count(); }

  /// Full symmetric stiffness matrix over all nodes.
  const SparseMatrix& matrix() const { return k_full_; }
  const std::vector<int>& interior_nodes() const { return interior_; }
  const std::vector<int>& dirichlet_nodes() const { return dirichlet_; }
  /// Node -> position in interior_nodes(), or -1 for Dirichlet nodes.
  const std::vector<int>& interior_index() const { return interior_index_; }
  const std::vector<bool>& dirichlet_mask() const { return is_dirichlet_; }
  /// Centroid conductivity per triangle.
  const std::vector<double>& element_gamma() const { return element_gamma_; }

  /// Solves K_II x = rhs for a vector over interior nodes (interior ordering).
  Eigen::VectorXd solve_interior(const Eigen::VectorXd& rhs) const;

  /// Nodal solution with prescribed values on Dirichlet nodes; entries of
  /// `nodal` at interior nodes are ignored.
  Eigen::VectorXd solve_dirichlet_real(const Eigen::VectorXd& nodal) const;

  /// As above with an additional load vector on interior nodes (interior
  /// ordering): K_II u_I = load - K_ID u_D.
  Eigen::VectorXd solve_dirichlet_real(const Eigen::VectorXd& nodal, const Eigen::VectorXd& load) const;

  std::uint64_t mesh_hash() const { return mesh_hash_; }
  std::uint64_t gamma_hash() const { return gamma_hash_; }

 private:
  std::shared_ptr<const geometry::TriMesh> mesh_;
  SparseMatrix k_full_;
  SparseMatrix k_ii_;
  SparseMatrix k_id_;
  Eigen::SimplicialLLT<SparseMatrix> factor_;
  std::vector<int> interior_;
  std::vector<int> dirichlet_;
  std::vector<int> interior_index_;
  std::vector<bool> is_dirichlet_;
  std::vector<double> element_gamma_;
  std::uint64_t mesh_hash_ = 0;
  std::uint64_t gamma_hash_ = 0;
};

std::shared_ptr<const StiffnessSystem> assemble(std::shared_ptr<const geometry::TriMesh> mesh,
                                                const probe::GammaField& gamma);

/// Complex nodal field stored as real and imaginary parts.
struct FieldSolution {
  Eigen::VectorXd re;
  Eigen::VectorXd im;

  std::size_t size() const { return static_cast<std::size_t>(re.size()); }
  std::complex<double> at(std::size_t i) const { return {re[i], im[i]}; }
};

/// Solves div(gamma grad u) = 0 with Dirichlet data given per node (entries at
/// interior nodes are ignored). Real and imaginary parts are solved separately.
FieldSolution solve_dirichlet(const StiffnessSystem& system, std::span<const std::complex<double>> data);

/// Integral of gamma |grad u|^2 for a complex field (real + imaginary parts).
double dirichlet_energy(const StiffnessSystem& system, const FieldSolution& field);

/// Same integral restricted to a subset of triangles, by an element loop.
double element_energy(const geometry::TriMesh& mesh, std::span<const double> element_gamma,
                      std::span<const int> triangles, const FieldSolution& field);

/// Weak Dirichlet-to-Neumann pairing <Lambda f, g> = int gamma grad u_f . grad u_g
/// for real boundary data f, g.
double dtn_pairing(const StiffnessSystem& system, std::span<const double> f, std::span<const double> g);

}  // namespace slabprobe::solver
