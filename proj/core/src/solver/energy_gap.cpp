#include "slabprobe/solver/energy_gap.hpp"

#include <algorithm>
#include <cmath>

#include "slabprobe/error.hpp"
#include "quadrature.hpp"

namespace slabprobe::solver {

namespace {

void check_nested(const geometry::NestedMeshPair& pair) {
  const auto& full = *pair.full;
  const auto& holed = *pair.holed;
  bool ok = holed.vertex_count() <= full.vertex_count() && holed.triangle_count() <= full.triangle_count() &&
            holed.triangle_count() + pair.hole_triangles.size() == full.triangle_count();
  for (std::size_t v = 0; ok && v < holed.vertex_count(); ++v) ok = holed.vertices[v] == full.vertices[v];
  for (std::size_t t = 0; ok && t < holed.triangle_count(); ++t) ok = holed.triangles[t] == full.triangles[t];
  if (!ok) throw Error("meshes not nested: holed mesh is not a prefix of the full mesh");
}

Eigen::VectorXd interior_part(const StiffnessSystem& system, const Eigen::VectorXd& nodal) {
  const auto& interior = system.interior_nodes();
  Eigen::VectorXd out(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) out[i] = nodal[interior[i]];
  return out;
}

Eigen::VectorXd scatter_interior(const StiffnessSystem& system, const Eigen::VectorXd& values) {
  const auto& interior = system.interior_nodes();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(system.node_count());
  for (std::size_t i = 0; i < interior.size(); ++i) out[interior[i]] = values[i];
  return out;
}

struct ComplexVector {
  Eigen::VectorXd re;
  Eigen::VectorXd im;
};

double triangle_area(const geometry::TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  return 0.5 * cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]], mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
}

// Load vector int div(gamma grad V) * lambda_i over triangles [0, count) for
// interior nodes of `system`.
void add_residual_load(const StiffnessSystem& system, std::size_t count, const KnownField& known, ComplexVector& load) {
  const auto& mesh = system.mesh();
  const auto& index = system.interior_index();
  const auto& rule = detail::triangle_rule();
  for (std::size_t t = 0; t < count; ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.vertices[tri[0]];
    const Vec2& b = mesh.vertices[tri[1]];
    const Vec2& c = mesh.vertices[tri[2]];
    const Vec2 centroid = (a + b + c) / 3.0;
    const double reach = std::max({(a - centroid).norm(), (b - centroid).norm(), (c - centroid).norm()});
    if (known.residual_free(centroid, reach)) continue;
    const double area = triangle_area(mesh, static_cast<int>(t));
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const auto& l = rule.bary[q];
      const std::complex<double> f = known.residual(l[0] * a + l[1] * b + l[2] * c) * (rule.weight[q] * area);
      for (int j = 0; j < 3; ++j) {
        const int i = index[tri[j]];
        if (i < 0) continue;
        load.re[i] += f.real() * l[j];
        load.im[i] += f.imag() * l[j];
      }
    }
  }
}

// Load vector int_{cavity boundary} gamma (grad V . n_D) lambda_i, n_D the
// outward normal of the cavity. Cavity edges keep the holed domain on their left.
void add_cavity_flux_load(const StiffnessSystem& holed, const probe::GammaField& gamma, const KnownField& known,
                          ComplexVector& load) {
  const auto& mesh = holed.mesh();
  const auto& index = holed.interior_index();
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != geometry::BoundaryTag::Cavity) continue;
    const Vec2& a = mesh.vertices[e.a];
    const Vec2& b = mesh.vertices[e.b];
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 n_d(-d.y() / len, d.x() / len);
    for (std::size_t q = 0; q < detail::kGaussNodes.size(); ++q) {
      const double s = detail::kGaussNodes[q];
      const Vec2 x = a + s * d;
      const FieldSample v = known.sample(x);
      const std::complex<double> flux =
          gamma.value(x) * (v.dx * n_d.x() + v.dy * n_d.y()) * (detail::kGaussWeights[q] * len);
      const int ia = index[e.a];
      const int ib = index[e.b];
      if (ia >= 0) {
        load.re[ia] += flux.real() * (1.0 - s);
        load.im[ia] += flux.imag() * (1.0 - s);
      }
      if (ib >= 0) {
        load.re[ib] += flux.real() * s;
        load.im[ib] += flux.imag() * s;
      }
    }
  }
}

// Sum over triangles of gamma_T * int_T |grad V + grad c1 + grad c2|^2, where
// c1, c2 are P1 fields (c2 may be empty).
double split_energy(const StiffnessSystem& system, std::span<const int> triangles, std::size_t count,
                    const KnownField& known, const FieldSolution& c1, const FieldSolution* c2) {
  const auto& mesh = system.mesh();
  const auto& rule = detail::triangle_rule();
  const auto& gam = system.element_gamma();
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const int t = triangles.empty() ? static_cast<int>(k) : triangles[k];
    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.vertices[tri[0]];
    const Vec2& b = mesh.vertices[tri[1]];
    const Vec2& c = mesh.vertices[tri[2]];
    const Eigen::Matrix<double, 3, 2> g = hat_gradients(a, b, c);
    Eigen::Vector2d gre = Eigen::Vector2d::Zero();
    Eigen::Vector2d gim = Eigen::Vector2d::Zero();
    for (int j = 0; j < 3; ++j) {
      double re = c1.re[tri[j]];
      double im = c1.im[tri[j]];
      if (c2) {
        re += c2->re[tri[j]];
        im += c2->im[tri[j]];
      }
      gre += re * g.row(j).transpose();
      gim += im * g.row(j).transpose();
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const auto& l = rule.bary[q];
      const FieldSample v = known.sample(l[0] * a + l[1] * b + l[2] * c);
      const std::complex<double> gx = v.dx + std::complex<double>(gre.x(), gim.x());
      const std::complex<double> gy = v.dy + std::complex<double>(gre.y(), gim.y());
      sum += rule.weight[q] * (std::norm(gx) + std::norm(gy));
    }
    total += gam[t] * triangle_area(mesh, t) * sum;
  }
  return total;
}

}  // namespace

NestedSystems assemble_nested(const geometry::NestedMeshPair& pair, const probe::GammaField& gamma,
                              SystemCache* cache) {
  check_nested(pair);
  auto build = [&](const std::shared_ptr<const geometry::TriMesh>& mesh) {
    return cache ? cache->get(mesh, gamma) : assemble(mesh, gamma);
  };
  NestedSystems out;
  out.pair = pair;
  out.gamma = gamma;
  out.full = build(pair.full);
  out.holed = pair.has_cavity() ? build(pair.holed) : out.full;
  return out;
}

EnergyGapResult energy_gap(const NestedSystems& systems, std::span<const std::complex<double>> data,
                           EnergyGapFields* fields) {
  const StiffnessSystem& full = *systems.full;
  const StiffnessSystem& holed = *systems.holed;
  if (data.size() != full.node_count()) throw Error("mesh mismatch: data size differs from full-mesh node count");

  const FieldSolution v = solve_dirichlet(full, data);
  EnergyGapResult r;
  r.e_full = dirichlet_energy(full, v);

  if (!systems.pair.has_cavity()) {
    r.e_holed = r.e_full;
    if (fields) fields->v = fields->u = v;
    return r;
  }

  const auto nh = static_cast<Eigen::Index>(holed.node_count());
  const SparseMatrix& kh = holed.matrix();
  const Eigen::VectorXd vre = v.re.head(nh);
  const Eigen::VectorXd vim = v.im.head(nh);
  const Eigen::VectorXd kv_re = kh * vre;
  const Eigen::VectorXd kv_im = kh * vim;

  // Cavity correction w = u - v: zero on Dirichlet nodes, K_h (v + w) = 0 on
  // interior nodes of the holed mesh.
  const Eigen::VectorXd wre = scatter_interior(holed, holed.solve_interior(-interior_part(holed, kv_re)));
  const Eigen::VectorXd wim = scatter_interior(holed, holed.solve_interior(-interior_part(holed, kv_im)));
  const Eigen::VectorXd kw_re = kh * wre;
  const Eigen::VectorXd kw_im = kh * wim;

  r.term_D = element_energy(full.mesh(), full.element_gamma(), systems.pair.hole_triangles, v);
  r.term_diff = wre.dot(kw_re) + wim.dot(kw_im);
  const double cross = wre.dot(kv_re) + wim.dot(kv_im);

  FieldSolution u{vre + wre, vim + wim};
  r.e_holed = dirichlet_energy(holed, u);
  r.E = r.term_D - 2.0 * cross - r.term_diff;
  r.identity_residual = std::abs(r.E - (r.term_D + r.term_diff)) / std::max(r.E, 1e-300);
  if (fields) {
    fields->v = v;
    fields->u = std::move(u);
  }
  return r;
}

EnergyGapResult energy_gap(const NestedSystems& systems, std::span<const std::complex<double>> data,
                           const KnownField& background, EnergyGapFields* fields) {
  const StiffnessSystem& full = *systems.full;
  const StiffnessSystem& holed = *systems.holed;
  const auto& fmesh = full.mesh();
  if (data.size() != full.node_count()) throw Error("mesh mismatch: data size differs from full-mesh node count");

  // Correction c on the full mesh: c = data - V on Dirichlet nodes and
  // K c = int div(gamma grad V) lambda on interior nodes.
  const std::size_t nf = full.node_count();
  Eigen::VectorXd dre = Eigen::VectorXd::Zero(nf), dim = Eigen::VectorXd::Zero(nf);
  for (int v : full.dirichlet_nodes()) {
    const std::complex<double> diff = data[v] - background.sample(fmesh.vertices[v]).value;
    dre[v] = diff.real();
    dim[v] = diff.imag();
  }
  const auto ni_full = static_cast<Eigen::Index>(full.interior_nodes().size());
  ComplexVector load_c{Eigen::VectorXd::Zero(ni_full), Eigen::VectorXd::Zero(ni_full)};
  add_residual_load(full, fmesh.triangle_count(), background, load_c);
  const FieldSolution c{full.solve_dirichlet_real(dre, load_c.re), full.solve_dirichlet_real(dim, load_c.im)};

  EnergyGapResult r;
  r.e_full = split_energy(full, {}, fmesh.triangle_count(), background, c, nullptr);

  FieldSolution w{Eigen::VectorXd::Zero(holed.node_count()), Eigen::VectorXd::Zero(holed.node_count())};
  if (systems.pair.has_cavity()) {
    const auto nh = static_cast<Eigen::Index>(holed.node_count());
    const SparseMatrix& kh = holed.matrix();
    const Eigen::VectorXd kc_re = kh * c.re.head(nh);
    const Eigen::VectorXd kc_im = kh * c.im.head(nh);

    ComplexVector load{-interior_part(holed, kc_re), -interior_part(holed, kc_im)};
    add_residual_load(holed, holed.mesh().triangle_count(), background, load);
    add_cavity_flux_load(holed, systems.gamma, background, load);

    const Eigen::VectorXd wi_re = holed.solve_interior(load.re);
    const Eigen::VectorXd wi_im = holed.solve_interior(load.im);
    w.re = scatter_interior(holed, wi_re);
    w.im = scatter_interior(holed, wi_im);

    const auto& hole = systems.pair.hole_triangles;
    r.term_D = split_energy(full, hole, hole.size(), background, c, nullptr);
    r.term_diff = w.re.dot(kh * w.re) + w.im.dot(kh * w.im);
    // <grad v, grad w> in the same discrete sense as the load: -w . load.
    const double cross = -(wi_re.dot(load.re) + wi_im.dot(load.im));
    r.E = r.term_D - 2.0 * cross - r.term_diff;
    r.e_holed = (r.e_full - r.term_D) + 2.0 * cross + r.term_diff;
    r.identity_residual = std::abs(r.E - (r.term_D + r.term_diff)) / std::max(r.E, 1e-300);
  } else {
    r.e_holed = r.e_full;
  }

  if (fields) {
    FieldSolution v{Eigen::VectorXd(nf), Eigen::VectorXd(nf)};
    for (std::size_t i = 0; i < nf; ++i) {
      const std::complex<double> value = background.sample(fmesh.vertices[i]).value;
      v.re[i] = value.real() + c.re[i];
      v.im[i] = value.imag() + c.im[i];
    }
    const auto nh = static_cast<Eigen::Index>(holed.node_count());
    fields->u = FieldSolution{v.re.head(nh) + w.re, v.im.head(nh) + w.im};
    fields->v = std::move(v);
  }
  return r;
}

}  // namespace slabprobe::solver
