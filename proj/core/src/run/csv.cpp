#include "slabprobe/run/csv.hpp"

#include <ostream>

#include <fmt/format.h>

#include "slabprobe/probe/probe.hpp"

namespace slabprobe::run {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

void write_indicator_csv(std::ostream& out, std::string_view run_id, const std::vector<indicator::IndicatorSeries>& series) {
  out << "run_id,probe_id,p_x,p_y,t,h,inv_h,E,identity_residual,lateral_leak,localized\n";
  for (const auto& s : series) {
    for (const auto& e : s.entries) {
      out << run_id << ',' << s.probe_id << ',' << format_double(s.p.x()) << ',' << format_double(s.p.y()) << ','
          << format_double(s.t) << ',' << format_double(e.h) << ',' << format_double(e.inv_h) << ','
          << format_double(e.E) << ',' << format_double(e.identity_residual) << ',' << format_double(e.lateral_leak)
          << ',' << (s.localized() ? "true" : "false") << '\n';
    }
  }
}

void write_slope_csv(std::ostream& out, const std::vector<SlopeRow>& rows) {
  out << "probe_id,t,slope,intercept,r2,classification\n";
  for (const auto& r : rows) {
    // A dead series has no fit; it is reported as OUTSIDE with nan fit columns.
    auto num = [&](double v) { return r.classification.dead ? std::string("nan") : format_double(v); };
    out << r.probe_id << ',' << format_double(r.t) << ',' << num(r.fit.slope) << ',' << num(r.fit.intercept) << ','
        << num(r.fit.r2) << ',' << to_string(r.classification.kind) << '\n';
  }
}

void write_distances_csv(std::ostream& out, const reconstruct::DistanceMap& map) {
  out << "probe_id,p_x,p_y,status,d_hat,n_bisections\n";
  for (const auto& r : map.records) {
    out << r.probe_id << ',' << format_double(r.p.x()) << ',' << format_double(r.p.y()) << ',' << to_string(r.status)
        << ',' << (r.status == reconstruct::ProbeStatus::Ok ? format_double(r.d_hat) : std::string("nan")) << ','
        << r.n_bisections << '\n';
  }
}

void write_mask_grid(std::ostream& out, const reconstruct::RegionMask& mask) {
  for (int j = mask.ny - 1; j >= 0; --j) {
    std::string row(static_cast<std::size_t>(mask.nx), 'P');
    for (int i = 0; i < mask.nx; ++i) {
      if (mask.at(i, j)) row[static_cast<std::size_t>(i)] = 'C';
    }
    out << row << '\n';
  }
}

void write_mask_header(std::ostream& out, const reconstruct::RegionMask& mask) {
  out << "{\n"
      << "  \"origin\": [" << format_double(mask.origin.x()) << ", " << format_double(mask.origin.y()) << "],\n"
      << "  \"spacing\": [" << format_double(mask.dx) << ", " << format_double(mask.dy) << "],\n"
      << "  \"shape\": [" << mask.ny << ", " << mask.nx << "],\n"
      << "  \"row_order\": \"top_to_bottom\",\n"
      << "  \"cell_center\": \"origin + ((i + 0.5) * spacing[0], (j + 0.5) * spacing[1])\",\n"
      << "  \"carved_cells\": " << mask.carved_count() << "\n"
      << "}\n";
}

void write_boundary_csv(std::ostream& out, const reconstruct::BoundaryEstimate& estimate) {
  out << "curve_id,vertex_index,x,y\n";
  for (std::size_t c = 0; c < estimate.curves.size(); ++c) {
    const auto& pts = estimate.curves[c].points;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      out << c << ',' << k << ',' << format_double(pts[k].x()) << ',' << format_double(pts[k].y()) << '\n';
    }
  }
}

void write_solution_csv(std::ostream& out, const geometry::TriMesh& mesh, const solver::FieldSolution& field) {
  out << "x,y,re,im\n";
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    out << format_double(mesh.vertices[i].x()) << ',' << format_double(mesh.vertices[i].y()) << ','
        << format_double(field.re[i]) << ',' << format_double(field.im[i]) << '\n';
  }
}

void write_energy_csv(std::ostream& out, const solver::EnergyGapResult& r) {
  out << "E,e_full,e_holed,term_D,term_diff,identity_residual\n"
      << format_double(r.E) << ',' << format_double(r.e_full) << ',' << format_double(r.e_holed) << ','
      << format_double(r.term_D) << ',' << format_double(r.term_diff) << ',' << format_double(r.identity_residual)
      << '\n';
}

}  // namespace slabprobe::run
