#pragma once

#include "hyperforge/curvatureflow.hpp"
#include "hyperforge/curvebuilder.hpp"
#include "hyperforge/hypersurface.hpp"

#include <string>
#include <vector>

namespace hyperforge::io {

using curvatureflow::Trajectory;
using curvebuilder::FramedCurveSample;
using hypersurface::CurvatureReport;
using hypersurface::HypersurfaceSample;

// Doubles are written with 17 significant digits throughout, so a
// parse/serialize round trip is byte-stable.

std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const std::string& text);

/// CSV columns: t, pos(3), tangent(3), normal(3), alpha, beta, phi.
std::string curve_to_csv(const std::vector<FramedCurveSample>& curve);
std::vector<FramedCurveSample> curve_from_csv(const std::string& text);

/// CSV columns: t, theta1, theta2, point re/im (6), eigs (3), phi.
std::string samples_to_csv(const std::vector<HypersurfaceSample>& samples);

/// Plain parsed sample row (export paths do not rebuild frames).
struct SampleRow {
  double t, theta1, theta2;
  double point[6];  // re0, im0, re1, im1, re2, im2
  double eigs[3];
  double phi;
};

std::vector<SampleRow> sample_rows_from_csv(const std::string& text);
std::string sample_rows_to_csv(const std::vector<SampleRow>& rows);

/// JSON mesh {dims, vertices, scalars} for external plotting; dims are
/// inferred from the distinct parameter values and must factor the row count.
std::string sample_rows_to_mesh_json(const std::vector<SampleRow>& rows);

std::string report_to_json(const CurvatureReport& report);

std::string read_file(const std::string& path);

/// Write-to-temporary-and-rename, so concurrent sweep instances never
/// observe partial files.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hyperforge::io
