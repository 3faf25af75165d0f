#pragma once

#include "ekv/dynamics.hpp"

#include <string>
#include <vector>

namespace ekv {

// Nodal fields on the collocation grid.  On disk: one line of JSON header
// (grid, time, field names, units, component counts, byte offsets) followed
// by little-endian float64 blocks, one per field, components outermost and
// node index n = i + nx*j innermost.
struct SnapshotField {
  std::string name;
  std::string units;
  Eigen::MatrixXd values;  // N × components
};

struct Snapshot {
  int nx = 0, ny = 0;
  double Lx = 1.0, Ly = 1.0;
  double time = 0.0;
  std::vector<SnapshotField> fields;
  const SnapshotField& field(const std::string& name) const;
};

Snapshot make_snapshot(const Model& m, const State& s);
void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);
// Legacy VTK (ASCII STRUCTURED_POINTS) for visualization tools.
void write_vtk(const std::string& path, const Snapshot& snap);

}  // namespace ekv
