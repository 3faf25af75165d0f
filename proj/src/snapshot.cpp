#include "ekv/snapshot.hpp"

#include "ekv/errors.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>

namespace ekv {

const SnapshotField& Snapshot::field(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return f;
  throw Error(ErrorKind::UsageError, "snapshot has no field " + name);
}

Snapshot make_snapshot(const Model& m, const State& s) {
  const Grid2D& g = m.quadrature().grid;
  Snapshot snap;
  snap.nx = g.nx;
  snap.ny = g.ny;
  snap.Lx = g.Lx;
  snap.Ly = g.Ly;
  snap.time = s.t;
  const Kinematics kin = m.kinematics(s);
  const Eigen::VectorXd theta = m.temperature_space().eval(s.theta, 0);
  Eigen::VectorXd J(g.size());
  for (int n = 0; n < g.size(); ++n) J(n) = det<2, double>(unflatten(s.F, n));
  snap.fields.push_back({"rho", "kg/m^3", s.rho});
  snap.fields.push_back({"velocity", "m/s", kin.v});
  snap.fields.push_back({"theta", "K", theta});
  snap.fields.push_back({"F", "1", s.F});
  snap.fields.push_back({"det_F", "1", J});
  if (s.inv_det.size()) snap.fields.push_back({"inv_det_F", "1", s.inv_det});
  if (s.xi.size()) snap.fields.push_back({"return_map", "m", s.xi});
  return snap;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
  nlohmann::json h;
  h["format"] = "ekv-grid-snapshot";
  h["version"] = 1;
  h["nx"] = snap.nx;
  h["ny"] = snap.ny;
  h["Lx"] = snap.Lx;
  h["Ly"] = snap.Ly;
  h["time"] = snap.time;
  h["dtype"] = "float64";
  h["byte_order"] = "little";
  h["layout"] = "component-major, node n = i + nx*j, cell-centred";
  size_t offset = 0;
  for (const auto& f : snap.fields) {
    h["fields"].push_back({{"name", f.name},
                           {"units", f.units},
                           {"components", f.values.cols()},
                           {"offset", offset}});
    offset += sizeof(double) * f.values.size();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot write " + path);
  out << h.dump() << '\n';
  for (const auto& f : snap.fields) out.write(reinterpret_cast<const char*>(f.values.data()), sizeof(double) * f.values.size());
  if (!out) throw Error(ErrorKind::IOError, "write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad snapshot header: ") + e.what());
  }
  Snapshot s;
  s.nx = h.at("nx");
  s.ny = h.at("ny");
  s.Lx = h.at("Lx");
  s.Ly = h.at("Ly");
  s.time = h.at("time");
  const std::streamoff base = in.tellg();
  for (const auto& f : h.at("fields")) {
    SnapshotField sf;
    sf.name = f.at("name");
    sf.units = f.at("units");
    const int nc = f.at("components");
    const size_t off = f.at("offset");
    sf.values.resize(static_cast<Eigen::Index>(s.nx) * s.ny, nc);
    in.seekg(base + static_cast<std::streamoff>(off));
    in.read(reinterpret_cast<char*>(sf.values.data()), sizeof(double) * sf.values.size());
    if (!in) throw Error(ErrorKind::IOError, "truncated snapshot " + path);
    s.fields.push_back(std::move(sf));
  }
  return s;
}

void write_vtk(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IOError, "cannot write " + path);
  out.precision(17);
  const double hx = snap.Lx / snap.nx, hy = snap.Ly / snap.ny;
  out << "# vtk DataFile Version 3.0\n";
  out << "grid snapshot t=" << snap.time << "\n";
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << snap.nx << ' ' << snap.ny << " 1\n";
  out << "ORIGIN " << 0.5 * hx << ' ' << 0.5 * hy << " 0\n";
  out << "SPACING " << hx << ' ' << hy << " 1\n";
  out << "POINT_DATA " << snap.nx * snap.ny << "\n";
  for (const auto& f : snap.fields) {
    const auto N = f.values.rows();
    if (f.values.cols() == 2) {
      out << "VECTORS " << f.name << " double\n";
      for (Eigen::Index n = 0; n < N; ++n) out << f.values(n, 0) << ' ' << f.values(n, 1) << " 0\n";
    } else {
      for (Eigen::Index c = 0; c < f.values.cols(); ++c) {
        out << "SCALARS " << f.name << (f.values.cols() > 1 ? "_" + std::to_string(c) : "") << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (Eigen::Index n = 0; n < N; ++n) out << f.values(n, c) << '\n';
      }
    }
  }
}

}  // namespace ekv
