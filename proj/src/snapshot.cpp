#include "degen/snapshot.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace degen {

void write_snapshot(std::ostream& os, const ScalarField& f, double time) {
  const Grid& g = f.grid();
  os << std::setprecision(17);
  os << g.dim() << ' ' << g.nx();
  if (g.dim() == 2) os << ' ' << g.ny();
  os << ' ' << g.h(0);
  if (g.dim() == 2) os << ' ' << g.h(1);
  os << ' ' << time << '\n';
  for (double x : f.values()) os << x << '\n';
}

void write_snapshot(const std::string& path, const ScalarField& f, double time) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open snapshot file for writing: " + path);
  write_snapshot(os, f, time);
}

FieldSnapshot read_snapshot(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("snapshot: missing header");
  std::istringstream hs(header);
  int dim = 0;
  if (!(hs >> dim) || (dim != 1 && dim != 2)) throw std::runtime_error("snapshot: bad dimension");
  int n[2] = {0, 1};
  double h[2] = {0.0, 1.0};
  double time = 0.0;
  for (int a = 0; a < dim; ++a) {
    if (!(hs >> n[a])) throw std::runtime_error("snapshot: bad cell count");
  }
  for (int a = 0; a < dim; ++a) {
    if (!(hs >> h[a])) throw std::runtime_error("snapshot: bad spacing");
  }
  if (!(hs >> time)) throw std::runtime_error("snapshot: missing time");
  const double lengths[] = {n[0] * h[0], n[1] * h[1]};
  const Grid grid = Grid::make(dim, lengths, n);
  std::vector<double> values;
  values.reserve(grid.size());
  double x = 0.0;
  while (is >> x) values.push_back(x);
  if (values.size() != grid.size()) {
    throw std::runtime_error("snapshot: expected " + std::to_string(grid.size()) + " values, got " +
                             std::to_string(values.size()));
  }
  return FieldSnapshot{ScalarField(grid, std::move(values)), time};
}

FieldSnapshot read_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open snapshot file: " + path);
  return read_snapshot(is);
}

}  // namespace degen
