#include "degen/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace degen {

Grid Grid::make(int dim, std::span<const double> lengths, std::span<const int> cells) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2 (analysis is restricted to n <= 2), got " +
                                std::to_string(dim));
  }
  if (lengths.size() < static_cast<std::size_t>(dim) || cells.size() < static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("grid needs one length and one cell count per axis");
  }
  Grid g;
  g.dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[a] > 0.0)) throw std::invalid_argument("grid lengths must be positive");
    if (cells[a] < 2) throw std::invalid_argument("grid needs at least 2 cells per axis");
    g.lengths_[a] = lengths[a];
    g.cells_[a] = cells[a];
    g.spacing_[a] = lengths[a] / cells[a];
  }
  if (dim == 1) {
    g.lengths_[1] = 1.0;
    g.cells_[1] = 1;
    g.spacing_[1] = 1.0;
  }
  return g;
}

Grid Grid::line(double length, int cells) {
  const double l[] = {length};
  const int c[] = {cells};
  return make(1, l, c);
}

Grid Grid::rect(double lx, double ly, int nx, int ny) {
  const double l[] = {lx, ly};
  const int c[] = {nx, ny};
  return make(2, l, c);
}

double Grid::h_min() const {
  return dim_ == 1 ? spacing_[0] : std::min(spacing_[0], spacing_[1]);
}

double Grid::cell_volume() const {
  return dim_ == 1 ? spacing_[0] : spacing_[0] * spacing_[1];
}

double Grid::volume() const {
  return dim_ == 1 ? lengths_[0] : lengths_[0] * lengths_[1];
}

}  // namespace degen
