#pragma once

#include <iosfwd>
#include <string>

#include "degen/field.hpp"

namespace degen {

struct FieldSnapshot {
  ScalarField field;
  double time = 0.0;
};

/// Plain-text snapshot: header "dim nx [ny] hx [hy] time", then one value per
/// line in row-major order (x fastest).
void write_snapshot(std::ostream& os, const ScalarField& f, double time);
void write_snapshot(const std::string& path, const ScalarField& f, double time);

/// Throws std::runtime_error on malformed input.
FieldSnapshot read_snapshot(std::istream& is);
FieldSnapshot read_snapshot(const std::string& path);

}  // namespace degen
