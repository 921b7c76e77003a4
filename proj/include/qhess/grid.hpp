#pragma once

// Uniform tensor grids on [-L, L]^{4n} and scalar fields over them.
//
// Flattening is row-major by axis index (axis 0 slowest, axis 4n-1 fastest).
// Stencils eat one cell per derivative order from each face; the interior contract
// used by consumers is "at least two cells from every face", tracked per field via
// `margin`. Values outside a field's margin are stored but carry no meaning.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qhess/util.hpp"

namespace qhess {

struct GridSpec {
  int n = 1;          // quaternionic dimension; axes = 4n
  double extent = 1;  // per-axis range [-extent, extent]
  int points = 5;     // per-axis sample count, odd, >= 5

  int axes() const { return 4 * n; }
  double spacing() const { return 2.0 * extent / (points - 1); }
  double coord(int idx) const { return -extent + spacing() * idx; }
  std::size_t total() const;
  std::vector<std::size_t> strides() const;
  void validate() const;

  bool operator==(const GridSpec& o) const {
    return n == o.n && extent == o.extent && points == o.points;
  }
};

struct GridField {
  GridSpec spec;
  int margin = 0;
  std::vector<double> v;

  GridField() = default;
  explicit GridField(const GridSpec& s, int margin_ = 0)
      : spec(s), margin(margin_), v(s.total(), 0.0) {}

  double& at(std::size_t flat) { return v[flat]; }
  double at(std::size_t flat) const { return v[flat]; }
};

// Count of points with all indices in [margin, points-1-margin].
std::size_t interior_count(const GridSpec& s, int margin);

// k-th interior point (row-major over the shrunken box): fills idx[axes] and
// returns the flat index.
std::size_t interior_point(const GridSpec& s, int margin, std::size_t k, int* idx);

// Evaluates fn(x) at every grid point; x has 4n entries.
GridField field_from_function(const GridSpec& s,
                              const std::function<double(const double*)>& fn);

// Serialization: flat binary with a JSON header (bit-exact round trip), and a CSV
// variant whose first record holds the same header as a single quoted field.
void save_field_binary(const std::string& path, const GridField& f);
GridField load_field_binary(const std::string& path);
void save_field_csv(const std::string& path, const GridField& f);
GridField load_field_csv(const std::string& path);

}  // namespace qhess
