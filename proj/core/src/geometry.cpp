#include "qcpto/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qcpto/errors.hpp"

namespace qcpto {
namespace {

std::size_t word_count(const GridSpec& spec) { return (spec.cells() + 63) / 64; }

void require_same_shape(const OccupancyGrid& a, const OccupancyGrid& b) {
  if (a.words().size() != b.words().size()) throw std::invalid_argument("grid shapes differ");
}

}  // namespace

GridSpec GridSpec::covering(const Region& region, double cell_size) {
  if (!(cell_size > 0.0)) throw DomainError("cell_size must be positive");
  GridSpec spec;
  spec.origin = region.min;
  spec.cell_size = cell_size;
  spec.width = static_cast<int>(std::ceil(region.width() / cell_size - 1e-9));
  spec.height = static_cast<int>(std::ceil(region.height() / cell_size - 1e-9));
  return spec;
}

OccupancyGrid::OccupancyGrid(const GridSpec& spec) : spec_(spec), words_(word_count(spec), 0) {
  if (!(spec.cell_size > 0.0) || spec.width < 0 || spec.height < 0) {
    throw DomainError("invalid grid spec");
  }
}

bool OccupancyGrid::get(int col, int row) const {
  const std::size_t bit = static_cast<std::size_t>(row) * static_cast<std::size_t>(spec_.width) +
                          static_cast<std::size_t>(col);
  return ((words_[bit / 64] >> (bit % 64)) & 1U) != 0;
}

void OccupancyGrid::set(int col, int row) {
  const std::size_t bit = static_cast<std::size_t>(row) * static_cast<std::size_t>(spec_.width) +
                          static_cast<std::size_t>(col);
  words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
}

std::size_t OccupancyGrid::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

OccupancyGrid& OccupancyGrid::operator|=(const OccupancyGrid& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

OccupancyGrid& OccupancyGrid::operator&=(const OccupancyGrid& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

OccupancyGrid& OccupancyGrid::subtract(const OccupancyGrid& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::size_t count_and(const OccupancyGrid& a, const OccupancyGrid& b) {
  require_same_shape(a, b);
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
  }
  return n;
}

std::size_t count_and_not(const OccupancyGrid& a, const OccupancyGrid& b, const OccupancyGrid& c) {
  require_same_shape(a, b);
  require_same_shape(a, c);
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i] & ~c.words()[i]));
  }
  return n;
}

OccupancyGrid rasterize_triangle(const Triangle& tri, const GridSpec& spec) {
  OccupancyGrid grid(spec);
  const auto& [a, b, c] = tri;
  if (cross(b - a, c - a) == 0.0) return grid;

  const double min_x = std::min({a.x, b.x, c.x});
  const double max_x = std::max({a.x, b.x, c.x});
  const double min_y = std::min({a.y, b.y, c.y});
  const double max_y = std::max({a.y, b.y, c.y});
  // Cell centers satisfy origin + (i + 0.5)·size ∈ [min, max].
  auto first = [&](double lo, double origin) {
    return std::max(0, static_cast<int>(std::floor((lo - origin) / spec.cell_size - 0.5)));
  };
  auto last = [&](double hi, double origin, int extent) {
    return std::min(extent - 1, static_cast<int>(std::ceil((hi - origin) / spec.cell_size - 0.5)));
  };
  const int c0 = first(min_x, spec.origin.x);
  const int c1 = last(max_x, spec.origin.x, spec.width);
  const int r0 = first(min_y, spec.origin.y);
  const int r1 = last(max_y, spec.origin.y, spec.height);

  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      const Vec2 p = spec.cell_center(col, row);
      const double d1 = cross(b - a, p - a);
      const double d2 = cross(c - b, p - b);
      const double d3 = cross(a - c, p - c);
      const bool inside = (d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0) || (d1 <= 0.0 && d2 <= 0.0 && d3 <= 0.0);
      if (inside) grid.set(col, row);
    }
  }
  return grid;
}

Triangle fov_triangle(const VehicleState& v, double range, double half_angle) {
  if (!(range > 0.0)) throw DomainError("fov range must be positive");
  const Vec2 axis = unit_vector(v.heading);
  const Vec2 side{-axis.y, axis.x};
  const double half_width = range * std::tan(half_angle);
  const Vec2 base = v.position + range * axis;
  return {v.position, base + half_width * side, base - half_width * side};
}

double QualityMatrix::row_sum(int i) const {
  double s = 0.0;
  for (int k = 0; k < n_; ++k) s += (*this)(i, k);
  return s;
}

QualityMatrix QualityMatrix::scaled(double factor) const {
  QualityMatrix out = *this;
  for (double& v : out.q_) v *= factor;
  return out;
}

CoverageScene::CoverageScene(const GridSpec& spec, std::span<const Roi> rois,
                             std::span<const Triangle> fovs)
    : spec_(spec) {
  if (rois.size() != fovs.size()) throw std::invalid_argument("one ROI and one FOV per user");
  rois_.reserve(rois.size());
  fovs_.reserve(fovs.size());
  for (std::size_t i = 0; i < rois.size(); ++i) {
    rois_.push_back(rois[i].empty() ? OccupancyGrid(spec) : rasterize_triangle(rois[i].triangle, spec));
    fovs_.push_back(rasterize_triangle(fovs[i], spec));
    roi_cells_.push_back(rois_.back().count());
  }
}

double CoverageScene::detected_awareness(int i, std::span<const int> collaborators) const {
  const std::size_t total = roi_cells(i);
  if (total == 0) throw EmptyRoi("user " + std::to_string(i) + " has an empty ROI");
  OccupancyGrid covered = fov(i);
  for (int k : collaborators) {
    if (k != i) covered |= fov(k);
  }
  return static_cast<double>(count_and(roi(i), covered)) / static_cast<double>(total);
}

double CoverageScene::gain(int i, int k) const {
  const std::size_t total = roi_cells(i);
  if (total == 0) return 0.0;
  return static_cast<double>(count_and_not(roi(i), fov(k), fov(i))) / static_cast<double>(total);
}

double CoverageScene::shared_interest(int i, int k, PairCombine combine) const {
  const double ik = gain(i, k);
  const double ki = gain(k, i);
  switch (combine) {
    case PairCombine::Max:
      return std::max(ik, ki);
    case PairCombine::Mean:
      return 0.5 * (ik + ki);
    case PairCombine::Sum:
      break;
  }
  return ik + ki;
}

QualityMatrix CoverageScene::build_quality_matrix(std::span<const int> users,
                                                  PairCombine combine) const {
  const int n = static_cast<int>(users.size());
  QualityMatrix q(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      q.set(a, b, shared_interest(users[static_cast<std::size_t>(a)],
                                  users[static_cast<std::size_t>(b)], combine));
    }
  }
  return q;
}

double detected_awareness(int i, std::span<const int> collaborators, std::span<const Roi> rois,
                          std::span<const Triangle> fovs, const GridSpec& spec) {
  return CoverageScene(spec, rois, fovs).detected_awareness(i, collaborators);
}

double shared_interest(int i, int k, std::span<const Roi> rois, std::span<const Triangle> fovs,
                       const GridSpec& spec, PairCombine combine) {
  return CoverageScene(spec, rois, fovs).shared_interest(i, k, combine);
}

QualityMatrix build_quality_matrix(std::span<const int> users, std::span<const Roi> rois,
                                   std::span<const Triangle> fovs, const GridSpec& spec,
                                   PairCombine combine) {
  return CoverageScene(spec, rois, fovs).build_quality_matrix(users, combine);
}

void write_pgm(const OccupancyGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const GridSpec& spec = grid.spec();
  out << "P5\n" << spec.width << ' ' << spec.height << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(spec.width));
  for (int r = spec.height - 1; r >= 0; --r) {
    for (int c = 0; c < spec.width; ++c) {
      row[static_cast<std::size_t>(c)] = grid.get(c, r) ? static_cast<char>(255) : 0;
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace qcpto
