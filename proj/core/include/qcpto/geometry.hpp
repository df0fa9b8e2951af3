#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qcpto/model.hpp"

namespace qcpto {

using Triangle = std::array<Vec2, 3>;

struct GridSpec {
  Vec2 origin{0.0, 0.0};
  double cell_size = 1.0;
  int width = 200;
  int height = 200;

  Vec2 cell_center(int col, int row) const {
    return {origin.x + (col + 0.5) * cell_size, origin.y + (row + 0.5) * cell_size};
  }
  std::size_t cells() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

  /// Grid covering the region with square cells.
  static GridSpec covering(const Region& region, double cell_size);
};

/// Binary raster, row-major, one bit per cell.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  bool get(int col, int row) const;
  void set(int col, int row);
  std::size_t count() const;
  bool none() const { return count() == 0; }

  OccupancyGrid& operator|=(const OccupancyGrid& other);
  OccupancyGrid& operator&=(const OccupancyGrid& other);
  /// Clears every bit set in other.
  OccupancyGrid& subtract(const OccupancyGrid& other);

  std::span<const std::uint64_t> words() const { return words_; }
  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.words_ == b.words_;
  }

 private:
  GridSpec spec_;
  std::vector<std::uint64_t> words_;
};

/// |a ∩ b|
std::size_t count_and(const OccupancyGrid& a, const OccupancyGrid& b);
/// |a ∩ b \ c|
std::size_t count_and_not(const OccupancyGrid& a, const OccupancyGrid& b, const OccupancyGrid& c);

/// Sets every cell whose center lies inside or on the triangle. Degenerate
/// triangles rasterize to nothing.
OccupancyGrid rasterize_triangle(const Triangle& tri, const GridSpec& spec);

/// Isosceles sensor wedge: apex at the vehicle, axis along its heading.
Triangle fov_triangle(const VehicleState& v, double range, double half_angle);

/// How the two directional gains of a pair are folded into q_ik.
enum class PairCombine { Sum, Max, Mean };

/// Symmetric n×n shared-interest matrix with zero diagonal.
class QualityMatrix {
 public:
  QualityMatrix() = default;
  explicit QualityMatrix(int n) : n_(n), q_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}

  int size() const { return n_; }
  double operator()(int i, int k) const { return q_[index(i, k)]; }
  void set(int i, int k, double value) {
    q_[index(i, k)] = value;
    q_[index(k, i)] = value;
  }
  /// Σ_k q_ik
  double row_sum(int i) const;
  QualityMatrix scaled(double factor) const;

  friend bool operator==(const QualityMatrix&, const QualityMatrix&) = default;

 private:
  std::size_t index(int i, int k) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(k);
  }
  int n_ = 0;
  std::vector<double> q_;
};

/// Rasterized ROIs and FOVs of a set of users on one shared grid.
class CoverageScene {
 public:
  CoverageScene(const GridSpec& spec, std::span<const Roi> rois, std::span<const Triangle> fovs);

  int size() const { return static_cast<int>(rois_.size()); }
  const GridSpec& spec() const { return spec_; }
  const OccupancyGrid& roi(int i) const { return rois_[static_cast<std::size_t>(i)]; }
  const OccupancyGrid& fov(int i) const { return fovs_[static_cast<std::size_t>(i)]; }
  std::size_t roi_cells(int i) const { return roi_cells_[static_cast<std::size_t>(i)]; }

  /// Fraction of ROI_i covered by FOV_i together with the collaborators' FOVs.
  /// Throws EmptyRoi when ROI_i has no cells.
  double detected_awareness(int i, std::span<const int> collaborators) const;

  /// g(i←k): share of ROI_i that FOV_k covers and FOV_i does not.
  double gain(int i, int k) const;

  double shared_interest(int i, int k, PairCombine combine = PairCombine::Sum) const;

  /// Pairwise shared interest over `users` (indices into this scene), in that order.
  QualityMatrix build_quality_matrix(std::span<const int> users,
                                     PairCombine combine = PairCombine::Sum) const;

 private:
  GridSpec spec_;
  std::vector<OccupancyGrid> rois_;
  std::vector<OccupancyGrid> fovs_;
  std::vector<std::size_t> roi_cells_;
};

double detected_awareness(int i, std::span<const int> collaborators, std::span<const Roi> rois,
                          std::span<const Triangle> fovs, const GridSpec& spec);
double shared_interest(int i, int k, std::span<const Roi> rois, std::span<const Triangle> fovs,
                       const GridSpec& spec, PairCombine combine = PairCombine::Sum);
QualityMatrix build_quality_matrix(std::span<const int> users, std::span<const Roi> rois,
                                   std::span<const Triangle> fovs, const GridSpec& spec,
                                   PairCombine combine = PairCombine::Sum);

/// Binary PGM (P5) dump, 255 for set cells, top row = highest y.
void write_pgm(const OccupancyGrid& grid, const std::filesystem::path& path);

}  // namespace qcpto
