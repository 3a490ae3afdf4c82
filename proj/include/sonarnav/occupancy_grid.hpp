#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sonarnav/geometry.hpp"
#include "sonarnav/sensor.hpp"

namespace sonarnav {

struct LogOddsLimits {
  double min = -6.0;
  double max = 6.0;
  friend bool operator==(const LogOddsLimits&, const LogOddsLimits&) = default;
};

struct CellIndex {
  int ix = 0;
  int iy = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Uniform grid of log-odds occupancy values. Cell (ix, iy) covers
/// [origin + ix*res, origin + (ix+1)*res) on each axis; storage is row-major
/// with iy selecting the row. 0 means unknown.
class OccupancyGrid {
public:
  OccupancyGrid(Vec2 origin, double resolution, int width, int height, LogOddsLimits limits = {});

  const Vec2& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const LogOddsLimits& limits() const { return limits_; }
  std::span<const double> cells() const { return cells_; }

  Box extent() const;
  bool in_bounds(int ix, int iy) const { return ix >= 0 && iy >= 0 && ix < width_ && iy < height_; }
  std::optional<CellIndex> cell_of(const Vec2& p) const;
  Vec2 cell_center(int ix, int iy) const;

  double at(int ix, int iy) const { return cells_[index(ix, iy)]; }
  /// Stores `l` clamped to the grid's limits.
  void set(int ix, int iy, double l);
  /// Adds `delta` and clamps.
  void add(int ix, int iy, double delta) { set(ix, iy, at(ix, iy) + delta); }

  /// Number of cells with l != 0.
  std::size_t known_cells() const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

private:
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(ix);
  }

  Vec2 origin_;
  double resolution_;
  int width_;
  int height_;
  LogOddsLimits limits_;
  std::vector<double> cells_;
};

/// Fresh all-unknown grid.
OccupancyGrid new_grid(Vec2 origin, double resolution, int width, int height, LogOddsLimits limits = {});

/// Cells per side for a square covering a sensor disc of radius `max_range`.
int footprint_cells(double max_range, double resolution);

/// Global map covering `bounds` padded by the sensor range, so every local map fits.
OccupancyGrid global_grid_for(const Box& bounds, double max_range, double resolution,
                              LogOddsLimits limits = {});

/// Local map centred on `pose`, snapped to the global lattice. One cell wider than
/// the footprint so the whole sensor disc fits after snapping.
OccupancyGrid local_grid_for(const Pose& pose, double max_range, const OccupancyGrid& global);

double probability(double l);
double log_odds(double p);

enum class UpdateMode { Ray, Cone };

struct SonarInverseModel {
  double cone_half_angle = 0.2618;            // rad, cone mode only
  double l_occ = 0.85;
  double l_free = -0.4;
  std::optional<double> occupied_band;        // m; empty = one grid resolution
  UpdateMode mode = UpdateMode::Ray;

  double band(double resolution) const { return occupied_band.value_or(resolution); }
  void validate() const;
};

/// One cell crossed by a ray, with the ray-parameter interval spent inside it.
struct RayCell {
  CellIndex cell;
  double t_enter = 0.0;
  double t_exit = 0.0;
};

/// Exact grid walk: every cell whose interior the segment origin + t*dir,
/// t in [0, length), passes through, in order. Stops at the grid edge.
std::vector<RayCell> traverse(const OccupancyGrid& grid, const Vec2& origin, const Vec2& dir, double length);

/// Applies one sweep taken at `pose` through the inverse sensor model.
///
/// Ray mode, per beam: cells on the walk whose centre projects closer than
/// range - band become freer by l_free; cells projecting within +-band of the
/// range receive l_occ. A beam without echo frees its walk up to max_range.
/// Each cell changes at most once per beam; values stay clamped.
void update_from_sweep(OccupancyGrid& grid, const Pose& pose, const std::vector<EchoMeasurement>& measurements,
                       const SensorParams& sensor, const SonarInverseModel& model);

/// Adds every known local cell into the global cell containing its centre.
void fuse_into_global(OccupancyGrid& global, const OccupancyGrid& local);

enum class MapFormat { Csv, Pgm };

/// 8-bit image value, dark = occupied: round(255 * (1 - p)).
std::uint8_t pgm_pixel(double l);
/// Inverse of pgm_pixel up to quantization; the unknown pixel (128) decodes to exactly 0.
double log_odds_from_pixel(std::uint8_t pixel, const LogOddsLimits& limits);

void save_map(const OccupancyGrid& grid, const std::filesystem::path& path, MapFormat format);
/// Format chosen from the extension (.csv / .pgm).
void save_map(const OccupancyGrid& grid, const std::filesystem::path& path);
/// Format detected from the file's first bytes.
OccupancyGrid load_map(const std::filesystem::path& path, LogOddsLimits limits = {});

}  // namespace sonarnav
