#include "sonarnav/occupancy_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "number_format.hpp"
#include "sonarnav/errors.hpp"

namespace sonarnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint8_t kUnknownPixel = 128;

using detail::format_double;

double parse_double(std::string_view s, const std::string& where, int line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError(where + ": bad number '" + std::string(s) + "'", line);
  }
  return v;
}

int parse_int(std::string_view s, const std::string& where, int line) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError(where + ": bad integer '" + std::string(s) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void save_csv(const OccupancyGrid& g, std::ostream& out) {
  out << "occgrid," << format_double(g.origin().x) << ',' << format_double(g.origin().y) << ','
      << format_double(g.resolution()) << ',' << g.width() << ',' << g.height() << '\n';
  for (int iy = 0; iy < g.height(); ++iy) {
    for (int ix = 0; ix < g.width(); ++ix) {
      if (ix) out << ',';
      out << format_double(g.at(ix, iy));
    }
    out << '\n';
  }
}

void save_pgm(const OccupancyGrid& g, std::ostream& out) {
  out << "P5\n# occgrid " << format_double(g.origin().x) << ' ' << format_double(g.origin().y) << ' '
      << format_double(g.resolution()) << '\n'
      << g.width() << ' ' << g.height() << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(g.width()));
  for (int iy = 0; iy < g.height(); ++iy) {
    for (int ix = 0; ix < g.width(); ++ix) row[static_cast<std::size_t>(ix)] = static_cast<char>(pgm_pixel(g.at(ix, iy)));
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

OccupancyGrid load_csv(std::istream& in, const LogOddsLimits& limits) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("map csv: empty file", 1);
  const auto head = split_commas(trim(line));
  if (head.size() != 6 || head[0] != "occgrid") {
    throw ParseError("map csv: header must be occgrid,origin_x,origin_y,resolution,width,height", 1);
  }
  const Vec2 origin{parse_double(head[1], "origin_x", 1), parse_double(head[2], "origin_y", 1)};
  const double res = parse_double(head[3], "resolution", 1);
  const int w = parse_int(head[4], "width", 1);
  const int h = parse_int(head[5], "height", 1);
  OccupancyGrid grid = [&] {
    try {
      return OccupancyGrid(origin, res, w, h, limits);
    } catch (const InputError& e) {
      throw ParseError(std::string("map csv: ") + e.what(), 1);
    }
  }();
  for (int iy = 0; iy < h; ++iy) {
    const int lineno = iy + 2;
    if (!std::getline(in, line)) throw ParseError("map csv: missing row", lineno);
    const auto fields = split_commas(trim(line));
    if (static_cast<int>(fields.size()) != w) {
      throw ParseError("map csv: expected " + std::to_string(w) + " values", lineno);
    }
    for (int ix = 0; ix < w; ++ix) {
      const double l = parse_double(trim(fields[static_cast<std::size_t>(ix)]), "cell", lineno);
      if (!std::isfinite(l)) throw ParseError("map csv: non-finite cell", lineno);
      grid.set(ix, iy, l);
    }
  }
  while (std::getline(in, line)) {
    if (!trim(line).empty()) throw ParseError("map csv: trailing data after last row", h + 2);
  }
  return grid;
}

// Reads the next whitespace-delimited header token, collecting `#` comments.
std::string pgm_token(std::istream& in, std::vector<std::string>& comments) {
  std::string tok;
  while (true) {
    const int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      comments.push_back(comment);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

OccupancyGrid load_pgm(std::istream& in, const LogOddsLimits& limits) {
  std::vector<std::string> comments;
  if (pgm_token(in, comments) != "P5") throw ParseError("map pgm: expected P5 magic");
  const std::string ws = pgm_token(in, comments), hs = pgm_token(in, comments), ms = pgm_token(in, comments);
  const int w = parse_int(ws, "pgm width", -1);
  const int h = parse_int(hs, "pgm height", -1);
  if (parse_int(ms, "pgm maxval", -1) != 255) throw ParseError("map pgm: maxval must be 255");

  std::optional<Vec2> origin;
  double res = 0.0;
  for (const auto& c : comments) {
    std::istringstream cs(c);
    std::string tag, ox, oy, rs;
    if (cs >> tag >> ox >> oy >> rs && tag == "occgrid") {
      origin = Vec2{parse_double(ox, "pgm origin_x", -1), parse_double(oy, "pgm origin_y", -1)};
      res = parse_double(rs, "pgm resolution", -1);
    }
  }
  if (!origin) throw ParseError("map pgm: missing '# occgrid origin_x origin_y resolution' comment");

  OccupancyGrid grid = [&] {
    try {
      return OccupancyGrid(*origin, res, w, h, limits);
    } catch (const InputError& e) {
      throw ParseError(std::string("map pgm: ") + e.what());
    }
  }();
  std::vector<char> data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) throw ParseError("map pgm: truncated pixel data");
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      const auto px = static_cast<std::uint8_t>(data[static_cast<std::size_t>(iy) * w + ix]);
      grid.set(ix, iy, log_odds_from_pixel(px, limits));
    }
  }
  return grid;
}

}  // namespace

OccupancyGrid::OccupancyGrid(Vec2 origin, double resolution, int width, int height, LogOddsLimits limits)
    : origin_(origin), resolution_(resolution), width_(width), height_(height), limits_(limits) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw InputError("grid: resolution must be > 0");
  if (width < 1 || height < 1) throw InputError("grid: width and height must be >= 1");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) throw InputError("grid: origin must be finite");
  if (!(limits.min < 0.0 && limits.max > 0.0)) throw InputError("grid: log-odds limits must bracket 0");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0);
}

Box OccupancyGrid::extent() const {
  return {origin_, {origin_.x + width_ * resolution_, origin_.y + height_ * resolution_}};
}

std::optional<CellIndex> OccupancyGrid::cell_of(const Vec2& p) const {
  const double fx = std::floor((p.x - origin_.x) / resolution_);
  const double fy = std::floor((p.y - origin_.y) / resolution_);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < width_ && fy < height_)) return std::nullopt;
  return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
}

Vec2 OccupancyGrid::cell_center(int ix, int iy) const {
  return {origin_.x + (ix + 0.5) * resolution_, origin_.y + (iy + 0.5) * resolution_};
}

void OccupancyGrid::set(int ix, int iy, double l) {
  cells_[index(ix, iy)] = std::clamp(l, limits_.min, limits_.max);
}

std::size_t OccupancyGrid::known_cells() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](double l) { return l != 0.0; }));
}

OccupancyGrid new_grid(Vec2 origin, double resolution, int width, int height, LogOddsLimits limits) {
  return OccupancyGrid(origin, resolution, width, height, limits);
}

int footprint_cells(double max_range, double resolution) {
  if (!(max_range > 0.0) || !(resolution > 0.0)) throw InputError("footprint_cells: arguments must be > 0");
  return static_cast<int>(std::ceil(2.0 * max_range / resolution - 1e-9));
}

OccupancyGrid global_grid_for(const Box& bounds, double max_range, double resolution, LogOddsLimits limits) {
  const double pad = max_range + 2.0 * resolution;
  const Vec2 origin{bounds.min.x - pad, bounds.min.y - pad};
  const int w = static_cast<int>(std::ceil((bounds.width() + 2.0 * pad) / resolution - 1e-9));
  const int h = static_cast<int>(std::ceil((bounds.height() + 2.0 * pad) / resolution - 1e-9));
  return OccupancyGrid(origin, resolution, w, h, limits);
}

OccupancyGrid local_grid_for(const Pose& pose, double max_range, const OccupancyGrid& global) {
  const double res = global.resolution();
  const double ix0 = std::floor((pose.x - max_range - global.origin().x) / res);
  const double iy0 = std::floor((pose.y - max_range - global.origin().y) / res);
  const Vec2 origin{global.origin().x + ix0 * res, global.origin().y + iy0 * res};
  const int side = footprint_cells(max_range, res) + 1;
  return OccupancyGrid(origin, res, side, side, global.limits());
}

double probability(double l) { return 1.0 / (1.0 + std::exp(-l)); }

double log_odds(double p) { return std::log(p / (1.0 - p)); }

void SonarInverseModel::validate() const {
  if (!(cone_half_angle > 0.0 && cone_half_angle < std::numbers::pi / 2.0)) {
    throw ValidationError("mapping.cone_half_angle: must be in (0, pi/2)");
  }
  if (!(l_occ > 0.0)) throw ValidationError("mapping.l_occ: must be > 0");
  if (!(l_free < 0.0)) throw ValidationError("mapping.l_free: must be < 0");
  if (occupied_band && !(*occupied_band > 0.0)) throw ValidationError("mapping.occupied_band: must be > 0");
}

std::vector<RayCell> traverse(const OccupancyGrid& grid, const Vec2& o, const Vec2& dir, double length) {
  std::vector<RayCell> out;
  const auto start = grid.cell_of(o);
  if (!start) throw InputError("traverse: ray origin outside grid");
  if (!(length > 0.0)) return out;

  const double res = grid.resolution();
  const Vec2 g0 = grid.origin();
  int ix = start->ix, iy = start->iy;
  const int sx = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int sy = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);

  // Ray parameter at which the walk leaves the current cell across x / y.
  auto next_x = [&] { return sx == 0 ? kInf : (g0.x + (ix + (sx > 0)) * res - o.x) / dir.x; };
  auto next_y = [&] { return sy == 0 ? kInf : (g0.y + (iy + (sy > 0)) * res - o.y) / dir.y; };

  double t = 0.0;
  while (true) {
    const double tx = next_x(), ty = next_y();
    const double t_exit = std::min({tx, ty, length});
    // A walk starting on a cell edge and heading out spends no length inside.
    if (t_exit > t) out.push_back({{ix, iy}, t, t_exit});
    if (t_exit >= length) break;
    if (tx < ty) {
      ix += sx;
    } else if (ty < tx) {
      iy += sy;
    } else {
      // Exactly through a corner: the diagonal neighbours are only touched.
      ix += sx;
      iy += sy;
    }
    t = t_exit;
    if (!grid.in_bounds(ix, iy)) break;
  }
  return out;
}

namespace {

template <typename Apply>
void ray_update(const OccupancyGrid& grid, const Vec2& o, const Vec2& dir, std::optional<double> range,
                double max_range, double band, Apply&& apply) {
  if (!range) {
    for (const auto& rc : traverse(grid, o, dir, max_range)) apply(rc.cell, false);
    return;
  }
  for (const auto& rc : traverse(grid, o, dir, *range + band)) {
    const double along = dot(grid.cell_center(rc.cell.ix, rc.cell.iy) - o, dir);
    if (along < *range - band) {
      apply(rc.cell, false);
    } else if (std::abs(along - *range) <= band) {
      apply(rc.cell, true);
    }
  }
}

void cone_update(OccupancyGrid& grid, const Vec2& o, double beam_angle, std::optional<double> range,
                 double max_range, double band, const SonarInverseModel& model) {
  const Vec2 dir = unit_from_angle(beam_angle);
  std::set<std::pair<int, int>> occupied;
  if (range) {
    ray_update(grid, o, dir, range, max_range, band, [&](const CellIndex& c, bool occ) {
      if (occ) occupied.emplace(c.ix, c.iy);
    });
  }
  const double reach = range ? *range - band : max_range;
  if (reach <= 0.0) {
    for (const auto& [ix, iy] : occupied) grid.add(ix, iy, model.l_occ);
    return;
  }
  const double res = grid.resolution();
  const int r_cells = static_cast<int>(std::ceil(reach / res)) + 1;
  const auto centre = *grid.cell_of(o);
  for (int iy = std::max(0, centre.iy - r_cells); iy <= std::min(grid.height() - 1, centre.iy + r_cells); ++iy) {
    for (int ix = std::max(0, centre.ix - r_cells); ix <= std::min(grid.width() - 1, centre.ix + r_cells); ++ix) {
      if (occupied.count({ix, iy})) continue;
      const Vec2 d = grid.cell_center(ix, iy) - o;
      const double dist = norm(d);
      const bool inside = range ? dist < reach : dist <= reach;
      if (!inside) continue;
      const double off = dist > 0.0 ? std::abs(wrap_angle(std::atan2(d.y, d.x) - beam_angle)) : 0.0;
      if (off > model.cone_half_angle) continue;
      grid.add(ix, iy, model.l_free * (1.0 - off / model.cone_half_angle));
    }
  }
  for (const auto& [ix, iy] : occupied) grid.add(ix, iy, model.l_occ);
}

}  // namespace

void update_from_sweep(OccupancyGrid& grid, const Pose& pose, const std::vector<EchoMeasurement>& measurements,
                       const SensorParams& sensor, const SonarInverseModel& model) {
  sensor.validate();
  model.validate();
  if (!grid.cell_of(pose.position())) throw InputError("update_from_sweep: pose outside grid extent");
  for (const auto& m : measurements) {
    if (m.bearing < sensor.sweep_min || m.bearing > sensor.sweep_max) {
      throw InputError("update_from_sweep: bearing outside sweep range");
    }
    if (m.echo_time && !(*m.echo_time > 0.0)) throw InputError("update_from_sweep: echo time must be > 0");
  }

  const Vec2 o = pose.position();
  const double band = model.band(grid.resolution());
  for (const auto& m : measurements) {
    const double angle = pose.theta + m.bearing;
    std::optional<double> range;
    if (m.echo_time) range = distance_from_echo_time(*m.echo_time, sensor.speed_of_sound);
    if (model.mode == UpdateMode::Cone) {
      cone_update(grid, o, angle, range, sensor.max_range, band, model);
      continue;
    }
    ray_update(grid, o, unit_from_angle(angle), range, sensor.max_range, band, [&](const CellIndex& c, bool occ) {
      grid.add(c.ix, c.iy, occ ? model.l_occ : model.l_free);
    });
  }
}

void fuse_into_global(OccupancyGrid& global, const OccupancyGrid& local) {
  if (global.resolution() != local.resolution()) throw InputError("fuse_into_global: resolution mismatch");
  const Box ge = global.extent(), le = local.extent();
  const double tol = 1e-9 * global.resolution();
  if (le.min.x < ge.min.x - tol || le.min.y < ge.min.y - tol || le.max.x > ge.max.x + tol ||
      le.max.y > ge.max.y + tol) {
    throw InputError("fuse_into_global: local map extends beyond global map");
  }
  for (int iy = 0; iy < local.height(); ++iy) {
    for (int ix = 0; ix < local.width(); ++ix) {
      const double l = local.at(ix, iy);
      if (l == 0.0) continue;
      const auto g = global.cell_of(local.cell_center(ix, iy));
      if (!g) throw InputError("fuse_into_global: local cell outside global map");
      global.add(g->ix, g->iy, l);
    }
  }
}

std::uint8_t pgm_pixel(double l) {
  return static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - probability(l))));
}

double log_odds_from_pixel(std::uint8_t pixel, const LogOddsLimits& limits) {
  if (pixel == kUnknownPixel) return 0.0;
  const double p = 1.0 - pixel / 255.0;
  return std::clamp(log_odds(p), limits.min, limits.max);
}

void save_map(const OccupancyGrid& grid, const std::filesystem::path& path, MapFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (format == MapFormat::Csv) {
    save_csv(grid, out);
  } else {
    save_pgm(grid, out);
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_map(const OccupancyGrid& grid, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return save_map(grid, path, MapFormat::Csv);
  if (ext == ".pgm") return save_map(grid, path, MapFormat::Pgm);
  throw InputError("save_map: cannot infer format from '" + path.string() + "' (use .csv or .pgm)");
}

OccupancyGrid load_map(const std::filesystem::path& path, LogOddsLimits limits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  in.clear();
  in.seekg(0);
  try {
    if (magic[0] == 'P' && magic[1] == '5') return load_pgm(in, limits);
    return load_csv(in, limits);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace sonarnav
