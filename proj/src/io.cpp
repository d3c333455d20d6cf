#include "slitsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace slitsim::io {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::uint16_t> raster(const std::vector<ScalarField>& frames) {
  if (frames.empty()) throw ValidationError("frames", "heatmap needs at least one frame");
  const Grid& grid = frames.front().grid;
  double gmax = 0.0;
  for (const auto& f : frames) {
    if (!(f.grid == grid)) throw ValidationError("frames", "all frames must share one grid");
    for (double v : f.values) gmax = std::max(gmax, v);
  }
  const std::size_t w = grid.size();
  const std::size_t h = frames.size();
  std::vector<std::uint16_t> px(w * h, 0);
  for (std::size_t k = 0; k < h; ++k) {
    const std::size_t row = h - 1 - k;
    for (std::size_t j = 0; j < w; ++j) {
      const double v = gmax > 0.0 ? std::clamp(frames[k].values[j] / gmax, 0.0, 1.0) : 0.0;
      px[row * w + j] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    }
  }
  return px;
}

void write_pgm(const std::vector<std::uint16_t>& px, std::size_t w, std::size_t h, const std::string& path) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n# rows are frames, y = v_y t increasing upward (top row = last frame)\n"
      << w << ' ' << h << "\n65535\n";
  std::vector<char> bytes(px.size() * 2);
  for (std::size_t i = 0; i < px.size(); ++i) {
    bytes[2 * i] = static_cast<char>(px[i] >> 8);
    bytes[2 * i + 1] = static_cast<char>(px[i] & 0xff);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  finish(out, path);
}

}  // namespace

void write_csv(const ScalarField& field, const std::string& path) {
  auto out = open_out(path);
  out << "x,value\n";
  for (std::size_t i = 0; i < field.values.size(); ++i) out << field.grid[i] << ',' << field.values[i] << '\n';
  finish(out, path);
}

void write_csv(const TrajectorySet& set, const std::string& path) {
  auto out = open_out(path);
  out << "t,y";
  for (std::size_t s = 0; s < set.seeds.size(); ++s) out << ",x_seed_" << s;
  out << '\n';
  for (std::size_t k = 0; k < set.times.size(); ++k) {
    out << set.times[k] << ',' << set.y(k);
    for (const auto& traj : set.positions) out << ',' << traj[k];
    out << '\n';
  }
  finish(out, path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream rs(line);
    std::string cell;
    while (std::getline(rs, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_heatmap(const std::vector<ScalarField>& frames, const std::string& path) {
  const auto px = raster(frames);
  write_pgm(px, frames.front().grid.size(), frames.size(), path);
}

void write_heatmap_overlay(const std::vector<ScalarField>& frames, const TrajectorySet& set,
                           const std::string& path) {
  auto px = raster(frames);
  if (set.times.size() != frames.size()) throw ValidationError("trajectories", "need one stored time per frame");
  const Grid& grid = frames.front().grid;
  const std::size_t w = grid.size();
  const std::size_t h = frames.size();
  for (std::size_t k = 0; k < h; ++k) {
    if (std::abs(set.times[k] - frames[k].time) > 1e-12 * (1.0 + std::abs(frames[k].time)))
      throw ValidationError("trajectories", "stored times differ from frame times");
    const std::size_t row = h - 1 - k;
    for (const auto& traj : set.positions) {
      const double f = std::round((traj[k] - grid.x_min()) / grid.dx());
      if (f < 0.0 || f > static_cast<double>(w - 1)) continue;
      px[row * w + static_cast<std::size_t>(f)] = 65535;
    }
  }
  write_pgm(px, w, h, path);
}

Pgm read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError("'" + path + "' is not a binary PGM");
  auto next_number = [&]() {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      in >> std::ws;
    }
    std::size_t n = 0;
    in >> n;
    return n;
  };
  Pgm pgm;
  pgm.width = next_number();
  pgm.height = next_number();
  pgm.maxval = static_cast<unsigned>(next_number());
  in.get();
  pgm.pixels.resize(pgm.width * pgm.height);
  for (auto& p : pgm.pixels) {
    const int hi = in.get();
    const int lo = in.get();
    if (!in) throw IoError("'" + path + "' is truncated");
    p = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return pgm;
}

}  // namespace slitsim::io
