#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slitsim/core.hpp"
#include "slitsim/dynamics.hpp"

namespace slitsim::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "x,value" header, one row per grid point, 17 significant digits.
void write_csv(const ScalarField& field, const std::string& path);

/// "t,y,x_seed_0,...,x_seed_{n-1}" header, one row per stored time.
void write_csv(const TrajectorySet& set, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

/// Binary 16-bit PGM. One row per frame with the last frame on top (y = v_y t
/// grows upward), one column per grid point, intensity mapped linearly from
/// [0, global max] to [0, 65535].
void write_heatmap(const std::vector<ScalarField>& frames, const std::string& path);

/// Same image with every trajectory position set to 65535. Trajectory times
/// must coincide with the frame times.
void write_heatmap_overlay(const std::vector<ScalarField>& frames, const TrajectorySet& set,
                           const std::string& path);

struct Pgm {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  std::vector<std::uint16_t> pixels;  // row-major, top row first
};

Pgm read_pgm(const std::string& path);

}  // namespace slitsim::io
