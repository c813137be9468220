#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarmplay/board.hpp"

// Overhead-camera board reading: grayscale -> threshold -> 5x5 erosion ->
// 9-cell crop -> hole fill -> dark-pixel density per cell -> mark.
// Marks are dark on a light board. A synthetic renderer stands in for the
// camera so the pipeline can be exercised end to end.
namespace swarmplay::vision {

// Row-major 8-bit intensities, 0 = black.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Row-major flags, 1 = foreground (dark mark).
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BinaryImage() = default;
  BinaryImage(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::size_t foreground() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
};

enum class CellLabel { Empty, Cross, Circle };
std::string_view to_string(CellLabel l);

struct CellReading {
  int cell = 0;
  double density = 0.0;
  CellLabel label = CellLabel::Empty;
};

// Square board region split into 3x3 cells. Each cell crop drops
// `cell_margin` pixels on every side so grid lines stay out of the density.
struct GridGeometry {
  int board_x = 10;
  int board_y = 10;
  int board_size = 300;
  int cell_margin = 12;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

// Synthetic renderer settings, in pixels.
struct RenderStyle {
  int image_width = 320;
  int image_height = 320;
  int grid_thickness = 6;
  int ring_radius = 36;      // Nought outer radius
  int ring_thickness = 16;
  int cross_half_span = 28;  // half side of the square the X bars fill
  int cross_half_width = 6;  // half thickness of each bar
  double noise_sigma = 0.0;

  friend bool operator==(const RenderStyle&, const RenderStyle&) = default;
};

struct VisionConfig {
  int threshold = 128;  // foreground iff intensity < threshold
  int erosion_kernel = 5;
  GridGeometry grid;
  // density < empty_max -> Empty; < cross_max -> Cross; else Circle
  double empty_max = 0.07;
  double cross_max = 0.38;
  // Labels of the two non-empty bands; swapping them is a fault-injection knob.
  CellLabel middle_band = CellLabel::Cross;
  CellLabel upper_band = CellLabel::Circle;
  // detect_board rejects densities closer than this to a band edge
  double guard_margin = 0.02;
  RenderStyle render;

  friend bool operator==(const VisionConfig&, const VisionConfig&) = default;
};

// Largest noise sigma at which the default pipeline still reads every
// rendered state exactly (measured by sweep; see the vision tests).
inline constexpr double kNoiseRobustSigma = 30.0;

// Integer luma: (299 R + 587 G + 114 B + 500) / 1000.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

BinaryImage threshold(const GrayImage& img, int t);

// Square all-ones structuring element of side `kernel` (odd). Pixels
// outside the image count as background.
BinaryImage erode(const BinaryImage& img, int kernel = 5);

// Nine cells, row-major from the top-left. Throws GridOutOfBounds.
std::array<BinaryImage, kCells> crop_cells(const BinaryImage& img, const GridGeometry& grid);

// Background regions not 4-connected to the image border become foreground.
BinaryImage fill_components(const BinaryImage& cell);

CellReading classify_cell(const BinaryImage& cell, const VisionConfig& cfg, int cell_number = 0);

// Full pipeline without the ambiguity check.
std::array<CellReading, kCells> read_cells(const GrayImage& img, const VisionConfig& cfg);

// Throws GridOutOfBounds or AmbiguousCell.
Board detect_board(const GrayImage& img, const VisionConfig& cfg);

// The single cell that went Empty -> Nought.
// Throws NoChange, MultipleChanges or NonHumanChange.
int diff_move(const Board& prev, const Board& curr);

// Deterministic top-down picture of `board`. With a seed, adds Gaussian
// noise of cfg.render.noise_sigma to every pixel.
GrayImage render_board(const Board& board, const VisionConfig& cfg,
                       std::optional<std::uint64_t> noise_seed = std::nullopt);

// Binary PGM (P5, maxval 255). read also accepts binary PPM (P6) through luma.
// Throws InvalidImage or Io.
GrayImage decode_pnm(std::string_view bytes);
std::string encode_pgm(const GrayImage& img);
GrayImage read_pnm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace swarmplay::vision
