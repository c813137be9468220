#include "swarmplay/vision.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <fstream>
#include <sstream>

#include "swarmplay/error.hpp"
#include "swarmplay/rng.hpp"

namespace swarmplay::vision {

std::string_view to_string(CellLabel l) {
  switch (l) {
    case CellLabel::Empty: return "empty";
    case CellLabel::Cross: return "cross";
    case CellLabel::Circle: return "circle";
  }
  return "?";
}

std::size_t BinaryImage::foreground() const {
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

BinaryImage threshold(const GrayImage& img, int t) {
  BinaryImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i] < t ? 1 : 0;
  return out;
}

BinaryImage erode(const BinaryImage& img, int kernel) {
  // A square element is separable: erode rows, then columns.
  const int r = kernel / 2;
  const int w = img.width;
  const int h = img.height;
  BinaryImage rows(w, h);
  for (int y = 0; y < h; ++y) {
    int run = 0;  // foreground run length ending at x
    std::vector<int> runs(w);
    for (int x = 0; x < w; ++x) {
      run = img.at(x, y) ? run + 1 : 0;
      runs[x] = run;
    }
    for (int x = 0; x < w; ++x) {
      const int right = x + r;
      rows.set(x, y, right < w && x - r >= 0 && runs[right] >= kernel);
    }
  }
  BinaryImage out(w, h);
  for (int x = 0; x < w; ++x) {
    int run = 0;
    std::vector<int> runs(h);
    for (int y = 0; y < h; ++y) {
      run = rows.at(x, y) ? run + 1 : 0;
      runs[y] = run;
    }
    for (int y = 0; y < h; ++y) {
      const int bottom = y + r;
      out.set(x, y, bottom < h && y - r >= 0 && runs[bottom] >= kernel);
    }
  }
  return out;
}

std::array<BinaryImage, kCells> crop_cells(const BinaryImage& img, const GridGeometry& g) {
  const int cell = g.board_size / 3;
  if (g.board_x < 0 || g.board_y < 0 || g.board_size < 3 || g.board_x + g.board_size > img.width ||
      g.board_y + g.board_size > img.height) {
    throw Error(ErrorCode::GridOutOfBounds, "board region exceeds the " + std::to_string(img.width) +
                                                "x" + std::to_string(img.height) + " image");
  }
  if (g.cell_margin < 0 || 2 * g.cell_margin >= cell) {
    throw Error(ErrorCode::GridOutOfBounds, "cell margin leaves no interior");
  }
  std::array<BinaryImage, kCells> cells;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      const int x0 = g.board_x + col * g.board_size / 3 + g.cell_margin;
      const int x1 = g.board_x + (col + 1) * g.board_size / 3 - g.cell_margin;
      const int y0 = g.board_y + row * g.board_size / 3 + g.cell_margin;
      const int y1 = g.board_y + (row + 1) * g.board_size / 3 - g.cell_margin;
      BinaryImage c(x1 - x0, y1 - y0);
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) c.set(x - x0, y - y0, img.at(x, y));
      }
      cells[row * 3 + col] = std::move(c);
    }
  }
  return cells;
}

BinaryImage fill_components(const BinaryImage& cell) {
  const int w = cell.width;
  const int h = cell.height;
  std::vector<std::uint8_t> outside(cell.data.size(), 0);
  std::vector<std::pair<int, int>> stack;
  auto seed = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (!cell.data[i] && !outside[i]) {
      outside[i] = 1;
      stack.emplace_back(x, y);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (x > 0) seed(x - 1, y);
    if (x + 1 < w) seed(x + 1, y);
    if (y > 0) seed(x, y - 1);
    if (y + 1 < h) seed(x, y + 1);
  }
  BinaryImage out(w, h);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = outside[i] ? 0 : 1;
  return out;
}

CellReading classify_cell(const BinaryImage& cell, const VisionConfig& cfg, int cell_number) {
  const BinaryImage filled = fill_components(cell);
  const double area = static_cast<double>(filled.data.size());
  const double density = area > 0 ? static_cast<double>(filled.foreground()) / area : 0.0;
  CellLabel label = cfg.upper_band;
  if (density < cfg.empty_max) {
    label = CellLabel::Empty;
  } else if (density < cfg.cross_max) {
    label = cfg.middle_band;
  }
  return CellReading{cell_number, density, label};
}

std::array<CellReading, kCells> read_cells(const GrayImage& img, const VisionConfig& cfg) {
  const auto cells = crop_cells(erode(threshold(img, cfg.threshold), cfg.erosion_kernel), cfg.grid);
  std::array<CellReading, kCells> readings;
  for (int i = 0; i < kCells; ++i) readings[i] = classify_cell(cells[i], cfg, i + 1);
  return readings;
}

Board detect_board(const GrayImage& img, const VisionConfig& cfg) {
  std::array<Mark, kCells> marks{};
  for (const CellReading& r : read_cells(img, cfg)) {
    for (double edge : {cfg.empty_max, cfg.cross_max}) {
      if (std::abs(r.density - edge) < cfg.guard_margin) {
        throw Error(ErrorCode::AmbiguousCell,
                    "cell " + std::to_string(r.cell) + " density " + std::to_string(r.density) +
                        " is within the guard margin of band edge " + std::to_string(edge));
      }
    }
    marks[r.cell - 1] = r.label == CellLabel::Cross    ? Mark::Cross
                        : r.label == CellLabel::Circle ? Mark::Nought
                                                       : Mark::Empty;
  }
  return Board(marks);
}

int diff_move(const Board& prev, const Board& curr) {
  std::vector<int> added;
  for (int c = 1; c <= kCells; ++c) {
    if (prev.at(c) == curr.at(c)) continue;
    if (prev.at(c) != Mark::Empty || curr.at(c) != Mark::Nought) {
      throw Error(ErrorCode::NonHumanChange,
                  "cell " + std::to_string(c) + " changed " + std::string(to_string(prev.at(c))) +
                      " -> " + std::string(to_string(curr.at(c))));
    }
    added.push_back(c);
  }
  if (added.empty()) throw Error(ErrorCode::NoChange, "no new mark on the board");
  if (added.size() > 1) {
    throw Error(ErrorCode::MultipleChanges, std::to_string(added.size()) + " new marks on the board");
  }
  return added.front();
}

GrayImage render_board(const Board& board, const VisionConfig& cfg,
                       std::optional<std::uint64_t> noise_seed) {
  const RenderStyle& s = cfg.render;
  const GridGeometry& g = cfg.grid;
  GrayImage img(s.image_width, s.image_height, 255);
  auto paint = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < img.width && y < img.height) img.at(x, y) = 0;
  };

  // Interior grid lines.
  for (int k = 1; k <= 2; ++k) {
    const int line = k * g.board_size / 3;
    const int lo = line - s.grid_thickness / 2;
    for (int t = lo; t < lo + s.grid_thickness; ++t) {
      for (int u = 0; u < g.board_size; ++u) {
        paint(g.board_x + t, g.board_y + u);
        paint(g.board_x + u, g.board_y + t);
      }
    }
  }

  const int span = g.board_size / 3;
  for (int cell = 1; cell <= kCells; ++cell) {
    const Mark m = board.at(cell);
    if (m == Mark::Empty) continue;
    const int col = (cell - 1) % 3;
    const int row = (cell - 1) / 3;
    const double cx = g.board_x + col * g.board_size / 3 + span / 2.0;
    const double cy = g.board_y + row * g.board_size / 3 + span / 2.0;
    const int x0 = static_cast<int>(cx) - span / 2;
    const int y0 = static_cast<int>(cy) - span / 2;
    for (int y = y0; y < y0 + span; ++y) {
      for (int x = x0; x < x0 + span; ++x) {
        // Distances measured from pixel centres.
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        bool dark = false;
        if (m == Mark::Nought) {
          const double r = std::hypot(dx, dy);
          dark = r <= s.ring_radius && r >= s.ring_radius - s.ring_thickness;
        } else {
          const bool inside = std::abs(dx) <= s.cross_half_span && std::abs(dy) <= s.cross_half_span;
          const double d1 = std::abs(dx - dy) / std::numbers::sqrt2;
          const double d2 = std::abs(dx + dy) / std::numbers::sqrt2;
          dark = inside && std::min(d1, d2) <= s.cross_half_width;
        }
        if (dark) paint(x, y);
      }
    }
  }

  if (noise_seed && s.noise_sigma > 0.0) {
    Rng rng(*noise_seed);
    for (auto& px : img.data) {
      const double v = std::round(px + s.noise_sigma * rng.normal());
      px = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return img;
}

// --- PNM ------------------------------------------------------------------

namespace {

[[noreturn]] void bad_image(const std::string& what) { throw Error(ErrorCode::InvalidImage, what); }

// Reads one header token, skipping whitespace and '#' comments.
std::string header_token(std::string_view bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) bad_image("truncated PNM header");
  return std::string(bytes.substr(start, pos - start));
}

int header_int(std::string_view bytes, std::size_t& pos) {
  const std::string tok = header_token(bytes, pos);
  if (!std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      tok.size() > 6) {
    bad_image("bad PNM header value '" + tok + "'");
  }
  return std::stoi(tok);
}

}  // namespace

GrayImage decode_pnm(std::string_view bytes) {
  std::size_t pos = 0;
  const std::string magic = header_token(bytes, pos);
  if (magic != "P5" && magic != "P6") bad_image("unsupported PNM type '" + magic + "'");
  const int w = header_int(bytes, pos);
  const int h = header_int(bytes, pos);
  const int maxval = header_int(bytes, pos);
  if (w <= 0 || h <= 0) bad_image("empty image");
  if (maxval != 255) bad_image("only maxval 255 is supported");
  ++pos;  // single whitespace byte before the raster
  const std::size_t channels = magic == "P6" ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (pos > bytes.size() || bytes.size() - pos < need) bad_image("truncated PNM raster");

  GrayImage img(w, h);
  const auto* raster = reinterpret_cast<const std::uint8_t*>(bytes.data() + pos);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    img.data[i] = channels == 1 ? raster[i]
                                : luma(raster[3 * i], raster[3 * i + 1], raster[3 * i + 2]);
  }
  return img;
}

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
  return out;
}

GrayImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_pnm(buf.str());
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << encode_pgm(img);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace swarmplay::vision
