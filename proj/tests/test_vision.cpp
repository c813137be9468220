#include "doctest.h"

#include <filesystem>

#include "swarmplay/error.hpp"
#include "swarmplay/oracle.hpp"
#include "swarmplay/rng.hpp"
#include "swarmplay/vision.hpp"

using namespace swarmplay;
using namespace swarmplay::vision;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

BinaryImage random_binary(int w, int h, Rng& rng, double p) {
  BinaryImage img(w, h);
  for (auto& px : img.data) px = rng.bernoulli(p) ? 1 : 0;
  return img;
}

BinaryImage block(int size, int x0, int y0, int w, int h) {
  BinaryImage img(size, size);
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) img.set(x, y, true);
  }
  return img;
}

}  // namespace

TEST_CASE("threshold is strict") {
  CHECK(threshold(GrayImage(8, 8, 255), 128).foreground() == 0);
  CHECK(threshold(GrayImage(8, 8, 0), 128).foreground() == 64);
  GrayImage two(2, 1);
  two.at(0, 0) = 127;
  two.at(1, 0) = 128;
  const auto b = threshold(two, 128);
  CHECK(b.at(0, 0));
  CHECK_FALSE(b.at(1, 0));
}

TEST_CASE("luma is the integer weighting") {
  CHECK(luma(255, 255, 255) == 255);
  CHECK(luma(0, 0, 0) == 0);
  CHECK(luma(255, 0, 0) == 76);   // (299*255 + 500) / 1000
  CHECK(luma(0, 255, 0) == 150);
  CHECK(luma(0, 0, 255) == 29);
}

TEST_CASE("erosion") {
  BinaryImage dot(9, 9);
  dot.set(4, 4, true);
  CHECK(erode(dot).foreground() == 0);

  const auto eroded = erode(block(30, 5, 5, 20, 20));
  CHECK(eroded == block(30, 7, 7, 16, 16));

  // touching the border erodes from that side too
  CHECK(erode(BinaryImage(10, 10, true)) == block(10, 2, 2, 6, 6));

  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto x = random_binary(40, 30, rng, 0.8);
    const auto e = erode(x);
    for (std::size_t k = 0; k < x.data.size(); ++k) CHECK((!e.data[k] || x.data[k]));
  }
}

TEST_CASE("crop_cells") {
  VisionConfig cfg;
  cfg.grid = {0, 0, 300, 0};
  BinaryImage img(300, 300);
  img.set(0, 0, true);
  const auto cells = crop_cells(img, cfg.grid);
  for (const auto& c : cells) {
    CHECK(c.width == 100);
    CHECK(c.height == 100);
  }
  CHECK(cells[0].at(0, 0));
  CHECK(cells[1].foreground() == 0);

  const auto margin = crop_cells(BinaryImage(320, 320), GridGeometry{});
  CHECK(margin[4].width == 100 - 2 * 12);

  CHECK(code_of([] { crop_cells(BinaryImage(200, 200), GridGeometry{}); }) == ErrorCode::GridOutOfBounds);
}

TEST_CASE("fill_components") {
  BinaryImage ring(21, 21);
  for (int y = 0; y < 21; ++y) {
    for (int x = 0; x < 21; ++x) {
      const int d2 = (x - 10) * (x - 10) + (y - 10) * (y - 10);
      ring.set(x, y, d2 <= 64 && d2 >= 36);
    }
  }
  const auto disk = fill_components(ring);
  for (int y = 0; y < 21; ++y) {
    for (int x = 0; x < 21; ++x) {
      CHECK(disk.at(x, y) == ((x - 10) * (x - 10) + (y - 10) * (y - 10) <= 64));
    }
  }
  const auto solid = block(20, 3, 3, 10, 10);
  CHECK(fill_components(solid) == solid);
  CHECK(fill_components(BinaryImage(10, 10)) == BinaryImage(10, 10));

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto x = random_binary(30, 30, rng, 0.5);
    const auto f = fill_components(x);
    CHECK(fill_components(f) == f);
    for (std::size_t k = 0; k < x.data.size(); ++k) CHECK((!x.data[k] || f.data[k]));
  }
}

TEST_CASE("classify_cell") {
  VisionConfig cfg;
  const auto empty = classify_cell(BinaryImage(50, 50), cfg);
  CHECK(empty.density == 0.0);
  CHECK(empty.label == CellLabel::Empty);
  const auto full = classify_cell(BinaryImage(50, 50, true), cfg);
  CHECK(full.density == 1.0);
  CHECK(full.label == CellLabel::Circle);

  // rendered marks fall in their bands in every cell
  for (const Board& b : {Board::with({1, 2, 3, 4, 5, 6, 7, 8, 9}), Board::with({}, {1, 2, 3, 4, 5, 6, 7, 8, 9}), Board{}}) {
    const CellLabel want = b.at(1) == Mark::Cross ? CellLabel::Cross : b.at(1) == Mark::Nought ? CellLabel::Circle : CellLabel::Empty;
    for (const auto& r : read_cells(render_board(b, cfg), cfg)) CHECK(r.label == want);
  }
}

TEST_CASE("rendering") {
  VisionConfig cfg;
  // an empty board is only grid lines, and none of it survives the cell margins
  const auto empty = render_board(Board{}, cfg);
  CHECK(threshold(empty, cfg.threshold).foreground() > 0);
  for (const auto& r : read_cells(empty, cfg)) CHECK(r.density == 0.0);

  cfg.render.noise_sigma = 20;
  const Board b = Board::with({1, 5}, {9});
  CHECK(render_board(b, cfg, 3) == render_board(b, cfg, 3));
  CHECK(render_board(b, cfg, 3) != render_board(b, cfg, 4));

  // lowering the threshold never adds foreground
  const auto noisy = render_board(b, cfg, 9);
  std::size_t prev = threshold(noisy, 256).foreground();
  for (int t = 255; t >= 0; t -= 5) {
    const std::size_t now = threshold(noisy, t).foreground();
    CHECK(now <= prev);
    prev = now;
  }
}

TEST_CASE("noise-free round trip over every reachable position") {
  VisionConfig cfg;
  long mismatches = 0;
  for (const Board& b : oracle::reachable_positions()) mismatches += detect_board(render_board(b, cfg), cfg) != b;
  CHECK(mismatches == 0);
}

TEST_CASE("noisy round trip at the documented robustness level") {
  VisionConfig cfg;
  cfg.render.noise_sigma = kNoiseRobustSigma;
  const auto positions = oracle::reachable_positions();
  Rng pick(30);
  long bad = 0;
  for (int i = 0; i < 500; ++i) {
    const Board& b = positions[pick.uniform_index(positions.size())];
    try {
      bad += detect_board(render_board(b, cfg, derive_seed(30, i)), cfg) != b;
    } catch (const Error&) {
      ++bad;
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("ambiguous densities are rejected") {
  VisionConfig cfg;
  const auto img = render_board(Board::with({5}), cfg);
  cfg.cross_max = read_cells(img, cfg)[4].density + 0.005;
  CHECK(code_of([&] { detect_board(img, cfg); }) == ErrorCode::AmbiguousCell);
}

TEST_CASE("diff_move") {
  CHECK(diff_move(Board{}, Board::with({}, {7})) == 7);
  CHECK(code_of([] { diff_move(Board{}, Board{}); }) == ErrorCode::NoChange);
  CHECK(code_of([] { diff_move(Board{}, Board::with({}, {1, 2})); }) == ErrorCode::MultipleChanges);
  CHECK(code_of([] { diff_move(Board{}, Board::with({3})); }) == ErrorCode::NonHumanChange);
  CHECK(code_of([] { diff_move(Board::with({3}), Board::with({}, {3})); }) == ErrorCode::NonHumanChange);

  // recovering a move injected between two renders
  VisionConfig cfg;
  const Board before = Board::with({5}, {1});
  for (int c : legal_moves(before)) {
    const Board after = before.placed(c, Mark::Nought);
    CHECK(diff_move(detect_board(render_board(before, cfg), cfg), detect_board(render_board(after, cfg), cfg)) == c);
  }
}

TEST_CASE("pnm io") {
  VisionConfig cfg;
  const auto img = render_board(Board::with({1}, {2}), cfg);
  CHECK(decode_pnm(encode_pgm(img)) == img);

  std::string ppm = "P6\n# comment\n2 1\n255\n";
  ppm += std::string("\xff\x00\x00\x00\x00\xff", 6);
  const auto gray = decode_pnm(ppm);
  CHECK(gray.width == 2);
  CHECK(gray.at(0, 0) == 76);
  CHECK(gray.at(1, 0) == 29);

  CHECK(code_of([] { decode_pnm("P2\n1 1\n255\n0"); }) == ErrorCode::InvalidImage);
  CHECK(code_of([] { decode_pnm("P5\n4 4\n255\nabc"); }) == ErrorCode::InvalidImage);

  const auto path = std::filesystem::temp_directory_path() / "swarmplay_vision_test.pgm";
  write_pgm(img, path);
  CHECK(read_pnm(path) == img);
  std::filesystem::remove(path);
  CHECK(code_of([] { read_pnm("/nonexistent.pgm"); }) == ErrorCode::Io);
}

TEST_CASE("swapped bands confuse crosses and circles") {
  VisionConfig cfg;
  std::swap(cfg.middle_band, cfg.upper_band);
  const Board b = Board::with({1, 5}, {9});
  CHECK(detect_board(render_board(b, cfg), cfg) == b.swapped());
}
