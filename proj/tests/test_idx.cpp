#include "doctest.h"

#include <zlib.h>

#include <cstdio>
#include <filesystem>

#include "errors.hpp"
#include "idx.hpp"
#include "rng.hpp"

using namespace qfal;

namespace {

std::vector<std::uint8_t> header(std::uint32_t magic, std::uint32_t count,
                                 std::uint32_t rows = 0, std::uint32_t cols = 0,
                                 bool with_dims = false) {
  std::vector<std::uint8_t> h;
  auto be32 = [&](std::uint32_t v) {
    h.push_back(v >> 24);
    h.push_back(v >> 16);
    h.push_back(v >> 8);
    h.push_back(v);
  };
  be32(magic);
  be32(count);
  if (with_dims) {
    be32(rows);
    be32(cols);
  }
  return h;
}

}  // namespace

TEST_CASE("image header with one 28x28 grid parses") {
  auto bytes = header(2051, 1, 28, 28, true);
  bytes.resize(bytes.size() + 784, 7);
  const IdxImages images = parse_idx_images(bytes);
  CHECK(images.rows == 28);
  CHECK(images.cols == 28);
  REQUIRE(images.grids.size() == 1);
  CHECK(images.grids[0].size() == 784);
  CHECK(images.grids[0][100] == 7);
}

TEST_CASE("label magic in an image stream is a format error") {
  auto bytes = header(2049, 1, 28, 28, true);
  bytes.resize(bytes.size() + 784, 0);
  CHECK_THROWS_AS(parse_idx_images(bytes), FormatError);
}

TEST_CASE("zero-count image stream yields an empty list") {
  const auto bytes = header(2051, 0, 28, 28, true);
  CHECK(parse_idx_images(bytes).grids.empty());
}

TEST_CASE("truncated image payload is a length error") {
  auto bytes = header(2051, 2, 28, 28, true);
  bytes.resize(bytes.size() + 784, 0);  // one grid short
  CHECK_THROWS_AS(parse_idx_images(bytes), TruncatedError);
}

TEST_CASE("label stream round trip") {
  auto bytes = header(2049, 3);
  bytes.push_back(0);
  bytes.push_back(1);
  bytes.push_back(2);
  const auto labels = parse_idx_labels(bytes);
  REQUIRE(labels.size() == 3);
  CHECK(labels[0] == 0);
  CHECK(labels[1] == 1);
  CHECK(labels[2] == 2);
}

TEST_CASE("image magic in a label stream is a format error") {
  const auto bytes = header(2051, 0);
  CHECK_THROWS_AS(parse_idx_labels(bytes), FormatError);
}

TEST_CASE("zero-count label stream yields an empty list") {
  CHECK(parse_idx_labels(header(2049, 0)).empty());
}

TEST_CASE("truncated label payload is a length error") {
  auto bytes = header(2049, 5);
  bytes.push_back(1);
  CHECK_THROWS_AS(parse_idx_labels(bytes), TruncatedError);
}

TEST_CASE("encode/parse round trip reproduces the source grids") {
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    IdxImages source;
    source.rows = 1 + static_cast<std::uint32_t>(rng.bounded(12));
    source.cols = 1 + static_cast<std::uint32_t>(rng.bounded(12));
    const int count = static_cast<int>(rng.bounded(6));
    for (int i = 0; i < count; ++i) {
      std::vector<std::uint8_t> grid(source.rows * source.cols);
      for (auto& p : grid) p = static_cast<std::uint8_t>(rng.bounded(256));
      source.grids.push_back(grid);
    }
    const IdxImages parsed = parse_idx_images(encode_idx_images(source));
    CHECK(parsed.rows == source.rows);
    CHECK(parsed.cols == source.cols);
    CHECK(parsed.grids == source.grids);

    std::vector<std::uint8_t> labels(count);
    for (auto& l : labels) l = static_cast<std::uint8_t>(rng.bounded(10));
    CHECK(parse_idx_labels(encode_idx_labels(labels)) == labels);
  }
}

TEST_CASE("gzip-compressed files are detected and inflated") {
  const auto dir = std::filesystem::temp_directory_path() / "qfal_idx_gz";
  std::filesystem::create_directories(dir);
  const std::string plain_path = (dir / "labels.idx").string();
  const std::string gz_path = (dir / "labels.idx.gz").string();

  std::vector<std::uint8_t> labels(17);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<std::uint8_t>(i % 3);
  }
  const auto bytes = encode_idx_labels(labels);
  write_file(plain_path, bytes);

  {
    gzFile gz = gzopen(gz_path.c_str(), "wb");
    REQUIRE(gz != nullptr);
    gzwrite(gz, bytes.data(), static_cast<unsigned>(bytes.size()));
    gzclose(gz);
  }

  CHECK(read_file_maybe_gzip(plain_path) == bytes);
  CHECK(read_file_maybe_gzip(gz_path) == bytes);
  CHECK(parse_idx_labels(read_file_maybe_gzip(gz_path)) == labels);

  std::filesystem::remove_all(dir);
}

TEST_CASE("missing file raises an io error") {
  CHECK_THROWS_AS(read_file_maybe_gzip("/nonexistent/qfal.idx"), IoError);
}
