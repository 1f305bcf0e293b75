#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "dataset.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "synth.hpp"

using namespace qfal;

namespace {

RawImage constant_raw(std::uint8_t value, std::uint8_t label = 0) {
  RawImage raw;
  raw.pixels.fill(value);
  raw.label = label;
  return raw;
}

// pool with `per_class` samples of each class, each tagged by a unique
// pixel value so identities survive partitioning
std::vector<Sample> tagged_pool(int per_class) {
  std::vector<Sample> pool;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < per_class; ++i) {
      Sample s;
      s.pixels.fill(0.0);
      s.pixels[0] = static_cast<double>(c * per_class + i + 1);
      s.label = c;
      pool.push_back(s);
    }
  }
  return pool;
}

}  // namespace

TEST_CASE("preprocess keeps constants") {
  const Sample zeros = preprocess(constant_raw(0));
  for (const double p : zeros.pixels) CHECK(p == 0.0);

  const Sample ones = preprocess(constant_raw(255));
  for (const double p : ones.pixels) CHECK(p == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("preprocess crops the 2-pixel border") {
  RawImage raw = constant_raw(0);
  raw.pixels[1 * kRawSide + 1] = 255;  // inside the dropped border
  const Sample s = preprocess(raw);
  for (const double p : s.pixels) CHECK(p == 0.0);

  // first kept pixel lands in the top-left pooling block
  raw = constant_raw(0);
  raw.pixels[2 * kRawSide + 2] = 255;
  const Sample t = preprocess(raw);
  CHECK(t.pixels[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(std::accumulate(t.pixels.begin(), t.pixels.end(), 0.0) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("preprocess output is 64 values in [0,1] with the cropped mean") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    RawImage raw;
    for (auto& p : raw.pixels) p = static_cast<std::uint8_t>(rng.bounded(256));
    const Sample s = preprocess(raw);

    double cropped_sum = 0.0;
    for (int r = 2; r < 26; ++r) {
      for (int c = 2; c < 26; ++c) cropped_sum += raw.pixels[r * kRawSide + c];
    }
    const double expected_mean = cropped_sum / (24.0 * 24.0) / 255.0;
    const double got_mean =
        std::accumulate(s.pixels.begin(), s.pixels.end(), 0.0) / 64.0;
    CHECK(std::abs(got_mean - expected_mean) < 1e-12);
    for (const double p : s.pixels) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("partition: 2 per class, 2 clients, 3 each -> one of each class") {
  const auto pool = tagged_pool(2);
  const auto parts = partition_iid(pool, 2, 3, 7);
  REQUIRE(parts.size() == 2);
  for (const auto& part : parts) {
    REQUIRE(part.samples.size() == 3);
    std::array<int, kNumClasses> counts{};
    for (const auto& s : part.samples) counts[s.label] += 1;
    CHECK(counts == std::array<int, kNumClasses>{1, 1, 1});
  }
}

TEST_CASE("partition is deterministic and disjoint") {
  const auto pool = tagged_pool(40);
  const auto a = partition_iid(pool, 4, 20, 123);
  const auto b = partition_iid(pool, 4, 20, 123);
  REQUIRE(a.size() == b.size());
  std::set<double> seen;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].client_id == static_cast<int>(k));
    REQUIRE(a[k].samples.size() == b[k].samples.size());
    for (std::size_t i = 0; i < a[k].samples.size(); ++i) {
      CHECK(a[k].samples[i].pixels[0] == b[k].samples[i].pixels[0]);
      CHECK(seen.insert(a[k].samples[i].pixels[0]).second);  // no duplicates
    }
  }
  const auto c = partition_iid(pool, 4, 20, 124);
  bool any_differs = false;
  for (std::size_t k = 0; k < c.size() && !any_differs; ++k) {
    for (std::size_t i = 0; i < c[k].samples.size(); ++i) {
      if (c[k].samples[i].pixels[0] != a[k].samples[i].pixels[0]) {
        any_differs = true;
        break;
      }
    }
  }
  CHECK(any_differs);
}

TEST_CASE("partition stratification stays within one sample of ideal") {
  Rng rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    // mildly unbalanced pool
    std::vector<Sample> pool;
    std::array<int, kNumClasses> totals{};
    for (int c = 0; c < kNumClasses; ++c) {
      totals[c] = 40 + static_cast<int>(rng.bounded(20));
      for (int i = 0; i < totals[c]; ++i) {
        Sample s;
        s.pixels.fill(0.1);
        s.label = c;
        pool.push_back(s);
      }
    }
    const int clients = 2 + static_cast<int>(rng.bounded(4));
    const int per_client =
        static_cast<int>(pool.size()) / clients - static_cast<int>(rng.bounded(5));
    const auto parts = partition_iid(pool, clients, per_client, rng.next_u64());
    for (const auto& part : parts) {
      REQUIRE(static_cast<int>(part.samples.size()) == per_client);
      std::array<int, kNumClasses> counts{};
      for (const auto& s : part.samples) counts[s.label] += 1;
      for (int c = 0; c < kNumClasses; ++c) {
        const double ideal = per_client * static_cast<double>(totals[c]) /
                             static_cast<double>(pool.size());
        CHECK(std::abs(counts[c] - ideal) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("single-client partition takes a stratified subset") {
  const auto pool = tagged_pool(10);
  const auto parts = partition_iid(pool, 1, 9, 5);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].samples.size() == 9);
  std::array<int, kNumClasses> counts{};
  for (const auto& s : parts[0].samples) counts[s.label] += 1;
  CHECK(counts == std::array<int, kNumClasses>{3, 3, 3});
  CHECK(stratified_subset(pool, 9, 5).size() == 9);
}

TEST_CASE("insufficient data names the shortfall") {
  const auto pool = tagged_pool(2);
  CHECK_THROWS_WITH_AS(partition_iid(pool, 3, 4, 1),
                       doctest::Contains("insufficient data"), ConfigError);
}

TEST_CASE("load_samples keeps only digits 0-2") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "qfal_dataset_load";
  fs::create_directories(dir);
  const std::string images = (dir / "img.idx").string();
  const std::string labels = (dir / "lab.idx").string();

  IdxImages idx;
  idx.rows = kRawSide;
  idx.cols = kRawSide;
  std::vector<std::uint8_t> label_bytes;
  for (std::uint8_t digit = 0; digit < 10; ++digit) {
    idx.grids.emplace_back(kRawSide * kRawSide,
                           static_cast<std::uint8_t>(10 + digit));
    label_bytes.push_back(digit);
  }
  write_file(images, encode_idx_images(idx));
  write_file(labels, encode_idx_labels(label_bytes));

  const auto samples = load_samples(images, labels);
  REQUIRE(samples.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(samples[i].label == i);

  // count mismatch
  label_bytes.pop_back();
  write_file(labels, encode_idx_labels(label_bytes));
  CHECK_THROWS_AS(load_samples(images, labels), FormatError);

  fs::remove_all(dir);
}

TEST_CASE("synthetic corpus loads, is balanced, and is deterministic") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "qfal_synth";
  fs::create_directories(dir);
  const std::string images = (dir / "img.idx").string();
  const std::string labels = (dir / "lab.idx").string();
  write_synth_idx(images, labels, 30, 42);
  const auto samples = load_samples(images, labels);
  REQUIRE(samples.size() == 30);
  std::array<int, kNumClasses> counts{};
  for (const auto& s : samples) counts[s.label] += 1;
  CHECK(counts == std::array<int, kNumClasses>{10, 10, 10});

  const auto again = synth_raw_images(30, 42);
  const auto first = synth_raw_images(30, 42);
  for (int i = 0; i < 30; ++i) CHECK(again[i].pixels == first[i].pixels);

  fs::remove_all(dir);
}
