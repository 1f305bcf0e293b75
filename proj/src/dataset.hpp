#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "idx.hpp"

namespace qfal {

inline constexpr int kNumClasses = 3;   // digits 0, 1, 2
inline constexpr int kRawSide = 28;
inline constexpr int kSampleSide = 8;
inline constexpr int kSamplePixels = kSampleSide * kSampleSide;

struct RawImage {
  std::array<std::uint8_t, kRawSide * kRawSide> pixels;
  std::uint8_t label = 0;  // digit 0-9
};

// A preprocessed input: 8x8 pixels in [0,1] plus a class index in {0,1,2}.
struct Sample {
  std::array<double, kSamplePixels> pixels;
  int label = 0;
};

struct ClientDataset {
  int client_id = 0;
  std::vector<Sample> samples;
};

// 28x28 -> drop a 2-pixel border per side -> 24x24 -> mean over disjoint
// 3x3 blocks -> 8x8 -> scale by 1/255. Exact arithmetic, no interpolation.
Sample preprocess(const RawImage& raw);

// Loads an IDX image/label file pair (gzip detected by prefix), keeps only
// digits 0-2, and preprocesses. Throws on malformed files or count mismatch.
std::vector<Sample> load_samples(const std::string& images_path,
                                 const std::string& labels_path);

std::vector<Sample> samples_from_raw(std::span<const RawImage> raws);

// Splits `pool` into `clients` disjoint stratified partitions of
// `per_client` samples each: every client's per-class count stays within
// one sample of the pool's class proportions. Deterministic per seed.
// Throws ConfigError when the pool cannot supply clients * per_client.
std::vector<ClientDataset> partition_iid(const std::vector<Sample>& pool,
                                         int clients, int per_client,
                                         std::uint64_t seed);

// Stratified subsample of `count` elements, e.g. for a shared test set.
std::vector<Sample> stratified_subset(const std::vector<Sample>& pool,
                                      int count, std::uint64_t seed);

}  // namespace qfal
