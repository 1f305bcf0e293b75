#include "dataset.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"
#include "rng.hpp"

namespace qfal {

Sample preprocess(const RawImage& raw) {
  constexpr int crop = 2;    // pixels dropped per side
  constexpr int block = 3;   // pooling block side
  Sample s;
  s.label = raw.label;
  for (int r = 0; r < kSampleSide; ++r) {
    for (int c = 0; c < kSampleSide; ++c) {
      int sum = 0;
      for (int dr = 0; dr < block; ++dr) {
        for (int dc = 0; dc < block; ++dc) {
          const int rr = crop + r * block + dr;
          const int cc = crop + c * block + dc;
          sum += raw.pixels[rr * kRawSide + cc];
        }
      }
      s.pixels[r * kSampleSide + c] =
          static_cast<double>(sum) / (block * block * 255.0);
    }
  }
  return s;
}

std::vector<Sample> samples_from_raw(std::span<const RawImage> raws) {
  std::vector<Sample> out;
  out.reserve(raws.size());
  for (const auto& raw : raws) {
    if (raw.label < kNumClasses) out.push_back(preprocess(raw));
  }
  return out;
}

std::vector<Sample> load_samples(const std::string& images_path,
                                 const std::string& labels_path) {
  const auto image_bytes = read_file_maybe_gzip(images_path);
  const auto label_bytes = read_file_maybe_gzip(labels_path);
  const IdxImages images = parse_idx_images(image_bytes);
  const auto labels = parse_idx_labels(label_bytes);
  if (images.rows != kRawSide || images.cols != kRawSide) {
    throw FormatError(images_path + ": expected 28x28 images, got " +
                      std::to_string(images.rows) + "x" +
                      std::to_string(images.cols));
  }
  if (images.grids.size() != labels.size()) {
    throw FormatError("image/label count mismatch: " +
                      std::to_string(images.grids.size()) + " images vs " +
                      std::to_string(labels.size()) + " labels");
  }
  std::vector<Sample> out;
  out.reserve(labels.size());
  RawImage raw;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= kNumClasses) continue;
    std::copy(images.grids[i].begin(), images.grids[i].end(),
              raw.pixels.begin());
    raw.label = labels[i];
    out.push_back(preprocess(raw));
  }
  return out;
}

namespace {

// Largest-remainder rounding of per_client * (class proportions): the
// per-client class quota every partition targets.
std::array<int, kNumClasses> client_quota(
    const std::array<std::size_t, kNumClasses>& class_count, int per_client,
    std::size_t total) {
  std::array<int, kNumClasses> quota{};
  std::array<double, kNumClasses> frac{};
  int assigned = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const double ideal =
        per_client * static_cast<double>(class_count[c]) / static_cast<double>(total);
    quota[c] = static_cast<int>(ideal);
    frac[c] = ideal - quota[c];
    assigned += quota[c];
  }
  while (assigned < per_client) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if (frac[c] > frac[best]) best = c;
    }
    quota[best] += 1;
    frac[best] = -1.0;
    ++assigned;
  }
  return quota;
}

}  // namespace

std::vector<ClientDataset> partition_iid(const std::vector<Sample>& pool,
                                         int clients, int per_client,
                                         std::uint64_t seed) {
  if (clients < 1 || per_client < 1) {
    throw ConfigError("partition needs at least one client and one sample per client");
  }
  const std::size_t need = static_cast<std::size_t>(clients) * per_client;
  if (need > pool.size()) {
    throw ConfigError("insufficient data: need " + std::to_string(need) +
                      " samples (" + std::to_string(clients) + " clients x " +
                      std::to_string(per_client) + "), pool has " +
                      std::to_string(pool.size()));
  }

  std::array<std::size_t, kNumClasses> class_count{};
  for (const auto& s : pool) class_count[s.label] += 1;

  const auto quota = client_quota(class_count, per_client, pool.size());

  // Per-class draw totals; capped to availability, with any deficit moved
  // to the classes holding the most spare samples.
  std::array<std::size_t, kNumClasses> draw{};
  std::size_t deficit = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const std::size_t want = static_cast<std::size_t>(quota[c]) * clients;
    draw[c] = std::min(want, class_count[c]);
    deficit += want - draw[c];
  }
  while (deficit > 0) {
    int best = -1;
    std::size_t best_spare = 0;
    for (int c = 0; c < kNumClasses; ++c) {
      const std::size_t spare = class_count[c] - draw[c];
      if (spare > best_spare) {
        best_spare = spare;
        best = c;
      }
    }
    if (best < 0) {
      throw ConfigError("insufficient data across classes for stratified split");
    }
    const std::size_t take = std::min(deficit, best_spare);
    draw[best] += take;
    deficit -= take;
  }

  // Shuffle once, then bucket indices by class in shuffled order.
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::array<std::vector<std::size_t>, kNumClasses> buckets;
  for (const std::size_t idx : order) {
    buckets[pool[idx].label].push_back(idx);
  }

  // Deal each class to clients: an even share everywhere, with remainder
  // units rotated across clients so every partition ends at per_client.
  std::vector<ClientDataset> parts(clients);
  for (int k = 0; k < clients; ++k) {
    parts[k].client_id = k;
    parts[k].samples.reserve(per_client);
  }
  std::size_t cursor = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const std::size_t base = draw[c] / clients;
    const std::size_t extra = draw[c] % clients;
    std::size_t pos = 0;
    for (int k = 0; k < clients; ++k) {
      std::size_t share = base;
      const std::size_t offset =
          (static_cast<std::size_t>(k) + clients - cursor % clients) % clients;
      if (offset < extra) share += 1;
      for (std::size_t j = 0; j < share; ++j) {
        parts[k].samples.push_back(pool[buckets[c][pos++]]);
      }
    }
    cursor = (cursor + extra) % clients;
  }
  return parts;
}

std::vector<Sample> stratified_subset(const std::vector<Sample>& pool,
                                      int count, std::uint64_t seed) {
  return partition_iid(pool, 1, count, seed).front().samples;
}

}  // namespace qfal
