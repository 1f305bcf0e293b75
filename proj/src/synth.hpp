#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace qfal {

// Renders deterministic 28x28 grayscale glyphs of the digits 0, 1 and 2
// with jittered position, scale, stroke width and pixel noise. Labels cycle
// 0,1,2. Intended as a stand-in corpus when the real IDX files are absent.
std::vector<RawImage> synth_raw_images(int count, std::uint64_t seed);

// Writes a synthetic image/label IDX file pair.
void write_synth_idx(const std::string& images_path,
                     const std::string& labels_path, int count,
                     std::uint64_t seed);

}  // namespace qfal
