#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qfal {

// IDX container magics: 0x00000803 for ubyte image tensors (count x rows x
// cols), 0x00000801 for ubyte label vectors. All header words big-endian.
inline constexpr std::uint32_t kIdxImagesMagic = 2051;
inline constexpr std::uint32_t kIdxLabelsMagic = 2049;

struct IdxImages {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::vector<std::uint8_t>> grids;  // each rows*cols, row-major
};

// Parses an IDX image stream. Throws FormatError on a wrong magic,
// TruncatedError when the payload is shorter than the header declares.
IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);

// Parses an IDX label stream, one byte per label.
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

// Serializers, used by the synthetic-data writer and round-trip tests.
std::vector<std::uint8_t> encode_idx_images(const IdxImages& images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

// Reads a whole file; a 0x1f 0x8b prefix is decompressed as gzip.
std::vector<std::uint8_t> read_file_maybe_gzip(const std::string& path);

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace qfal
