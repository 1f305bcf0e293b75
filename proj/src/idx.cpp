#include "idx.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace qfal {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t at) {
  if (at + 4 > bytes.size()) {
    throw TruncatedError("idx stream truncated inside header");
  }
  return (static_cast<std::uint32_t>(bytes[at]) << 24) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[at + 3]);
}

void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes,
                                 const std::string& origin) {
  z_stream strm{};
  if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK) {
    throw FormatError(origin + ": gzip decoder init failed");
  }
  std::vector<std::uint8_t> out;
  std::uint8_t buf[1 << 15];
  strm.next_in = const_cast<Bytef*>(bytes.data());
  strm.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    strm.next_out = buf;
    strm.avail_out = sizeof(buf);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw FormatError(origin + ": corrupt gzip stream");
    }
    out.insert(out.end(), buf, buf + (sizeof(buf) - strm.avail_out));
  }
  inflateEnd(&strm);
  return out;
}

}  // namespace

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kIdxImagesMagic) {
    throw FormatError("idx image stream has magic " + std::to_string(magic) +
                      ", expected " + std::to_string(kIdxImagesMagic));
  }
  const std::uint32_t count = read_be32(bytes, 4);
  const std::uint32_t rows = read_be32(bytes, 8);
  const std::uint32_t cols = read_be32(bytes, 12);
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  const std::size_t need = 16 + static_cast<std::size_t>(count) * pixels;
  if (bytes.size() < need) {
    throw TruncatedError("idx image stream truncated: header declares " +
                         std::to_string(need) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  IdxImages images;
  images.rows = rows;
  images.cols = cols;
  images.grids.reserve(count);
  std::size_t at = 16;
  for (std::uint32_t i = 0; i < count; ++i) {
    images.grids.emplace_back(bytes.begin() + at, bytes.begin() + at + pixels);
    at += pixels;
  }
  return images;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kIdxLabelsMagic) {
    throw FormatError("idx label stream has magic " + std::to_string(magic) +
                      ", expected " + std::to_string(kIdxLabelsMagic));
  }
  const std::uint32_t count = read_be32(bytes, 4);
  const std::size_t need = 8 + static_cast<std::size_t>(count);
  if (bytes.size() < need) {
    throw TruncatedError("idx label stream truncated: header declares " +
                         std::to_string(need) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.begin() + need);
}

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images) {
  std::vector<std::uint8_t> out;
  const std::size_t pixels = static_cast<std::size_t>(images.rows) * images.cols;
  out.reserve(16 + images.grids.size() * pixels);
  append_be32(out, kIdxImagesMagic);
  append_be32(out, static_cast<std::uint32_t>(images.grids.size()));
  append_be32(out, images.rows);
  append_be32(out, images.cols);
  for (const auto& g : images.grids) {
    if (g.size() != pixels) {
      throw FormatError("grid size does not match declared dimensions");
    }
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  append_be32(out, kIdxLabelsMagic);
  append_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::vector<std::uint8_t> read_file_maybe_gzip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
    return gunzip(bytes, path);
  }
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("short write to " + path);
  }
}

}  // namespace qfal
