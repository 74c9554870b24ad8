#include "doclab/idx.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace doclab {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_u32_be(std::ifstream& in, const std::string& path,
                          const std::string& field, std::uint64_t offset) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    std::ostringstream msg;
    msg << path << ": truncated while reading " << field << " at byte offset "
        << offset;
    throw IdxError(IdxError::Kind::kTruncated, field, offset, msg.str());
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void read_payload(std::ifstream& in, const std::string& path, char* dst,
                  std::uint64_t bytes, std::uint64_t offset) {
  if (!in.read(dst, static_cast<std::streamsize>(bytes))) {
    const std::uint64_t got = static_cast<std::uint64_t>(in.gcount());
    std::ostringstream msg;
    msg << path << ": truncated payload, expected " << bytes << " bytes at offset "
        << offset << ", got " << got;
    throw IdxError(IdxError::Kind::kTruncated, "payload", offset + got, msg.str());
  }
}

std::ifstream open_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::ostringstream msg;
    msg << path << ": cannot open file";
    throw IdxError(IdxError::Kind::kTruncated, "file", 0, msg.str());
  }
  return in;
}

void check_magic(std::uint32_t magic, std::uint32_t expected,
                 const std::string& path) {
  if (magic != expected) {
    std::ostringstream msg;
    msg << path << ": bad magic at byte offset 0: got 0x" << std::hex << magic
        << ", expected 0x" << expected;
    throw IdxError(IdxError::Kind::kBadMagic, "magic", 0, msg.str());
  }
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v >> 24),
                                 static_cast<char>(v >> 16),
                                 static_cast<char>(v >> 8),
                                 static_cast<char>(v)};
  out.write(b.data(), 4);
}

}  // namespace

RawDigits load_idx(const std::string& images_path, const std::string& labels_path) {
  RawDigits out;

  {
    std::ifstream in = open_binary(images_path);
    check_magic(read_u32_be(in, images_path, "magic", 0), kImagesMagic, images_path);
    const std::uint32_t count = read_u32_be(in, images_path, "image count", 4);
    const std::uint32_t rows = read_u32_be(in, images_path, "row count", 8);
    const std::uint32_t cols = read_u32_be(in, images_path, "column count", 12);
    out.rows = static_cast<int>(rows);
    out.cols = static_cast<int>(cols);
    const std::uint64_t pixels = std::uint64_t(count) * rows * cols;
    std::vector<std::uint8_t> bytes(pixels);
    read_payload(in, images_path, reinterpret_cast<char*>(bytes.data()), pixels, 16);
    out.images.resize(static_cast<Eigen::Index>(rows) * cols, count);
    for (std::uint64_t i = 0; i < pixels; ++i)
      out.images.data()[i] = bytes[i] / 255.0;
  }

  {
    std::ifstream in = open_binary(labels_path);
    check_magic(read_u32_be(in, labels_path, "magic", 0), kLabelsMagic, labels_path);
    const std::uint32_t count = read_u32_be(in, labels_path, "label count", 4);
    out.labels.resize(count);
    read_payload(in, labels_path, reinterpret_cast<char*>(out.labels.data()),
                 count, 8);
  }

  if (out.count() != static_cast<Eigen::Index>(out.labels.size())) {
    std::ostringstream msg;
    msg << images_path << " / " << labels_path << ": image count " << out.count()
        << " does not match label count " << out.labels.size();
    throw IdxError(IdxError::Kind::kCountMismatch, "count", 4, msg.str());
  }
  return out;
}

LabeledDataset filter_binary(const RawDigits& raw, int class_a, int class_b,
                             std::int64_t per_class_cap) {
  if (per_class_cap < 0)
    throw std::invalid_argument("filter_binary: per_class_cap must be >= 0");

  std::vector<Eigen::Index> keep_a, keep_b;
  for (Eigen::Index i = 0; i < raw.count(); ++i) {
    const int digit = raw.labels[static_cast<std::size_t>(i)];
    if (digit == class_a && static_cast<std::int64_t>(keep_a.size()) < per_class_cap)
      keep_a.push_back(i);
    else if (digit == class_b &&
             static_cast<std::int64_t>(keep_b.size()) < per_class_cap)
      keep_b.push_back(i);
  }
  const auto check_shortfall = [&](int digit, std::size_t have) {
    if (static_cast<std::int64_t>(have) < per_class_cap) {
      std::ostringstream msg;
      msg << "filter_binary: digit " << digit << " has only " << have
          << " samples, " << (per_class_cap - static_cast<std::int64_t>(have))
          << " short of the requested " << per_class_cap;
      throw std::runtime_error(msg.str());
    }
  };
  check_shortfall(class_a, keep_a.size());
  check_shortfall(class_b, keep_b.size());

  LabeledDataset out;
  out.provenance = LabeledDataset::Provenance::kMnistSubset;
  const Eigen::Index total =
      static_cast<Eigen::Index>(keep_a.size() + keep_b.size());
  out.inputs.resize(raw.images.rows(), total);
  out.labels.resize(static_cast<std::size_t>(total));
  Eigen::Index col = 0;
  for (Eigen::Index i : keep_a) {
    out.inputs.col(col) = raw.images.col(i);
    out.labels[static_cast<std::size_t>(col++)] = 0;
  }
  for (Eigen::Index i : keep_b) {
    out.inputs.col(col) = raw.images.col(i);
    out.labels[static_cast<std::size_t>(col++)] = 1;
  }
  return out;
}

void write_idx_images(const std::string& path, int rows, int cols,
                      const std::vector<std::uint8_t>& pixels) {
  if (rows < 1 || cols < 1 || pixels.size() % (std::size_t(rows) * cols) != 0)
    throw std::invalid_argument("write_idx_images: pixel count not a multiple of rows*cols");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_idx_images: cannot open " + path);
  write_u32_be(out, kImagesMagic);
  write_u32_be(out, static_cast<std::uint32_t>(pixels.size() / (std::size_t(rows) * cols)));
  write_u32_be(out, static_cast<std::uint32_t>(rows));
  write_u32_be(out, static_cast<std::uint32_t>(cols));
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
}

void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_idx_labels: cannot open " + path);
  write_u32_be(out, kLabelsMagic);
  write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

}  // namespace doclab
