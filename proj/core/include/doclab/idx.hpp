#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "doclab/dataset.hpp"

namespace doclab {

/// Parse failure in an IDX file; carries the offending field and the byte
/// offset where the problem was detected.
class IdxError : public std::runtime_error {
 public:
  enum class Kind { kBadMagic, kTruncated, kCountMismatch };

  IdxError(Kind kind, std::string field, std::uint64_t offset,
           const std::string& message)
      : std::runtime_error(message), kind_(kind), field_(std::move(field)),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }
  std::uint64_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::string field_;
  std::uint64_t offset_;
};

/// Raw digit data as stored in the IDX pair: pixels scaled to [0, 1]
/// (byte / 255), one image per column, labels 0..9.
struct RawDigits {
  Eigen::MatrixXd images;  // (rows*cols) x count
  std::vector<std::uint8_t> labels;
  int rows = 0;
  int cols = 0;
  Eigen::Index count() const { return images.cols(); }
};

/// Load an images/labels IDX pair. Expects big-endian magic 0x00000803 for
/// images (3 dimension sizes) and 0x00000801 for labels (1 dimension size),
/// and equal image/label counts.
RawDigits load_idx(const std::string& images_path, const std::string& labels_path);

/// Keep only two digit classes, relabel class_a -> 0 and class_b -> 1, and
/// truncate each class to per_class_cap samples (in file order). Throws
/// std::runtime_error naming the class and shortfall when a class has fewer
/// than per_class_cap samples.
LabeledDataset filter_binary(const RawDigits& raw, int class_a, int class_b,
                             std::int64_t per_class_cap);

// IDX writers, used to craft fixtures and to round-trip the parser.
void write_idx_images(const std::string& path, int rows, int cols,
                      const std::vector<std::uint8_t>& pixels);
void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels);

}  // namespace doclab
