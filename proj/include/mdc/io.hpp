#pragma once

#include <filesystem>
#include <string>

#include "mdc/types.hpp"

namespace mdc::io {

/// Points CSV: one point per row, comma-separated reals, '.' decimal
/// separator, shortest round-trip formatting.
MatrixXd read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, const MatrixXd& pts);

/// Labels CSV: one base-10 integer per line.
VectorXi read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::filesystem::path& path, const VectorXi& labels);

/// Writes via a temp file in the destination directory plus rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);

}  // namespace mdc::io
