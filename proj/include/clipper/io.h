/**
 * @file io.h
 * @brief Point cloud, association, and matrix file I/O
 */

#pragma once

#include <filesystem>

#include "clipper/types.h"

namespace clipper::io {

/// Reads a point cloud from text: one "x y z" per line, whitespace- or
/// comma-separated; blank lines and lines starting with '#' are skipped.
Eigen::Matrix3Xd readPointCloudText(const std::filesystem::path& path);

void writePointCloudText(const std::filesystem::path& path, const Eigen::Matrix3Xd& cloud);

/// Reads a point cloud from raw little-endian float64 (x, y, z) triples.
Eigen::Matrix3Xd readPointCloudBinary(const std::filesystem::path& path);

void writePointCloudBinary(const std::filesystem::path& path, const Eigen::Matrix3Xd& cloud);

/// Associations as CSV rows "p,q" of zero-based indices.
AssociationSet readAssociationsCsv(const std::filesystem::path& path);

void writeAssociationsCsv(const std::filesystem::path& path, const AssociationSet& associations);

/// Dense matrix as CSV, one row per line, full double precision.
void writeMatrixCsv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

Eigen::MatrixXd readMatrixCsv(const std::filesystem::path& path);

}  // namespace clipper::io
