#pragma once

#include <string>
#include <vector>

#include "sparsejl/types.hpp"

// Dataset and matrix file ingestion/emission.
//
// Sparse text: one vector per line, an optional leading label token (any
// token without a ':'), then "index:value" pairs. Indices are 0-based unless
// one_based is set. A labeled line without pairs is the zero vector.
// Dense CSV: one comma-separated row per vector, no header.
// Format is autodetected from the extension (.csv = dense) and can be forced.

namespace sparsejl::io {

enum class DataFormat { Auto, SparseText, DenseCsv };

// dim_hint pins the ambient dimension (indices must stay below it); when 0
// the dimension is inferred as max index + 1 over the file.
Dataset load_dataset(const std::string& path, DataFormat format = DataFormat::Auto,
                     bool one_based = false, uint32_t dim_hint = 0);

// Sparse text writer. Labels are emitted when present; when absent and a
// zero vector must be represented, synthetic labels p<i> are generated.
void save_dataset(const Dataset& X, const std::string& path);

DenseMatrix load_dense_csv(const std::string& path);
void save_dense_csv(const DenseMatrix& M, const std::string& path);

// Round-trip-exact decimal rendering used for every emitted value.
std::string format_double(double v);

}  // namespace sparsejl::io
