#pragma once

#include <string>
#include <variant>

#include "fbn/sparse.hpp"

namespace fbn {

/// Reads a MatrixMarket file: coordinate real/integer (general or
/// symmetric, the latter expanded to both triangles) becomes a
/// SparseMatrix; array format becomes a DenseVector when it has one
/// column and a SparseMatrix of all entries otherwise. Indices are
/// converted to 0-based. Parse errors carry the offending line number;
/// complex and pattern fields are rejected.
std::variant<SparseMatrix, Vector> load_matrix_market(const std::string& path);

void save_matrix_market(const std::string& path, const SparseMatrix& m);
void save_matrix_market(const std::string& path, const Vector& v);

}  // namespace fbn
