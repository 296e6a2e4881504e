#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gradrom/dg_space.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

// Binary matrix container: magic "GRDM", u32 version, u64 rows, u64 cols,
// then column-major IEEE-754 binary64. Everything little-endian. Writes are
// atomic (temp file in the target directory, then rename).
void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

// Two-column CSV "t,energy" with 17 significant digits.
void write_energy_csv(const std::filesystem::path& path, const std::vector<double>& times,
                      const std::vector<double>& values);

// Generic CSV with a header row; all values at 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// Legacy ASCII VTK unstructured grid with duplicated per-element corners and
// point scalars for both solution components.
void write_vtk_fields(const std::filesystem::path& path, const DGSpace& space, const Vector& u,
                      const Vector& v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gradrom
