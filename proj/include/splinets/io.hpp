#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splinets/bases.hpp"
#include "splinets/project.hpp"

namespace splinets {

struct Archive {
  SplineFamily family;
  std::optional<DyadicNet> net;
  std::map<std::string, std::string> metadata;
};

std::string archive_to_string(const Archive& archive);
Archive archive_from_string(const std::string& text);
void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  Matrix values;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& values);

FunctionalData functional_data_from_csv(const CsvTable& table);

}  // namespace splinets
