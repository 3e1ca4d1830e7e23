#pragma once
// Text exports: CSV with 17 significant digits and a JSON envelope
// {recipe, lattice, ...}. Files are written to a temporary and renamed.

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "askey/markov.hpp"

namespace askey {

// Row-major, comma separated, one row per line.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
// Skips one header line when has_header. Throws DomainError on ragged rows
// or bad numbers.
Eigen::MatrixXd matrix_from_csv(std::string_view text, bool has_header = false);

// Named columns of equal length, with a header line.
std::string columns_to_csv(const std::vector<std::string>& header,
                           const std::vector<Eigen::VectorXd>& columns);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);   // array of rows
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

nlohmann::json lattice_to_json(const LatticeSpec& lattice);

// Envelope with the canonical recipe text and the lattice; callers add
// their own fields.
nlohmann::json envelope(const std::string& recipe_text, const LatticeSpec& lattice);

void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace askey
