#include "askey/io.hpp"

#include <fstream>
#include <system_error>
#include <sstream>
#include <unistd.h>

#include "askey/errors.hpp"
#include "askey/format.hpp"

namespace askey {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_real17(m(i, j));
        }
        out += '\n';
    }
    return out;
}

Eigen::MatrixXd matrix_from_csv(std::string_view text, bool has_header) {
    std::vector<std::vector<double>> rows;
    bool skip = has_header;
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (skip) {
            skip = false;
            continue;
        }
        std::vector<double> row;
        for (const auto cell : split(line, ',')) row.push_back(parse_real(trim(cell)));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DomainError("csv line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                              " fields, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

std::string columns_to_csv(const std::vector<std::string>& header, const std::vector<Eigen::VectorXd>& columns) {
    if (header.size() != columns.size()) throw DomainError("columns_to_csv: header size mismatch");
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
    out += '\n';
    const Eigen::Index n = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != n) throw DomainError("columns_to_csv: ragged columns");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out += ',';
            out += format_real17(columns[j](i));
        }
        out += '\n';
    }
    return out;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const double x : v) out.push_back(x);
    return out;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DomainError("json matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw DomainError("json matrix rows must have equal length");
        }
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DomainError("json vector must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

nlohmann::json lattice_to_json(const LatticeSpec& lattice) {
    if (lattice.is_finite()) return {{"kind", "finite"}, {"N", lattice.max_point()}, {"size", lattice.size()}};
    return {{"kind", "truncated"},
            {"M", lattice.max_point()},
            {"size", lattice.size()},
            {"tail_eps", lattice.tail_eps()}};
}

nlohmann::json envelope(const std::string& recipe_text, const LatticeSpec& lattice) {
    return {{"recipe", recipe_text}, {"lattice", lattice_to_json(lattice)}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace askey
