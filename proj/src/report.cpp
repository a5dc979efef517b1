#include "chanalyze/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace chanalyze {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

ReportWriter::ReportWriter(std::string out_dir, std::string config_digest)
    : out_dir_(std::move(out_dir)), config_digest_(std::move(config_digest)) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir_);
}

void ReportWriter::write_csv(const std::string& filename, const Row& header,
                             const std::vector<Row>& rows) {
    const std::string path = out_dir_ + "/" + filename;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(header[i]);
    }
    os << '\n';
    for (const Row& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << csv_escape(row[i]);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("failed writing " + path);
    files_.emplace_back(filename, rows.size());
}

void ReportWriter::write_text(const std::string& filename, const std::string& content) {
    const std::string path = out_dir_ + "/" + filename;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << content;
    if (!os) throw std::runtime_error("failed writing " + path);
    std::size_t lines = 0;
    for (const char c : content) lines += c == '\n' ? 1 : 0;
    files_.emplace_back(filename, lines);
}

void ReportWriter::finish() {
    const std::string path = out_dir_ + "/manifest.csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "file,rows,config_digest,version\n";
    for (const auto& [name, rows] : files_) {
        os << csv_escape(name) << ',' << rows << ',' << config_digest_ << ','
           << csv_escape(kToolVersion) << '\n';
    }
}

}  // namespace chanalyze
