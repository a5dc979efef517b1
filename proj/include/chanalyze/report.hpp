#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chanalyze {

inline constexpr const char* kToolVersion = "chanalyze 1.0.0";

std::string format_double(double v);
std::string csv_escape(const std::string& field);

// Writes CSVs under a run directory and a manifest.csv listing every file
// with its row count, the config digest, and the tool version. Output is
// byte-identical across reruns with the same inputs.
class ReportWriter {
 public:
    ReportWriter(std::string out_dir, std::string config_digest);

    using Row = std::vector<std::string>;
    void write_csv(const std::string& filename, const Row& header, const std::vector<Row>& rows);
    void write_text(const std::string& filename, const std::string& content);

    // manifest.csv; call once after all files are written.
    void finish();

    const std::string& out_dir() const { return out_dir_; }

 private:
    std::string out_dir_;
    std::string config_digest_;
    std::vector<std::pair<std::string, std::size_t>> files_;  // (name, row count)
};

}  // namespace chanalyze
