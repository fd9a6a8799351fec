#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gibbs::cli {

struct ResultRow {
    std::string model;
    double beta = 0.0;
    int n = 0;
    int a_size = 0;
    int b_size = 0;
    int c_size = 0;
    std::string quantity;
    double value = 0.0;
    // Set when |value| is below the numerical floor, or when the computed
    // value was not finite (value then holds the floor constant).
    bool floor_flag = false;
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;

    bool operator==(const ResultRow&) const = default;
};

// Builds a row, applying the floor convention above to `value`.
ResultRow make_row(std::string model, double beta, int n, int a, int b, int c, std::string quantity, double value,
                   std::uint64_t seed, std::int64_t runtime_ms);

const std::vector<std::string>& results_header();

// Shortest decimal that parses back to the same double.
std::string format_double(double v);
// Strict parse of a whole string; throws SchemaMismatch.
double parse_double(const std::string& text);

std::string format_results(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results(const std::string& text);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

// Splits one CSV line, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& text);

// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gibbs::cli
