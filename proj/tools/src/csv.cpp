#include "gibbs/cli/csv.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace gibbs::cli {

ResultRow make_row(std::string model, double beta, int n, int a, int b, int c, std::string quantity, double value,
                   std::uint64_t seed, std::int64_t runtime_ms) {
    ResultRow row{std::move(model), beta, n, a, b, c, std::move(quantity), value, false, seed, runtime_ms};
    if (!std::isfinite(value)) {
        row.value = kNumericalFloor;
        row.floor_flag = true;
    } else if (std::abs(value) < kNumericalFloor) {
        row.floor_flag = true;
    }
    return row;
}

const std::vector<std::string>& results_header() {
    static const std::vector<std::string> header{"model",    "beta",  "n",          "a_size", "b_size",    "c_size",
                                                 "quantity", "value", "floor_flag", "seed",   "runtime_ms"};
    return header;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw SchemaMismatch("cannot format double");
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last) throw SchemaMismatch("not a number: '" + text + "'");
    return v;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) throw SchemaMismatch("unterminated quote in CSV line");
    fields.push_back(std::move(cur));
    return fields;
}

std::string format_results(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    const auto& header = results_header();
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
        out << csv_field(r.model) << ',' << format_double(r.beta) << ',' << r.n << ',' << r.a_size << ',' << r.b_size
            << ',' << r.c_size << ',' << csv_field(r.quantity) << ',' << format_double(r.value) << ','
            << (r.floor_flag ? 1 : 0) << ',' << r.seed << ',' << r.runtime_ms << '\n';
    }
    return out.str();
}

namespace {

template <typename T>
T parse_int_field(const std::string& text, const char* column) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw SchemaMismatch(std::string("column ") + column + ": not an integer: '" + text + "'");
    }
    return v;
}

}  // namespace

std::vector<ResultRow> parse_results(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_csv_line(line) != results_header()) throw SchemaMismatch("unexpected CSV header: " + line);

    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != results_header().size()) {
            throw SchemaMismatch("line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(results_header().size()) + " fields, got " + std::to_string(f.size()));
        }
        ResultRow r;
        r.model = f[0];
        r.beta = parse_double(f[1]);
        r.n = parse_int_field<int>(f[2], "n");
        r.a_size = parse_int_field<int>(f[3], "a_size");
        r.b_size = parse_int_field<int>(f[4], "b_size");
        r.c_size = parse_int_field<int>(f[5], "c_size");
        r.quantity = f[6];
        r.value = parse_double(f[7]);
        const int flag = parse_int_field<int>(f[8], "floor_flag");
        if (flag != 0 && flag != 1) throw SchemaMismatch("floor_flag must be 0 or 1");
        r.floor_flag = flag == 1;
        r.seed = parse_int_field<std::uint64_t>(f[9], "seed");
        r.runtime_ms = parse_int_field<std::int64_t>(f[10], "runtime_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaMismatch("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_results(buf.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace gibbs::cli
