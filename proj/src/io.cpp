#include "normtest/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace normtest {

namespace {

// Splits one record, honouring double quotes ("" is an escaped quote).
std::vector<std::string> split_record(const std::string& line, char delim, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            if (!cur.empty() || was_quoted) {
                throw ParseError("line " + std::to_string(line_no) + ": stray quote");
            }
            quoted = true;
            was_quoted = true;
        } else if (c == delim) {
            fields.push_back(cur);
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) {
        --e;
    }
    return s.substr(b, e - b);
}

std::optional<double> to_double(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) {
        return std::nullopt;
    }
    const char* first = s.data();
    if (*first == '+') {
        ++first;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

DataMatrix parse_csv(std::istream& in, const CsvOptions& options) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_record(line, options.delimiter, line_no);
        if (first_record) {
            first_record = false;
            bool skip = options.header.value_or(false);
            if (!options.header) {
                for (const auto& f : fields) {
                    if (!to_double(f)) {
                        skip = true;
                    }
                }
            }
            if (skip) {
                width = fields.size();
                continue;
            }
        }
        if (width == 0) {
            width = fields.size();
        }
        if (fields.size() != width) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = to_double(fields[c]);
            if (!v) {
                throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                 ": not a number: '" + fields[c] + "'");
            }
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("no data rows");
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t c = 0; c < width; ++c) {
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = rows[j][c];
        }
    }
    return DataMatrix(std::move(m));
}

DataMatrix read_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    return parse_csv(in, options);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const CriticalValueTable& table) {
    out << "d,n,a,alpha,quantile,replications,seed\n";
    for (const auto& e : table.entries) {
        out << e.d << ',' << (e.n ? std::to_string(*e.n) : std::string("inf")) << ',' << format_double(e.a) << ','
            << format_double(e.alpha) << ',' << format_double(e.quantile) << ',' << e.replications << ','
            << e.seed << '\n';
    }
}

nlohmann::ordered_json to_json(const CriticalValueTable& table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : table.entries) {
        nlohmann::ordered_json j;
        j["d"] = e.d;
        if (e.n) {
            j["n"] = *e.n;
        } else {
            j["n"] = "inf";
        }
        j["a"] = e.a;
        j["alpha"] = e.alpha;
        j["quantile"] = e.quantile;
        j["replications"] = e.replications;
        j["seed"] = e.seed;
        arr.push_back(std::move(j));
    }
    return arr;
}

CriticalValueTable table_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array()) {
        throw ParseError("critical-value table must be a JSON array");
    }
    CriticalValueTable t;
    try {
        for (const auto& item : j) {
            CriticalValueEntry e;
            e.d = item.at("d").get<std::size_t>();
            if (item.at("n").is_string()) {
                if (item.at("n").get<std::string>() != "inf") {
                    throw ParseError("n must be an integer or \"inf\"");
                }
            } else {
                e.n = item.at("n").get<std::size_t>();
            }
            e.a = item.at("a").get<double>();
            e.alpha = item.at("alpha").get<double>();
            e.quantile = item.at("quantile").get<double>();
            e.replications = item.at("replications").get<std::size_t>();
            e.seed = item.at("seed").get<std::uint64_t>();
            t.entries.push_back(e);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed critical-value table: ") + ex.what());
    }
    return t;
}

}  // namespace normtest
