#include "mixrate/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixrate/errors.hpp"

namespace mixrate {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const CsvTable& t) {
    std::ostringstream os;
    for (size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& r : t.rows) {
        if (r.size() != t.columns.size()) throw InternalError("CSV row width does not match header");
        for (size_t c = 0; c < r.size(); ++c) {
            if (c) os << ',';
            if (!std::isnan(r[c])) os << format_number(r[c]);
        }
        os << '\n';
    }
    return os.str();
}

namespace {

void write_json(std::ostringstream& os, const Json& j, int depth) {
    const std::string pad(2 * depth + 2, ' '), close(2 * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { os << "{}"; return; }
            os << "{\n";
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                os << pad << Json(it.key()).dump() << ": ";
                write_json(os, it.value(), depth + 1);
                os << (i + 1 < j.size() ? ",\n" : "\n");
            }
            os << close << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { os << "[]"; return; }
            os << '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], depth + 1);
            }
            os << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            os << (std::isfinite(v) ? format_number(v) : "null");
            return;
        }
        default:
            os << j.dump();
    }
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot write '" + path + "'");
    out << text;
    out.close();
    if (!out) throw IOError("write to '" + path + "' failed");
}

}  // namespace

std::string to_json(const Json& j) {
    std::ostringstream os;
    write_json(os, j, 0);
    os << '\n';
    return os.str();
}

void emit_report(const CsvTable& t, const std::string& path) {
    if (t.rows.empty()) throw InvalidParameter("empty result set; nothing written");
    write_file(to_csv(t), path);
}

void emit_report(const Json& j, const std::string& path) {
    if (j.is_null() || j.empty()) throw InvalidParameter("empty result set; nothing written");
    write_file(to_json(j), path);
}

}  // namespace mixrate
