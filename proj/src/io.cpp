#include "wfa/io.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <stdexcept>

namespace wfa {

std::string fmt17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";  // never produced for speeds
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

namespace {

void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
        auto u = static_cast<unsigned char>(ch);
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (u < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", u);
                out += buf;
            } else {
                out += ch;
            }
        }
    }
    out += '"';
}

void emit(std::string& out, const Json& j, bool pretty, int depth) {
    auto nl = [&](int d) {
        if (!pretty) return;
        out += '\n';
        out.append(static_cast<std::size_t>(2 * d), ' ');
    };
    switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case Json::value_t::number_float: {
        double v = j.get<double>();
        out += std::isfinite(v) ? fmt17(v) : "null";
        break;
    }
    case Json::value_t::string: escape(out, j.get_ref<const std::string&>()); break;
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            break;
        }
        out += '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += ',';
            first = false;
            nl(depth + 1);
            emit(out, e, pretty, depth + 1);
        }
        nl(depth);
        out += ']';
        break;
    }
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += '{';
        bool first = true;
        // nlohmann's default object is a std::map, so iteration is key-sorted
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            nl(depth + 1);
            escape(out, it.key());
            out += pretty ? ": " : ":";
            emit(out, it.value(), pretty, depth + 1);
        }
        nl(depth);
        out += '}';
        break;
    }
    default: throw std::logic_error("dump_json: unsupported value");
    }
}

}  // namespace

std::string dump_json(const Json& j, bool pretty) {
    std::string out;
    emit(out, j, pretty, 0);
    return out;
}

Json speed_json(const Speed& s) {
    if (s.is_inf()) return Json{{"inf", true}};
    return s.value;
}

std::string csv_cell(double v) { return std::isfinite(v) ? fmt17(v) : ""; }
std::string csv_cell(const Speed& s) { return s.is_inf() ? "" : fmt17(s.value); }

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header, const std::string& comment)
    : os_(os), cols_(header.size()) {
    if (!comment.empty()) os_ << "# " << comment << '\n';
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        os_ << cells[i];
    }
    os_ << '\n';
}

}  // namespace wfa
