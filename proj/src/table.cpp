#include "mulrk/table.hpp"

#include "mulrk/format.hpp"

#include <charconv>
#include <stdexcept>

namespace mulrk {

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    return columns.size();
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += quote_if_needed(fields[i]);
    }
    out += '\n';
}

// Splits one logical record; quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

} // namespace

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_g17(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return {};
}

std::string to_csv(const Table& t) {
    std::string out;
    append_row(out, t.columns);
    std::vector<std::string> fields;
    for (const auto& row : t.rows) {
        fields.clear();
        for (const Cell& c : row) fields.push_back(format_cell(c));
        append_row(out, fields);
    }
    return out;
}

Cell parse_cell(const std::string& text) {
    if (text.empty()) return std::monostate{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    std::int64_t i = 0;
    if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc{} && p == last && !(i == 0 && text[0] == '-')) return i;
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc{} && p == last) return d;
    return text;
}

Table read_csv(std::istream& in) {
    Table t;
    std::vector<std::string> fields;
    if (!read_record(in, fields)) {
        throw std::invalid_argument("CSV input is empty");
    }
    t.columns = fields;
    std::size_t line = 1;
    while (read_record(in, fields)) {
        ++line;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != t.columns.size()) {
            throw std::invalid_argument("CSV record " + std::to_string(line) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(t.columns.size()));
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) row.push_back(parse_cell(f));
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json rows_to_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            const Cell& c = row[i];
            if (const auto* d = std::get_if<double>(&c)) {
                obj[t.columns[i]] = *d;
            } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
                obj[t.columns[i]] = *n;
            } else if (const auto* s = std::get_if<std::string>(&c)) {
                obj[t.columns[i]] = *s;
            } else {
                obj[t.columns[i]] = nullptr;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

} // namespace mulrk
