/// @file report.hpp
/// @brief Report tables and their text, CSV and JSON renderings.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qmpg {

struct Section {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != columns.size()) throw std::logic_error("row width does not match section '" + name + "'");
        rows.push_back(std::move(row));
    }
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<Section> sections;
    bool ok = true;

    void set(const std::string& key, const std::string& value) {
        for (auto& [k, v] : header)
            if (k == key) {
                v = value;
                return;
            }
        header.emplace_back(key, value);
    }
    Section& section(const std::string& name, std::vector<std::string> columns) {
        sections.push_back({name, std::move(columns), {}});
        return sections.back();
    }
};

enum class Format { Text, Csv, Json };

inline Format parse_format(const std::string& s) {
    if (s == "text") return Format::Text;
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + s + "' (expected text, csv or json)");
}

namespace detail {

inline std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char ch : s)
        if ((ch & 0xC0) != 0x80) ++w;
    return w;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace detail

inline std::string render_text(const Report& r) {
    std::string out = "qmpg " + r.command + "\n";
    std::size_t kw = 0;
    for (const auto& [k, v] : r.header) kw = std::max(kw, detail::display_width(k));
    for (const auto& [k, v] : r.header) out += k + ":" + std::string(kw + 1 - detail::display_width(k), ' ') + v + "\n";
    for (const auto& s : r.sections) {
        out += "\n[" + s.name + "]\n";
        std::vector<std::size_t> w(s.columns.size(), 0);
        for (std::size_t c = 0; c < s.columns.size(); ++c) w[c] = detail::display_width(s.columns[c]);
        for (const auto& row : s.rows)
            for (std::size_t c = 0; c < row.size(); ++c) w[c] = std::max(w[c], detail::display_width(row[c]));
        auto line = [&](const std::vector<std::string>& cells) {
            std::string l;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                l += cells[c];
                if (c + 1 < cells.size()) l += std::string(w[c] + 2 - detail::display_width(cells[c]), ' ');
            }
            while (!l.empty() && l.back() == ' ') l.pop_back();
            return l + "\n";
        };
        out += line(s.columns);
        for (const auto& row : s.rows) out += line(row);
    }
    out += "\nresult: " + std::string(r.ok ? "PASS" : "FAIL") + "\n";
    return out;
}

/// One block per section, each introduced by a "# name" line; header pairs come first.
inline std::string render_csv(const Report& r) {
    std::string out = "# qmpg " + r.command + "\n";
    for (const auto& [k, v] : r.header) out += "# " + k + ": " + v + "\n";
    for (const auto& s : r.sections) {
        out += "# section: " + s.name + "\n";
        auto line = [&](const std::vector<std::string>& cells) {
            std::string l;
            for (std::size_t c = 0; c < cells.size(); ++c) l += (c ? "," : "") + detail::csv_field(cells[c]);
            return l + "\n";
        };
        out += line(s.columns);
        for (const auto& row : s.rows) out += line(row);
    }
    out += "# result: " + std::string(r.ok ? "PASS" : "FAIL") + "\n";
    return out;
}

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.header) h[k] = v;
    j["header"] = h;
    j["sections"] = nlohmann::ordered_json::array();
    for (const auto& s : r.sections) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["columns"] = s.columns;
        js["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : s.rows) js["rows"].push_back(row);
        j["sections"].push_back(js);
    }
    j["result"] = r.ok ? "PASS" : "FAIL";
    return j;
}

inline std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

/// Inverse of render_json.
inline Report report_from_json(const std::string& text) {
    const auto j = nlohmann::ordered_json::parse(text);
    Report r;
    r.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("header").items()) r.header.emplace_back(k, v.get<std::string>());
    for (const auto& js : j.at("sections")) {
        Section s{js.at("name").get<std::string>(), js.at("columns").get<std::vector<std::string>>(), {}};
        for (const auto& row : js.at("rows")) s.rows.push_back(row.get<std::vector<std::string>>());
        r.sections.push_back(std::move(s));
    }
    const std::string res = j.at("result").get<std::string>();
    if (res != "PASS" && res != "FAIL") throw std::invalid_argument("bad result field '" + res + "'");
    r.ok = res == "PASS";
    return r;
}

inline std::string render(const Report& r, Format f) {
    switch (f) {
        case Format::Text: return render_text(r);
        case Format::Csv: return render_csv(r);
        case Format::Json: return render_json(r);
    }
    return {};
}

}  // namespace qmpg
