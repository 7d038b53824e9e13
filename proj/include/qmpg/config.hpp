/// @file config.hpp
/// @brief JSON run configuration with line-precise diagnostics.
#pragma once

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmpg/rootsys.hpp"
#include "qmpg/twist.hpp"

namespace qmpg {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Names accepted by --suite, in execution order.
inline const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{"hopf",    "pairing", "serre",  "double", "twistdouble",
                                            "modules", "braiding", "cor310", "kprop",  "norms"};
    return s;
}

/// Validates and orders suite names; "all" selects every suite.
inline std::vector<std::string> expand_suites(const std::vector<std::string>& names) {
    std::vector<bool> on(known_suites().size(), false);
    for (const auto& name : names) {
        if (name == "all") {
            std::fill(on.begin(), on.end(), true);
            continue;
        }
        const auto it = std::find(known_suites().begin(), known_suites().end(), name);
        if (it == known_suites().end()) throw std::invalid_argument("unknown suite '" + name + "'");
        on[static_cast<std::size_t>(it - known_suites().begin())] = true;
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < on.size(); ++k)
        if (on[k]) out.push_back(known_suites()[k]);
    return out;
}

struct Caps {
    int height = 0;               // 0: default for the Cartan type
    std::size_t dimension = 4096; // largest module built
    int grid = 1;                 // coordinate bound for weight and torus samples
};

inline int default_height_cap(const CartanData& c) {
    if (c.rank() == 1) return 6;
    if (c.rank() == 2 && c.cartan()[1][0] == -3) return 4;
    return 5;
}

struct Config {
    std::string source;
    CartanData cartan;
    std::string lattice_kind = "weight";
    IMat lattice_basis;  // columns in fundamental-weight coordinates
    std::vector<std::string> symbols;
    std::vector<std::vector<std::string>> u_text;
    LinMat u;
    Caps caps;
    std::vector<std::string> suites;
    bool expensive = false;
    unsigned seed = 1;

    [[nodiscard]] Lattice lattice() const {
        if (lattice_kind == "weight") return Lattice::weight(cartan);
        if (lattice_kind == "root") return Lattice::root(cartan);
        return Lattice::custom(cartan, lattice_basis);
    }
    [[nodiscard]] Bicharacter bicharacter() const { return Bicharacter(cartan, lattice(), u); }
    [[nodiscard]] int height_cap() const { return caps.height > 0 ? caps.height : default_height_cap(cartan); }
    [[nodiscard]] bool is_g2() const { return cartan.rank() == 2 && (cartan.cartan()[1][0] == -3 || cartan.cartan()[0][1] == -3); }
};

namespace detail {

/// JSON pointer token escaping: '~' becomes "~0" and '/' becomes "~1".
inline std::string pointer_escape(const std::string& key) {
    std::string out;
    for (char ch : key) {
        if (ch == '~') out += "~0";
        else if (ch == '/') out += "~1";
        else out += ch;
    }
    return out;
}

/// Source position of every value, keyed by JSON pointer.
struct Position {
    std::size_t line = 1, column = 1;
};

/// Input iterator that publishes how many characters the parser has consumed.
class CountingIterator {
public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    CountingIterator() = default;
    CountingIterator(const char* p, std::size_t* consumed, const char* begin) : p_(p), consumed_(consumed), begin_(begin) {}
    reference operator*() const { return *p_; }
    CountingIterator& operator++() {
        ++p_;
        if (consumed_) *consumed_ = static_cast<std::size_t>(p_ - begin_);
        return *this;
    }
    CountingIterator operator++(int) {
        CountingIterator t = *this;
        ++*this;
        return t;
    }
    friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p_ == b.p_; }
    friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p_ != b.p_; }

private:
    const char* p_ = nullptr;
    std::size_t* consumed_ = nullptr;
    const char* begin_ = nullptr;
};

inline Position position_of(std::string_view text, std::size_t offset) {
    Position pos;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++pos.line;
            pos.column = 1;
        } else {
            ++pos.column;
        }
    }
    return pos;
}

/// SAX consumer that records where each value starts.
class Locator {
public:
    using json = nlohmann::json;
    using number_integer_t = json::number_integer_t;
    using number_unsigned_t = json::number_unsigned_t;
    using number_float_t = json::number_float_t;
    using string_t = json::string_t;
    using binary_t = json::binary_t;

    Locator(std::string_view text, const std::size_t* consumed) : text_(text), consumed_(consumed) {}

    bool null() { return value(false); }
    bool boolean(bool) { return value(false); }
    bool number_integer(number_integer_t) { return value(true); }
    bool number_unsigned(number_unsigned_t) { return value(true); }
    bool number_float(number_float_t, const string_t&) { return value(true); }
    bool string(string_t&) { return value(false); }
    bool binary(binary_t&) { return value(false); }
    bool start_object(std::size_t) { return open(false); }
    bool key(string_t& k) {
        frames_.back().key = k;
        return true;
    }
    bool end_object() { return close(); }
    bool start_array(std::size_t) { return open(true); }
    bool end_array() { return close(); }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) { return false; }

    std::map<std::string, Position> positions;

private:
    struct Frame {
        std::string path;
        bool array = false;
        std::size_t index = 0;
        std::string key;
    };

    std::string child_path() {
        if (frames_.empty()) return "";
        Frame& f = frames_.back();
        if (f.array) return f.path + "/" + std::to_string(f.index++);
        return f.path + "/" + pointer_escape(f.key);
    }
    // Offset of the last character of the token just read; numbers are
    // terminated by one character of lookahead.
    std::size_t token_end(bool number) const {
        std::size_t k = *consumed_;
        if (number && k > 0 && k <= text_.size()) {
            const char c = text_[k - 1];
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-'))
                --k;
        }
        while (k > 0 && std::isspace(static_cast<unsigned char>(text_[k - 1]))) --k;
        return k == 0 ? 0 : k - 1;
    }
    std::size_t token_start(std::size_t end, bool number) const {
        if (text_[end] == '"') {
            std::size_t k = end;
            while (k > 0) {
                --k;
                if (text_[k] == '"') {
                    std::size_t bs = 0;
                    while (k >= bs + 1 && text_[k - bs - 1] == '\\') ++bs;
                    if (bs % 2 == 0) return k;
                }
            }
            return 0;
        }
        std::size_t k = end;
        if (number || std::isalpha(static_cast<unsigned char>(text_[end])))
            while (k > 0 && !std::isspace(static_cast<unsigned char>(text_[k - 1])) &&
                   std::string_view(",:[{").find(text_[k - 1]) == std::string_view::npos)
                --k;
        return k;
    }
    bool value(bool number) {
        const std::size_t end = token_end(number);
        positions[child_path()] = position_of(text_, token_start(end, number));
        return true;
    }
    bool open(bool array) {
        const std::size_t at = token_end(false);
        const std::string path = child_path();
        positions[path] = position_of(text_, at);
        frames_.push_back({path, array, 0, {}});
        return true;
    }
    bool close() {
        frames_.pop_back();
        return true;
    }

    std::string_view text_;
    const std::size_t* consumed_;
    std::vector<Frame> frames_;
};

class ConfigReader {
public:
    using json = nlohmann::json;

    ConfigReader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {
        try {
            doc_ = json::parse(text_.begin(), text_.end());
        } catch (const json::parse_error& e) {
            const Position p = position_of(text_, e.byte > 0 ? e.byte - 1 : 0);
            std::string what = e.what();
            if (const auto k = what.find("syntax error"); k != std::string::npos) what = what.substr(k);
            throw ConfigError(where(p) + "invalid JSON: " + what);
        }
        std::size_t consumed = 0;
        Locator loc(text_, &consumed);
        const CountingIterator first(text_.data(), &consumed, text_.data());
        const CountingIterator last(text_.data() + text_.size(), nullptr, text_.data());
        json::sax_parse(first, last, &loc);
        positions_ = std::move(loc.positions);
    }

    [[nodiscard]] const json& doc() const { return doc_; }

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        std::string p = pointer;
        while (!positions_.count(p) && !p.empty()) p = p.substr(0, p.rfind('/'));
        const auto it = positions_.find(p);
        throw ConfigError(where(it == positions_.end() ? Position{} : it->second) + message);
    }

    [[nodiscard]] const json& at(const std::string& pointer) const { return doc_.at(json::json_pointer(pointer)); }

    std::int64_t integer(const std::string& pointer, const std::string& what) const {
        const json& v = at(pointer);
        if (!v.is_number_integer()) fail(pointer, what + " must be an integer");
        return v.get<std::int64_t>();
    }
    std::string string(const std::string& pointer, const std::string& what) const {
        const json& v = at(pointer);
        if (!v.is_string()) fail(pointer, what + " must be a string");
        return v.get<std::string>();
    }
    IMat int_matrix(const std::string& pointer, const std::string& what) const {
        const json& v = at(pointer);
        if (!v.is_array() || v.empty()) fail(pointer, what + " must be a non-empty array of rows");
        IMat m;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string row = pointer + "/" + std::to_string(i);
            if (!v[i].is_array()) fail(row, what + " row " + std::to_string(i + 1) + " must be an array");
            if (v[i].size() != v.size()) fail(row, what + " must be square");
            IVec r;
            for (std::size_t j = 0; j < v[i].size(); ++j)
                r.push_back(integer(row + "/" + std::to_string(j), what + " entries"));
            m.push_back(std::move(r));
        }
        return m;
    }

private:
    [[nodiscard]] std::string where(const Position& p) const {
        return source_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.column) + ": ";
    }

    std::string_view text_;
    std::string source_;
    json doc_;
    std::map<std::string, Position> positions_;
};

}  // namespace detail

/// Parses a configuration document; every error names file, line and column.
inline Config parse_config(std::string_view text, const std::string& source = "<config>") {
    const detail::ConfigReader r(text, source);
    const auto& doc = r.doc();
    if (!doc.is_object()) r.fail("", "configuration must be a JSON object");
    static const std::vector<std::string> keys{"cartan", "lattice", "symbols", "u", "caps", "suites", "expensive", "seed"};
    for (const auto& [k, v] : doc.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            r.fail("/" + detail::pointer_escape(k), "unknown key '" + k + "'");

    Config cfg;
    cfg.source = source;

    // Cartan data
    if (!doc.contains("cartan")) r.fail("", "missing required key 'cartan'");
    const auto& cj = doc["cartan"];
    try {
        if (cj.is_object() && cj.contains("matrix")) {
            for (const auto& [k, v] : cj.items())
                if (k != "matrix") r.fail("/cartan/" + k, "unexpected key '" + k + "' next to 'matrix'");
            cfg.cartan = CartanData::from_matrix(r.int_matrix("/cartan/matrix", "cartan matrix"));
        } else if (cj.is_object()) {
            for (const auto& [k, v] : cj.items())
                if (k != "series" && k != "rank") r.fail("/cartan/" + k, "unexpected key '" + k + "' in cartan");
            if (!cj.contains("series") || !cj.contains("rank")) r.fail("/cartan", "cartan needs 'series' and 'rank', or 'matrix'");
            const std::string series = r.string("/cartan/series", "cartan series");
            if (series.size() != 1) r.fail("/cartan/series", "cartan series must be a single letter");
            const auto rank = r.integer("/cartan/rank", "cartan rank");
            try {
                cfg.cartan = CartanData::from_series(series[0], static_cast<int>(rank));
            } catch (const std::invalid_argument& e) {
                r.fail("/cartan/series", e.what());
            }
        } else {
            r.fail("/cartan", "cartan must be an object");
        }
    } catch (const std::invalid_argument& e) {
        r.fail("/cartan/matrix", e.what());
    }
    const std::size_t n = cfg.cartan.rank();
    if (n > 4) r.fail("/cartan", "rank " + std::to_string(n) + " exceeds the supported maximum of 4");

    // Lattice: Q inside L inside P
    if (doc.contains("lattice")) {
        const auto& lj = doc["lattice"];
        if (lj.is_string()) {
            cfg.lattice_kind = lj.get<std::string>();
            if (cfg.lattice_kind != "weight" && cfg.lattice_kind != "root")
                r.fail("/lattice", "lattice must be \"weight\", \"root\" or {\"basis\": [...]}");
        } else if (lj.is_object() && lj.contains("basis") && lj.size() == 1) {
            // rows of the document are basis vectors; stored as columns
            const IMat rows = r.int_matrix("/lattice/basis", "lattice basis");
            if (rows.size() != n) r.fail("/lattice/basis", "lattice basis must have " + std::to_string(n) + " vectors");
            cfg.lattice_kind = "custom";
            cfg.lattice_basis.assign(n, IVec(n, 0));
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) cfg.lattice_basis[k][j] = rows[j][k];
        } else {
            r.fail("/lattice", "lattice must be \"weight\", \"root\" or {\"basis\": [...]}");
        }
        try {
            (void)cfg.lattice();
        } catch (const std::invalid_argument& e) {
            r.fail("/lattice", std::string("lattice is not between the root and weight lattices: ") + e.what());
        }
    }

    // Formal symbols
    if (doc.contains("symbols")) {
        const auto& sj = doc["symbols"];
        if (!sj.is_array()) r.fail("/symbols", "symbols must be an array of names");
        for (std::size_t k = 0; k < sj.size(); ++k) {
            const std::string ptr = "/symbols/" + std::to_string(k);
            const std::string name = r.string(ptr, "symbol name");
            if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])) ||
                !std::all_of(name.begin(), name.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; }))
                r.fail(ptr, "symbol name '" + name + "' must be an identifier");
            if (name == "q") r.fail(ptr, "'q' is reserved");
            if (std::find(cfg.symbols.begin(), cfg.symbols.end(), name) != cfg.symbols.end())
                r.fail(ptr, "symbol '" + name + "' declared twice");
            cfg.symbols.push_back(name);
        }
        if (cfg.symbols.size() + 1 > kExpDim) r.fail("/symbols", "at most " + std::to_string(kExpDim - 1) + " symbols are supported");
    }

    // The alternating form on the lattice basis
    cfg.u.assign(n, std::vector<LinExp>(n));
    cfg.u_text.assign(n, std::vector<std::string>(n, "0"));
    if (doc.contains("u")) {
        const auto& uj = doc["u"];
        if (!uj.is_array() || uj.size() != n) r.fail("/u", "u must be an array of " + std::to_string(n) + " rows");
        for (std::size_t i = 0; i < n; ++i) {
            const std::string row = "/u/" + std::to_string(i);
            if (!uj[i].is_array() || uj[i].size() != n) r.fail(row, "u row " + std::to_string(i + 1) + " must have " + std::to_string(n) + " entries");
            for (std::size_t j = 0; j < n; ++j) {
                const std::string ptr = row + "/" + std::to_string(j);
                const auto& v = uj[i][j];
                std::string t;
                if (v.is_string())
                    t = v.get<std::string>();
                else if (v.is_number_integer())
                    t = std::to_string(v.get<std::int64_t>());
                else
                    r.fail(ptr, "u entries must be strings such as \"1/2\" or \"1/3 + alpha\"");
                try {
                    cfg.u[i][j] = parse_linexp(t, cfg.symbols);
                } catch (const std::invalid_argument& e) {
                    r.fail(ptr, "cannot parse u entry \"" + t + "\": " + e.what());
                }
                cfg.u_text[i][j] = t;
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (i == j && !cfg.u[i][i].is_zero())
                    r.fail("/u/" + std::to_string(i) + "/" + std::to_string(i),
                           "u must be antisymmetric: diagonal entry u[" + std::to_string(i + 1) + "][" +
                               std::to_string(i + 1) + "] = \"" + cfg.u_text[i][i] + "\" must be 0");
                else if (cfg.u[i][j] != -cfg.u[j][i])
                    r.fail("/u/" + std::to_string(i) + "/" + std::to_string(j),
                           "u must be antisymmetric: u[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "] = \"" +
                               cfg.u_text[i][j] + "\" but u[" + std::to_string(j + 1) + "][" + std::to_string(i + 1) +
                               "] = \"" + cfg.u_text[j][i] + "\"");
    }

    if (doc.contains("caps")) {
        const auto& kj = doc["caps"];
        if (!kj.is_object()) r.fail("/caps", "caps must be an object");
        for (const auto& [k, v] : kj.items()) {
            const std::string ptr = "/caps/" + detail::pointer_escape(k);
            if (k != "height" && k != "dimension" && k != "grid") r.fail(ptr, "unknown cap '" + k + "'");
            const auto x = r.integer(ptr, "cap '" + k + "'");
            if (x < 0 || (k != "grid" && x == 0)) r.fail(ptr, "cap '" + k + "' must be positive");
            if (k == "height") cfg.caps.height = static_cast<int>(x);
            if (k == "dimension") cfg.caps.dimension = static_cast<std::size_t>(x);
            if (k == "grid") cfg.caps.grid = static_cast<int>(x);
        }
    }

    if (doc.contains("suites")) {
        const auto& sj = doc["suites"];
        if (!sj.is_array()) r.fail("/suites", "suites must be an array of names");
        for (std::size_t k = 0; k < sj.size(); ++k) {
            const std::string ptr = "/suites/" + std::to_string(k);
            const std::string name = r.string(ptr, "suite name");
            try {
                (void)expand_suites({name});
            } catch (const std::invalid_argument& e) {
                r.fail(ptr, e.what());
            }
            cfg.suites.push_back(name);
        }
    }

    if (doc.contains("expensive")) {
        if (!doc["expensive"].is_boolean()) r.fail("/expensive", "expensive must be true or false");
        cfg.expensive = doc["expensive"].get<bool>();
    }
    if (doc.contains("seed")) {
        const auto s = r.integer("/seed", "seed");
        if (s < 0) r.fail("/seed", "seed must be non-negative");
        cfg.seed = static_cast<unsigned>(s);
    }
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

/// Parses comma-separated integer coordinates such as "1,0,-2".
inline IVec parse_weight(const std::string& text, std::size_t rank) {
    IVec v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char ch) { return std::isspace(ch); }), tok.end());
        std::size_t used = 0;
        long long x = 0;
        try {
            x = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (tok.empty() || used != tok.size()) throw std::invalid_argument("bad coordinate '" + tok + "' in \"" + text + "\"");
        v.push_back(x);
    }
    if (v.size() != rank)
        throw std::invalid_argument("\"" + text + "\" has " + std::to_string(v.size()) + " coordinates, expected " + std::to_string(rank));
    return v;
}

/// Parses "w+|w-" with words like "s1,s2" or "e".
inline std::pair<WeylElt, WeylElt> parse_weyl_pair(const WeylGroup& W, const std::string& text) {
    const auto bar = text.find('|');
    if (bar == std::string::npos || text.find('|', bar + 1) != std::string::npos)
        throw std::invalid_argument("Weyl pair \"" + text + "\" must have the form w+|w-");
    return {W.parse(text.substr(0, bar)), W.parse(text.substr(bar + 1))};
}

}  // namespace qmpg
