/// @file cache.hpp
/// @brief Persistent pairing memo stored as versioned JSON lines.
///
/// Line 1 is {"format":"qmpg-pairing-cache","version":N}; every further line is
/// {"k":"<cartan>|<e-word>|<f-word>","v":"<scalar>"}. Entries for other Cartan
/// matrices are kept untouched when the file is rewritten.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qmpg/qpair.hpp"

namespace qmpg {

inline constexpr int kCacheVersion = 1;

inline std::string cartan_key(const CartanData& c) {
    std::string s;
    for (std::size_t i = 0; i < c.rank(); ++i) {
        if (i) s += ";";
        s += join_ivec(c.cartan()[i]);
    }
    return s;
}

inline std::string word_key(const Word& w) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k] + 1);
    return s;
}

inline Word parse_word_key(const std::string& s) {
    Word w;
    if (s.empty()) return w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        const int x = std::stoi(tok, &used);
        if (used != tok.size() || x < 1) throw std::invalid_argument("bad word '" + s + "'");
        w.push_back(x - 1);
    }
    return w;
}

struct CacheLoad {
    std::size_t loaded = 0;   // entries inserted into the memo
    std::string warning;      // non-empty when the file was ignored
};

class PairingCache {
public:
    explicit PairingCache(std::string path) : path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const { return path_; }

    /// Reads the file and seeds the memo of B. A missing file is not an error;
    /// a stale version or any malformed line discards the whole file.
    CacheLoad load(const QuantumBorel& B) {
        CacheLoad res;
        entries_.clear();
        std::ifstream in(path_);
        if (!in) return res;
        std::string line;
        std::map<std::string, std::string> read;
        std::size_t lineno = 1;
        try {
            if (!std::getline(in, line)) return res;
            const auto head = nlohmann::json::parse(line);
            if (head.value("format", "") != "qmpg-pairing-cache") throw std::invalid_argument("not a pairing cache");
            const int version = head.at("version").get<int>();
            if (version != kCacheVersion) {
                res.warning = "cache " + path_ + " has version " + std::to_string(version) + ", expected " +
                              std::to_string(kCacheVersion) + "; ignoring it";
                return res;
            }
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                const auto j = nlohmann::json::parse(line);
                read[j.at("k").get<std::string>()] = j.at("v").get<std::string>();
            }
        } catch (const std::exception& e) {
            res.warning = "cache " + path_ + ":" + std::to_string(lineno) + " is corrupt (" + e.what() + "); ignoring it";
            return res;
        }
        const std::string mine = cartan_key(B.cartan()) + "|";
        std::vector<std::tuple<Word, Word, Scalar>> parsed;
        try {
            for (const auto& [k, v] : read) {
                if (k.compare(0, mine.size(), mine) != 0) continue;
                const std::string rest = k.substr(mine.size());
                const auto bar = rest.find('|');
                if (bar == std::string::npos) throw std::invalid_argument("bad key '" + k + "'");
                parsed.emplace_back(parse_word_key(rest.substr(0, bar)), parse_word_key(rest.substr(bar + 1)), Scalar::parse(v));
            }
        } catch (const std::exception& e) {
            res.warning = "cache " + path_ + " is corrupt (" + e.what() + "); ignoring it";
            return res;
        }
        entries_ = std::move(read);
        for (const auto& [E, F, s] : parsed) B.memo_insert(E, F, s);
        res.loaded = parsed.size();
        return res;
    }

    /// Merges the memo of B into the file, sorted by key, via a temporary file.
    void store(const QuantumBorel& B) {
        const std::string mine = cartan_key(B.cartan()) + "|";
        for (const auto& [key, value] : B.memo_snapshot())
            entries_[mine + word_key(key.first) + "|" + word_key(key.second)] = value.str();
        const std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write cache " + tmp);
            out << nlohmann::json{{"format", "qmpg-pairing-cache"}, {"version", kCacheVersion}}.dump() << "\n";
            for (const auto& [k, v] : entries_) {
                nlohmann::ordered_json j;
                j["k"] = k;
                j["v"] = v;
                out << j.dump() << "\n";
            }
            if (!out) throw std::runtime_error("cannot write cache " + tmp);
        }
        std::filesystem::rename(tmp, path_);
    }

private:
    std::string path_;
    std::map<std::string, std::string> entries_;
};

}  // namespace qmpg
