/**
 * @file rational.hpp
 * @brief Small exact rationals with overflow detection.
 *
 * Rat carries weight coordinates, bilinear-form values and q-exponents.
 * These stay tiny at desk scale, so an int64 numerator/denominator pair is
 * enough; every operation goes through __int128 and throws on overflow
 * instead of wrapping. Polynomial coefficients use GMP (see scalar.hpp).
 */

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace qmpg {

class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    Rat(std::int64_t n, std::int64_t d) { assign(n, d); }

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_ == 0; }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }

    Rat operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.den_ == 1 && b.den_ == 1) return from_wide(static_cast<__int128>(a.num_) + b.num_, 1);
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat&, const Rat&) = default;
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    [[nodiscard]] std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    [[nodiscard]] mpq_class to_mpq() const {
        mpq_class r(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
        r.canonicalize();
        return r;
    }

    [[nodiscard]] std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "a", "-a", "a/b".
    static Rat parse(std::string_view s) {
        auto trim = [](std::string_view v) {
            while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
            return v;
        };
        s = trim(s);
        if (s.empty()) throw std::invalid_argument("empty rational");
        const auto slash = s.find('/');
        auto to_i = [](std::string_view v) {
            std::size_t used = 0;
            const std::string tmp(v);
            long long x = 0;
            try {
                x = std::stoll(tmp, &used);
            } catch (const std::logic_error&) {
                throw std::invalid_argument("bad rational '" + tmp + "'");
            }
            if (used != tmp.size()) throw std::invalid_argument("bad rational '" + tmp + "'");
            return static_cast<std::int64_t>(x);
        };
        if (slash == std::string_view::npos) return Rat(to_i(s));
        return Rat(to_i(trim(s.substr(0, slash))), to_i(trim(s.substr(slash + 1))));
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    void assign(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) { const __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rat: int64 overflow");
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    }
    static Rat from_wide(__int128 n, __int128 d) {
        Rat r;
        r.assign(n, d);
        return r;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

using RatVec = std::vector<Rat>;
using IVec = std::vector<std::int64_t>;

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct IVecHash {
    std::size_t operator()(const IVec& v) const {
        std::size_t h = v.size();
        for (auto x : v) h = hash_combine(h, std::hash<std::int64_t>{}(x));
        return h;
    }
};

inline IVec operator+(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline IVec operator-(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline IVec operator-(const IVec& a) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}
inline IVec operator*(std::int64_t k, const IVec& a) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
}
inline bool is_zero_vec(const IVec& v) {
    for (auto x : v)
        if (x != 0) return false;
    return true;
}

inline RatVec to_rat(const IVec& v) { return RatVec(v.begin(), v.end()); }

inline std::string join_ivec(const IVec& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace qmpg
