#pragma once

// Parameter grids for sweeps: "start:stop:step" (inclusive; "start:stop"
// steps by 1), "a,b,c", or a single value. Every number may be an arithmetic expression in pi, e.g.
// "pi/2", "-3*pi/8", "2pi".

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "squeezelab/errors.hpp"

namespace squeezelab::cli {

class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    double parse() {
        const double v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
        return v;
    }

private:
    double expr() {
        double v = term();
        for (;;) {
            skip_ws();
            if (consume('+')) v += term();
            else if (consume('-')) v -= term();
            else return v;
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            skip_ws();
            if (consume('*')) v *= factor();
            else if (consume('/')) v /= factor();
            else if (peek_pi()) v *= factor();  // "2pi"
            else return v;
        }
    }

    double factor() {
        skip_ws();
        if (consume('-')) return -factor();
        if (consume('+')) return factor();
        if (consume('(')) {
            const double v = expr();
            skip_ws();
            if (!consume(')')) fail("missing ')'");
            return v;
        }
        if (peek_pi()) {
            pos_ += 2;
            return std::numbers::pi;
        }
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr == first) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    bool peek_pi() const {
        return pos_ + 1 < text_.size() && std::tolower(static_cast<unsigned char>(text_[pos_])) == 'p' &&
               std::tolower(static_cast<unsigned char>(text_[pos_ + 1])) == 'i';
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw UsageError("cannot parse number '" + std::string(text_) + "': " + why);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) return out;
        start = at + 1;
    }
}

}  // namespace detail

inline double parse_real(std::string_view text) {
    const double v = detail::ExprParser(text).parse();
    if (!std::isfinite(v)) throw UsageError("non-finite value '" + std::string(text) + "'");
    return v;
}

inline std::size_t range_count(double start, double stop, double step) {
    if (step == 0.0 || !std::isfinite(step)) throw UsageError("grid step must be nonzero");
    const double span = (stop - start) / step;
    if (span < -1e-9) throw UsageError("grid step points away from stop");
    return static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
}

/// Inclusive range; the endpoint is kept when it lies within 1e-9 steps.
inline std::vector<double> make_range(double start, double stop, double step, std::size_t cap) {
    const std::size_t n = range_count(start, stop, step);
    if (n > cap) throw UsageError("grid has " + std::to_string(n) + " points, above the cap");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

inline constexpr std::size_t kDefaultPointCap = 10'000'000;

inline std::vector<double> parse_grid(std::string_view text, std::size_t cap = kDefaultPointCap) {
    if (text.find(':') != std::string_view::npos) {
        const auto parts = detail::split(text, ':');
        if (parts.size() != 2 && parts.size() != 3) {
            throw UsageError("range grid must be start:stop[:step], got '" + std::string(text) + "'");
        }
        const double step = parts.size() == 3 ? parse_real(parts[2]) : 1.0;
        return make_range(parse_real(parts[0]), parse_real(parts[1]), step, cap);
    }
    std::vector<double> out;
    for (auto item : detail::split(text, ',')) out.push_back(parse_real(item));
    if (out.size() > cap) throw UsageError("grid above the point cap");
    return out;
}

/// Non-negative integer grid (photon numbers).
inline std::vector<std::size_t> parse_index_grid(std::string_view text, std::size_t cap = kDefaultPointCap) {
    std::vector<std::size_t> out;
    for (double v : parse_grid(text, cap)) {
        if (v < 0.0 || v != std::floor(v)) throw UsageError("photon numbers must be non-negative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace squeezelab::cli
