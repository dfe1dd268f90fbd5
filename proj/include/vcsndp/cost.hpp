#ifndef VCSNDP_COST_HPP
#define VCSNDP_COST_HPP

#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vcsndp {

/// Nonnegative decimal edge cost stored as a scaled integer (micro-units).
///
/// Parsing keeps up to six fractional digits exactly; anything finer is
/// rejected rather than rounded so that text round-trips are lossless.
class Cost {
public:
    static constexpr std::int64_t scale = 1'000'000;
    static constexpr int fraction_digits = 6;

    constexpr Cost() = default;

    static constexpr Cost from_micros(std::int64_t micros) { return Cost(micros); }
    static constexpr Cost from_units(std::int64_t units) { return Cost(units * scale); }

    /// Parse "12", "0.5", "3.250". Returns nullopt on malformed or negative input.
    static std::optional<Cost> parse(std::string_view text) {
        if (text.empty()) return std::nullopt;
        auto dot = text.find('.');
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
        if (frac.size() > fraction_digits) return std::nullopt;
        for (char c : whole)
            if (c < '0' || c > '9') return std::nullopt;
        for (char c : frac)
            if (c < '0' || c > '9') return std::nullopt;

        std::int64_t units = 0;
        if (!whole.empty()) {
            auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
            if (ec != std::errc{} || ptr != whole.data() + whole.size()) return std::nullopt;
            if (units > INT64_MAX / scale / 1024) return std::nullopt;
        }
        std::int64_t micros = 0;
        std::int64_t place = scale / 10;
        for (char c : frac) {
            micros += (c - '0') * place;
            place /= 10;
        }
        return Cost(units * scale + micros);
    }

    /// Shortest decimal text that parses back to the same value.
    std::string to_string() const {
        std::string out = std::to_string(micros_ / scale);
        std::int64_t frac = micros_ % scale;
        if (frac != 0) {
            std::string digits = std::to_string(frac);
            digits.insert(0, fraction_digits - digits.size(), '0');
            while (digits.back() == '0') digits.pop_back();
            out += '.';
            out += digits;
        }
        return out;
    }

    constexpr std::int64_t micros() const { return micros_; }
    constexpr double to_double() const { return static_cast<double>(micros_) / scale; }

    constexpr Cost& operator+=(Cost other) {
        micros_ += other.micros_;
        return *this;
    }
    constexpr Cost& operator-=(Cost other) {
        micros_ -= other.micros_;
        return *this;
    }
    friend constexpr Cost operator+(Cost a, Cost b) { return a += b; }
    friend constexpr Cost operator-(Cost a, Cost b) { return a -= b; }
    friend constexpr auto operator<=>(Cost, Cost) = default;

private:
    constexpr explicit Cost(std::int64_t micros) : micros_(micros) {}
    std::int64_t micros_ = 0;
};

} // namespace vcsndp

#endif // VCSNDP_COST_HPP
