#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

namespace rwacav::csv {

inline constexpr std::string_view kSeriesHeader = "t,p1,p2,p3,norm2,energy";
inline constexpr std::string_view kProfileHeader = "x,e2";
inline constexpr std::string_view kTailHeader = "mode_count,t,tail_fraction,precausal_avg";
inline constexpr std::string_view kTruncatedTrailer = "# truncated";

/// Shortest decimal form that round-trips to the same double.
[[nodiscard]] inline std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

/// Writes one newline-terminated row of comma-separated doubles.
template <typename... Ts>
void write_row(std::ostream& os, const Ts&... values) {
    bool first = true;
    auto one = [&](const auto& v) {
        if (!first) os << ',';
        first = false;
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
            os << format(static_cast<double>(v));
        else
            os << v;
    };
    (one(values), ...);
    os << '\n';
}

}  // namespace rwacav::csv
