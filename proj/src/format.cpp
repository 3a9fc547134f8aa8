#include "mulrk/format.hpp"

#include <array>
#include <charconv>

namespace mulrk {

std::string format_g17(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return {buf.data(), res.ptr};
}

} // namespace mulrk
