#pragma once

#include <string>

namespace mulrk {

/// Locale-independent "%.17g" rendering.
[[nodiscard]] std::string format_g17(double v);

} // namespace mulrk
