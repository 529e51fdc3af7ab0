#pragma once

#include <string>

namespace ordpat {

/// Locale-independent rendering with 6 significant digits ("nan" for NaN).
std::string format_number(double v);

}  // namespace ordpat
