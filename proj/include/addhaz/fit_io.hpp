#pragma once

#include <string>

#include "addhaz/types.hpp"

namespace addhaz {

// Self-describing versioned JSON document; doubles round-trip bit-exactly.
void save_fit(const FitResult& f, const std::string& path);
FitResult load_fit(const std::string& path);

}  // namespace addhaz
