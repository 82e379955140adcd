#pragma once

#include <string>

namespace acon2 {

// Shortest decimal text that parses back to exactly the same double.
// Output is locale independent, so record files compare byte for byte.
std::string format_double(double x);

}  // namespace acon2
