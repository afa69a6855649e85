#pragma once

#include <string>

namespace meshspectra {

/// Shortest decimal representation that round-trips the exact double.
/// Every text artifact (OBJ, CSV) is written through this so repeated runs
/// emit byte-identical files.
std::string format_double(double value);

/// Parse a double, rejecting trailing garbage. Throws ParseError.
double parse_double(const std::string& token, int line = 0);

/// Parse an integer in [min, max]. Throws ParseError.
long parse_long(const std::string& token, int line = 0);

}  // namespace meshspectra
