#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rsd {

// Fixed 9-significant-digit rendering used by every CSV and SVG writer.
std::string fmt_num(double v);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace rsd
