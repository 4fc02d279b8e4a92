#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lambdasurf/common.hpp"

namespace lambdasurf {

inline constexpr const char* kSchemaVersion = "1.0";

/// Comma-separated values with a header row; numbers at 17 significant
/// digits so reruns diff clean.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<Vec>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

std::string format_g17(double v);

}  // namespace lambdasurf
