#pragma once

namespace lobsim {
inline constexpr const char* version_string = "1.0.0";
inline constexpr int output_schema_version = 1;
}
