#ifndef SYMTOP_REPORT_IO_H_
#define SYMTOP_REPORT_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace symtop {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// %.17g, with non-finite values spelled as JSON null.
std::string format_double(double v);

/// Deterministic JSON text: sorted keys, two-space indent, floats at 17
/// significant digits.
std::string dump_json(const nlohmann::json& j);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Writes text to a file, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace symtop

#endif  // SYMTOP_REPORT_IO_H_
