#pragma once

#include "kramers/scf.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace kramers::io {

using Json = nlohmann::ordered_json;

/// "%.15g"; non-finite values print as nan / inf / -inf.
std::string fmt(double x);

/// x rounded to 15 significant digits; JSON carries this value, or null
/// when x is not finite.
Json number(double x);

Json vec3(const Vec3& v);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Two-space indented dump with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// Flat key = value lines; '#' starts a comment.  Throws Error on a line
/// without '='.
std::map<std::string, std::string> parse_config(const std::string& text);

/// Basis text format:
///   centers <n>
///   cx cy cz            (n lines)
///   primitives
///   center_index exponent coefficient
/// Primitives on consecutive lines form one contracted function; a blank
/// line starts the next.
scf::FloatingBasis parse_basis(const std::string& text);
std::string format_basis(const scf::FloatingBasis& basis);

}  // namespace kramers::io
