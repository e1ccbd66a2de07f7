#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace atprank {

/// Flat key=value document. '#' starts a comment; blank lines are ignored;
/// keys and values are trimmed. Later duplicates override earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& source_name = "<stream>");
KeyValues read_key_values(const std::filesystem::path& path);

double kv_to_double(const std::string& key, const std::string& value);
long long kv_to_int(const std::string& key, const std::string& value);
bool kv_to_bool(const std::string& key, const std::string& value);

}  // namespace atprank
