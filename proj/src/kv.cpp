#include <atprank/kv.hpp>
#include <atprank/error.hpp>

#include <charconv>
#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace atprank {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source_name) {
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw SchemaError(fmt::format("{}:{}: expected key=value", source_name, line_no));
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) throw SchemaError(fmt::format("{}:{}: empty key", source_name, line_no));
        kv[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
    return parse_key_values(in, path.string());
}

double kv_to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw UsageError(fmt::format("{}: '{}' is not a number", key, value));
    }
    return v;
}

long long kv_to_int(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw UsageError(fmt::format("{}: '{}' is not an integer", key, value));
    }
    return v;
}

bool kv_to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw UsageError(fmt::format("{}: '{}' is not a boolean", key, value));
}

}  // namespace atprank
