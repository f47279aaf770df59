#pragma once

#include "coincars/error.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace coincars::detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size())
                out.push_back(text.substr(pos));
            break;
        }
        out.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

inline std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto c = line.find(',', pos);
        out.push_back(trim(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos)));
        if (c == std::string_view::npos)
            break;
        pos = c + 1;
    }
    return out;
}

inline double parse_double(std::string_view s, const std::string& where)
{
    s = trim(s);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(where + ": cannot parse number '" + std::string(s) + "'");
    return v;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace coincars::detail
