#include "nng/config.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/core.h>

namespace nng {

namespace {

std::string_view trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}

const std::vector<std::string_view>& Config::known_keys()
{
    static const std::vector<std::string_view> keys = {
        "dataset", "metric", "epsilon", "algorithm", "ranks", "cells",
        "leaf_size", "seed", "centers", "out", "trace",
    };
    return keys;
}

std::vector<std::string> split_list(std::string_view key, std::string_view value)
{
    std::string_view separators = key == "dataset" ? " \t" : " \t,";
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos < value.size())
    {
        pos = value.find_first_not_of(separators, pos);
        if (pos == std::string_view::npos) break;
        std::size_t end = value.find_first_of(separators, pos);
        if (end == std::string_view::npos) end = value.size();
        items.emplace_back(value.substr(pos, end - pos));
        pos = end;
    }
    return items;
}

Config Config::parse(std::istream& is)
{
    Config config;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        std::string_view text = line;
        text = trim(text.substr(0, text.find('#')));
        if (text.empty()) continue;

        auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError(fmt::format("line {}: expected key = value", lineno), lineno);

        std::string key(trim(text.substr(0, eq)));
        std::ranges::replace(key, '-', '_');
        if (std::ranges::find(known_keys(), key) == known_keys().end())
            throw ParseError(fmt::format("line {}: unknown key '{}'", lineno, key), lineno);
        if (config.has(key)) throw ParseError(fmt::format("line {}: duplicate key '{}'", lineno, key), lineno);

        auto values = split_list(key, trim(text.substr(eq + 1)));
        if (values.empty()) throw ParseError(fmt::format("line {}: key '{}' has no value", lineno, key), lineno);
        config.entries_.emplace_back(std::move(key), std::move(values));
    }
    return config;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open config '{}'", path.string()), 0);
    return parse(in);
}

const std::vector<std::string>* Config::find(std::string_view key) const
{
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

std::optional<std::string> Config::single(std::string_view key) const
{
    const auto* values = find(key);
    if (!values) return std::nullopt;
    if (values->size() != 1) throw InvalidInput(fmt::format("config key '{}' takes a single value", key));
    return values->front();
}

void Config::set(std::string_view key, std::vector<std::string> values)
{
    for (auto& [k, v] : entries_)
        if (k == key)
        {
            v = std::move(values);
            return;
        }
    entries_.emplace_back(std::string(key), std::move(values));
}

}
