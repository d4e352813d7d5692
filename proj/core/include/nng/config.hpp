#pragma once

#include "nng/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nng {

/// Key-value run configuration. One `key = value` per line, `#` starts a
/// comment. A value may be a list separated by commas or whitespace; the
/// bench command takes the Cartesian product of all list-valued keys.
///
///     dataset   = synthetic:gaussian-mixture,n=2000,dim=8
///     metric    = euclidean
///     epsilon   = 0.01, 0.02, 0.04
///     algorithm = systolic-ring landmark-coll
///     ranks     = 1 2 4 8
class Config
{
public:
    static Config parse(std::istream& is);
    static Config load(const std::filesystem::path& path);

    static const std::vector<std::string_view>& known_keys();

    bool has(std::string_view key) const { return find(key) != nullptr; }
    const std::vector<std::string>* find(std::string_view key) const;

    /// The single value of `key`; throws InvalidInput if it is a list.
    std::optional<std::string> single(std::string_view key) const;

    void set(std::string_view key, std::vector<std::string> values);

    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::vector<std::string>>> entries_;
};

/// Split a list value on commas and whitespace, except for `dataset`, whose
/// synthetic specs contain commas and which is split on whitespace only.
std::vector<std::string> split_list(std::string_view key, std::string_view value);

}
