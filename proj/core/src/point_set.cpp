#include "nng/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <unordered_map>

#include <fmt/core.h>

namespace nng {

std::string_view to_string(ElementKind kind)
{
    switch (kind)
    {
        case ElementKind::dense: return "dense";
        case ElementKind::bits: return "bits";
        case ElementKind::string: return "string";
    }
    return "unknown";
}

PointSet PointSet::dense(Index dim)
{
    if (dim <= 0) throw InvalidInput(fmt::format("dense dimension must be positive, got {}", dim));
    PointSet pts;
    pts.kind_ = ElementKind::dense;
    pts.dim_ = dim;
    return pts;
}

PointSet PointSet::bits(Index nbits)
{
    if (nbits <= 0) throw InvalidInput(fmt::format("bit length must be positive, got {}", nbits));
    PointSet pts;
    pts.kind_ = ElementKind::bits;
    pts.dim_ = nbits;
    pts.words_ = (nbits + 63) / 64;
    return pts;
}

PointSet PointSet::strings()
{
    PointSet pts;
    pts.kind_ = ElementKind::string;
    return pts;
}

void PointSet::push_id(Index gid)
{
    ids_.push_back(gid < 0 ? size() : gid);
}

void PointSet::push_dense(std::span<const float> x, Index gid)
{
    if (kind_ != ElementKind::dense) throw InvalidInput("push_dense on a non-dense point set");
    if (static_cast<Index>(x.size()) != dim_)
        throw InvalidInput(fmt::format("dimension mismatch: expected {}, got {}", dim_, x.size()));
    for (float v : x)
        if (!std::isfinite(v)) throw InvalidInput("non-finite coordinate");
    coords_.insert(coords_.end(), x.begin(), x.end());
    push_id(gid);
}

void PointSet::push_bits(std::span<const std::uint64_t> w, Index gid)
{
    if (kind_ != ElementKind::bits) throw InvalidInput("push_bits on a non-bit point set");
    if (static_cast<Index>(w.size()) != words_)
        throw InvalidInput(fmt::format("word count mismatch: expected {}, got {}", words_, w.size()));
    Index tail = dim_ % 64;
    if (tail && (w.back() >> tail) != 0) throw InvalidInput("padding bits beyond bit length must be zero");
    bits_.insert(bits_.end(), w.begin(), w.end());
    push_id(gid);
}

void PointSet::push_bools(std::span<const std::uint8_t> bools, Index gid)
{
    if (static_cast<Index>(bools.size()) != dim_)
        throw InvalidInput(fmt::format("bit length mismatch: expected {}, got {}", dim_, bools.size()));
    std::vector<std::uint64_t> w(words_, 0);
    for (Index b = 0; b < dim_; ++b)
        if (bools[b]) w[b / 64] |= std::uint64_t{1} << (b % 64);
    push_bits(w, gid);
}

void PointSet::push_string(std::string_view s, Index gid)
{
    if (kind_ != ElementKind::string) throw InvalidInput("push_string on a non-string point set");
    chars_.append(s);
    offsets_.push_back(static_cast<Index>(chars_.size()));
    push_id(gid);
}

void PointSet::push_from(const PointSet& other, Index i)
{
    if (other.kind_ != kind_ || other.dim_ != dim_)
        throw InvalidInput("cannot mix point sets of different kinds or dimensions");

    switch (kind_)
    {
        case ElementKind::dense:
        {
            auto x = other.coords(i);
            coords_.insert(coords_.end(), x.begin(), x.end());
            break;
        }
        case ElementKind::bits:
        {
            auto w = other.words(i);
            bits_.insert(bits_.end(), w.begin(), w.end());
            break;
        }
        case ElementKind::string:
            chars_.append(other.str(i));
            offsets_.push_back(static_cast<Index>(chars_.size()));
            break;
    }
    ids_.push_back(other.ids_[i]);
}

void PointSet::append(const PointSet& other)
{
    for (Index i = 0; i < other.size(); ++i)
        push_from(other, i);
}

PointSet PointSet::subset(std::span<const Index> local) const
{
    PointSet out;
    out.kind_ = kind_;
    out.dim_ = dim_;
    out.words_ = words_;
    out.reserve(static_cast<Index>(local.size()));
    for (Index i : local)
        out.push_from(*this, i);
    return out;
}

PointSet PointSet::slice(Index begin, Index end) const
{
    std::vector<Index> local(std::max<Index>(end - begin, 0));
    for (Index i = 0; i < static_cast<Index>(local.size()); ++i)
        local[i] = begin + i;
    return subset(local);
}

void PointSet::relabel(std::span<const Index> gids)
{
    if (static_cast<Index>(gids.size()) != size()) throw InvalidInput("relabel: id count does not match point count");
    ids_.assign(gids.begin(), gids.end());
}

void PointSet::reserve(Index n)
{
    ids_.reserve(n);
    if (kind_ == ElementKind::dense) coords_.reserve(n * dim_);
    else if (kind_ == ElementKind::bits) bits_.reserve(n * words_);
    else offsets_.reserve(n + 1);
}

bool PointSet::same_element(Index i, const PointSet& other, Index j) const
{
    if (kind_ != other.kind_ || dim_ != other.dim_) return false;

    switch (kind_)
    {
        case ElementKind::dense:
        {
            auto a = coords(i), b = other.coords(j);
            return std::memcmp(a.data(), b.data(), a.size_bytes()) == 0;
        }
        case ElementKind::bits:
            return std::ranges::equal(words(i), other.words(j));
        case ElementKind::string:
            return str(i) == other.str(j);
    }
    return false;
}

std::size_t PointSet::element_hash(Index i) const
{
    switch (kind_)
    {
        case ElementKind::dense:
        {
            auto x = coords(i);
            return std::hash<std::string_view>{}(std::string_view(reinterpret_cast<const char*>(x.data()), x.size_bytes()));
        }
        case ElementKind::bits:
        {
            auto w = words(i);
            return std::hash<std::string_view>{}(std::string_view(reinterpret_cast<const char*>(w.data()), w.size_bytes()));
        }
        case ElementKind::string:
            return std::hash<std::string_view>{}(str(i));
    }
    return 0;
}

Index PointSet::distinct_count() const
{
    std::unordered_multimap<std::size_t, Index> seen;
    seen.reserve(size());
    Index distinct = 0;

    for (Index i = 0; i < size(); ++i)
    {
        std::size_t h = element_hash(i);
        auto [first, last] = seen.equal_range(h);
        bool found = std::any_of(first, last, [&](const auto& kv) { return same_element(i, *this, kv.second); });
        if (!found)
        {
            seen.emplace(h, i);
            ++distinct;
        }
    }
    return distinct;
}

std::size_t PointSet::bytes() const
{
    std::size_t payload = 0;
    switch (kind_)
    {
        case ElementKind::dense: payload = coords_.size() * sizeof(float); break;
        case ElementKind::bits: payload = bits_.size() * sizeof(std::uint64_t); break;
        case ElementKind::string: payload = chars_.size() + ids_.size() * sizeof(Index); break;
    }
    return payload + ids_.size() * sizeof(Index);
}

}
