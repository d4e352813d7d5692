#pragma once

#include "nng/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nng {

enum class ElementKind { dense, bits, string };

std::string_view to_string(ElementKind kind);

/// Dense storage for a set of points of one element kind, each tagged with a
/// global id. Dense points are float vectors of a fixed dimension, bit points
/// are packed 64-bit words with a fixed bit length (padding bits are zero),
/// string points are byte strings.
///
/// Subsets keep the global ids of the originating set, so a PointSet can hold a
/// rank's block, a Voronoi cell, or a batch of ghost points while the results
/// of queries against it are still reported in dataset ids.
class PointSet
{
public:
    PointSet() = default;

    static PointSet dense(Index dim);
    static PointSet bits(Index nbits);
    static PointSet strings();

    ElementKind kind() const { return kind_; }
    Index size() const { return static_cast<Index>(ids_.size()); }
    bool empty() const { return ids_.empty(); }

    /// Coordinates per point (dense), bit length (bits), 0 for strings.
    Index dim() const { return dim_; }
    Index words_per_point() const { return words_; }

    Index global_id(Index i) const { return ids_[i]; }
    std::span<const Index> global_ids() const { return ids_; }

    std::span<const float> coords(Index i) const
    {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }

    std::span<const std::uint64_t> words(Index i) const
    {
        return {bits_.data() + i * words_, static_cast<std::size_t>(words_)};
    }

    std::string_view str(Index i) const
    {
        return std::string_view(chars_).substr(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }

    /// Append a point; the global id defaults to the current size.
    void push_dense(std::span<const float> x, Index gid = -1);
    void push_bits(std::span<const std::uint64_t> w, Index gid = -1);
    void push_bools(std::span<const std::uint8_t> bools, Index gid = -1);
    void push_string(std::string_view s, Index gid = -1);

    /// Append point `i` of `other` (same kind and dimension) keeping its id.
    void push_from(const PointSet& other, Index i);
    void append(const PointSet& other);

    PointSet subset(std::span<const Index> local) const;
    PointSet slice(Index begin, Index end) const;

    /// Replace every global id; used to label center sets by cell index.
    void relabel(std::span<const Index> gids);

    void reserve(Index n);

    /// Bitwise equality of the stored elements (ids ignored).
    bool same_element(Index i, const PointSet& other, Index j) const;

    /// Number of distinct stored elements (by bitwise equality).
    Index distinct_count() const;

    /// Hash of the stored element, consistent with same_element.
    std::size_t element_hash(Index i) const;

    /// Serialized size: ids plus element payload.
    std::size_t bytes() const;

    bool operator==(const PointSet& other) const = default;

private:
    void push_id(Index gid);

    ElementKind kind_ = ElementKind::dense;
    Index dim_ = 0;
    Index words_ = 0;

    std::vector<Index> ids_;
    std::vector<float> coords_;
    std::vector<std::uint64_t> bits_;
    std::string chars_;
    std::vector<Index> offsets_ = {0};
};

inline std::size_t payload_bytes(const PointSet& pts) { return pts.bytes(); }

}
