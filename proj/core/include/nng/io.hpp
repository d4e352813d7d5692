#pragma once

#include "nng/metric.hpp"
#include "nng/point_set.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nng {

/// Record formats: each record is a little-endian int32 dimension d followed
/// by d values (float32 for fvecs, uint8 for bvecs, int32 for ivecs). All
/// records must share d. Errors carry the byte offset of the bad record.
PointSet read_fvecs(std::istream& is);
PointSet read_ivecs(std::istream& is);

/// bvecs as dense coordinates, or (as_bits) as packed bits 8 per byte, LSB
/// first, giving a bit length of 8d.
PointSet read_bvecs(std::istream& is, bool as_bits = false);

void write_fvecs(std::ostream& os, const PointSet& pts);
void write_ivecs(std::ostream& os, const PointSet& pts);
void write_bvecs(std::ostream& os, const PointSet& pts);

PointSet load_fvecs(const std::filesystem::path& path);
PointSet load_ivecs(const std::filesystem::path& path);
PointSet load_bvecs(const std::filesystem::path& path, bool as_bits = false);

/// CSV: numeric rows for dense metrics, rows of 0/1 for hamming, one string
/// per line for edit distance. Blank lines are skipped except for strings.
PointSet read_csv(std::istream& is, MetricKind metric);
void write_csv(std::ostream& os, const PointSet& pts);
PointSet load_csv(const std::filesystem::path& path, MetricKind metric);

enum class SyntheticKind { uniform_cube, gaussian_mixture, bit_uniform, string_mutation };

std::string_view to_string(SyntheticKind kind);
SyntheticKind parse_synthetic_kind(std::string_view name);

struct SyntheticSpec
{
    SyntheticKind kind = SyntheticKind::uniform_cube;
    Index n = 1000;
    Index dim = 2;          // coordinates, bits, or base string length
    Index clusters = 8;     // mixture components or string families
    std::uint64_t seed = 0;
};

struct Dataset
{
    PointSet points;
    std::vector<Index> labels;  // generating cluster, when there is one
    Real scale = 0;             // per-coordinate cluster std deviation (mixtures)
    std::vector<std::vector<float>> means;
};

/// uniform-cube: [0,1)^dim. gaussian-mixture: `clusters` means uniform in
/// [0,1)^dim with std deviation 0.01 per coordinate. bit-uniform: fair bits.
/// string-mutation: `clusters` random base strings over a 4-letter alphabet,
/// each point a base with a few random edits.
Dataset gen_synthetic(const SyntheticSpec& spec);

/// Load by extension (.fvecs .bvecs .ivecs .csv .txt) or
/// "synthetic:<kind>,n=..,dim=..,clusters=..,seed=..".
Dataset load_dataset(std::string_view spec, MetricKind metric);

}
