#include "nng/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include <fmt/core.h>

namespace nng {

std::string_view to_string(MetricKind kind)
{
    switch (kind)
    {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::hamming: return "hamming";
        case MetricKind::cosine: return "cosine";
        case MetricKind::edit: return "edit";
    }
    return "unknown";
}

MetricKind parse_metric(std::string_view name)
{
    if (name == "euclidean" || name == "l2") return MetricKind::euclidean;
    if (name == "hamming") return MetricKind::hamming;
    if (name == "cosine") return MetricKind::cosine;
    if (name == "edit" || name == "levenshtein") return MetricKind::edit;
    throw InvalidInput(fmt::format("unknown metric '{}'", name));
}

ElementKind element_kind(MetricKind kind)
{
    switch (kind)
    {
        case MetricKind::euclidean:
        case MetricKind::cosine: return ElementKind::dense;
        case MetricKind::hamming: return ElementKind::bits;
        case MetricKind::edit: return ElementKind::string;
    }
    return ElementKind::dense;
}

namespace kernels {

Real euclidean(std::span<const float> a, std::span<const float> b)
{
    Real sum = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        Real diff = static_cast<Real>(a[k]) - static_cast<Real>(b[k]);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

Real cosine(std::span<const float> a, std::span<const float> b)
{
    Real dot = 0, aa = 0, bb = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        Real x = a[k], y = b[k];
        dot += x * y;
        aa += x * x;
        bb += y * y;
    }
    // aa*bb is commutative, so swapping a and b gives the same bits
    Real sim = dot / std::sqrt(aa * bb);
    return std::max<Real>(0, 1 - sim);
}

Real hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b)
{
    std::int64_t count = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        count += std::popcount(a[k] ^ b[k]);
    return static_cast<Real>(count);
}

Real edit(std::string_view a, std::string_view b)
{
    if (a.size() < b.size()) std::swap(a, b);
    if (b.empty()) return static_cast<Real>(a.size());

    thread_local std::vector<std::int64_t> row;
    row.resize(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = static_cast<std::int64_t>(j);

    for (std::size_t i = 1; i <= a.size(); ++i)
    {
        std::int64_t diag = row[0];
        row[0] = static_cast<std::int64_t>(i);
        for (std::size_t j = 1; j <= b.size(); ++j)
        {
            std::int64_t up = row[j];
            std::int64_t sub = diag + (a[i - 1] != b[j - 1]);
            row[j] = std::min({up + 1, row[j - 1] + 1, sub});
            diag = up;
        }
    }
    return static_cast<Real>(row[b.size()]);
}

}

void Metric::require_compatible(const PointSet& pts) const
{
    if (pts.kind() != element_kind(kind_))
        throw InvalidInput(fmt::format("metric {} cannot measure {} points", to_string(kind_), to_string(pts.kind())));

    if (kind_ == MetricKind::cosine)
    {
        for (Index i = 0; i < pts.size(); ++i)
        {
            auto x = pts.coords(i);
            if (std::all_of(x.begin(), x.end(), [](float v) { return v == 0.0f; }))
                throw InvalidInput(fmt::format("cosine metric: point {} is the zero vector", pts.global_id(i)));
        }
    }
}

void Metric::require_compatible(const PointSet& a, const PointSet& b) const
{
    if (a.kind() != element_kind(kind_) || b.kind() != element_kind(kind_))
        throw InvalidInput(fmt::format("metric {} cannot measure {}/{} points", to_string(kind_), to_string(a.kind()), to_string(b.kind())));
    if (a.dim() != b.dim())
        throw InvalidInput(fmt::format("dimension mismatch: {} vs {}", a.dim(), b.dim()));
}

Real Metric::operator()(const PointSet& a, Index i, const PointSet& b, Index j) const
{
    require_compatible(a, b);
    if (i < 0 || i >= a.size() || j < 0 || j >= b.size()) throw InvalidInput("point index out of range");
    add_evals(1);
    return eval(a, i, b, j);
}

Real Metric::operator()(std::span<const float> a, std::span<const float> b) const
{
    if (element_kind(kind_) != ElementKind::dense) throw InvalidInput("metric does not take float vectors");
    if (a.size() != b.size()) throw InvalidInput(fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
    add_evals(1);
    return kind_ == MetricKind::cosine ? kernels::cosine(a, b) : kernels::euclidean(a, b);
}

Real Metric::operator()(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) const
{
    if (kind_ != MetricKind::hamming) throw InvalidInput("metric does not take bit vectors");
    if (a.size() != b.size()) throw InvalidInput(fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
    add_evals(1);
    return kernels::hamming(a, b);
}

Real Metric::operator()(std::string_view a, std::string_view b) const
{
    if (kind_ != MetricKind::edit) throw InvalidInput("metric does not take strings");
    add_evals(1);
    return kernels::edit(a, b);
}

std::pair<Index, Real> pairwise_max_distance(const Metric& metric, const PointSet& pts, Index anchor)
{
    if (pts.empty()) throw InvalidInput("pairwise_max_distance: empty point set");
    if (anchor < 0 || anchor >= pts.size()) throw InvalidInput("pairwise_max_distance: anchor out of range");
    metric.require_compatible(pts);

    auto dist = metric.tally();
    Index far = anchor;
    Real radius = 0;

    for (Index i = 0; i < pts.size(); ++i)
    {
        Real d = i == anchor ? 0 : dist(pts, anchor, pts, i);
        if (d > radius || (d == radius && i < far))
        {
            radius = d;
            far = i;
        }
    }
    return {far, radius};
}

Real measure_expansion_constant(const PointSet& pts, const Metric& metric, Index sample)
{
    if (pts.empty()) throw InvalidInput("measure_expansion_constant: empty point set");
    if (sample < 1 || sample > pts.size()) throw InvalidInput("measure_expansion_constant: sample must be in [1, n]");
    metric.require_compatible(pts);

    constexpr int max_halvings = 32;

    auto dist = metric.tally();
    Index n = pts.size();
    Real ratio = 1;
    std::vector<Real> d(n);

    for (Index s = 0; s < sample; ++s)
    {
        Index p = (s * n) / sample;
        for (Index q = 0; q < n; ++q)
            d[q] = q == p ? 0 : dist(pts, p, pts, q);
        std::sort(d.begin(), d.end());

        auto nearest = std::upper_bound(d.begin(), d.end(), Real{0});
        if (nearest == d.end()) continue;
        Real rmin = *nearest;
        Real rmax = d.back();

        auto ball = [&](Real r) { return static_cast<Real>(std::upper_bound(d.begin(), d.end(), r) - d.begin()); };

        Real r = rmax / 2;
        for (int k = 0; k < max_halvings && r >= rmin; ++k, r /= 2)
            ratio = std::max(ratio, ball(2 * r) / ball(r));
    }
    return ratio;
}

}
