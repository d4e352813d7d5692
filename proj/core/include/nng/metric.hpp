#pragma once

#include "nng/point_set.hpp"
#include "nng/types.hpp"

#include <atomic>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace nng {

enum class MetricKind { euclidean, hamming, cosine, edit };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric(std::string_view name);

/// Element kind a metric operates on.
ElementKind element_kind(MetricKind kind);

namespace kernels {

// Coordinates are accumulated sequentially in double precision, so each kernel
// is bitwise symmetric in its arguments.
Real euclidean(std::span<const float> a, std::span<const float> b);
Real cosine(std::span<const float> a, std::span<const float> b);
Real hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
Real edit(std::string_view a, std::string_view b);

}

class DistanceTally;

/// A distance function together with a running count of evaluations.
///
/// Cosine distance is 1 - a.b / (|a||b|). It is not a metric (the triangle
/// inequality fails in general) so the exactness guarantees of the tree based
/// algorithms do not extend to it.
class Metric
{
public:
    explicit Metric(MetricKind kind) : kind_(kind) {}

    Metric(const Metric&) = delete;
    Metric& operator=(const Metric&) = delete;

    MetricKind kind() const { return kind_; }

    /// d(a[i], b[j]); counted. Throws InvalidInput when the sets are not
    /// compatible with each other or with this metric.
    Real operator()(const PointSet& a, Index i, const PointSet& b, Index j) const;

    Real operator()(std::span<const float> a, std::span<const float> b) const;
    Real operator()(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) const;
    Real operator()(std::string_view a, std::string_view b) const;

    /// Uncounted kernel dispatch; callers are responsible for compatibility.
    Real eval(const PointSet& a, Index i, const PointSet& b, Index j) const
    {
        switch (kind_)
        {
            case MetricKind::euclidean: return kernels::euclidean(a.coords(i), b.coords(j));
            case MetricKind::cosine: return kernels::cosine(a.coords(i), b.coords(j));
            case MetricKind::hamming: return kernels::hamming(a.words(i), b.words(j));
            case MetricKind::edit: return kernels::edit(a.str(i), b.str(j));
        }
        return 0;
    }

    /// Throws InvalidInput unless `pts` can be measured by this metric. Cosine
    /// additionally rejects zero vectors.
    void require_compatible(const PointSet& pts) const;
    void require_compatible(const PointSet& a, const PointSet& b) const;

    std::uint64_t evals() const { return evals_.load(std::memory_order_relaxed); }
    void add_evals(std::uint64_t n) const { evals_.fetch_add(n, std::memory_order_relaxed); }

    DistanceTally tally() const;

private:
    MetricKind kind_;
    mutable std::atomic<std::uint64_t> evals_{0};
};

/// Thread-local view of a Metric for hot loops: evaluations are counted in a
/// plain integer and folded into the metric's total on destruction.
class DistanceTally
{
public:
    explicit DistanceTally(const Metric& metric) : metric_(&metric) {}
    DistanceTally(const DistanceTally&) = delete;
    DistanceTally(DistanceTally&& other) noexcept : metric_(other.metric_), count_(std::exchange(other.count_, 0)) {}
    ~DistanceTally() { flush(); }

    Real operator()(const PointSet& a, Index i, const PointSet& b, Index j)
    {
        ++count_;
        return metric_->eval(a, i, b, j);
    }

    void flush()
    {
        if (count_) metric_->add_evals(count_);
        count_ = 0;
    }

    const Metric& metric() const { return *metric_; }

private:
    const Metric* metric_;
    std::uint64_t count_ = 0;
};

inline DistanceTally Metric::tally() const { return DistanceTally(*this); }

/// Farthest point of `pts` from `pts[anchor]` and its distance. Ties go to the
/// smallest index.
std::pair<Index, Real> pairwise_max_distance(const Metric& metric, const PointSet& pts, Index anchor);

/// Empirical growth ratio max |B(p,2r)| / |B(p,r)| over `sample` evenly spaced
/// points p and radii r = R_p / 2^k (k = 1..), where R_p is the largest distance
/// from p. Radii below the nearest nonzero distance from p are skipped, so
/// duplicated points do not change the value. Returns 1 when no radius
/// qualifies (e.g. a single point). This is a diagnostic, not the exact
/// expansion constant.
Real measure_expansion_constant(const PointSet& pts, const Metric& metric, Index sample);

}
