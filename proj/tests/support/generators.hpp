#pragma once

#include "nng/metric.hpp"
#include "nng/point_set.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace nng::gen {

inline PointSet line(std::initializer_list<float> xs)
{
    PointSet pts = PointSet::dense(1);
    for (float x : xs)
        pts.push_dense(std::vector<float>{x});
    return pts;
}

inline PointSet grid_1d(Index n)
{
    PointSet pts = PointSet::dense(1);
    for (Index i = 0; i < n; ++i)
        pts.push_dense(std::vector<float>{static_cast<float>(i)});
    return pts;
}

/// Uniform points in [0, 1)^dim. With `levels` > 0 coordinates are snapped to
/// a grid of that many values, which produces ties and exact duplicates.
inline PointSet random_dense(Index n, Index dim, std::uint64_t seed, int levels = 0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    std::uniform_int_distribution<int> level(0, levels > 0 ? levels - 1 : 0);
    PointSet pts = PointSet::dense(dim);
    std::vector<float> x(dim);
    for (Index i = 0; i < n; ++i)
    {
        for (auto& v : x)
            v = levels > 0 ? static_cast<float>(level(rng)) : unit(rng);
        pts.push_dense(x);
    }
    return pts;
}

/// Nonzero vectors for cosine distance.
inline PointSet random_directions(Index n, Index dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> coord(0.05f, 1.0f);
    PointSet pts = PointSet::dense(dim);
    std::vector<float> x(dim);
    for (Index i = 0; i < n; ++i)
    {
        for (auto& v : x)
            v = coord(rng);
        pts.push_dense(x);
    }
    return pts;
}

/// Random bits; `flip` > 0 derives each point from a few shared prototypes by
/// flipping about `flip` bits, which gives small distances and duplicates.
inline PointSet random_bits(Index n, Index nbits, std::uint64_t seed, int flip = 0)
{
    std::mt19937_64 rng(seed);
    PointSet pts = PointSet::bits(nbits);
    Index words = pts.words_per_point();
    Index tail = nbits % 64;
    std::vector<std::vector<std::uint64_t>> protos(4, std::vector<std::uint64_t>(words));
    for (auto& p : protos)
    {
        for (auto& w : p)
            w = rng();
        if (tail) p.back() &= (std::uint64_t{1} << tail) - 1;
    }
    std::uniform_int_distribution<Index> bit(0, nbits - 1);
    std::uniform_int_distribution<int> proto(0, 3);
    std::uniform_int_distribution<int> flips(0, flip);

    std::vector<std::uint64_t> w(words);
    for (Index i = 0; i < n; ++i)
    {
        if (flip > 0)
        {
            w = protos[proto(rng)];
            for (int k = flips(rng); k > 0; --k)
            {
                Index b = bit(rng);
                w[b / 64] ^= std::uint64_t{1} << (b % 64);
            }
        }
        else
        {
            for (auto& word : w)
                word = rng();
            if (tail) w.back() &= (std::uint64_t{1} << tail) - 1;
        }
        pts.push_bits(w);
    }
    return pts;
}

/// Short strings over a small alphabet, so edit distances are small integers
/// with plenty of ties.
inline PointSet random_strings(Index n, std::uint64_t seed, int max_len = 8, int alphabet = 3)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> letter(0, alphabet - 1);
    PointSet pts = PointSet::strings();
    for (Index i = 0; i < n; ++i)
    {
        std::string s;
        for (int k = len(rng); k > 0; --k)
            s.push_back(static_cast<char>('a' + letter(rng)));
        pts.push_string(s);
    }
    return pts;
}

/// A random point set suited to `kind`.
inline PointSet random_points(MetricKind kind, Index n, std::uint64_t seed)
{
    switch (kind)
    {
        case MetricKind::euclidean: return random_dense(n, 3, seed);
        case MetricKind::cosine: return random_directions(n, 3, seed);
        case MetricKind::hamming: return random_bits(n, 70, seed, 12);
        case MetricKind::edit: return random_strings(n, seed);
    }
    return {};
}

inline std::vector<MetricKind> all_metrics()
{
    return {MetricKind::euclidean, MetricKind::cosine, MetricKind::hamming, MetricKind::edit};
}

inline std::vector<MetricKind> true_metrics()
{
    return {MetricKind::euclidean, MetricKind::hamming, MetricKind::edit};
}

}
