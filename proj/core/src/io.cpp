#include "nng/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include <fmt/core.h>

namespace nng {

namespace {

static_assert(std::endian::native == std::endian::little, "vecs formats are read in native little-endian order");

std::string slurp(std::istream& is)
{
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream in(path, mode);
    if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()), 0);
    return in;
}

template <class T>
T read_raw(const std::string& buf, std::size_t offset)
{
    T v;
    std::memcpy(&v, buf.data() + offset, sizeof(T));
    return v;
}

template <class T>
void write_raw(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

/// Walk the records of a vecs buffer, calling fn(record offset, value offset, d).
template <class Fn>
void for_each_record(const std::string& buf, std::size_t value_size, Fn&& fn)
{
    std::size_t pos = 0;
    std::int32_t first_d = -1;
    while (pos < buf.size())
    {
        if (buf.size() - pos < 4) throw ParseError("truncated record header", static_cast<std::int64_t>(pos));
        auto d = read_raw<std::int32_t>(buf, pos);
        if (d <= 0) throw ParseError(fmt::format("invalid dimension {}", d), static_cast<std::int64_t>(pos));
        if (first_d >= 0 && d != first_d)
            throw ParseError(fmt::format("dimension {} differs from first record's {}", d, first_d), static_cast<std::int64_t>(pos));
        first_d = d;
        std::size_t need = static_cast<std::size_t>(d) * value_size;
        if (buf.size() - pos - 4 < need) throw ParseError("truncated record", static_cast<std::int64_t>(pos));
        fn(pos, pos + 4, d);
        pos += 4 + need;
    }
}

void require_finite(float v, std::size_t offset)
{
    if (!std::isfinite(v)) throw ParseError("non-finite coordinate", static_cast<std::int64_t>(offset));
}

}

PointSet read_fvecs(std::istream& is)
{
    std::string buf = slurp(is);
    PointSet pts;
    std::vector<float> x;
    for_each_record(buf, sizeof(float), [&](std::size_t rec, std::size_t at, std::int32_t d) {
        if (pts.empty() && pts.dim() == 0) pts = PointSet::dense(d);
        x.resize(d);
        std::memcpy(x.data(), buf.data() + at, d * sizeof(float));
        for (float v : x)
            require_finite(v, rec);
        pts.push_dense(x);
    });
    return pts;
}

PointSet read_ivecs(std::istream& is)
{
    std::string buf = slurp(is);
    PointSet pts;
    std::vector<float> x;
    for_each_record(buf, sizeof(std::int32_t), [&](std::size_t, std::size_t at, std::int32_t d) {
        if (pts.empty() && pts.dim() == 0) pts = PointSet::dense(d);
        x.resize(d);
        for (std::int32_t k = 0; k < d; ++k)
            x[k] = static_cast<float>(read_raw<std::int32_t>(buf, at + 4 * k));
        pts.push_dense(x);
    });
    return pts;
}

PointSet read_bvecs(std::istream& is, bool as_bits)
{
    std::string buf = slurp(is);
    PointSet pts;
    std::vector<float> x;
    std::vector<std::uint64_t> w;
    for_each_record(buf, 1, [&](std::size_t, std::size_t at, std::int32_t d) {
        auto bytes = reinterpret_cast<const unsigned char*>(buf.data() + at);
        if (as_bits)
        {
            if (pts.empty() && pts.dim() == 0) pts = PointSet::bits(8 * static_cast<Index>(d));
            w.assign(pts.words_per_point(), 0);
            for (std::int32_t k = 0; k < d; ++k)
                w[k / 8] |= std::uint64_t{bytes[k]} << (8 * (k % 8));
            pts.push_bits(w);
        }
        else
        {
            if (pts.empty() && pts.dim() == 0) pts = PointSet::dense(d);
            x.assign(bytes, bytes + d);
            pts.push_dense(x);
        }
    });
    return pts;
}

void write_fvecs(std::ostream& os, const PointSet& pts)
{
    if (pts.kind() != ElementKind::dense) throw InvalidInput("fvecs holds dense points only");
    for (Index i = 0; i < pts.size(); ++i)
    {
        write_raw(os, static_cast<std::int32_t>(pts.dim()));
        auto x = pts.coords(i);
        os.write(reinterpret_cast<const char*>(x.data()), x.size() * sizeof(float));
    }
}

void write_ivecs(std::ostream& os, const PointSet& pts)
{
    if (pts.kind() != ElementKind::dense) throw InvalidInput("ivecs holds dense points only");
    for (Index i = 0; i < pts.size(); ++i)
    {
        write_raw(os, static_cast<std::int32_t>(pts.dim()));
        for (float v : pts.coords(i))
        {
            if (v != std::trunc(v) || std::fabs(v) > 2147483647.0f) throw InvalidInput("ivecs values must be 32-bit integers");
            write_raw(os, static_cast<std::int32_t>(v));
        }
    }
}

void write_bvecs(std::ostream& os, const PointSet& pts)
{
    if (pts.kind() == ElementKind::bits)
    {
        if (pts.dim() % 8) throw InvalidInput("bvecs needs a bit length divisible by 8");
        std::int32_t d = static_cast<std::int32_t>(pts.dim() / 8);
        for (Index i = 0; i < pts.size(); ++i)
        {
            write_raw(os, d);
            auto w = pts.words(i);
            for (std::int32_t k = 0; k < d; ++k)
                os.put(static_cast<char>((w[k / 8] >> (8 * (k % 8))) & 0xff));
        }
        return;
    }
    if (pts.kind() != ElementKind::dense) throw InvalidInput("bvecs holds dense or bit points only");
    for (Index i = 0; i < pts.size(); ++i)
    {
        write_raw(os, static_cast<std::int32_t>(pts.dim()));
        for (float v : pts.coords(i))
        {
            if (v != std::trunc(v) || v < 0 || v > 255) throw InvalidInput("bvecs values must be integers in [0, 255]");
            os.put(static_cast<char>(static_cast<unsigned char>(v)));
        }
    }
}

PointSet load_fvecs(const std::filesystem::path& path)
{
    auto in = open_in(path, std::ios::binary);
    return read_fvecs(in);
}

PointSet load_ivecs(const std::filesystem::path& path)
{
    auto in = open_in(path, std::ios::binary);
    return read_ivecs(in);
}

PointSet load_bvecs(const std::filesystem::path& path, bool as_bits)
{
    auto in = open_in(path, std::ios::binary);
    return read_bvecs(in, as_bits);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true)
    {
        std::size_t comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
        fields.push_back(f);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}

PointSet read_csv(std::istream& is, MetricKind metric)
{
    ElementKind kind = element_kind(metric);
    PointSet pts = kind == ElementKind::string ? PointSet::strings() : PointSet();

    std::string line;
    std::int64_t lineno = 0;
    std::vector<float> x;
    std::vector<std::uint8_t> bools;

    while (std::getline(is, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        if (kind == ElementKind::string)
        {
            pts.push_string(line);
            continue;
        }
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        auto fields = split_fields(line);
        if (pts.empty() && pts.dim() == 0)
            pts = kind == ElementKind::bits ? PointSet::bits(static_cast<Index>(fields.size()))
                                            : PointSet::dense(static_cast<Index>(fields.size()));
        if (static_cast<Index>(fields.size()) != pts.dim())
            throw ParseError(fmt::format("line {}: expected {} fields, got {}", lineno, pts.dim(), fields.size()), lineno);

        if (kind == ElementKind::bits)
        {
            bools.clear();
            for (auto f : fields)
            {
                if (f != "0" && f != "1") throw ParseError(fmt::format("line {}: bit field '{}' is not 0 or 1", lineno, f), lineno);
                bools.push_back(f == "1");
            }
            pts.push_bools(bools);
            continue;
        }

        x.clear();
        for (auto f : fields)
        {
            float v;
            auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || end != f.data() + f.size())
                throw ParseError(fmt::format("line {}: bad number '{}'", lineno, f), lineno);
            if (!std::isfinite(v)) throw ParseError(fmt::format("line {}: non-finite coordinate", lineno), lineno);
            x.push_back(v);
        }
        pts.push_dense(x);
    }
    return pts;
}

void write_csv(std::ostream& os, const PointSet& pts)
{
    char buf[64];
    for (Index i = 0; i < pts.size(); ++i)
    {
        switch (pts.kind())
        {
            case ElementKind::string:
                if (pts.str(i).find('\n') != std::string_view::npos) throw InvalidInput("strings with newlines cannot be written as csv");
                os << pts.str(i);
                break;
            case ElementKind::bits:
            {
                auto w = pts.words(i);
                for (Index b = 0; b < pts.dim(); ++b)
                    os << (b ? "," : "") << ((w[b / 64] >> (b % 64)) & 1);
                break;
            }
            case ElementKind::dense:
            {
                auto x = pts.coords(i);
                for (std::size_t k = 0; k < x.size(); ++k)
                {
                    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x[k]);
                    if (k) os << ',';
                    os.write(buf, end - buf);
                }
                break;
            }
        }
        os << '\n';
    }
}

PointSet load_csv(const std::filesystem::path& path, MetricKind metric)
{
    auto in = open_in(path);
    return read_csv(in, metric);
}

std::string_view to_string(SyntheticKind kind)
{
    switch (kind)
    {
        case SyntheticKind::uniform_cube: return "uniform-cube";
        case SyntheticKind::gaussian_mixture: return "gaussian-mixture";
        case SyntheticKind::bit_uniform: return "bit-uniform";
        case SyntheticKind::string_mutation: return "string-mutation";
    }
    return "unknown";
}

SyntheticKind parse_synthetic_kind(std::string_view name)
{
    for (auto k : {SyntheticKind::uniform_cube, SyntheticKind::gaussian_mixture, SyntheticKind::bit_uniform, SyntheticKind::string_mutation})
        if (name == to_string(k)) return k;
    throw InvalidInput(fmt::format("unknown synthetic kind '{}'", name));
}

Dataset gen_synthetic(const SyntheticSpec& spec)
{
    if (spec.n < 0) throw InvalidInput("gen_synthetic: n must be nonnegative");
    if (spec.dim < 1) throw InvalidInput("gen_synthetic: dim must be positive");
    if (spec.clusters < 1) throw InvalidInput("gen_synthetic: clusters must be positive");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    Dataset data;

    switch (spec.kind)
    {
        case SyntheticKind::uniform_cube:
        {
            data.points = PointSet::dense(spec.dim);
            std::vector<float> x(spec.dim);
            for (Index i = 0; i < spec.n; ++i)
            {
                for (auto& v : x) v = unit(rng);
                data.points.push_dense(x);
            }
            break;
        }
        case SyntheticKind::gaussian_mixture:
        {
            data.scale = 0.01;
            data.points = PointSet::dense(spec.dim);
            data.means.assign(spec.clusters, std::vector<float>(spec.dim));
            for (auto& mean : data.means)
                for (auto& v : mean) v = unit(rng);

            std::uniform_int_distribution<Index> pick(0, spec.clusters - 1);
            std::normal_distribution<float> noise(0.0f, static_cast<float>(data.scale));
            std::vector<float> x(spec.dim);
            for (Index i = 0; i < spec.n; ++i)
            {
                Index c = pick(rng);
                for (Index k = 0; k < spec.dim; ++k)
                    x[k] = data.means[c][k] + noise(rng);
                data.points.push_dense(x);
                data.labels.push_back(c);
            }
            break;
        }
        case SyntheticKind::bit_uniform:
        {
            data.points = PointSet::bits(spec.dim);
            std::vector<std::uint64_t> w(data.points.words_per_point());
            Index tail = spec.dim % 64;
            for (Index i = 0; i < spec.n; ++i)
            {
                for (auto& word : w) word = rng();
                if (tail) w.back() &= (std::uint64_t{1} << tail) - 1;
                data.points.push_bits(w);
            }
            break;
        }
        case SyntheticKind::string_mutation:
        {
            static constexpr char alphabet[] = "ACGT";
            std::uniform_int_distribution<int> letter(0, 3);
            std::vector<std::string> bases(spec.clusters);
            for (auto& base : bases)
                for (Index k = 0; k < spec.dim; ++k)
                    base.push_back(alphabet[letter(rng)]);

            data.points = PointSet::strings();
            std::uniform_int_distribution<Index> pick(0, spec.clusters - 1);
            std::uniform_int_distribution<Index> edits(0, std::max<Index>(1, spec.dim / 5));
            std::uniform_int_distribution<int> op(0, 2);
            for (Index i = 0; i < spec.n; ++i)
            {
                Index c = pick(rng);
                std::string s = bases[c];
                for (Index e = edits(rng); e > 0; --e)
                {
                    std::uniform_int_distribution<std::size_t> at(0, s.size());
                    std::size_t pos = at(rng);
                    int kind = s.empty() ? 1 : op(rng);
                    if (pos == s.size() && kind != 1) pos = s.size() - 1;
                    if (kind == 0) s[pos] = alphabet[letter(rng)];
                    else if (kind == 1) s.insert(s.begin() + pos, alphabet[letter(rng)]);
                    else s.erase(s.begin() + pos);
                }
                data.points.push_string(s);
                data.labels.push_back(c);
            }
            break;
        }
    }
    return data;
}

namespace {

SyntheticSpec parse_synthetic_spec(std::string_view body)
{
    SyntheticSpec spec;
    std::size_t comma = body.find(',');
    spec.kind = parse_synthetic_kind(body.substr(0, comma));

    while (comma != std::string_view::npos)
    {
        std::size_t start = comma + 1;
        comma = body.find(',', start);
        std::string_view item = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw InvalidInput(fmt::format("synthetic option '{}' is not key=value", item));

        std::string_view key = item.substr(0, eq), value = item.substr(eq + 1);
        std::uint64_t v;
        auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || end != value.data() + value.size())
            throw InvalidInput(fmt::format("synthetic option '{}' needs a nonnegative integer", key));

        if (key == "n") spec.n = static_cast<Index>(v);
        else if (key == "dim") spec.dim = static_cast<Index>(v);
        else if (key == "clusters") spec.clusters = static_cast<Index>(v);
        else if (key == "seed") spec.seed = v;
        else throw InvalidInput(fmt::format("unknown synthetic option '{}'", key));
    }
    return spec;
}

}

Dataset load_dataset(std::string_view spec, MetricKind metric)
{
    constexpr std::string_view prefix = "synthetic:";
    if (spec.starts_with(prefix)) return gen_synthetic(parse_synthetic_spec(spec.substr(prefix.size())));

    std::filesystem::path path{std::string(spec)};
    std::string ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    Dataset data;
    if (ext == ".fvecs") data.points = load_fvecs(path);
    else if (ext == ".ivecs") data.points = load_ivecs(path);
    else if (ext == ".bvecs") data.points = load_bvecs(path, metric == MetricKind::hamming);
    else if (ext == ".csv" || ext == ".txt") data.points = load_csv(path, metric);
    else throw InvalidInput(fmt::format("cannot infer the format of '{}' (expected .fvecs .bvecs .ivecs .csv .txt)", spec));
    return data;
}

}
