#pragma once

// Small geometric value types and utilities shared by every module:
// points, half-open axis cubes/rectangles, deterministic RNG streams,
// and a chunked parallel_for with a deterministic reduction order.

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace carleson {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <int N>
using Point = std::array<double, N>;

template <int N>
double dist2(const Point<N>& a, const Point<N>& b) {
    double s = 0;
    for (int k = 0; k < N; ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

template <int N>
double dist(const Point<N>& a, const Point<N>& b) {
    return std::sqrt(dist2(a, b));
}

// Axis-aligned cube, half-open convention prod_k (corner_k, corner_k + side].
template <int N>
struct AxisBox {
    Point<N> corner{};
    double side = 0;

    Point<N> center() const {
        Point<N> c = corner;
        for (int k = 0; k < N; ++k) c[k] += side / 2;
        return c;
    }
    double diam() const { return side * std::sqrt(double(N)); }
    double volume() const {
        double v = 1;
        for (int k = 0; k < N; ++k) v *= side;
        return v;
    }
    bool contains(const Point<N>& p) const {
        for (int k = 0; k < N; ++k)
            if (!(p[k] > corner[k] && p[k] <= corner[k] + side)) return false;
        return true;
    }
    // Distance from the closed box to a point (zero inside).
    double distance(const Point<N>& p) const {
        double s = 0;
        for (int k = 0; k < N; ++k) {
            double lo = corner[k], hi = corner[k] + side;
            double g = p[k] < lo ? lo - p[k] : (p[k] > hi ? p[k] - hi : 0.0);
            s += g * g;
        }
        return std::sqrt(s);
    }
    Point<N> clamp(const Point<N>& p) const {
        Point<N> q = p;
        for (int k = 0; k < N; ++k) {
            double lo = corner[k], hi = corner[k] + side;
            q[k] = p[k] < lo ? lo : (p[k] > hi ? hi : p[k]);
        }
        return q;
    }
};

// General axis rectangle (closed), used for per-axis extents: leaf boxes of
// boundary cells, face rectangles, query boxes.
template <int N>
struct Rect {
    Point<N> lo{};
    Point<N> hi{};

    static Rect of_box(const AxisBox<N>& b) {
        Rect r;
        r.lo = b.corner;
        for (int k = 0; k < N; ++k) r.hi[k] = b.corner[k] + b.side;
        return r;
    }
    double diam() const { return std::sqrt(dist2(lo, hi)); }
    double volume() const {
        double v = 1;
        for (int k = 0; k < N; ++k) v *= hi[k] - lo[k];
        return v;
    }
    Point<N> center() const {
        Point<N> c;
        for (int k = 0; k < N; ++k) c[k] = (lo[k] + hi[k]) / 2;
        return c;
    }
    double distance(const Point<N>& p) const {
        double s = 0;
        for (int k = 0; k < N; ++k) {
            double g = p[k] < lo[k] ? lo[k] - p[k] : (p[k] > hi[k] ? p[k] - hi[k] : 0.0);
            s += g * g;
        }
        return std::sqrt(s);
    }
    double distance(const Rect& o) const {
        double s = 0;
        for (int k = 0; k < N; ++k) {
            double g = 0;
            if (o.hi[k] < lo[k]) g = lo[k] - o.hi[k];
            else if (o.lo[k] > hi[k]) g = o.lo[k] - hi[k];
            s += g * g;
        }
        return std::sqrt(s);
    }
    Point<N> clamp(const Point<N>& p) const {
        Point<N> q = p;
        for (int k = 0; k < N; ++k) q[k] = p[k] < lo[k] ? lo[k] : (p[k] > hi[k] ? hi[k] : p[k]);
        return q;
    }
    bool intersects(const Rect& o) const {
        for (int k = 0; k < N; ++k)
            if (o.hi[k] < lo[k] || o.lo[k] > hi[k]) return false;
        return true;
    }
    bool contains_rect(const Rect& o) const {
        for (int k = 0; k < N; ++k)
            if (o.lo[k] < lo[k] || o.hi[k] > hi[k]) return false;
        return true;
    }
};

// Distance between a closed axis rectangle and a closed segment [a,b].
// Both are convex, so the squared distance is convex along the segment;
// golden-section refinement after a coarse scan is exact to ~1e-15 and we
// special-case the endpoints and intersection for the values that must be
// bit-exact (axis-aligned configurations).
template <int N>
double rect_segment_distance(const Rect<N>& r, const Point<N>& a, const Point<N>& b) {
    // Axis-aligned or degenerate segments reduce to rect-rect distance.
    Rect<N> sbox;
    for (int k = 0; k < N; ++k) {
        sbox.lo[k] = std::min(a[k], b[k]);
        sbox.hi[k] = std::max(a[k], b[k]);
    }
    int varying = 0;
    for (int k = 0; k < N; ++k)
        if (sbox.hi[k] > sbox.lo[k]) ++varying;
    if (varying <= 1) return r.distance(sbox);

    auto f = [&](double t) {
        Point<N> p;
        for (int k = 0; k < N; ++k) p[k] = a[k] + t * (b[k] - a[k]);
        return r.distance(p);
    };
    // Convex in t: ternary search.
    double lo = 0, hi = 1;
    double flo = f(0), fhi = f(1);
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        double f1 = f(m1), f2 = f(m2);
        if (f1 <= f2) {
            hi = m2;
            fhi = f2;
        } else {
            lo = m1;
            flo = f1;
        }
        if (hi - lo < 1e-15) break;
    }
    return std::min({flo, fhi, f((lo + hi) / 2)});
}

// ---------------------------------------------------------------------------
// Deterministic RNG: splitmix64 keyed streams so that per-sample results do
// not depend on evaluation order or thread scheduling.

struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0,1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    uint64_t uniform_int(uint64_t n) { return next() % n; }
};

inline uint64_t stream_key(uint64_t seed, uint64_t stream) {
    SplitMix64 g(seed ^ (0x2545F4914F6CDD1DULL * (stream + 1)));
    g.next();
    return g.next();
}

inline SplitMix64 make_stream(uint64_t seed, uint64_t stream) {
    return SplitMix64(stream_key(seed, stream));
}

// ---------------------------------------------------------------------------
// Thread pool-free parallel_for: fixed chunking, results merged in index
// order so reductions are bitwise stable. Thread count from CARLESON_THREADS
// (default 1).

inline int configured_threads() {
    if (const char* env = std::getenv("CARLESON_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

template <class Body>
void parallel_for(std::size_t n, Body&& body, int threads = -1) {
    if (threads < 0) threads = configured_threads();
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        const std::size_t chunk = 64;
        for (;;) {
            std::size_t lo = next.fetch_add(chunk);
            if (lo >= n) break;
            std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) body(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

// FNV-1a, used for config hashes embedded in reports.
inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace carleson
