#pragma once

// Concrete boundary sets with a self-similar cell hierarchy, exact cell
// measures, and distance oracles (exact for the flat instances, resolved to
// the leaf boxes for the Cantor instances, with the truncation error bound
// reported).
//
// The cell tree is never materialized: cells are descended arithmetically,
// so deep resolutions cost no memory. Dyadic-system construction (dyadic.hpp)
// materializes nodes separately, up to its own depth.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carleson/core.hpp"

namespace carleson {

enum class BoundaryKind {
    hyperplane_patch,
    lipschitz_graph,
    four_corner_cantor,
    linear_cantor,
};

inline const char* kind_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::hyperplane_patch: return "hyperplane-patch";
        case BoundaryKind::lipschitz_graph: return "lipschitz-graph";
        case BoundaryKind::four_corner_cantor: return "four-corner-cantor";
        case BoundaryKind::linear_cantor: return "linear-cantor";
    }
    return "?";
}

inline BoundaryKind kind_from_name(const std::string& s) {
    if (s == "hyperplane-patch" || s == "segment") return BoundaryKind::hyperplane_patch;
    if (s == "lipschitz-graph") return BoundaryKind::lipschitz_graph;
    if (s == "four-corner-cantor") return BoundaryKind::four_corner_cantor;
    if (s == "linear-cantor") return BoundaryKind::linear_cantor;
    throw std::invalid_argument("unsupported boundary kind: " + s);
}

struct InstanceSpec {
    BoundaryKind kind = BoundaryKind::hyperplane_patch;
    int depth = 6;        // resolution depth G of the cell hierarchy
    double slope = 0.5;   // lipschitz-graph only, 0 <= slope <= 1
    int teeth_level = 2;  // graph kinks at multiples of 2^-(teeth_level+1)
    std::uint64_t cell_budget = std::uint64_t(1) << 26;
};

template <int N>
class BoundarySet {
  public:
    // A cell of the hierarchy: its generation and bounding rectangle. The
    // rectangle is the exact hull of the cell's point set (degenerate axes
    // allowed). The point set itself is recovered per kind.
    struct Cell {
        int gen = 0;
        Rect<N> box{};
    };

    static BoundarySet make(const InstanceSpec& spec) {
        BoundarySet e;
        e.kind_ = spec.kind;
        e.depth_ = spec.depth;
        if (spec.depth < 1) throw std::invalid_argument("depth must be >= 1");
        switch (spec.kind) {
            case BoundaryKind::hyperplane_patch:
                e.branching_ = (N == 2) ? 2 : 4;
                e.lambda_ = 0.5;
                e.dim_d_ = N - 1;
                e.sigma_total_ = 1.0;
                e.diam_ = (N == 2) ? 1.0 : std::sqrt(2.0);
                break;
            case BoundaryKind::lipschitz_graph: {
                if (N != 2) throw std::invalid_argument("lipschitz-graph requires ambient dimension 2");
                if (spec.slope < 0 || spec.slope > 1) throw std::invalid_argument("graph slope must lie in [0,1]");
                e.branching_ = 2;
                e.lambda_ = 0.5;
                e.dim_d_ = 1;
                e.slope_ = spec.slope;
                e.tooth_half_ = std::ldexp(1.0, -(spec.teeth_level + 1));
                e.sigma_total_ = std::sqrt(1.0 + spec.slope * spec.slope);
                e.diam_ = e.graph_diameter();
                break;
            }
            case BoundaryKind::four_corner_cantor:
                if (N != 2) throw std::invalid_argument("four-corner-cantor requires ambient dimension 2");
                e.branching_ = 4;
                e.lambda_ = 0.25;
                e.dim_d_ = 1;  // log 4 / log 4
                e.sigma_total_ = 1.0;
                e.diam_ = std::sqrt(2.0);
                break;
            case BoundaryKind::linear_cantor:
                if (N != 2) throw std::invalid_argument("linear-cantor requires ambient dimension 2");
                e.branching_ = 2;
                e.lambda_ = 1.0 / 3.0;
                e.dim_d_ = std::log(2.0) / std::log(3.0);
                e.sigma_total_ = 1.0;
                e.diam_ = 1.0;
                break;
        }
        double cells = std::pow(double(e.branching_), double(spec.depth));
        if (cells > double(spec.cell_budget))
            throw BudgetError("cell count " + std::to_string(cells) + " exceeds budget");
        return e;
    }

    BoundaryKind kind() const { return kind_; }
    int depth() const { return depth_; }
    int branching() const { return branching_; }
    double lambda() const { return lambda_; }
    double dim_d() const { return dim_d_; }
    double diameter() const { return diam_; }
    double total_measure() const { return sigma_total_; }
    std::uint64_t leaf_count() const {
        std::uint64_t n = 1;
        for (int g = 0; g < depth_; ++g) n *= std::uint64_t(branching_);
        return n;
    }

    // sigma(cell) = branching^-gen * sigma(E), exact and additive.
    double cell_measure(int gen) const {
        double m = sigma_total_;
        for (int g = 0; g < gen; ++g) m /= branching_;
        return m;
    }
    // l(Q) = lambda^gen * diam(E).
    double cell_scale(int gen) const {
        double l = diam_;
        for (int g = 0; g < gen; ++g) l *= lambda_;
        return l;
    }

    // |dist(X, E_G) - dist(X, E)|-bound of the oracle. Zero for the flat
    // instances, leaf-box diameter for the Cantor ones.
    double distance_error_bound() const {
        switch (kind_) {
            case BoundaryKind::hyperplane_patch:
            case BoundaryKind::lipschitz_graph: return 0.0;
            case BoundaryKind::four_corner_cantor: return root_cell().box.diam() * std::pow(0.25, depth_);
            case BoundaryKind::linear_cantor: return std::pow(1.0 / 3.0, depth_);
        }
        return 0.0;
    }

    Cell root_cell() const {
        Cell c;
        c.gen = 0;
        c.box = tight_box();
        return c;
    }

    Rect<N> tight_box() const {
        Rect<N> r{};
        for (int k = 0; k < N; ++k) {
            r.lo[k] = 0;
            r.hi[k] = 0;
        }
        switch (kind_) {
            case BoundaryKind::hyperplane_patch:
                for (int k = 0; k < N - 1; ++k) r.hi[k] = 1;
                break;
            case BoundaryKind::lipschitz_graph:
                r.hi[0] = 1;
                r.hi[1] = slope_ * tooth_half_;
                break;
            case BoundaryKind::four_corner_cantor:
                r.hi[0] = 1;
                r.hi[1] = 1;
                break;
            case BoundaryKind::linear_cantor:
                r.hi[0] = 1;
                break;
        }
        return r;
    }

    Cell child(const Cell& c, int i) const {
        Cell out;
        out.gen = c.gen + 1;
        switch (kind_) {
            case BoundaryKind::hyperplane_patch: {
                out.box = c.box;
                if constexpr (N == 2) {
                    double w = (c.box.hi[0] - c.box.lo[0]) / 2;
                    out.box.lo[0] = c.box.lo[0] + i * w;
                    out.box.hi[0] = out.box.lo[0] + w;
                } else {
                    double w = (c.box.hi[0] - c.box.lo[0]) / 2;
                    out.box.lo[0] = c.box.lo[0] + (i & 1) * w;
                    out.box.hi[0] = out.box.lo[0] + w;
                    out.box.lo[1] = c.box.lo[1] + ((i >> 1) & 1) * w;
                    out.box.hi[1] = out.box.lo[1] + w;
                }
                break;
            }
            case BoundaryKind::lipschitz_graph: {
                double w = (c.box.hi[0] - c.box.lo[0]) / 2;
                double x0 = c.box.lo[0] + i * w;
                out.box = graph_cell_box(x0, w);
                break;
            }
            case BoundaryKind::four_corner_cantor: {
                double w = (c.box.hi[0] - c.box.lo[0]) / 4;
                out.box.lo[0] = c.box.lo[0] + (i & 1) * 3 * w;
                out.box.lo[1] = c.box.lo[1] + ((i >> 1) & 1) * 3 * w;
                out.box.hi[0] = out.box.lo[0] + w;
                out.box.hi[1] = out.box.lo[1] + w;
                break;
            }
            case BoundaryKind::linear_cantor: {
                double w = (c.box.hi[0] - c.box.lo[0]) / 3;
                out.box = c.box;
                out.box.lo[0] = c.box.lo[0] + (i == 0 ? 0.0 : 2 * w);
                out.box.hi[0] = out.box.lo[0] + w;
                break;
            }
        }
        return out;
    }

    Cell cell_at(std::span<const std::uint8_t> path) const {
        Cell c = root_cell();
        for (std::uint8_t i : path) c = child(c, i);
        return c;
    }

    // A canonical point of E inside the cell ("center" x_Q of the dyadic
    // machinery). For the flat instances this is the midpoint; for the Cantor
    // instances a cell corner, which belongs to E exactly.
    Point<N> cell_anchor(const Cell& c) const {
        Point<N> p{};
        switch (kind_) {
            case BoundaryKind::hyperplane_patch:
                for (int k = 0; k < N - 1; ++k) p[k] = (c.box.lo[k] + c.box.hi[k]) / 2;
                p[N - 1] = 0;
                break;
            case BoundaryKind::lipschitz_graph: {
                double xm = (c.box.lo[0] + c.box.hi[0]) / 2;
                p[0] = xm;
                p[1] = graph_height(xm);
                break;
            }
            case BoundaryKind::four_corner_cantor:
                p[0] = c.box.lo[0];
                p[1] = c.box.lo[1];
                break;
            case BoundaryKind::linear_cantor:
                p[0] = c.box.lo[0];
                p[1] = 0;
                break;
        }
        return p;
    }

    // ---- distance oracles ------------------------------------------------

    struct Nearest {
        double distance = kInf;
        Point<N> point{};
    };

    // dist(X, E_G) by branch-and-bound over the virtual cell tree.
    double distance(const Point<N>& x) const { return nearest(x).distance; }

    Nearest nearest(const Point<N>& x) const {
        Nearest best;
        descend_point(root_cell(), x, {}, -1, best);
        return best;
    }

    // dist(X, Q) for a cell Q given as its cell descriptor: restricts the
    // search to the subtree of Q.
    double distance_to_cell(const Point<N>& x, const Cell& q) const {
        Nearest best;
        descend_point(q, x, {}, -1, best);
        return best.distance;
    }

    // dist(X, E \ Q): full tree with the subtree at `exclude` removed.
    double distance_excluding(const Point<N>& x, std::span<const std::uint8_t> exclude) const {
        Nearest best;
        descend_point(root_cell(), x, exclude, exclude.empty() ? -1 : 0, best);
        return best.distance;
    }

    // dist(R, E_G) for a closed axis rectangle R (used by the Whitney builder
    // and the region filters); optionally restricted to a subtree.
    double rect_distance(const Rect<N>& r) const { return rect_distance_from(r, root_cell()); }

    double rect_distance_from(const Rect<N>& r, const Cell& q) const {
        double best = kInf;
        descend_rect(q, r, best);
        return best;
    }

    // sigma(Delta(x, r)): total measure of leaves whose anchor lies in the
    // closed ball B(x, r). Whole subtrees inside the ball are aggregated.
    double sigma_ball(const Point<N>& x, double r) const {
        return sigma_ball_rec(root_cell(), x, r);
    }

    // Leaf sampling: leaves carry equal measure, so a uniform index is a
    // sigma-uniform draw.
    std::vector<std::uint8_t> leaf_path(std::uint64_t index) const {
        std::vector<std::uint8_t> path(depth_);
        for (int g = depth_ - 1; g >= 0; --g) {
            path[g] = std::uint8_t(index % branching_);
            index /= branching_;
        }
        return path;
    }

    double graph_height(double x) const {
        // triangle wave with half-period tooth_half_ and slope +-slope_
        double h = tooth_half_;
        double t = std::fmod(x, 2 * h);
        if (t < 0) t += 2 * h;
        return slope_ * (t <= h ? t : 2 * h - t);
    }

  private:
    BoundaryKind kind_ = BoundaryKind::hyperplane_patch;
    int depth_ = 1;
    int branching_ = 2;
    double lambda_ = 0.5;
    double dim_d_ = 1;
    double diam_ = 1;
    double sigma_total_ = 1;
    double slope_ = 0.5;       // graph
    double tooth_half_ = 0.125;  // graph: kink spacing

    Rect<N> graph_cell_box(double x0, double w) const {
        Rect<N> r{};
        r.lo[0] = x0;
        r.hi[0] = x0 + w;
        double ymin = std::min(graph_height(x0), graph_height(x0 + w));
        double ymax = std::max(graph_height(x0), graph_height(x0 + w));
        // interior kinks
        double h = tooth_half_;
        for (double v = std::ceil(x0 / h) * h; v < x0 + w + h / 2; v += h) {
            if (v <= x0 || v >= x0 + w) continue;
            double y = graph_height(v);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
        r.lo[1] = ymin;
        r.hi[1] = ymax;
        return r;
    }

    double graph_diameter() const {
        // extremes are attained at polyline vertices
        std::vector<Point<2>> verts;
        double h = tooth_half_;
        for (double v = 0; v <= 1 + h / 2; v += h) verts.push_back({std::min(v, 1.0), graph_height(std::min(v, 1.0))});
        double best = 0;
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = i + 1; j < verts.size(); ++j)
                best = std::max(best, dist<2>(verts[i], verts[j]));
        return best;
    }

    // exact distance from a point to the graph restricted to [x0, x1]
    double graph_point_distance(const Point<N>& p, double x0, double x1, Point<N>* nearest) const {
        double h = tooth_half_;
        double best = kInf;
        double a = x0;
        while (a < x1 - 1e-18) {
            double b = std::min(x1, std::floor(a / h + 1.0 + 1e-12) * h);
            if (b <= a) b = std::min(x1, a + h);
            // straight piece from (a, y(a)) to (b, y(b))
            Point<N> pa{a, graph_height(a)}, pb{b, graph_height(b)};
            double vx = pb[0] - pa[0], vy = pb[1] - pa[1];
            double tt = ((p[0] - pa[0]) * vx + (p[1] - pa[1]) * vy) / (vx * vx + vy * vy);
            tt = std::clamp(tt, 0.0, 1.0);
            Point<N> q{pa[0] + tt * vx, pa[1] + tt * vy};
            double d = dist<N>(p, q);
            if (d < best) {
                best = d;
                if (nearest) *nearest = q;
            }
            a = b;
        }
        return best;
    }

    double graph_rect_distance(const Rect<N>& r, double x0, double x1) const {
        double h = tooth_half_;
        double best = kInf;
        double a = x0;
        while (a < x1 - 1e-18) {
            double b = std::min(x1, std::floor(a / h + 1.0 + 1e-12) * h);
            if (b <= a) b = std::min(x1, a + h);
            Point<N> pa{a, graph_height(a)}, pb{b, graph_height(b)};
            best = std::min(best, rect_segment_distance<N>(r, pa, pb));
            a = b;
        }
        return best;
    }

    // exact leaf distances; for the Cantor kinds the leaf point set is taken
    // as its box (the resolved set E_G).
    double leaf_point_distance(const Cell& c, const Point<N>& p, Point<N>* nearest) const {
        switch (kind_) {
            case BoundaryKind::lipschitz_graph:
                return graph_point_distance(p, c.box.lo[0], c.box.hi[0], nearest);
            default: {
                Point<N> q = c.box.clamp(p);
                if (nearest) *nearest = q;
                return dist<N>(p, q);
            }
        }
    }

    double leaf_rect_distance(const Cell& c, const Rect<N>& r) const {
        switch (kind_) {
            case BoundaryKind::lipschitz_graph:
                return graph_rect_distance(r, c.box.lo[0], c.box.hi[0]);
            default: return r.distance(c.box);
        }
    }

    // `match` = c.gen while the cell still lies on the excluded path, -1 once
    // it has diverged (or when nothing is excluded).
    void descend_point(const Cell& c, const Point<N>& x, std::span<const std::uint8_t> exclude,
                       int match, Nearest& best) const {
        const bool on_path = match == c.gen;
        if (on_path && c.gen == int(exclude.size())) return;  // the excluded cube itself
        if (c.box.distance(x) >= best.distance) return;
        if (c.gen == depth_) {
            Point<N> q;
            double d = leaf_point_distance(c, x, &q);
            if (d < best.distance) {
                best.distance = d;
                best.point = q;
            }
            return;
        }
        std::array<std::pair<double, int>, 4> order;
        for (int i = 0; i < branching_; ++i)
            order[i] = {child(c, i).box.distance(x), i};
        std::sort(order.begin(), order.begin() + branching_);
        for (int k = 0; k < branching_; ++k) {
            int i = order[k].second;
            int m = (on_path && exclude[c.gen] == i) ? c.gen + 1 : -1;
            descend_point(child(c, i), x, exclude, m, best);
        }
    }

    void descend_rect(const Cell& c, const Rect<N>& r, double& best) const {
        if (r.distance(c.box) >= best) return;
        if (c.gen == depth_) {
            best = std::min(best, leaf_rect_distance(c, r));
            return;
        }
        std::array<std::pair<double, int>, 4> order;
        for (int i = 0; i < branching_; ++i)
            order[i] = {r.distance(child(c, i).box), i};
        std::sort(order.begin(), order.begin() + branching_);
        for (int k = 0; k < branching_; ++k) descend_rect(child(c, order[k].second), r, best);
    }

    double sigma_ball_rec(const Cell& c, const Point<N>& x, double r) const {
        if (c.box.distance(x) > r) return 0;
        // farthest corner inside the ball => every anchor of the subtree is in
        double far2 = 0;
        for (int k = 0; k < N; ++k) {
            double d = std::max(std::abs(x[k] - c.box.lo[k]), std::abs(x[k] - c.box.hi[k]));
            far2 += d * d;
        }
        if (far2 <= r * r) return cell_measure(c.gen);
        if (c.gen == depth_) {
            Point<N> a = cell_anchor(c);
            return dist<N>(a, x) <= r ? cell_measure(c.gen) : 0.0;
        }
        double s = 0;
        for (int i = 0; i < branching_; ++i) s += sigma_ball_rec(child(c, i), x, r);
        return s;
    }
};

using BoundarySet2 = BoundarySet<2>;
using BoundarySet3 = BoundarySet<3>;

}  // namespace carleson
