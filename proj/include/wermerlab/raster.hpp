#pragma once

// Square raster over a disk with connected-component extraction and
// cell-center diameters. Components use 4-connectivity; the 8-connectivity
// diameter is reported alongside since corner-touching components are a
// genuine ambiguity of rasterized closures.

#include <cmath>
#include <cstdint>
#include <vector>

#include "wermerlab/complex_util.hpp"

namespace wermerlab {

struct DiskRaster {
    cplx center;
    double radius = 0.0;
    int cells = 0;  // cells per side
    std::vector<std::uint8_t> mark;
    std::vector<std::uint8_t> inside;

    double cell_size() const { return 2.0 * radius / cells; }

    cplx cell_center(int ix, int iy) const {
        const double h = cell_size();
        return center + cplx(-radius + (ix + 0.5) * h, -radius + (iy + 0.5) * h);
    }

    int index(int ix, int iy) const { return iy * cells + ix; }
};

/// Rasterizes the closed disk and marks cells whose center satisfies pred.
template <typename Pred>
inline DiskRaster rasterize_disk(cplx center, double radius, int cells, Pred&& pred) {
    DiskRaster r;
    r.center = center;
    r.radius = radius;
    r.cells = cells;
    r.mark.assign(static_cast<size_t>(cells) * cells, 0);
    r.inside.assign(static_cast<size_t>(cells) * cells, 0);
    for (int iy = 0; iy < cells; ++iy) {
        for (int ix = 0; ix < cells; ++ix) {
            const cplx w = r.cell_center(ix, iy);
            if (std::abs(w - center) > radius) continue;
            r.inside[r.index(ix, iy)] = 1;
            if (pred(w)) r.mark[r.index(ix, iy)] = 1;
        }
    }
    return r;
}

/// Connected components of the marked set; returns cell-center lists.
inline std::vector<std::vector<cplx>> marked_components(const DiskRaster& r,
                                                        bool eight_connected = false) {
    std::vector<std::vector<cplx>> comps;
    std::vector<std::uint8_t> seen(r.mark.size(), 0);
    std::vector<int> stack;
    for (int iy = 0; iy < r.cells; ++iy) {
        for (int ix = 0; ix < r.cells; ++ix) {
            const int id0 = r.index(ix, iy);
            if (!r.mark[id0] || seen[id0]) continue;
            comps.emplace_back();
            stack.assign(1, id0);
            seen[id0] = 1;
            while (!stack.empty()) {
                const int id = stack.back();
                stack.pop_back();
                const int cx = id % r.cells, cy = id / r.cells;
                comps.back().push_back(r.cell_center(cx, cy));
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (!eight_connected && dx != 0 && dy != 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= r.cells || ny >= r.cells) continue;
                        const int nid = r.index(nx, ny);
                        if (r.mark[nid] && !seen[nid]) {
                            seen[nid] = 1;
                            stack.push_back(nid);
                        }
                    }
                }
            }
        }
    }
    return comps;
}

/// Max pairwise distance of a planar point set (via its convex hull).
inline double point_set_diameter(std::vector<cplx> pts) {
    if (pts.size() < 2) return 0.0;
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    auto cross = [](cplx o, cplx a, cplx b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<cplx> hull(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {  // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {  // upper
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    double best = 0.0;
    for (size_t i = 0; i < hull.size(); ++i)
        for (size_t j = i + 1; j < hull.size(); ++j)
            best = std::max(best, std::abs(hull[i] - hull[j]));
    return best;
}

/// Max component diameter over the marked set.
inline double max_component_diameter(const DiskRaster& r, bool eight_connected = false) {
    double best = 0.0;
    for (auto& comp : marked_components(r, eight_connected))
        best = std::max(best, point_set_diameter(std::move(comp)));
    return best;
}

/// Exact Euclidean distance transform (Felzenszwalb-Huttenlocher): for each
/// cell of an nx-by-ny grid, the distance in cell units to the nearest seed.
inline std::vector<double> distance_transform(int nx, int ny,
                                              const std::vector<std::uint8_t>& seed) {
    const double big = 1e18;
    std::vector<double> f(static_cast<size_t>(nx) * ny);
    for (size_t i = 0; i < f.size(); ++i) f[i] = seed[i] ? 0.0 : big;

    auto edt_1d = [big](const std::vector<double>& src, std::vector<double>& dst) {
        const int n = static_cast<int>(src.size());
        std::vector<int> v(n);
        std::vector<double> z(n + 1);
        int k = 0;
        v[0] = 0;
        z[0] = -big;
        z[1] = big;
        for (int q = 1; q < n; ++q) {
            double s;
            while (true) {
                s = ((src[q] + q * q) - (src[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
                if (s > z[k]) break;
                --k;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = big;
        }
        k = 0;
        for (int q = 0; q < n; ++q) {
            while (z[k + 1] < q) ++k;
            dst[q] = (q - v[k]) * static_cast<double>(q - v[k]) + src[v[k]];
        }
    };

    std::vector<double> col(ny), out_col(ny);
    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < ny; ++y) col[y] = f[static_cast<size_t>(y) * nx + x];
        edt_1d(col, out_col);
        for (int y = 0; y < ny; ++y) f[static_cast<size_t>(y) * nx + x] = out_col[y];
    }
    std::vector<double> row(nx), out_row(nx);
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) row[x] = f[static_cast<size_t>(y) * nx + x];
        edt_1d(row, out_row);
        for (int x = 0; x < nx; ++x)
            f[static_cast<size_t>(y) * nx + x] = std::sqrt(out_row[x]);
    }
    return f;
}

}  // namespace wermerlab
