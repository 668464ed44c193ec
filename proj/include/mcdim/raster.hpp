#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "mcdim/dimension.hpp"
#include "mcdim/errors.hpp"
#include "mcdim/map.hpp"
#include "mcdim/parallel.hpp"

namespace mcdim {

struct Window {
    double x_min = -1.25, x_max = 1.25;
    double y_min = -1.25, y_max = 1.25;
    int width = 800, height = 800;

    void validate() const {
        if (!(x_min < x_max && y_min < y_max))
            throw std::invalid_argument("Window: empty range");
        if (width < 16 || height < 16)
            throw std::invalid_argument("Window: resolution must be >= 16 pixels");
    }
    double px() const { return (x_max - x_min) / width; }
    double py() const { return (y_max - y_min) / height; }
    // row 0 is the top of the image
    complexd center(int ix, int iy) const {
        return {x_min + (ix + 0.5) * px(), y_max - (iy + 0.5) * py()};
    }
};

enum class PixelStatus : std::uint8_t {
    escaped = 0,      // reached |z| > escape_radius
    bounded = 1,      // still inside after max_iter
    toward_zero = 2,  // p = 0 only: captured by the superattracting fixed point 0
};

struct PointClass {
    PixelStatus status;
    int iter; // first escape step for escaped pixels, max_iter otherwise
};

inline PointClass classify_point(const McMullenMap& m, complexd z, int max_iter = 500,
                                 double escape_radius = 4.0) {
    const bool p_zero = (m.p == complexd{});
    for (int it = 0; it < max_iter; ++it) {
        const double r = std::abs(z);
        if (r > escape_radius) return {PixelStatus::escaped, it};
        if (p_zero) {
            if (r < 0.1) return {PixelStatus::toward_zero, it};
        } else if (r < 1e-15) {
            // pole hit: the next iterate exceeds any radius
            return {PixelStatus::escaped, it + 1};
        }
        const complexd zq = ipow(z, m.Q);
        z = p_zero ? zq : zq + m.p / zq;
    }
    return {PixelStatus::bounded, max_iter};
}

// Iteration cap for boundary extraction. Transversal expansion along the
// boundary is ~ Q per step, so pixels at distance d escape after about
// log_Q(1/d) + O(1) steps and the non-escaped band around the Julia set has
// width ~ Q^-(T - c). The cap keeps that band a few pixels wide so it stays
// 8-connected and blocks the border flood fill; larger caps thin it below
// pixel scale and eventually empty it (measured c ~ 6 at Q = 3).
inline int auto_max_iter(const McMullenMap& m, const Window& w) {
    const double half = 0.5 * std::min(w.width, w.height);
    const int t = static_cast<int>(std::floor(std::log(half) / std::log(double(m.Q)))) + 2;
    return std::clamp(t, 4, 40);
}

struct RasterClassification {
    Window window;
    int max_iter = 0;
    double escape_radius = 4.0;
    std::vector<PixelStatus> status;  // row-major, width * height
    std::vector<std::int32_t> iter;
    std::vector<std::uint8_t> infinity; // 1 = escaped component reached from the border
    std::vector<std::uint8_t> boundary; // 1 = boundary mask pixel

    std::size_t idx(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * window.width + ix;
    }
    std::int64_t count_boundary() const {
        std::int64_t c = 0;
        for (auto v : boundary) c += v;
        return c;
    }
};

inline RasterClassification render(const McMullenMap& m, const Window& win, int max_iter = 0,
                                   double escape_radius = 4.0, int workers = 0) {
    win.validate();
    if (escape_radius < 2.0)
        throw std::invalid_argument("render: escape radius must be >= 2");
    if (max_iter <= 0) max_iter = auto_max_iter(m, win);

    RasterClassification rc;
    rc.window = win;
    rc.max_iter = max_iter;
    rc.escape_radius = escape_radius;
    const std::int64_t npx = static_cast<std::int64_t>(win.width) * win.height;
    rc.status.resize(static_cast<std::size_t>(npx));
    rc.iter.resize(static_cast<std::size_t>(npx));
    rc.infinity.assign(static_cast<std::size_t>(npx), 0);
    rc.boundary.assign(static_cast<std::size_t>(npx), 0);

    parallel_for_blocks(win.height, workers, [&](std::int64_t, std::int64_t rlo, std::int64_t rhi) {
        for (std::int64_t iy = rlo; iy < rhi; ++iy) {
            for (int ix = 0; ix < win.width; ++ix) {
                const PointClass pc =
                    classify_point(m, win.center(ix, static_cast<int>(iy)), max_iter, escape_radius);
                const std::size_t k = rc.idx(ix, static_cast<int>(iy));
                rc.status[k] = pc.status;
                rc.iter[k] = pc.iter;
            }
        }
    }, 8);

    // infinity component: escaped pixels 4-connected to the window border
    std::vector<std::int64_t> stack;
    auto push = [&](int ix, int iy) {
        const std::size_t k = rc.idx(ix, iy);
        if (rc.status[k] == PixelStatus::escaped && !rc.infinity[k]) {
            rc.infinity[k] = 1;
            stack.push_back(static_cast<std::int64_t>(k));
        }
    };
    for (int ix = 0; ix < win.width; ++ix) {
        push(ix, 0);
        push(ix, win.height - 1);
    }
    for (int iy = 0; iy < win.height; ++iy) {
        push(0, iy);
        push(win.width - 1, iy);
    }
    while (!stack.empty()) {
        const std::int64_t k = stack.back();
        stack.pop_back();
        const int ix = static_cast<int>(k % win.width);
        const int iy = static_cast<int>(k / win.width);
        if (ix > 0) push(ix - 1, iy);
        if (ix + 1 < win.width) push(ix + 1, iy);
        if (iy > 0) push(ix, iy - 1);
        if (iy + 1 < win.height) push(ix, iy + 1);
    }

    // boundary mask: non-escaped pixels 8-adjacent to the infinity component
    for (int iy = 0; iy < win.height; ++iy) {
        for (int ix = 0; ix < win.width; ++ix) {
            const std::size_t k = rc.idx(ix, iy);
            if (rc.status[k] == PixelStatus::escaped) continue;
            bool adj = false;
            for (int dy = -1; dy <= 1 && !adj; ++dy) {
                for (int dx = -1; dx <= 1 && !adj; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int ux = ix + dx, uy = iy + dy;
                    if (ux < 0 || uy < 0 || ux >= win.width || uy >= win.height) continue;
                    adj = rc.infinity[rc.idx(ux, uy)] != 0;
                }
            }
            rc.boundary[k] = adj ? 1 : 0;
        }
    }
    return rc;
}

// P6 pixmap: bounded dark, basin of infinity light, other escaped regions
// mid-tone, p = 0 inner basin its own tone. Deterministic bytes.
inline void write_ppm(const RasterClassification& rc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_ppm: cannot open " + path);
    out << "P6\n" << rc.window.width << " " << rc.window.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(rc.window.width) * 3);
    for (int iy = 0; iy < rc.window.height; ++iy) {
        for (int ix = 0; ix < rc.window.width; ++ix) {
            const std::size_t k = rc.idx(ix, iy);
            unsigned char r, g, b;
            if (rc.status[k] == PixelStatus::escaped) {
                if (rc.infinity[k]) {
                    r = g = b = 235;
                } else {
                    r = g = b = 140;
                }
            } else if (rc.status[k] == PixelStatus::toward_zero) {
                r = g = b = 70;
            } else {
                r = g = b = 25;
            }
            row[3 * ix] = r;
            row[3 * ix + 1] = g;
            row[3 * ix + 2] = b;
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw io_error("write_ppm: write failed for " + path);
}

// Run-length dump of the boundary mask: one line per row, "row start:length ...".
inline void write_mask_rle(const RasterClassification& rc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("write_mask_rle: cannot open " + path);
    for (int iy = 0; iy < rc.window.height; ++iy) {
        out << iy;
        int run_start = -1;
        for (int ix = 0; ix <= rc.window.width; ++ix) {
            const bool on = ix < rc.window.width && rc.boundary[rc.idx(ix, iy)] != 0;
            if (on && run_start < 0) run_start = ix;
            if (!on && run_start >= 0) {
                out << " " << run_start << ":" << (ix - run_start);
                run_start = -1;
            }
        }
        out << "\n";
    }
    if (!out) throw io_error("write_mask_rle: write failed for " + path);
}

// Box-counting slope fit over the given box sizes (in pixels). Boxes are
// anchored at pixel (0,0); counts must strictly decrease with size.
inline DimensionEstimate box_count(const std::vector<std::uint8_t>& mask, const Window& win,
                                   const std::vector<int>& sizes) {
    win.validate();
    if (mask.size() != static_cast<std::size_t>(win.width) * win.height)
        throw std::invalid_argument("box_count: mask size does not match window");
    if (sizes.size() < 4) throw std::invalid_argument("box_count: need >= 4 scales");
    std::vector<int> ss = sizes;
    std::sort(ss.begin(), ss.end());
    if (ss.front() < 1) throw std::invalid_argument("box_count: box sizes must be >= 1");
    if (ss.back() < 4 * ss.front())
        throw std::invalid_argument("box_count: scales must span >= 2 octaves");

    bool any = false;
    for (auto v : mask)
        if (v) {
            any = true;
            break;
        }
    if (!any) throw std::invalid_argument("box_count: empty mask");

    std::vector<double> lx, ly;
    std::int64_t prev = -1;
    for (int s : ss) {
        const int gw = (win.width + s - 1) / s;
        const int gh = (win.height + s - 1) / s;
        std::vector<std::uint8_t> grid(static_cast<std::size_t>(gw) * gh, 0);
        for (int iy = 0; iy < win.height; ++iy)
            for (int ix = 0; ix < win.width; ++ix)
                if (mask[static_cast<std::size_t>(iy) * win.width + ix])
                    grid[static_cast<std::size_t>(iy / s) * gw + ix / s] = 1;
        std::int64_t count = 0;
        for (auto v : grid) count += v;
        if (prev >= 0 && count >= prev)
            throw degenerate_fit_error("box_count: counts not decreasing with box size");
        prev = count;
        lx.push_back(std::log(1.0 / s));
        ly.push_back(std::log(static_cast<double>(count)));
    }

    const std::size_t m = lx.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (my + slope * (lx[i] - mx));
        ss_res += r * r;
    }
    const double rms = std::sqrt(ss_res / m);

    DimensionEstimate e;
    e.D = slope;
    e.n = 0;
    e.bracket_lo = slope - rms;
    e.bracket_hi = slope + rms;
    e.residual = rms;
    e.method = DimMethod::box_count;
    return e;
}

inline DimensionEstimate box_count(const RasterClassification& rc, const std::vector<int>& sizes) {
    return box_count(rc.boundary, rc.window, sizes);
}

} // namespace mcdim
