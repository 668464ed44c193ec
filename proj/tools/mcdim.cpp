// Command-line front end: dim, predict, verify, sweep, render, boxcount.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric-regime error,
// 4 I/O error (verify exits 1 when a check fails).

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mcdim/bowen.hpp"
#include "mcdim/csv.hpp"
#include "mcdim/raster.hpp"
#include "mcdim/series.hpp"
#include "mcdim/verify.hpp"

namespace {

using mcdim::complexd;

// Accepted forms: "a", "bi", "a+bi", "a-bi", "i", "-i". Exponents in either
// part are fine ("1e-3+2.5e-4i").
complexd parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty complex literal");

    auto parse_real = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("bad numeric literal: " + t);
        return v;
    };

    if (s.back() != 'i') return {parse_real(s), 0.0};

    s.pop_back(); // strip the trailing i
    // split at the last top-level +/- (not an exponent sign)
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        const char c = s[k];
        if ((c == '+' || c == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, parse_real(s)};
    return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto pos = s.find("..");
    int lo, hi;
    try {
        if (pos == std::string::npos) {
            lo = hi = std::stoi(s);
        } else {
            lo = std::stoi(s.substr(0, pos));
            hi = std::stoi(s.substr(pos + 2));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad period range: " + s);
    }
    if (lo < 1 || hi < lo) throw std::invalid_argument("bad period range: " + s);
    return {lo, hi};
}

mcdim::Window parse_window(const std::string& s, int w, int h) {
    mcdim::Window win;
    win.width = w;
    win.height = h;
    if (!s.empty()) {
        double v[4];
        std::size_t pos = 0;
        for (int i = 0; i < 4; ++i) {
            const auto comma = s.find(',', pos);
            const std::string tok =
                comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
            if (tok.empty()) throw std::invalid_argument("bad window: " + s);
            v[i] = std::stod(tok);
            if (i < 3) {
                if (comma == std::string::npos) throw std::invalid_argument("bad window: " + s);
                pos = comma + 1;
            }
        }
        win.x_min = v[0];
        win.x_max = v[1];
        win.y_min = v[2];
        win.y_max = v[3];
    }
    win.validate();
    return win;
}

std::pair<int, int> parse_resolution(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) {
        const int r = std::stoi(s);
        return {r, r};
    }
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

std::vector<int> parse_scales(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const std::string tok =
            comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty scale list");
    return out;
}

struct DimArgs {
    int Q = 3;
    std::string p = "0";
    std::string n = "4..10";
    double tol = 1e-12;
    int workers = 0;
    std::string out;
};

int cmd_dim(const DimArgs& a) {
    const mcdim::McMullenMap map(a.Q, parse_complex(a.p));
    const auto [n_lo, n_hi] = parse_range(a.n);
    mcdim::BowenOptions opt;
    opt.workers = a.workers;
    opt.enumerate.workers = a.workers;

    std::vector<mcdim::BowenSweepRow> rows;
    mcdim::DimensionEstimate est;
    if (n_lo == n_hi) {
        est = mcdim::solve_bowen(map, n_lo, a.tol, opt);
        rows.push_back({n_lo, est.D, est.residual});
        std::printf("n=%d D=%s residual=%s bracket=[%s,%s]\n", n_lo,
                    mcdim::fmt_double(est.D).c_str(), mcdim::fmt_double(est.residual).c_str(),
                    mcdim::fmt_double(est.bracket_lo).c_str(),
                    mcdim::fmt_double(est.bracket_hi).c_str());
    } else {
        est = mcdim::solve_bowen_extrapolated(map, n_lo, n_hi, a.tol, opt, &rows);
        for (const auto& r : rows)
            std::printf("n=%d D=%s residual=%s\n", r.n, mcdim::fmt_double(r.D).c_str(),
                        mcdim::fmt_double(r.residual).c_str());
        std::printf("D_extrapolated = %s\n", mcdim::fmt_double(est.D).c_str());
        std::printf("fit_residual = %s\n", mcdim::fmt_double(est.residual).c_str());
    }

    const auto pred = mcdim::predict_dimension(a.Q, map.p);
    std::printf("D_predicted = %s\n", mcdim::fmt_double(pred.D).c_str());
    std::printf("|D - predicted| = %s\n", mcdim::fmt_double(std::abs(est.D - pred.D)).c_str());

    if (!a.out.empty()) {
        mcdim::CsvWriter w(a.out);
        w.row({"n", "D_n", "residual"});
        for (const auto& r : rows)
            w.row({std::to_string(r.n), mcdim::fmt_double(r.D), mcdim::fmt_double(r.residual)});
        w.close();
    }
    return 0;
}

struct PredictArgs {
    int Q = 3;
    std::string p = "0";
};

int cmd_predict(const PredictArgs& a) {
    const auto est = mcdim::predict_dimension(a.Q, parse_complex(a.p));
    std::printf("D = %.7f\n", est.D);
    std::printf("D_full = %s\n", mcdim::fmt_double(est.D).c_str());
    return 0;
}

struct VerifyArgs {
    int Q = 3;
    int trunc = 40;
    int bound_trunc = 40;
    int n = 6;
    int samples = 100;
    int workers = 0;
};

int cmd_verify(const VerifyArgs& a) {
    mcdim::VerifyOptions o;
    o.Q = a.Q;
    o.trunc = a.trunc;
    o.bound_trunc = a.bound_trunc;
    o.n = a.n;
    o.samples = a.samples;
    o.workers = a.workers;
    const auto results = mcdim::run_identity_suite(o);
    bool all = true;
    for (const auto& r : results) {
        std::printf("CHECK %s %s %.6g %.6g\n", r.name.c_str(), r.pass ? "pass" : "fail",
                    r.measured, r.bound);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

struct SweepArgs {
    int Q = 3;
    std::vector<std::string> p;
    std::string n = "6..12";
    double tol = 1e-12;
    int workers = 0;
    std::string out;
    int boxcount_res = 0; // 0 = skip the raster column
};

int cmd_sweep(const SweepArgs& a) {
    if (a.p.empty()) throw std::invalid_argument("sweep: need at least one --p");
    const auto [n_lo, n_hi] = parse_range(a.n);

    struct Row {
        complexd p;
        double D_bowen, D_pred, D_box, fit_residual;
        bool has_box;
    };
    std::vector<Row> rows;

    for (const auto& ps : a.p) {
        const complexd p = parse_complex(ps);
        const mcdim::McMullenMap map(a.Q, p);
        mcdim::BowenOptions opt;
        opt.workers = a.workers;
        opt.enumerate.workers = a.workers;
        const auto est = mcdim::solve_bowen_extrapolated(map, n_lo, n_hi, a.tol, opt);
        const auto pred = mcdim::predict_dimension(a.Q, p);
        Row row{p, est.D, pred.D, 0.0, est.residual, false};
        if (a.boxcount_res > 0) {
            mcdim::Window win;
            win.width = win.height = a.boxcount_res;
            const auto rc = mcdim::render(map, win, 0, 4.0, a.workers);
            row.D_box = mcdim::box_count(rc, {4, 8, 16, 32, 64}).D;
            row.has_box = true;
        }
        rows.push_back(row);
        std::printf("p=%s D_bowen=%s D_predicted=%s fit_residual=%s\n", ps.c_str(),
                    mcdim::fmt_double(row.D_bowen).c_str(), mcdim::fmt_double(row.D_pred).c_str(),
                    mcdim::fmt_double(row.fit_residual).c_str());
    }

    // least squares of (D - 1) = a |p|^2 on the normalized observations
    // (D - 1)/|p|^2: equal weight per sample keeps the small-|p| points from
    // being swamped by the quartic tail of the large ones
    mcdim::kahan_sum<double> acc;
    int used = 0;
    for (const auto& r : rows) {
        const double x = std::norm(r.p);
        if (x > 0.0) {
            acc += (r.D_bowen - 1.0) / x;
            ++used;
        }
    }
    if (used > 0) {
        const double afit = acc.get() / used;
        const double target = 1.0 / std::log(static_cast<double>(a.Q));
        std::printf("a_fit = %s\n", mcdim::fmt_double(afit).c_str());
        std::printf("target_1_over_logQ = %s\n", mcdim::fmt_double(target).c_str());
        std::printf("relative_error = %s\n", mcdim::fmt_double(afit / target - 1.0).c_str());
    }

    if (!a.out.empty()) {
        mcdim::CsvWriter w(a.out);
        w.row({"p_re", "p_im", "Q", "n_max", "D_bowen", "D_predicted", "D_boxcount",
               "fit_residual"});
        for (const auto& r : rows)
            w.row({mcdim::fmt_double(r.p.real()), mcdim::fmt_double(r.p.imag()),
                   std::to_string(a.Q), std::to_string(n_hi), mcdim::fmt_double(r.D_bowen),
                   mcdim::fmt_double(r.D_pred), r.has_box ? mcdim::fmt_double(r.D_box) : "",
                   mcdim::fmt_double(r.fit_residual)});
        w.close();
    }
    return 0;
}

struct RenderArgs {
    int Q = 3;
    std::string p = "0.005";
    std::string res = "800";
    std::string window;
    int max_iter = 0;
    double radius = 4.0;
    int workers = 0;
    std::string out = "render.ppm";
    std::string mask_out;
};

int cmd_render(const RenderArgs& a) {
    const mcdim::McMullenMap map(a.Q, parse_complex(a.p));
    const auto [w, h] = parse_resolution(a.res);
    const mcdim::Window win = parse_window(a.window, w, h);
    const auto rc = mcdim::render(map, win, a.max_iter, a.radius, a.workers);
    mcdim::write_ppm(rc, a.out);
    if (!a.mask_out.empty()) mcdim::write_mask_rle(rc, a.mask_out);

    std::int64_t bounded = 0;
    for (auto s : rc.status)
        if (s != mcdim::PixelStatus::escaped) ++bounded;
    bool borders = true;
    for (int ix = 0; ix < win.width && borders; ++ix)
        borders = rc.infinity[rc.idx(ix, 0)] || rc.infinity[rc.idx(ix, win.height - 1)];
    std::printf("image = %s\n", a.out.c_str());
    std::printf("resolution = %dx%d\n", win.width, win.height);
    std::printf("max_iter = %d\n", rc.max_iter);
    std::printf("non_escaped_pixels = %lld\n", static_cast<long long>(bounded));
    std::printf("boundary_pixels = %lld\n", static_cast<long long>(rc.count_boundary()));
    return 0;
}

struct BoxcountArgs {
    int Q = 3;
    std::string p = "0.05";
    std::string res = "4096";
    std::string window;
    int max_iter = 0;
    double radius = 4.0;
    std::string scales = "4,8,16,32,64";
    int workers = 0;
};

int cmd_boxcount(const BoxcountArgs& a) {
    const mcdim::McMullenMap map(a.Q, parse_complex(a.p));
    const auto [w, h] = parse_resolution(a.res);
    const mcdim::Window win = parse_window(a.window, w, h);
    const auto rc = mcdim::render(map, win, a.max_iter, a.radius, a.workers);
    const auto est = mcdim::box_count(rc, parse_scales(a.scales));
    std::printf("boundary_pixels = %lld\n", static_cast<long long>(rc.count_boundary()));
    std::printf("D_boxcount = %s\n", mcdim::fmt_double(est.D).c_str());
    std::printf("fit_residual = %s\n", mcdim::fmt_double(est.residual).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff dimension toolkit for the outer Julia boundary of z^Q + p/z^Q"};
    app.require_subcommand(1);

    DimArgs dim_args;
    auto* dim = app.add_subcommand("dim", "Solve the periodic-point pressure equation for D");
    dim->add_option("--Q", dim_args.Q, "degree parameter (>= 3)");
    dim->add_option("--p", dim_args.p, "perturbation, e.g. 0.05 or 0.02+0.01i");
    dim->add_option("--n", dim_args.n, "period or range lo..hi");
    dim->add_option("--tol", dim_args.tol, "root tolerance");
    dim->add_option("--workers", dim_args.workers, "worker threads (0 = auto)");
    dim->add_option("--out", dim_args.out, "CSV of (n, D_n, residual)");

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Second-order closed-form prediction");
    predict->add_option("--Q", predict_args.Q, "degree parameter");
    predict->add_option("--p", predict_args.p, "perturbation");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run the identity suite");
    verify->add_option("--Q", verify_args.Q, "degree parameter");
    verify->add_option("--trunc", verify_args.trunc, "series truncation depth used");
    verify->add_option("--bound-trunc", verify_args.bound_trunc,
                       "depth anchoring the residual thresholds");
    verify->add_option("--n", verify_args.n, "period for average checks");
    verify->add_option("--samples", verify_args.samples, "sample count for functional equations");
    verify->add_option("--workers", verify_args.workers, "worker threads (0 = auto)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Dimension sweep over p with coefficient fit");
    sweep->add_option("--Q", sweep_args.Q, "degree parameter");
    sweep->add_option("--p", sweep_args.p, "perturbation (repeatable)");
    sweep->add_option("--n", sweep_args.n, "period range lo..hi");
    sweep->add_option("--tol", sweep_args.tol, "root tolerance");
    sweep->add_option("--workers", sweep_args.workers, "worker threads (0 = auto)");
    sweep->add_option("--out", sweep_args.out, "CSV output path");
    sweep->add_option("--boxcount-res", sweep_args.boxcount_res,
                      "also box-count at this resolution (0 = skip)");

    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "Escape-time raster and boundary mask");
    render->add_option("--Q", render_args.Q, "degree parameter");
    render->add_option("--p", render_args.p, "perturbation");
    render->add_option("--res", render_args.res, "resolution, N or WxH");
    render->add_option("--window", render_args.window, "x_min,x_max,y_min,y_max");
    render->add_option("--max-iter", render_args.max_iter, "iteration cap (0 = auto)");
    render->add_option("--radius", render_args.radius, "escape radius");
    render->add_option("--workers", render_args.workers, "worker threads (0 = auto)");
    render->add_option("--out", render_args.out, "P6 pixmap path");
    render->add_option("--mask-out", render_args.mask_out, "boundary mask RLE path");

    BoxcountArgs box_args;
    auto* boxcount = app.add_subcommand("boxcount", "Box-counting dimension of the boundary mask");
    boxcount->add_option("--Q", box_args.Q, "degree parameter");
    boxcount->add_option("--p", box_args.p, "perturbation");
    boxcount->add_option("--res", box_args.res, "resolution, N or WxH");
    boxcount->add_option("--window", box_args.window, "x_min,x_max,y_min,y_max");
    boxcount->add_option("--max-iter", box_args.max_iter, "iteration cap (0 = auto)");
    boxcount->add_option("--radius", box_args.radius, "escape radius");
    boxcount->add_option("--scales", box_args.scales, "comma-separated box sizes in pixels");
    boxcount->add_option("--workers", box_args.workers, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dim->parsed()) return cmd_dim(dim_args);
        if (predict->parsed()) return cmd_predict(predict_args);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (render->parsed()) return cmd_render(render_args);
        if (boxcount->parsed()) return cmd_boxcount(box_args);
        return 2;
    } catch (const mcdim::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const mcdim::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
