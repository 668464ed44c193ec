#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mcdim/errors.hpp"
#include "mcdim/periodic.hpp"

namespace mcdim {

// Shortest round-trip decimal form of a double.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw io_error("CsvWriter: cannot open " + path);
    }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ",";
            out_ << fields[i];
        }
        out_ << "\n";
    }
    void close() {
        out_.close();
        if (out_.fail()) throw io_error("CsvWriter: write failed");
    }

private:
    std::ofstream out_;
};

inline void write_points_csv(const std::string& path,
                             const std::vector<BoundaryPeriodicPoint>& pts) {
    CsvWriter w(path);
    w.row({"j", "n", "t_num", "t_den", "z_re", "z_im", "mult_re", "mult_im",
           "log_abs_mult", "residual"});
    for (const auto& bp : pts) {
        w.row({std::to_string(bp.angle.j), std::to_string(bp.angle.n),
               std::to_string(bp.angle.j), std::to_string(bp.angle.den),
               fmt_double(bp.z.real()), fmt_double(bp.z.imag()),
               fmt_double(bp.multiplier.real()), fmt_double(bp.multiplier.imag()),
               fmt_double(bp.log_abs_multiplier), fmt_double(bp.residual)});
    }
    w.close();
}

} // namespace mcdim
