#pragma once

namespace mcdim {

enum class DimMethod {
    bowen_fixed_n,
    bowen_extrapolated,
    falconer_upper,
    falconer_lower,
    series_prediction,
    box_count,
};

inline const char* to_string(DimMethod m) {
    switch (m) {
        case DimMethod::bowen_fixed_n: return "bowen_fixed_n";
        case DimMethod::bowen_extrapolated: return "bowen_extrapolated";
        case DimMethod::falconer_upper: return "falconer_upper";
        case DimMethod::falconer_lower: return "falconer_lower";
        case DimMethod::series_prediction: return "series_prediction";
        case DimMethod::box_count: return "box_count";
    }
    return "unknown";
}

struct DimensionEstimate {
    double D = 0.0;
    int n = 0; // period used; 0 marks extrapolated / not applicable
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;
    DimMethod method = DimMethod::bowen_fixed_n;
};

} // namespace mcdim
