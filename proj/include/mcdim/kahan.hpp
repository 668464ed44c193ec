#pragma once

#include <cmath>

namespace mcdim {

// Neumaier-compensated accumulator. The correction also catches the case
// |addend| > |running sum|, which plain Kahan drops.
template <class T = double>
class kahan_sum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    kahan_sum& operator+=(T x) {
        add(x);
        return *this;
    }
    T get() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

} // namespace mcdim
