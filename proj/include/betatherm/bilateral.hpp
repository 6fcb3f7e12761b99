// Two-sided points (y, x): the past y is read y_1 y_2 ... into the past, the
// future x forward. The bilateral shift pushes x_1 onto the past and is a
// bijection with explicit inverse.
#pragma once

#include "betatherm/sequence.hpp"

namespace betatherm {

struct BilateralPair {
    EventuallyPeriodicSeq past;    // y
    EventuallyPeriodicSeq future;  // x

    bool operator==(const BilateralPair&) const = default;
};

inline BilateralPair bilateral_shift(const BilateralPair& p) {
    return {p.past.prepended(p.future.at(0)), p.future.shifted()};
}

inline BilateralPair bilateral_shift_inverse(const BilateralPair& p) {
    return {p.past.shifted(), p.future.prepended(p.past.at(0))};
}

inline BilateralPair bilateral_shift(const BilateralPair& p, std::size_t n) {
    BilateralPair q = p;
    for (std::size_t i = 0; i < n; ++i) q = bilateral_shift(q);
    return q;
}

}  // namespace betatherm
