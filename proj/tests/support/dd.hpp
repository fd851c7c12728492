#pragma once

// Minimal double-double arithmetic for the slow test oracles. Only the
// operations the Bessel series needs; ~32 significant digits.

#include <cmath>

namespace testsupport {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD dd_from(double x) { return {x, 0.0}; }

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(const DD& a, const DD& b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    const DD r = two_sum(s.hi, s.lo);
    return r;
}

inline DD dd_mul(const DD& a, const DD& b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    const DD r = two_sum(p.hi, p.lo);
    return r;
}

inline DD dd_mul(const DD& a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    const DD r = two_sum(p.hi, p.lo);
    return r;
}

inline DD dd_div(const DD& a, double b) {
    const double q0 = a.hi / b;
    const DD t = two_prod(q0, b);
    const double r = ((a.hi - t.hi) - t.lo) + a.lo;
    const double q1 = r / b;
    return two_sum(q0, q1);
}

inline DD dd_neg(const DD& a) { return {-a.hi, -a.lo}; }

inline double dd_value(const DD& a) { return a.hi + a.lo; }

}  // namespace testsupport
