#include "entropometer/numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "entropometer/error.hpp"

namespace entropometer::numerics {

double solve_bracketed_newton(const std::function<ValueSlope(double)>& fn, Bracket bracket,
                              double rel_step, int max_iterations) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    ValueSlope at_lo = fn(lo);
    ValueSlope at_hi = fn(hi);
    if (at_lo.value == 0.0) return lo;
    if (at_hi.value == 0.0) return hi;
    if ((at_lo.value > 0.0) == (at_hi.value > 0.0)) {
        throw ConvergenceError("root not bracketed");
    }
    const bool lo_positive = at_lo.value > 0.0;

    // Start from the endpoint with the smaller residual.
    double x = std::abs(at_lo.value) < std::abs(at_hi.value) ? lo : hi;
    ValueSlope fx = x == lo ? at_lo : at_hi;
    double previous_step = hi - lo;

    for (int iter = 0; iter < max_iterations; ++iter) {
        double next = std::numeric_limits<double>::quiet_NaN();
        if (fx.slope != 0.0 && std::isfinite(fx.slope)) {
            next = x - fx.value / fx.slope;
        }
        const bool newton_ok = std::isfinite(next) && next > lo && next < hi &&
                               std::abs(next - x) < 0.5 * std::abs(previous_step);
        if (!newton_ok) {
            if (lo > 0.0 && hi > 4.0 * lo) {
                next = std::sqrt(lo) * std::sqrt(hi);
            } else {
                next = lo + 0.5 * (hi - lo);
            }
        }
        previous_step = next - x;
        if (next <= lo || next >= hi) {
            // Bracket has collapsed to adjacent doubles.
            return std::abs(at_lo.value) < std::abs(at_hi.value) ? lo : hi;
        }
        x = next;
        fx = fn(x);
        if (fx.value == 0.0) return x;
        if ((fx.value > 0.0) == lo_positive) {
            lo = x;
            at_lo = fx;
        } else {
            hi = x;
            at_hi = fx;
        }
        if (newton_ok && std::abs(previous_step) <= rel_step * std::abs(x)) return x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            return std::abs(at_lo.value) < std::abs(at_hi.value) ? lo : hi;
        }
    }
    throw ConvergenceError("bracketed Newton did not converge");
}

Bracket bracket_decreasing_positive(const std::function<double(double)>& fn, double start) {
    constexpr double kTiny = 1e-300;
    constexpr double kHuge = 1e300;
    double lo = start;
    double hi = start;
    while (fn(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kHuge) throw ConvergenceError("no sign change below upper search limit");
    }
    while (fn(lo) < 0.0) {
        hi = lo;
        lo *= 0.5;
        if (lo < kTiny) throw ConvergenceError("no sign change above lower search limit");
    }
    return {lo, hi};
}

namespace {

struct Panel {
    double a, m, b;
    double fa, fm, fb;
    double whole;
    double tol;
    int depth;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, std::size_t max_subintervals) {
    QuadratureResult result;
    if (a == b) return result;
    const double sign = b > a ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);

    constexpr int kMaxDepth = 60;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    std::vector<Panel> stack{{a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb), abs_tol, 0}};

    double total = 0.0;
    double error = 0.0;
    std::size_t panels = 1;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double lm = 0.5 * (p.a + p.m);
        const double rm = 0.5 * (p.m + p.b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
        const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
        const double delta = left + right - p.whole;
        if (std::abs(delta) <= 15.0 * p.tol || p.depth >= kMaxDepth || lm <= p.a || rm >= p.b) {
            total += left + right + delta / 15.0;
            error += std::abs(delta) / 15.0;
            continue;
        }
        if (++panels > max_subintervals) {
            throw ConvergenceError("adaptive Simpson exceeded " + std::to_string(max_subintervals) +
                                   " subintervals");
        }
        stack.push_back({p.m, rm, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
        stack.push_back({p.a, lm, p.m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
    }
    result.value = sign * total;
    result.error_estimate = error;
    result.subintervals = panels;
    return result;
}

}  // namespace entropometer::numerics
