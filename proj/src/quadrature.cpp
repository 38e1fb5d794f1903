#include "spa/quadrature.hpp"

namespace spa {

namespace {

struct Panel {
    double a, b, fa, fm, fb, whole;
};

double refine(const std::function<double(double)>& fn, const Panel& p, double tol, int depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return refine(fn, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
           refine(fn, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_simpson(const std::function<double(double)>& fn, double a, double b,
                         double abs_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    // Seed with a few panels so that narrow features are not missed by the first estimate.
    constexpr int seed_panels = 8;
    const double h = (b - a) / seed_panels;
    double total = 0.0;
    for (int i = 0; i < seed_panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == seed_panels) ? b : lo + h;
        const double fa = fn(lo);
        const double fb = fn(hi);
        const double fm = fn(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += refine(fn, {lo, hi, fa, fm, fb, whole}, abs_tol / seed_panels, max_depth);
    }
    return total;
}

}  // namespace spa
