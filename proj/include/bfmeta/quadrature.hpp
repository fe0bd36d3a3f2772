#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace bfmeta::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule on [-1, 1].
// Index 0 is the centre; the Gauss nodes sit at the odd indices.
inline constexpr std::array<double, 11> kronrod_nodes = {
    0.000000000000000000000000000000000e+00, 1.488743389816312108848260011297200e-01,
    2.943928627014601981311266031038656e-01, 4.333953941292471907992659431657842e-01,
    5.627571346686046833390000992726941e-01, 6.794095682990244062343273651148736e-01,
    7.808177265864168970637175783450424e-01, 8.650633666889845107320966884234930e-01,
    9.301574913557082260012071800595083e-01, 9.739065285171717200779640120844521e-01,
    9.956571630258080807355272806890028e-01};
inline constexpr std::array<double, 11> kronrod_weights = {
    1.494455540029169056649364683898212e-01, 1.477391049013384913748415159720680e-01,
    1.427759385770600807970942731387171e-01, 1.347092173114733259280540017717068e-01,
    1.234919762620658510779581098310742e-01, 1.093871588022976418992105903258050e-01,
    9.312545458369760553506546508336634e-02, 7.503967481091995276704314091619001e-02,
    5.475589657435199603138130024458018e-02, 3.255816230796472747881897245938976e-02,
    1.169463886737187427806439606219205e-02};
inline constexpr std::array<double, 5> gauss_weights = {
    2.955242247147528701738929946513383e-01, 2.692667193099963550912269215694694e-01,
    2.190863625159820439955349342281632e-01, 1.494513491505805931457763396576973e-01,
    6.667134430868813759356880989333179e-02};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kronrod_weights[0];
    double gauss = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double dx = h * kronrod_nodes[i];
        const double fsum = f(c - dx) + f(c + dx);
        kronrod += kronrod_weights[i] * fsum;
        if (i % 2 == 1) gauss += gauss_weights[(i - 1) / 2] * fsum;
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod quadrature over [points.front(), points.back()].
// Interior points are used as initial panel boundaries (kinks, spikes, modes).
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {}) {
    std::vector<double> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Result res;
    if (pts.size() < 2) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::Panel> heap;
    double total = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto p = detail::gk21(f, pts[i], pts[i + 1]);
        res.evaluations += 21;
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!done() && static_cast<int>(heap.size()) < opt.max_intervals) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted at machine precision
        heap.pop();
        auto left = detail::gk21(f, worst.a, mid);
        auto right = detail::gk21(f, mid, worst.b);
        res.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.abs_error = error;
    res.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) ||
                    error <= 64 * std::numeric_limits<double>::epsilon() * std::abs(total);
    return res;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    const std::array<double, 2> pts{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(pts), opt);
}

}  // namespace bfmeta::quad
