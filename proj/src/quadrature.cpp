#include "ousldp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace ousldp {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Interval {
    double a, b;
    std::complex<double> value;
    double error;
};

struct ByError {
    bool operator()(const Interval& x, const Interval& y) const { return x.error < y.error; }
};

template <class F>
Interval gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const std::complex<double> f0 = f(mid);
    std::complex<double> k = kWgk[7] * f0;
    std::complex<double> g = kWg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const std::complex<double> s = f(mid - dx) + f(mid + dx);
        k += kWgk[i] * s;
        if (i % 2 == 1) g += kWg[i / 2] * s;
    }
    k *= half;
    g *= half;
    return {a, b, k, std::abs(k - g)};
}

template <class F>
QuadratureResult adapt(const F& f, double a, double b, double rel_tol, double abs_tol,
                       int max_intervals) {
    std::priority_queue<Interval, std::vector<Interval>, ByError> heap;
    Interval whole = gk15(f, a, b);
    heap.push(whole);
    std::complex<double> total = whole.value;
    double total_err = whole.error;
    int evals = 15;
    int splits = 1;

    auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };

    while (total_err > target() && splits < max_intervals) {
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted in doubles
            heap.push({worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        const Interval left = gk15(f, worst.a, mid);
        const Interval right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        evals += 30;
        ++splits;
        heap.push(left);
        heap.push(right);
    }

    const bool ok = total_err <= target();
    double wlo = a, whi = b;
    if (!heap.empty()) {
        wlo = heap.top().a;
        whi = heap.top().b;
    }
    return {total, total_err, evals, ok, wlo, whi};
}

}  // namespace

QuadratureResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                   double a, double b, double rel_tol, double abs_tol,
                                   int max_intervals) {
    return adapt(f, a, b, rel_tol, abs_tol, max_intervals);
}

QuadratureResult integrate_real(const std::function<double(double)>& f, double a, double b,
                                double rel_tol, double abs_tol, int max_intervals) {
    auto g = [&f](double x) { return std::complex<double>(f(x), 0.0); };
    return adapt(g, a, b, rel_tol, abs_tol, max_intervals);
}

}  // namespace ousldp
