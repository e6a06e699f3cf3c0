#include "mongelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace mongelab::numerics {

namespace {

// Kronrod abscissae (positive half, descending) and weights; the odd-indexed
// abscissae are the 7-point Gauss nodes.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += wgk[j] * fsum;
        if (j % 2 == 1)
            gauss += wg[j / 2] * fsum;
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol, int max_panels)
{
    QuadResult r;
    if (a == b)
        return {0.0, 0.0, 0, true};
    std::priority_queue<Panel> heap;
    Panel first = gk15(f, a, b);
    heap.push(first);
    double total = first.value;
    double err = first.error;
    int panels = 1;
    while (err > std::max(tol, tol * std::abs(total)) && panels < max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Resum to shed the drift of the running updates.
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    r.value = total;
    r.error = err;
    r.panels = panels;
    r.converged = err <= std::max(tol, tol * std::abs(total));
    return r;
}

double bisect(const std::function<double(double)>& f, double a, double b, double xtol, int max_iter)
{
    double fa = f(a);
    if (fa == 0.0)
        return a;
    double fb = f(b);
    if (fb == 0.0)
        return b;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        if (std::abs(b - a) <= xtol * std::max(1.0, std::abs(m)) || m == a || m == b)
            return m;
        const double fm = f(m);
        if (fm == 0.0)
            return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

std::vector<Bracket> scan_brackets(const std::function<double(double)>& f, double a, double b, int n,
                                   const std::function<void(double)>& on_nonfinite)
{
    std::vector<Bracket> out;
    if (n < 2)
        n = 2;
    double xprev = a;
    double fprev = f(a);
    bool prev_ok = !std::isnan(fprev);
    if (!prev_ok && on_nonfinite)
        on_nonfinite(a);
    if (prev_ok && fprev == 0.0)
        out.push_back({a, a});
    for (int i = 1; i < n; ++i) {
        const double x = (i == n - 1) ? b : a + (b - a) * static_cast<double>(i) / (n - 1);
        const double fx = f(x);
        const bool ok = !std::isnan(fx);
        if (!ok && on_nonfinite)
            on_nonfinite(x);
        if (ok && fx == 0.0)
            out.push_back({x, x});
        else if (ok && prev_ok && fprev != 0.0 && ((fx < 0.0) != (fprev < 0.0)))
            out.push_back({xprev, x});
        xprev = x;
        fprev = fx;
        prev_ok = ok;
    }
    return out;
}

std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b, int n, double xtol,
                               const std::function<void(double)>& on_nonfinite)
{
    std::vector<double> roots;
    for (const auto& br : scan_brackets(f, a, b, n, on_nonfinite))
        roots.push_back(br.lo == br.hi ? br.lo : bisect(f, br.lo, br.hi, xtol));
    std::sort(roots.begin(), roots.end());
    return roots;
}

double d1_central(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double d2_central(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

} // namespace mongelab::numerics
