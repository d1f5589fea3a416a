#include "imagearc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

// Kronrod abscissae/weights and the embedded 7-point Gauss weights
// (QUADPACK qk15, Fullerton 1981).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    QuadResult r;
    int depth;
    bool operator<(const Panel& o) const { return r.error_bound < o.r.error_bound; }
};

QuadResult integrate_regular(const std::function<double(double)>& f, double a, double b, const QuadConfig& q) {
    std::priority_queue<Panel> queue;
    const QuadResult first = gauss_kronrod15(f, a, b);
    queue.push({a, b, first, 0});
    double total = first.value;
    double error = first.error_bound;
    std::size_t panels = 1;
    constexpr std::size_t kMaxPanels = 200000;

    while (error > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
        Panel worst = queue.top();
        if (worst.depth >= q.max_depth || panels >= kMaxPanels) {
            throw PrecisionError("adaptive quadrature did not converge within max_depth", total, error);
        }
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw PrecisionError("adaptive quadrature exhausted floating-point resolution", total, error);
        }
        const QuadResult left = gauss_kronrod15(f, worst.a, mid);
        const QuadResult right = gauss_kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.r.value;
        error += left.error_bound + right.error_bound - worst.r.error_bound;
        queue.push({worst.a, mid, left, worst.depth + 1});
        queue.push({mid, worst.b, right, worst.depth + 1});
        ++panels;
    }
    // Resum in a fixed order so the result does not depend on update history.
    std::vector<Panel> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadResult out;
    for (const Panel& p : all) {
        out.value += p.r.value;
        out.error_bound += p.r.error_bound;
    }
    return out;
}

// x = a + (b-a) u^2 removes an integrable x^{-1/2}-type singularity at a.
QuadResult integrate_singular_lower(const std::function<double(double)>& f, double a, double b,
                                    const QuadConfig& q) {
    const double h = b - a;
    return integrate_regular([&](double u) { return f(a + h * u * u) * 2.0 * h * u; }, 0.0, 1.0, q);
}

QuadResult integrate_singular_upper(const std::function<double(double)>& f, double a, double b,
                                    const QuadConfig& q) {
    const double h = b - a;
    return integrate_regular([&](double u) { return f(b - h * u * u) * 2.0 * h * u; }, 0.0, 1.0, q);
}

QuadResult integrate_piece(const std::function<double(double)>& f, double a, double b, bool sing_a, bool sing_b,
                           const QuadConfig& q) {
    if (sing_a && sing_b) {
        const double mid = 0.5 * (a + b);
        const QuadResult l = integrate_singular_lower(f, a, mid, q);
        const QuadResult r = integrate_singular_upper(f, mid, b, q);
        return {l.value + r.value, l.error_bound + r.error_bound};
    }
    if (sing_a) return integrate_singular_lower(f, a, b, q);
    if (sing_b) return integrate_singular_upper(f, a, b, q);
    return integrate_regular(f, a, b, q);
}

}  // namespace

void QuadConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConstructionError("quadrature tolerances must be positive");
    if (max_depth < 1) throw ConstructionError("quadrature max_depth must be at least 1");
}

QuadResult gauss_kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

    const double result = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {result, err};
}

QuadResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, const QuadConfig& q,
                              const Singularities& singular) {
    q.validate();
    if (!(a < b)) throw ConstructionError("integration interval must satisfy a < b");
    std::vector<double> cuts{a};
    for (const double x : singular.interior) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    QuadResult total;
    const std::size_t pieces = cuts.size() - 1;
    for (std::size_t i = 0; i < pieces; ++i) {
        const bool sing_a = i > 0 || singular.at_lower;
        const bool sing_b = i + 1 < pieces || singular.at_upper;
        // Share the absolute budget across pieces.
        QuadConfig piece_cfg = q;
        piece_cfg.abs_tol = q.abs_tol / static_cast<double>(pieces);
        const QuadResult r = integrate_piece(f, cuts[i], cuts[i + 1], sing_a, sing_b, piece_cfg);
        total.value += r.value;
        total.error_bound += r.error_bound;
    }
    return total;
}

}  // namespace imagearc
