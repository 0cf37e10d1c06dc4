#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace sara::reference {

double ref_distance(const Topology& t, Point a, Point b)
{
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    if (t.region.wrap) {
        dx = std::min(dx, t.region.width - dx);
        dy = std::min(dy, t.region.height - dy);
    }
    return std::max(0.1, std::hypot(dx, dy));
}

double ref_sinr(const Topology& t, std::size_t i, const std::vector<bool>& active, const RefChannel& c)
{
    const double signal = c.power * std::pow(ref_distance(t, t.tx[i], t.rx[i]), -c.alpha);
    double interference = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
        if (j != i && active[j])
            interference += c.power * std::pow(ref_distance(t, t.tx[j], t.rx[i]), -c.alpha);
    double denom = interference + c.noise;
    if (denom == 0.0)
        denom = 1e-10;
    return signal / denom;
}

namespace {

template <class F>
void for_each_pattern(const std::vector<double>& phi, F&& f)
{
    const std::size_t n = phi.size();
    std::vector<bool> active(n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            active[j] = (bits >> j) & 1;
            p *= active[j] ? phi[j] : 1.0 - phi[j];
        }
        f(active, p);
    }
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

} // namespace

double ref_expected_successes(const Topology& t, const std::vector<double>& phi, double beta,
                              const RefChannel& c)
{
    double total = 0.0;
    for_each_pattern(phi, [&](const std::vector<bool>& active, double p) {
        for (std::size_t i = 0; i < t.size(); ++i)
            if (active[i] && ref_sinr(t, i, active, c) >= beta)
                total += p;
    });
    return total;
}

double ref_conditional_sinr(const Topology& t, std::size_t i, const std::vector<double>& phi,
                            const RefChannel& c)
{
    double num = 0.0, den = 0.0;
    for_each_pattern(phi, [&](const std::vector<bool>& active, double p) {
        if (!active[i])
            return;
        num += p * ref_sinr(t, i, active, c);
        den += p;
    });
    return num / den;
}

double ref_rho(double alpha)
{
    auto integrate = [](const std::function<double(double)>& f) {
        const double fa = f(0.0), fb = f(1.0), fm = f(0.5);
        return simpson(f, 0.0, 1.0, fa, fm, fb, (fa + 4.0 * fm + fb) / 6.0, 1e-13, 40);
    };
    // [0, 1] directly. On [1, inf) put r = w^(-k) with k = 1 / (alpha - 2),
    // which turns the slowly decaying tail into the bounded integrand
    // 2 pi k / (1 + w^(k alpha)) on [0, 1].
    const double head = integrate([alpha](double r) { return 2.0 * std::numbers::pi * r / (1.0 + std::pow(r, alpha)); });
    const double k = 1.0 / (alpha - 2.0);
    const double tail = integrate([alpha, k](double w) { return 2.0 * std::numbers::pi * k / (1.0 + std::pow(w, k * alpha)); });
    return head + tail;
}

double ref_inverse_sum_mean(const std::vector<double>& a)
{
    // s = u / (1 - u) maps [0, inf) onto [0, 1).
    const std::function<double(double)> f = [&a](double u) {
        if (u >= 1.0)
            return 0.0;
        const double s = u / (1.0 - u);
        double prod = 1.0;
        for (double ak : a)
            prod /= 1.0 + ak * s;
        return prod / ((1.0 - u) * (1.0 - u));
    };
    // The integrand is sharp near u = 1 when the a_k are small; integrate
    // in log-spaced pieces towards 1.
    double total = 0.0, lo = 0.0;
    for (int k = 1; k <= 60; ++k) {
        const double hi = 1.0 - std::pow(0.5, k);
        const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        total += simpson(f, lo, hi, fa, fm, fb, (hi - lo) / 6.0 * (fa + 4.0 * fm + fb), 1e-14, 30);
        lo = hi;
    }
    return total;
}

double central_difference(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

std::uint64_t PropertyRng::next()
{
    // xorshift64*
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
}

double PropertyRng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
}

std::size_t PropertyRng::index(std::size_t n)
{
    return static_cast<std::size_t>(next() % n);
}

Topology line_topology(std::size_t pairs, double spacing, double link, Region region)
{
    Topology t;
    t.region = region;
    t.link_distance = link;
    for (std::size_t k = 0; k < pairs; ++k) {
        const Point tx{10.0 + spacing * static_cast<double>(k), 10.0};
        t.tx.push_back(tx);
        t.rx.push_back({tx.x, tx.y + link});
    }
    return t;
}

} // namespace sara::reference
