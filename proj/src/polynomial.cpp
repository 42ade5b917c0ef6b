#include "countsel/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace countsel::poly {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::normalized() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::fabs(v));
    if (m == 0.0) return *this;
    int e = 0;
    std::frexp(m, &e);
    std::vector<double> d(c_);
    for (double& v : d) v = std::ldexp(v, -e);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::remainder(const Polynomial& divisor) const {
    std::vector<double> r(c_);
    const auto& d = divisor.c_;
    const int dd = divisor.degree();
    const double lead = d.back();
    for (int k = static_cast<int>(r.size()) - 1; k >= dd; --k) {
        const double q = r[static_cast<std::size_t>(k)] / lead;
        for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(k - dd + j)] -= q * d[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(k)] = 0.0;
    }
    r.resize(static_cast<std::size_t>(std::max(dd, 0)));
    // Cancellation noise relative to the dividend's scale counts as zero.
    double scale = 0.0;
    for (double v : c_) scale = std::max(scale, std::fabs(v));
    for (double& v : r)
        if (std::fabs(v) <= 1e-12 * scale) v = 0.0;
    return Polynomial(std::move(r));
}

SturmSequence::SturmSequence(const Polynomial& p) {
    chain_.push_back(p.normalized());
    chain_.push_back(p.derivative().normalized());
    while (!chain_.back().is_zero() && chain_.back().degree() > 0) {
        const auto& a = chain_[chain_.size() - 2];
        const auto& b = chain_.back();
        Polynomial r = a.remainder(b);
        if (r.is_zero()) break;
        std::vector<double> neg(r.coefficients().begin(), r.coefficients().end());
        for (double& v : neg) v = -v;
        chain_.push_back(Polynomial(std::move(neg)).normalized());
    }
}

int SturmSequence::sign_changes(double x) const {
    int changes = 0;
    int last = 0;
    for (const auto& p : chain_) {
        if (p.is_zero()) continue;
        const double v = p(x);
        const int sg = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++changes;
        last = sg;
    }
    return changes;
}

namespace {

void isolate(const SturmSequence& sturm, const Polynomial& p, double a, double b, double tol,
             std::vector<double>& out) {
    const int count = sturm.count_roots(a, b);
    if (count == 0) return;
    if (count == 1 || b - a <= tol) {
        // Single root in (a, b]: bisect on the sign of p, falling back to the
        // Sturm count when p does not change sign (even multiplicity).
        double lo = a;
        double hi = b;
        const double plo = p(lo);
        if (p(hi) == 0.0) {
            out.push_back(hi);
            return;
        }
        const bool sign_bracket = (plo < 0.0) != (p(hi) < 0.0) && plo != 0.0;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (sign_bracket) {
                const double pm = p(mid);
                if (pm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((pm < 0.0) == (plo < 0.0)) lo = mid; else hi = mid;
            } else {
                if (sturm.count_roots(lo, mid) > 0) hi = mid; else lo = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
        return;
    }
    const double mid = 0.5 * (a + b);
    isolate(sturm, p, a, mid, tol, out);
    isolate(sturm, p, mid, b, tol, out);
}

}  // namespace

std::vector<double> real_roots(const Polynomial& p, double a, double b, double tol) {
    std::vector<double> out;
    if (p.degree() < 1) return out;
    const Polynomial pn = p.normalized();
    const SturmSequence sturm(pn);
    isolate(sturm, pn, a, b, tol, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace countsel::poly
