#pragma once

#include <span>
#include <vector>

namespace countsel::poly {

// Dense polynomial with coefficients in ascending order: c[0] + c[1] x + ...
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    std::span<const double> coefficients() const { return c_; }
    double operator()(double x) const;
    Polynomial derivative() const;
    // Exact power-of-two rescaling so the largest |coefficient| lies in [1/2, 1).
    Polynomial normalized() const;
    bool is_zero() const { return c_.empty(); }

    // Remainder of this / divisor.
    Polynomial remainder(const Polynomial& divisor) const;

private:
    void trim();
    std::vector<double> c_;
};

// Sturm chain p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).
class SturmSequence {
public:
    explicit SturmSequence(const Polynomial& p);
    int sign_changes(double x) const;
    // Number of distinct real roots in the half-open interval (a, b].
    int count_roots(double a, double b) const { return sign_changes(a) - sign_changes(b); }

private:
    std::vector<Polynomial> chain_;
};

// Distinct real roots in (a, b], ascending. Each root is isolated with the
// Sturm count and then refined by bisection to `tol` in x.
std::vector<double> real_roots(const Polynomial& p, double a, double b, double tol = 1e-15);

}  // namespace countsel::poly
