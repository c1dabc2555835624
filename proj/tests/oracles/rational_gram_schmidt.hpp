#pragma once

// Exact Gram-Schmidt of 1, x, x^2, ... against mu(dx) = x^2 nu(dx) + sigma^2 delta_0,
// for atoms and sigma^2 given as rationals. Produces monic orthogonal polynomials
// and their squared norms; the orthonormal q_i is p_i / sqrt(norm_i).

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct RationalAtom {
    Rational position;
    Rational intensity;
};

struct MonicFamily {
    std::vector<std::vector<Rational>> poly; // ascending coefficients, leading 1
    std::vector<Rational> norm_sq;
};

inline Rational mu_integral(const std::vector<Rational>& p, const std::vector<RationalAtom>& atoms,
                            const Rational& sigma_sq)
{
    Rational total = sigma_sq * (p.empty() ? Rational(0) : p[0]);
    for (const auto& a : atoms) {
        Rational v = 0, xp = 1;
        for (const auto& c : p) {
            v += c * xp;
            xp *= a.position;
        }
        total += a.intensity * a.position * a.position * v;
    }
    return total;
}

inline std::vector<Rational> multiply(const std::vector<Rational>& a, const std::vector<Rational>& b)
{
    std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// Stops at the first polynomial with zero norm (exact degeneracy).
inline MonicFamily monic_orthogonal(const std::vector<RationalAtom>& atoms, const Rational& sigma_sq,
                                    int max_order)
{
    MonicFamily fam;
    for (int d = 0; d < max_order; ++d) {
        std::vector<Rational> p(static_cast<std::size_t>(d) + 1, Rational(0));
        p[d] = 1;
        for (std::size_t j = 0; j < fam.poly.size(); ++j) {
            const Rational proj = mu_integral(multiply(p, fam.poly[j]), atoms, sigma_sq) / fam.norm_sq[j];
            for (std::size_t k = 0; k < fam.poly[j].size(); ++k) p[k] -= proj * fam.poly[j][k];
        }
        const Rational n2 = mu_integral(multiply(p, p), atoms, sigma_sq);
        if (n2 == 0) break;
        fam.poly.push_back(p);
        fam.norm_sq.push_back(n2);
    }
    return fam;
}

} // namespace oracle
