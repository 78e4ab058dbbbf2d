#ifndef FEYNHOPF_SERIES_HPP
#define FEYNHOPF_SERIES_HPP

#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

// Loop-graded formal series truncated at a fixed order, generic over the
// coefficient ring (algebra elements, Laurent series). Inversion and
// rational powers need a unit degree-zero part.
template <class Coeff>
class GradedSeries {
public:
    GradedSeries(int max_degree, const Coeff& zero) : c_(static_cast<std::size_t>(max_degree) + 1, zero) {}

    int max_degree() const { return static_cast<int>(c_.size()) - 1; }
    const Coeff& at(int n) const { return c_.at(n); }
    Coeff& at(int n) { return c_.at(n); }

    GradedSeries& operator+=(const GradedSeries& o)
    {
        check_shape(o);
        for (int n = 0; n <= max_degree(); ++n) c_[n] += o.c_[n];
        return *this;
    }
    GradedSeries& operator-=(const GradedSeries& o)
    {
        check_shape(o);
        for (int n = 0; n <= max_degree(); ++n) c_[n] -= o.c_[n];
        return *this;
    }
    friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
    friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }

    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b)
    {
        a.check_shape(b);
        GradedSeries out(a.max_degree(), a.zero());
        for (int i = 0; i <= a.max_degree(); ++i)
            for (int j = 0; i + j <= a.max_degree(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        return out;
    }

    friend bool operator==(const GradedSeries&, const GradedSeries&) = default;

    bool has_unit_head(const Coeff& unit) const { return c_[0] == unit; }

    // degreewise-exact inverse of a series with unit head
    GradedSeries inverse(const Coeff& unit) const
    {
        require_unit_head(unit);
        GradedSeries out(max_degree(), zero());
        out.c_[0] = unit;
        for (int n = 1; n <= max_degree(); ++n) {
            Coeff acc = zero();
            for (int k = 1; k <= n; ++k) acc += c_[k] * out.c_[n - k];
            out.c_[n] -= acc;
        }
        return out;
    }

    // binomial series (1 + u)^q with u the positive-degree part
    GradedSeries pow(const Rat& q, const Coeff& unit) const
    {
        require_unit_head(unit);
        GradedSeries u = *this;
        u.c_[0] -= unit;
        GradedSeries out(max_degree(), zero());
        out.c_[0] = unit;
        GradedSeries upow(max_degree(), zero());
        upow.c_[0] = unit;
        for (int k = 1; k <= max_degree(); ++k) {
            upow = upow * u;
            Rat coeff = binom(q, static_cast<unsigned>(k));
            if (coeff == 0) continue;
            for (int n = 0; n <= max_degree(); ++n) out.c_[n] += upow.c_[n] * coeff;
        }
        return out;
    }

private:
    Coeff zero() const
    {
        Coeff z = c_[0];
        z -= c_[0];
        return z;
    }
    void check_shape(const GradedSeries& o) const
    {
        if (o.max_degree() != max_degree()) throw Error(ErrorKind::Domain, "graded series truncation mismatch");
    }
    void require_unit_head(const Coeff& unit) const
    {
        if (!has_unit_head(unit)) throw Error(ErrorKind::Domain, "series has a non-unit constant term");
    }

    std::vector<Coeff> c_;
};

} // namespace feynhopf

#endif
