#ifndef FEYNHOPF_RATIONAL_HPP
#define FEYNHOPF_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace feynhopf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class ErrorKind { Parse, Semantic, Domain, Limit, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Int factorial(unsigned n)
{
    Int r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

// binom(a, k) for arbitrary integer a (falling-factorial definition),
// so binom(-1, 1) = -1 and binom(n, k) = 0 for 0 <= n < k.
inline Int binom(const Int& a, unsigned k)
{
    Int num = 1;
    for (unsigned i = 0; i < k; ++i) num *= a - i;
    return num / factorial(k);
}

// binom(q, k) with rational q, used for binomial series (1+u)^q.
inline Rat binom(const Rat& q, unsigned k)
{
    Rat num = 1;
    for (unsigned i = 0; i < k; ++i) num *= q - i;
    return num / Rat(factorial(k));
}

std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

} // namespace feynhopf

#endif
