#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace dinv {

/// Canonical element (n1,...,nk) of S(n): a nondecreasing tuple of integers
/// in [2, n-1] with n1+...+nk <= n. The empty tuple is allowed.
struct TupleSpec {
    int n = 0;
    std::vector<int> parts;  // nondecreasing

    int k() const { return static_cast<int>(parts.size()); }
    int sum() const;
    bool empty() const { return parts.empty(); }
    bool valid() const;
    std::string to_string() const;  // "()", "(2)", "(2,3)"

    bool operator==(const TupleSpec& other) const = default;
};

/// Enumeration order: by k, then lexicographically on the parts.
bool tuple_less(const TupleSpec& a, const TupleSpec& b);

struct TupleLess {
    bool operator()(const TupleSpec& a, const TupleSpec& b) const { return tuple_less(a, b); }
};

/// All canonical tuples of S(n), ordered by k then lexicographically.
std::vector<TupleSpec> enumerate_tuples(int n);

/// #S(n) = p(n) - 1, exact (pentagonal-number recurrence).
mpz_class cardinality(int n);

/// (1 / (4 n sqrt(3))) * exp(pi * sqrt(2n/3))
double asymptotic_cardinality(int n);

/// n (n+1) (3n+11) / 2
long long nash_dimension(long long n);

}  // namespace dinv
