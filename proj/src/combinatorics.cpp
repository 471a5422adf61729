#include "dinv/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dinv {

int TupleSpec::sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }

bool TupleSpec::valid() const {
    if (n < 2) return false;
    if (!std::is_sorted(parts.begin(), parts.end())) return false;
    for (int p : parts)
        if (p < 2 || p > n - 1) return false;
    return sum() <= n;
}

std::string TupleSpec::to_string() const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) os << ',';
        os << parts[i];
    }
    os << ')';
    return os.str();
}

bool tuple_less(const TupleSpec& a, const TupleSpec& b) {
    if (a.parts.size() != b.parts.size()) return a.parts.size() < b.parts.size();
    return a.parts < b.parts;
}

namespace {

void collect_tuples(int n, int min_part, int remaining, std::vector<int>& cur,
                    std::vector<TupleSpec>& out) {
    out.push_back(TupleSpec{n, cur});
    for (int p = min_part; p <= n - 1 && p <= remaining; ++p) {
        cur.push_back(p);
        collect_tuples(n, p, remaining - p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<TupleSpec> enumerate_tuples(int n) {
    if (n < 2) throw std::invalid_argument("enumerate_tuples: n must be >= 2");
    std::vector<TupleSpec> out;
    std::vector<int> cur;
    collect_tuples(n, 2, n, cur, out);
    std::sort(out.begin(), out.end(), tuple_less);
    return out;
}

mpz_class cardinality(int n) {
    if (n < 2) throw std::invalid_argument("cardinality: n must be >= 2");
    // Euler's pentagonal recurrence: p(m) = sum_j (-1)^{j+1} [p(m - j(3j-1)/2) + p(m - j(3j+1)/2)]
    std::vector<mpz_class> p(static_cast<size_t>(n) + 1);
    p[0] = 1;
    for (int m = 1; m <= n; ++m) {
        mpz_class acc = 0;
        for (int j = 1;; ++j) {
            long g1 = static_cast<long>(j) * (3L * j - 1) / 2;
            long g2 = static_cast<long>(j) * (3L * j + 1) / 2;
            if (g1 > m) break;
            if (j % 2 == 1) {
                acc += p[m - g1];
                if (g2 <= m) acc += p[m - g2];
            } else {
                acc -= p[m - g1];
                if (g2 <= m) acc -= p[m - g2];
            }
        }
        p[m] = acc;
    }
    return p[n] - 1;
}

double asymptotic_cardinality(int n) {
    if (n < 2) throw std::invalid_argument("asymptotic_cardinality: n must be >= 2");
    const double pi = 3.14159265358979323846;
    return std::exp(pi * std::sqrt(2.0 * n / 3.0)) / (4.0 * n * std::sqrt(3.0));
}

long long nash_dimension(long long n) {
    if (n < 1) throw std::invalid_argument("nash_dimension: n must be >= 1");
    return n * (n + 1) * (3 * n + 11) / 2;
}

}  // namespace dinv
