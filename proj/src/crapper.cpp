#include "splash/crapper.hpp"

#include "splash/geometry.hpp"

#include <cmath>

namespace splash::crapper {

namespace {

template <typename Pred>
double bisect(Pred&& flipped_at, double lo, double hi, double tol, const char* what)
{
    if (flipped_at(lo) || !flipped_at(hi))
        throw std::runtime_error(std::string(what) + ": predicate does not bracket on the given interval");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (flipped_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double find_splash_parameter(Index n, double lo, double hi, double tol)
{
    return bisect([n](double A) { return geometry::self_intersects(curve(A, n), n); }, lo, hi, tol,
                  "find_splash_parameter");
}

double find_graph_threshold(Index n, double lo, double hi, double tol)
{
    return bisect([n](double A) { return !geometry::is_graph(curve(A, n)); }, lo, hi, tol,
                  "find_graph_threshold");
}

const CriticalConstants& critical_constants()
{
    static const CriticalConstants constants{std::sqrt(2.0) - 1.0, find_splash_parameter()};
    return constants;
}

Index resolution_for(double A)
{
    check_amplitude(A);
    Index n = 64;
    while (n < 8192 && truncation_estimate(A, n) >= 1e-14)
        n *= 2;
    return n;
}

double truncation_estimate(double A, Index n) { return std::pow(std::abs(A), double(n) / 2.0); }

} // namespace splash::crapper
