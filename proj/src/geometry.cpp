#include "splash/geometry.hpp"

#include "splash/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace splash::geometry {

namespace {

using Complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

CVectorX<double> tangent_samples(const Curve& c)
{
    if (c.has_tangent())
        return c.tangent;
    CVectorX<double> d1, d2;
    Interpolant::grid_derivatives(c, d1, d2);
    return d1;
}

/// Golden-section minimization of f on [a, b].
template <typename F>
double golden_min(F&& f, double a, double b, double tol, double* fmin = nullptr)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    const double x = 0.5 * (a + b);
    if (fmin)
        *fmin = f(x);
    return x;
}

/// Squared distance between segments [p0, p1] and [q0, q1] (no intersection case).
double point_segment_dist2(Complex p, Complex a, Complex b, double* tpar = nullptr)
{
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
    if (tpar)
        *tpar = t;
    return std::norm(p - (a + t * ab));
}

struct SegmentHit {
    bool proper = false;
    double dist = std::numeric_limits<double>::infinity();
    double s = 0.5; // local parameter on the first segment
    double u = 0.5; // local parameter on the second segment
};

SegmentHit segment_test(Complex p0, Complex p1, Complex q0, Complex q1)
{
    SegmentHit hit;
    const Complex r = p1 - p0, s = q1 - q0;
    const double denom = cross(r, s);
    if (denom != 0.0) {
        const double t = cross(q0 - p0, s) / denom;
        const double u = cross(q0 - p0, r) / denom;
        if (t >= 0 && t < 1 && u >= 0 && u < 1) {
            hit.proper = true;
            hit.dist = 0;
            hit.s = t;
            hit.u = u;
            return hit;
        }
    }
    double tp;
    double d = point_segment_dist2(p0, q0, q1, &tp);
    hit.s = 0, hit.u = tp;
    double d2 = point_segment_dist2(p1, q0, q1, &tp);
    if (d2 < d) {
        d = d2;
        hit.s = 1, hit.u = tp;
    }
    d2 = point_segment_dist2(q0, p0, p1, &tp);
    if (d2 < d) {
        d = d2;
        hit.s = tp, hit.u = 0;
    }
    d2 = point_segment_dist2(q1, p0, p1, &tp);
    if (d2 < d) {
        d = d2;
        hit.s = tp, hit.u = 1;
    }
    hit.dist = std::sqrt(d);
    return hit;
}

/// Newton on z(a) - z(b) - offset = 0 within a trust region around the seed.
bool refine_crossing(const Interpolant& interp, double a0, double b0, Complex offset, double cell, double& a,
                     double& b, double& residual)
{
    a = a0;
    b = b0;
    for (int it = 0; it < 40; ++it) {
        Complex za, da, dda, zb, db, ddb;
        interp.evaluate(a, za, da, dda);
        interp.evaluate(b, zb, db, ddb);
        const Complex F = za - zb - offset;
        residual = std::abs(F);
        if (residual < 1e-13 * (1.0 + std::abs(za)))
            return true;
        // [Re da, -Re db; Im da, -Im db] [dA; dB] = -F
        const double j11 = da.real(), j12 = -db.real(), j21 = da.imag(), j22 = -db.imag();
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det))
            return false;
        double stepA = (-F.real() * j22 + F.imag() * j12) / det;
        double stepB = (-j11 * F.imag() + j21 * F.real()) / det;
        const double len = std::max(std::abs(stepA), std::abs(stepB));
        if (len > cell) {
            stepA *= cell / len;
            stepB *= cell / len;
        }
        a += stepA;
        b += stepB;
        if (std::abs(a - a0) > 4 * cell || std::abs(b - b0) > 4 * cell)
            return false;
    }
    Complex za = interp(a), zb = interp(b);
    residual = std::abs(za - zb - offset);
    return residual < 1e-11 * (1.0 + std::abs(za));
}

} // namespace

const char* to_string(CurveClass c)
{
    switch (c) {
    case CurveClass::graph:
        return "graph";
    case CurveClass::simple:
        return "simple";
    case CurveClass::splash:
        return "splash";
    case CurveClass::crossing:
        return "crossing";
    }
    return "simple";
}

CurveClass curve_class_from_string(const std::string& s)
{
    if (s == "graph")
        return CurveClass::graph;
    if (s == "simple")
        return CurveClass::simple;
    if (s == "splash")
        return CurveClass::splash;
    if (s == "crossing")
        return CurveClass::crossing;
    throw std::invalid_argument("unknown curve classification: " + s);
}

Field curvature(const Field& theta)
{
    if (theta.parity() != Parity::odd)
        throw std::invalid_argument("curvature: theta must be odd");
    const Field tau = hilbert(theta);
    const Field dtheta = derivative(theta);
    Eigen::VectorXd k = tau.values().array().exp() * dtheta.values().array();
    return Field::projected(k, Parity::even);
}

Eigen::VectorXd coordinate_curvature(const Curve& c)
{
    CVectorX<double> d1, d2;
    Interpolant::grid_derivatives(c, d1, d2);
    if (c.has_tangent())
        d1 = c.tangent;
    Eigen::VectorXd k(c.size());
    for (Index j = 0; j < c.size(); ++j)
        k[j] = (std::conj(d1[j]) * d2[j]).imag() / std::pow(std::abs(d1[j]), 3);
    return k;
}

Eigen::VectorXd speed(const Curve& c) { return tangent_samples(c).cwiseAbs(); }

/// Fourier padding or truncation of complex periodic samples.
static CVectorX<double> resample_periodic(const CVectorX<double>& v, Index m)
{
    const Index n = v.size();
    if (m == n)
        return v;
    const CVectorX<double> src = detail::fft_forward<double>(v);
    CVectorX<double> dst = CVectorX<double>::Zero(m);
    const double scale = double(m) / double(n);
    auto slot = [](Index k, Index size) { return k >= 0 ? k : k + size; };
    if (m > n) {
        for (Index k = -n / 2 + 1; k < n / 2; ++k)
            dst[slot(k, m)] = scale * src[slot(k, n)];
        dst[slot(n / 2, m)] += 0.5 * scale * src[n / 2];
        dst[slot(-n / 2, m)] += 0.5 * scale * src[n / 2];
    } else {
        for (Index k = -m / 2 + 1; k < m / 2; ++k)
            dst[slot(k, m)] = scale * src[slot(k, n)];
        dst[m / 2] = scale * (src[slot(m / 2, n)] + src[slot(-m / 2, n)]);
    }
    return detail::fft_inverse<double>(dst);
}

Curve resample_curve(const Curve& c, Index m)
{
    if (!is_power_of_two(m))
        throw std::invalid_argument("resample_curve: m must be a power of two");
    const Index n = c.size();
    if (m == n)
        return c;
    const Complex slope = c.shift / c.period;
    CVectorX<double> p(n);
    for (Index j = 0; j < n; ++j)
        p[j] = c.z[j] - slope * (c.period * double(j) / double(n));
    const CVectorX<double> q = resample_periodic(p, m);
    Curve out;
    out.t0 = c.t0;
    out.period = c.period;
    out.shift = c.shift;
    out.symmetric = c.symmetric;
    out.z.resize(m);
    for (Index j = 0; j < m; ++j)
        out.z[j] = q[j] + slope * (c.period * double(j) / double(m));
    // the tangent is periodic; padding it avoids differentiating roundoff on the fine grid
    out.tangent = resample_periodic(tangent_samples(c), m);
    return out;
}

ArclengthMap arclength_map(const Curve& c, Index m)
{
    if (!is_power_of_two(m))
        throw std::invalid_argument("arclength_reparam: m must be a power of two");
    const Index n = c.size();
    const Eigen::VectorXd s = speed(c);
    if (!(s.minCoeff() > 1e-12 * s.maxCoeff()))
        throw std::domain_error("arclength_reparam: degenerate tangent (|dz/dt| vanishes)");

    const double mean_speed = s.mean();
    const double length = c.period * mean_speed;
    // cumulative length L(t) = mean_speed (t - t0) + Q(t) - Q(t0), Q periodic with Q' = s - mean_speed
    CVectorX<double> fluct = (s.array() - mean_speed).cast<Complex>();
    const double dscale = c.period / (2 * pi);
    CVectorX<double> Q = periodic_antiderivative<double>(fluct) * dscale;
    Curve aux;
    aux.t0 = c.t0;
    aux.period = c.period;
    aux.shift = 0;
    aux.z.resize(n);
    for (Index j = 0; j < n; ++j)
        aux.z[j] = Complex(Q[j].real(), s[j]);
    const Interpolant qs(aux);
    const Interpolant zi(c);
    const double q0 = Q[0].real();

    auto cumulative = [&](double t, double& speed_at) {
        const Complex v = qs(t);
        speed_at = v.imag();
        return mean_speed * (t - c.t0) + v.real() - q0;
    };

    Eigen::VectorXd table(n + 1);
    for (Index j = 0; j < n; ++j)
        table[j] = mean_speed * (c.period * double(j) / double(n)) + Q[j].real() - q0;
    table[n] = length;

    ArclengthMap out;
    out.length = length;
    out.original_param.resize(m);
    out.curve.t0 = -0.5 * length;
    out.curve.period = length;
    out.curve.shift = c.shift;
    out.curve.symmetric = c.symmetric;
    out.curve.z.resize(m);
    out.curve.tangent.resize(m);
    const double h = c.period / double(n);

    parallel_for(std::size_t(m), [&](std::size_t kk) {
        const Index k = Index(kk);
        const double target = length * double(k) / double(m);
        // bracket in the node table
        const auto it = std::upper_bound(table.data(), table.data() + n + 1, target);
        Index j = std::clamp<Index>(Index(it - table.data()) - 1, 0, n - 1);
        double lo = c.t0 + h * double(j), hi = lo + h;
        double t = lo + h * (target - table[j]) / std::max(table[j + 1] - table[j], 1e-300);
        for (int iter = 0; iter < 50; ++iter) {
            double sp;
            const double f = cumulative(t, sp) - target;
            if (f > 0)
                hi = std::min(hi, t);
            else
                lo = std::max(lo, t);
            double next = t - f / sp;
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
            const double step = std::abs(next - t);
            t = next;
            if (step < 1e-15 * c.period)
                break;
        }
        if (k == 0)
            t = c.t0;
        out.original_param[k] = t;
        Complex v, d1, d2;
        zi.evaluate(t, v, d1, d2);
        out.curve.z[k] = v;
        out.curve.tangent[k] = d1 / std::abs(d1);
    });
    return out;
}

Curve arclength_reparam(const Curve& c, Index m) { return arclength_map(c, m).curve; }

SplashReport chord_arc_eta(const Curve& c, const EtaOptions& opts)
{
    const ArclengthMap map = arclength_map(c, opts.points);
    const Curve& ac = map.curve;
    const Index m = ac.size();
    const double ds = map.length / double(m);
    const Index kmin = std::max<Index>(1, Index(std::ceil(opts.min_separation / ds - 1e-9)));
    const Index kmax = m - 1;

    // brute-force scan; per-row minima are combined in a fixed order
    std::vector<double> row_min(m, std::numeric_limits<double>::infinity());
    std::vector<Index> row_arg(m, 0);
    parallel_for(std::size_t(m), [&](std::size_t ii) {
        const Index i = Index(ii);
        const Complex zi = ac.z[i];
        double best = std::numeric_limits<double>::infinity();
        Index arg = kmin;
        for (Index k = kmin; k <= kmax; ++k) {
            const Index j = i + k;
            const Complex zj = j < m ? ac.z[j] : ac.z[j - m] + ac.shift;
            const double d = double(k) * ds;
            const double r = std::abs(zj - zi) / std::min(d, 1.0);
            if (r < best) {
                best = r;
                arg = k;
            }
        }
        row_min[i] = best;
        row_arg[i] = arg;
    });
    Index bi = 0;
    for (Index i = 1; i < m; ++i)
        if (row_min[i] < row_min[bi])
            bi = i;
    const Index bk = row_arg[bi];

    // continuous refinement of g(s1, s2) = |z(s2) - z(s1)|^2 / min(s2 - s1, 1)^2
    const Interpolant zi(ac);
    auto objective = [&](double s1, double s2, double* grad, double* hess) {
        Complex z1, d1, dd1, z2, d2, dd2;
        zi.evaluate(s1, z1, d1, dd1);
        zi.evaluate(s2, z2, d2, dd2);
        const Complex delta = z2 - z1;
        const double D = std::norm(delta);
        const double D1 = -2 * (std::conj(delta) * d1).real();
        const double D2 = 2 * (std::conj(delta) * d2).real();
        const double D11 = 2 * std::norm(d1) - 2 * (std::conj(delta) * dd1).real();
        const double D22 = 2 * std::norm(d2) + 2 * (std::conj(delta) * dd2).real();
        const double D12 = -2 * (std::conj(d1) * d2).real();
        const double d = s2 - s1;
        double u = 1, u1 = 0, u2 = 0, u11 = 0, u22 = 0, u12 = 0;
        if (d < 1.0) {
            u = 1 / (d * d);
            u1 = 2 / (d * d * d);
            u2 = -u1;
            u11 = 6 / (d * d * d * d);
            u22 = u11;
            u12 = -u11;
        }
        if (grad) {
            grad[0] = D1 * u + D * u1;
            grad[1] = D2 * u + D * u2;
        }
        if (hess) {
            hess[0] = D11 * u + 2 * D1 * u1 + D * u11;
            hess[1] = D12 * u + D1 * u2 + D2 * u1 + D * u12;
            hess[2] = D22 * u + 2 * D2 * u2 + D * u22;
        }
        return D * u;
    };

    double s1 = ac.t0 + ds * double(bi);
    double s2 = s1 + ds * double(bk);
    double g = objective(s1, s2, nullptr, nullptr);
    for (int it = 0; it < 100; ++it) {
        double grad[2], hess[3];
        g = objective(s1, s2, grad, hess);
        const double det = hess[0] * hess[2] - hess[1] * hess[1];
        double p1, p2;
        if (hess[0] > 0 && det > 0) {
            p1 = -(hess[2] * grad[0] - hess[1] * grad[1]) / det;
            p2 = -(-hess[1] * grad[0] + hess[0] * grad[1]) / det;
        } else {
            const double scale = std::max(std::abs(hess[0]) + std::abs(hess[2]), 1e-12);
            p1 = -grad[0] / scale;
            p2 = -grad[1] / scale;
        }
        const double len = std::max(std::abs(p1), std::abs(p2));
        if (len > 2 * ds) {
            p1 *= 2 * ds / len;
            p2 *= 2 * ds / len;
        }
        double lambda = 1;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double t1 = s1 + lambda * p1, t2 = s2 + lambda * p2;
            if (t2 - t1 >= opts.min_separation) {
                const double gt = objective(t1, t2, nullptr, nullptr);
                if (gt <= g) {
                    s1 = t1;
                    s2 = t2;
                    accepted = gt < g || lambda == 1;
                    g = gt;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted || std::max(std::abs(lambda * p1), std::abs(lambda * p2)) < 1e-15 * map.length)
            break;
    }
    const double eta_refined = std::sqrt(std::max(g, 0.0));

    SplashReport rep;
    rep.min_separation = opts.min_separation;
    rep.length = map.length;
    rep.eta = std::min(eta_refined, row_min[bi]);
    if (eta_refined > row_min[bi]) {
        s1 = ac.t0 + ds * double(bi);
        s2 = s1 + ds * double(bk);
    }
    // keep the first point inside the base period
    const double wrap = std::floor((s1 - ac.t0) / map.length);
    s1 -= wrap * map.length;
    s2 -= wrap * map.length;
    rep.s_alpha = s1;
    rep.s_beta = s2;
    rep.arc_separation = s2 - s1;

    auto to_original = [&](double s) {
        const double w = std::floor((s - ac.t0) / map.length);
        const double local = s - w * map.length;
        const double x = (local - ac.t0) / ds;
        const Index j = std::clamp<Index>(Index(std::floor(x)), 0, m - 1);
        const double frac = x - double(j);
        const double a0 = map.original_param[j];
        const double a1 = j + 1 < m ? map.original_param[j + 1] : c.t0 + c.period;
        return a0 + frac * (a1 - a0) + w * c.period;
    };
    rep.alpha = to_original(s1);
    rep.beta = to_original(s2);

    // sublevel interval lengths around the pair
    rep.sublevel_threshold = opts.sublevel_factor * rep.eta;
    std::vector<double> col_min(m, std::numeric_limits<double>::infinity());
    for (Index i = 0; i < m; ++i) {
        const Index j = (i + row_arg[i]) % m;
        col_min[j] = std::min(col_min[j], row_min[i]);
    }
    auto run_length = [&](const std::vector<double>& mins, Index centre) {
        if (!(mins[centre] <= rep.sublevel_threshold))
            return 0.0;
        Index count = 1;
        for (Index step = 1; step < m && mins[(centre + step) % m] <= rep.sublevel_threshold; ++step)
            ++count;
        for (Index step = 1; step < m && count < m && mins[(centre - step + m) % m] <= rep.sublevel_threshold;
             ++step)
            ++count;
        return double(std::min(count, m)) * ds;
    };
    rep.interval_alpha = run_length(row_min, bi);
    rep.interval_beta = run_length(col_min, (bi + bk) % m);
    return rep;
}

std::vector<Crossing> self_intersections(const Curve& c)
{
    const Index n = c.size();
    const bool closed = std::abs(c.shift) == 0.0;
    const Interpolant interp(c);
    const double h = c.spacing();

    std::vector<Complex> pts(n + 1);
    for (Index j = 0; j < n; ++j)
        pts[j] = c.z[j];
    pts[n] = c.z[0] + c.shift;
    double max_len = 0;
    for (Index j = 0; j < n; ++j)
        max_len = std::max(max_len, std::abs(pts[j + 1] - pts[j]));
    const double near_tol = 0.5 * max_len;
    std::vector<double> cumulative(n + 1, 0.0);
    for (Index j = 0; j < n; ++j)
        cumulative[j + 1] = cumulative[j] + std::abs(pts[j + 1] - pts[j]);
    const double total = cumulative[n];

    struct Seg {
        double xmin, xmax, ymin, ymax;
        Index idx;
    };
    std::vector<Seg> base(n);
    for (Index j = 0; j < n; ++j) {
        base[j] = {std::min(pts[j].real(), pts[j + 1].real()), std::max(pts[j].real(), pts[j + 1].real()),
                   std::min(pts[j].imag(), pts[j + 1].imag()), std::max(pts[j].imag(), pts[j + 1].imag()), j};
    }
    std::vector<Seg> sorted = base;
    std::sort(sorted.begin(), sorted.end(), [](const Seg& a, const Seg& b) { return a.xmin < b.xmin; });
    std::vector<double> sorted_xmin(n);
    for (Index j = 0; j < n; ++j)
        sorted_xmin[j] = sorted[j].xmin;

    struct Candidate {
        Index i, j;
        int k;
        bool proper;
        double s, u;
    };
    std::vector<Candidate> candidates;
    const std::vector<int> translates = closed ? std::vector<int>{0} : std::vector<int>{0, 1};
    for (int k : translates) {
        const Complex off = double(k) * c.shift;
        for (Index i = 0; i < n; ++i) {
            const Seg& a = base[i];
            // segments of the translated copy whose x-range may reach a
            const double lo = a.xmin - off.real() - max_len - near_tol;
            const double hi = a.xmax - off.real() + near_tol;
            auto first = std::lower_bound(sorted_xmin.begin(), sorted_xmin.end(), lo);
            for (auto it = first; it != sorted_xmin.end() && *it <= hi; ++it) {
                const Seg& b = sorted[Index(it - sorted_xmin.begin())];
                const Index j = b.idx;
                if (k == 0) {
                    if (j <= i)
                        continue;
                    const Index gap = std::min(j - i, closed ? n - (j - i) : j - i);
                    if (gap <= 1)
                        continue;
                } else if (i == n - 1 && j == 0) {
                    continue;
                }
                if (b.xmin + off.real() > a.xmax + near_tol || b.xmax + off.real() < a.xmin - near_tol
                    || b.ymin + off.imag() > a.ymax + near_tol || b.ymax + off.imag() < a.ymin - near_tol)
                    continue;
                const SegmentHit hit = segment_test(pts[i], pts[i + 1], pts[j] + off, pts[j + 1] + off);
                if (hit.proper) {
                    candidates.push_back({i, j, k, true, hit.s, hit.u});
                } else if (hit.dist < near_tol) {
                    // near misses only count between arcs that are far apart along the curve
                    double along = k == 0 ? cumulative[j] - cumulative[i] : cumulative[j] + total - cumulative[i];
                    if (closed)
                        along = std::min(along, total - along);
                    if (along > 4 * max_len)
                        candidates.push_back({i, j, k, false, hit.s, hit.u});
                }
            }
        }
    }

    std::vector<Crossing> out;
    auto canonical = [&](double a, double b) {
        double lo = std::min(a, b), hi = std::max(a, b);
        const double w = std::floor((lo - c.t0) / c.period + 1e-12);
        return std::pair<double, double>(lo - w * c.period, hi - w * c.period);
    };
    std::vector<std::pair<double, double>> keys;
    for (const Candidate& cd : candidates) {
        const double a0 = c.t0 + h * (double(cd.i) + cd.s);
        const double b0 = c.t0 + h * (double(cd.j) + cd.u);
        const Complex off = double(cd.k) * c.shift;
        double a, b, res;
        const bool ok = refine_crossing(interp, a0, b0, -off, h, a, b, res);
        // z(a) = z(b) + off  <=>  z(a) = z(b + k*period)
        const double b_unwrapped = b + double(cd.k) * c.period;
        if (ok && std::abs(a - b_unwrapped) < 2 * h)
            continue;
        if (!ok && !cd.proper)
            continue;
        const auto key = ok ? canonical(a, b_unwrapped) : canonical(a0, b0 + double(cd.k) * c.period);
        bool dup = false;
        for (std::size_t q = 0; q < keys.size(); ++q) {
            const double tol = (out[q].converged && ok) ? 1e-7 * c.period : 2 * h;
            if (std::abs(keys[q].first - key.first) + std::abs(keys[q].second - key.second) < tol) {
                dup = true;
                if (ok && !out[q].converged) {
                    keys[q] = key;
                    out[q] = {key.first, key.second, interp(key.first), true, res};
                }
                break;
            }
        }
        if (dup)
            continue;
        keys.push_back(key);
        out.push_back({key.first, key.second, ok ? interp(key.first) : pts[cd.i], ok, res});
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.alpha < y.alpha; });
    return out;
}

double min_horizontal_speed(const Curve& c)
{
    const CVectorX<double> t = tangent_samples(c);
    Index arg = 0;
    for (Index j = 1; j < t.size(); ++j)
        if (t[j].real() < t[arg].real())
            arg = j;
    const Interpolant interp(c);
    const double h = c.spacing();
    const double t0 = c.node(arg);
    double fmin;
    golden_min([&](double s) { return interp.derivative(s).real(); }, t0 - h, t0 + h, 1e-12, &fmin);
    return std::min(fmin, t[arg].real());
}

bool is_graph(const Curve& c) { return min_horizontal_speed(c) > 0.0; }

bool self_intersects(const Curve& c, Index geometry_points)
{
    const Curve g = c.size() < geometry_points ? resample_curve(c, geometry_points) : c;
    for (const Crossing& x : self_intersections(g))
        if (x.converged)
            return true;
    return false;
}

SplashReport classify(const Curve& c, const ClassifyOptions& opts)
{
    const Curve g = c.size() < opts.geometry_points ? resample_curve(c, opts.geometry_points) : c;
    int crossings = 0;
    for (const Crossing& x : self_intersections(g))
        if (x.converged)
            ++crossings;
    SplashReport rep = chord_arc_eta(g, opts.eta);
    rep.intersections = crossings;
    rep.graph = is_graph(g);
    if (crossings > 0) {
        rep.classification = CurveClass::crossing;
        rep.eta = 0.0;
    } else if (rep.eta < opts.splash_tol && rep.arc_separation > 1.0) {
        rep.classification = CurveClass::splash;
    } else if (rep.graph) {
        rep.classification = CurveClass::graph;
    } else {
        rep.classification = CurveClass::simple;
    }
    return rep;
}

OpenedCurve open_map(const Curve& c, double a, double touch_tol)
{
    if (!(a >= 0))
        throw std::invalid_argument("open_map: a must be nonnegative");
    const Index n = c.size();
    CVectorX<double> w(n);
    for (Index j = 0; j < n; ++j)
        w[j] = a - std::exp(Complex(0, -1) * c.z[j]);
    for (Index j = 0; j < n; ++j) {
        const Complex p = w[j], q = w[(j + 1) % n];
        if ((p.imag() > 0) != (q.imag() > 0)) {
            const double t = p.imag() / (p.imag() - q.imag());
            const double re = p.real() + t * (q.real() - p.real());
            if (re < 0)
                throw std::domain_error("open_map: interface crosses the branch cut of the square root near node "
                                        + std::to_string(j) + "; choose a different a");
        }
    }
    OpenedCurve out;
    out.a = a;
    out.image.t0 = c.t0;
    out.image.period = c.period;
    out.image.shift = 0;
    out.image.z.resize(n);
    for (Index j = 0; j < n; ++j)
        out.image.z[j] = std::sqrt(w[j]);
    out.min_real_part = out.image.z.real().minCoeff();
    out.simple = true;
    for (const Crossing& x : self_intersections(out.image))
        if (x.converged || x.residual > 0)
            out.simple = false;

    const Interpolant zi(c);
    auto real_part = [&](double t) { return std::sqrt(a - std::exp(Complex(0, -1) * zi(t))).real(); };
    const double h = c.spacing();
    for (Index j = 0; j < n; ++j) {
        const double r = out.image.z[j].real();
        if (r <= out.image.z[(j + n - 1) % n].real() && r < out.image.z[(j + 1) % n].real()) {
            double fmin;
            const double t = golden_min(real_part, c.node(j) - h, c.node(j) + h, 1e-13, &fmin);
            out.min_real_part = std::min(out.min_real_part, fmin);
            if (fmin < touch_tol) {
                ++out.axis_touches;
                out.touch_params.push_back(t);
            }
        }
    }
    return out;
}

double default_opening_constant(const Curve& c)
{
    const Index n = c.size();
    const double y_trough = c.z[n / 2].imag();
    const SplashReport rep = chord_arc_eta(c);
    const Interpolant zi(c);
    const double y_pair = zi(rep.alpha).imag();
    if (y_pair > y_trough + 1e-3)
        return std::exp(0.5 * (y_trough + y_pair));
    return std::exp(y_trough + 1.0);
}

} // namespace splash::geometry
