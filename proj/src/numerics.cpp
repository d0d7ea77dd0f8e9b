#include "epigeom/numerics.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace epigeom {

Direction::Direction(Vec c) : components(std::move(c)) {
    const double n = norm(components);
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument("Direction: vector norm " + std::to_string(n) + " is not 1");
}

Direction Direction::from_angle(double theta) {
    return Direction(Vec{std::cos(theta), std::sin(theta)});
}

Direction Direction::antipode() const {
    Vec c = components;
    for (double& x : c) x = -x;
    return Direction(std::move(c));
}

Direction Direction::perpendicular() const {
    if (dim() != 2) throw std::invalid_argument("perpendicular: dim must be 2");
    return Direction(Vec{-components[1], components[0]});
}

double Direction::angle() const {
    if (dim() != 2) throw std::invalid_argument("angle: dim must be 2");
    return std::atan2(components[1], components[0]);
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec scaled(const Vec& a, double c) {
    Vec r = a;
    for (double& x : r) x *= c;
    return r;
}

std::vector<Direction> circle_directions(int count) {
    if (count < 2 || count % 2 != 0)
        throw std::invalid_argument("circle_directions: count must be even and >= 2");
    std::vector<Direction> dirs;
    dirs.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        dirs.push_back(Direction::from_angle(2.0 * kPi * i / count));
    return dirs;
}

// ---------------------------------------------------------------------------

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_pieces(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints, double tol) {
    double sum = 0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        if (b > a) sum += integrate(f, a, b, tol / std::max<size_t>(1, breakpoints.size() - 1));
    }
    return sum;
}

double trapezoid(const std::vector<double>& values, double spacing) {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * spacing;
}

// ---------------------------------------------------------------------------

ScalarMaximum maximize_scalar(const std::function<double(double)>& f, double a, double b,
                              int grid_points, double x_tol) {
    if (grid_points < 3) throw std::invalid_argument("maximize_scalar: need >= 3 grid points");
    int best = 0;
    double best_val = -kInf;
    std::vector<double> xs(static_cast<size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        xs[static_cast<size_t>(i)] = a + (b - a) * i / (grid_points - 1);
        const double v = f(xs[static_cast<size_t>(i)]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = xs[static_cast<size_t>(std::max(0, best - 1))];
    double hi = xs[static_cast<size_t>(std::min(grid_points - 1, best + 1))];

    // Golden-section refinement on the bracketed interval.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > x_tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    ScalarMaximum r;
    r.arg = 0.5 * (lo + hi);
    r.value = f(r.arg);
    if (best_val > r.value) {
        r.arg = xs[static_cast<size_t>(best)];
        r.value = best_val;
    }
    return r;
}

// ---------------------------------------------------------------------------

void fft(std::vector<std::complex<double>>& data, bool inverse) {
    const size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : data) x /= static_cast<double>(n);
}

namespace {
size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}
}  // namespace

std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t out = a.size() + b.size() - 1;
    const size_t n = next_pow2(out);
    std::vector<std::complex<double>> fa(n), fb(n);
    for (size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft(fa, false);
    fft(fb, false);
    for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft(fa, true);
    std::vector<double> r(out);
    for (size_t i = 0; i < out; ++i) r[i] = fa[i].real();
    return r;
}

std::vector<double> convolve_fft_2d(const std::vector<double>& a, int ra, int ca,
                                    const std::vector<double>& b, int rb, int cb) {
    const int rows = ra + rb - 1, cols = ca + cb - 1;
    const size_t nr = next_pow2(static_cast<size_t>(rows));
    const size_t nc = next_pow2(static_cast<size_t>(cols));
    std::vector<std::complex<double>> fa(nr * nc), fb(nr * nc);
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ca; ++j)
            fa[static_cast<size_t>(i) * nc + static_cast<size_t>(j)] =
                a[static_cast<size_t>(i) * ca + static_cast<size_t>(j)];
    for (int i = 0; i < rb; ++i)
        for (int j = 0; j < cb; ++j)
            fb[static_cast<size_t>(i) * nc + static_cast<size_t>(j)] =
                b[static_cast<size_t>(i) * cb + static_cast<size_t>(j)];

    auto fft2 = [&](std::vector<std::complex<double>>& m, bool inv) {
        std::vector<std::complex<double>> tmp;
        tmp.resize(nc);
        for (size_t i = 0; i < nr; ++i) {  // rows
            for (size_t j = 0; j < nc; ++j) tmp[j] = m[i * nc + j];
            fft(tmp, inv);
            for (size_t j = 0; j < nc; ++j) m[i * nc + j] = tmp[j];
        }
        tmp.resize(nr);
        for (size_t j = 0; j < nc; ++j) {  // columns
            for (size_t i = 0; i < nr; ++i) tmp[i] = m[i * nc + j];
            fft(tmp, inv);
            for (size_t i = 0; i < nr; ++i) m[i * nc + j] = tmp[i];
        }
    };
    fft2(fa, false);
    fft2(fb, false);
    for (size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fft2(fa, true);
    std::vector<double> r(static_cast<size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            r[static_cast<size_t>(i) * cols + j] = fa[static_cast<size_t>(i) * nc + j].real();
    return r;
}

// ---------------------------------------------------------------------------

uint64_t Rng::next_u64() {
    // splitmix64
    state_ += 0x9E3779B97f4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

Rng Rng::split(uint64_t stream) const {
    Rng probe(state_ ^ (0xA3EC4E9FD6F0D415ULL + stream * 0x9E3779B97f4A7C15ULL));
    return Rng(probe.next_u64());
}

// ---------------------------------------------------------------------------

int worker_count() {
    const char* env = std::getenv("EPIGEOM_WORKERS");
    if (!env) return 1;
    const int w = std::atoi(env);
    return w >= 1 ? w : 1;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::scaled(double c) const {
    SymMatrix m = *this;
    for (double& x : m.a) x *= c;
    return m;
}

SymMatrix cholesky(const SymMatrix& m) {
    SymMatrix l(m.n);
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m.at(i, j);
            for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (s <= 0) throw std::invalid_argument("cholesky: matrix not positive definite");
                l.at(i, i) = std::sqrt(s);
            } else {
                l.at(i, j) = s / l.at(j, j);
            }
        }
    }
    return l;
}

double determinant_spd(const SymMatrix& m) {
    const SymMatrix l = cholesky(m);
    double d = 1.0;
    for (int i = 0; i < m.n; ++i) d *= l.at(i, i) * l.at(i, i);
    return d;
}

Vec solve_spd(const SymMatrix& m, const Vec& rhs) {
    const SymMatrix l = cholesky(m);
    Vec y(rhs.size());
    for (int i = 0; i < m.n; ++i) {
        double s = rhs[static_cast<size_t>(i)];
        for (int k = 0; k < i; ++k) s -= l.at(i, k) * y[static_cast<size_t>(k)];
        y[static_cast<size_t>(i)] = s / l.at(i, i);
    }
    Vec x(rhs.size());
    for (int i = m.n - 1; i >= 0; --i) {
        double s = y[static_cast<size_t>(i)];
        for (int k = i + 1; k < m.n; ++k) s -= l.at(k, i) * x[static_cast<size_t>(k)];
        x[static_cast<size_t>(i)] = s / l.at(i, i);
    }
    return x;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace epigeom
