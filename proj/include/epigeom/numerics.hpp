#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace epigeom {

using Vec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Unit vector in R^n, validated to norm 1 within 1e-12.
struct Direction {
    Vec components;

    explicit Direction(Vec c);
    /// Unit vector at the given angle on S^1.
    static Direction from_angle(double theta);
    int dim() const { return static_cast<int>(components.size()); }
    double operator[](int i) const { return components[static_cast<size_t>(i)]; }
    Direction antipode() const;
    /// Counterclockwise perpendicular (dim 2 only).
    Direction perpendicular() const;
    double angle() const;  // dim 2 only
};

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec scaled(const Vec& a, double c);

/// Antipodally closed set of equally spaced directions on S^1 (count must be even).
std::vector<Direction> circle_directions(int count);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Adaptive Simpson integration of f on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 48);

/// Adaptive integration over a list of contiguous pieces (breakpoints must be sorted);
/// pieces let the integrator respect known kinks and jumps.
double integrate_pieces(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints,
                        double tol = 1e-10);

/// Trapezoidal rule over uniformly spaced samples.
double trapezoid(const std::vector<double>& values, double spacing);

// ---------------------------------------------------------------------------
// Scalar optimization
// ---------------------------------------------------------------------------

struct ScalarMaximum {
    double arg = 0;
    double value = 0;
};

/// Maximize f on [a, b]: uniform scan with grid_points samples followed by
/// golden-section refinement of the best bracket.
ScalarMaximum maximize_scalar(const std::function<double(double)>& f, double a, double b,
                              int grid_points, double x_tol = 1e-12);

// ---------------------------------------------------------------------------
// FFT and discrete convolution
// ---------------------------------------------------------------------------

/// In-place radix-2 FFT; size must be a power of two. inverse=true applies 1/n scaling.
void fft(std::vector<std::complex<double>>& data, bool inverse);

/// Linear convolution of two real sequences (length na + nb - 1), via FFT.
std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b);

/// Linear 2-D convolution of row-major arrays a (ra x ca) and b (rb x cb);
/// result is (ra+rb-1) x (ca+cb-1), row-major.
std::vector<double> convolve_fft_2d(const std::vector<double>& a, int ra, int ca,
                                    const std::vector<double>& b, int rb, int cb);

// ---------------------------------------------------------------------------
// Deterministic random numbers
// ---------------------------------------------------------------------------

/// splitmix64-based generator with portable uniform/normal transforms, so that
/// a fixed seed yields identical streams on every platform and standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();
    /// Derive an independent stream for worker i.
    Rng split(uint64_t stream) const;

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0;
};

// ---------------------------------------------------------------------------
// Parallel evaluation
// ---------------------------------------------------------------------------

/// Worker count from EPIGEOM_WORKERS (default 1).
int worker_count();

/// Evaluate body(i) for i in [0, n) across worker_count() threads.
/// Jobs write to disjoint slots, so results are independent of scheduling.
void parallel_for(int n, const std::function<void(int)>& body);

// ---------------------------------------------------------------------------
// Small dense symmetric linear algebra (for Gaussian covariances)
// ---------------------------------------------------------------------------

struct SymMatrix {
    int n = 0;
    std::vector<double> a;  // row-major n x n

    SymMatrix() = default;
    explicit SymMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}
    static SymMatrix identity(int dim);
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    SymMatrix scaled(double c) const;
};

/// Cholesky factor L (lower) of a symmetric positive-definite matrix; throws if not SPD.
SymMatrix cholesky(const SymMatrix& m);
double determinant_spd(const SymMatrix& m);
/// Solve m x = rhs for SPD m.
Vec solve_spd(const SymMatrix& m, const Vec& rhs);

/// FNV-1a hash of a string, used for config digests in run manifests.
uint64_t fnv1a(const std::string& s);

}  // namespace epigeom
