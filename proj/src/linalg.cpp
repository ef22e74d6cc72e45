#include "p2wave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "p2wave/errors.hpp"

namespace p2wave {

namespace {

double abs2(double x) { return x * x; }
double abs2(const cplx& x) { return std::norm(x); }
double conj_of(double x) { return x; }
cplx conj_of(const cplx& x) { return std::conj(x); }
double real_of(double x) { return x; }
double real_of(const cplx& x) { return x.real(); }

// Unit-modulus factor e^{i phi} with x = |x| e^{i phi}.
double unit_phase(double x) { return x < 0 ? -1.0 : 1.0; }
cplx unit_phase(const cplx& x) { return x / std::abs(x); }

}  // namespace

template <class T>
std::vector<T> matvec(const Matrix<T>& a, const std::vector<T>& x) {
    if (x.size() != a.cols()) throw ValidationError("matvec: size mismatch");
    std::vector<T> y(a.rows(), T{});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const T* r = a.row(i);
        T s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw ValidationError("matmul: size mismatch");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T* ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            const T* bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

template <class T>
Matrix<T> adjoint(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = conj_of(a(i, j));
    return t;
}

template <class T>
T quadratic_form(const Matrix<T>& a, const std::vector<T>& x, const std::vector<T>& y) {
    const std::vector<T> ay = matvec(a, y);
    T s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += conj_of(x[i]) * ay[i];
    return s;
}

template <class T>
Cholesky<T>::Cholesky(const Matrix<T>& a) : l_(a.rows(), a.cols()) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ValidationError("Cholesky: matrix not square");
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(real_of(a(i, i))));
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double d = real_of(a(j, j));
        const T* lj = l_.row(j);
        for (std::size_t k = 0; k < j; ++k) d -= abs2(lj[k]);
        if (!(d > 1e-14 * scale)) {
            throw NumericalError("Cholesky: non-positive pivot at row " + std::to_string(j));
        }
        min_pivot_ = std::min(min_pivot_, d);
        max_pivot_ = std::max(max_pivot_, d);
        const double ljj = std::sqrt(d);
        l_(j, j) = T{ljj};
        for (std::size_t i = j + 1; i < n; ++i) {
            T s = a(i, j);
            const T* li = l_.row(i);
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * conj_of(lj[k]);
            l_(i, j) = s / ljj;
        }
    }
    if (n == 0) min_pivot_ = 0.0;
}

template <class T>
std::vector<T> Cholesky<T>::solve_lower(const std::vector<T>& b) const {
    const std::size_t n = l_.rows();
    if (b.size() != n) throw ValidationError("Cholesky::solve: size mismatch");
    std::vector<T> y(b);
    for (std::size_t i = 0; i < n; ++i) {
        const T* li = l_.row(i);
        T s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
        y[i] = s / li[i];
    }
    return y;
}

template <class T>
std::vector<T> Cholesky<T>::solve_upper(const std::vector<T>& y) const {
    const std::size_t n = l_.rows();
    if (y.size() != n) throw ValidationError("Cholesky::solve: size mismatch");
    std::vector<T> x(y);
    for (std::size_t ii = n; ii-- > 0;) {
        T s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= conj_of(l_(k, ii)) * x[k];
        x[ii] = s / l_(ii, ii);
    }
    return x;
}

template <class T>
std::vector<T> Cholesky<T>::solve(const std::vector<T>& b) const {
    return solve_upper(solve_lower(b));
}

template <class T>
EigenDecomposition<T> jacobi_eigen(const Matrix<T>& input, double tol, int max_sweeps) {
    const std::size_t n = input.rows();
    if (input.cols() != n) throw ValidationError("jacobi_eigen: matrix not square");
    EigenDecomposition<T> out;
    Matrix<T> a = input;
    // Symmetrize against rounding in the caller's assembly.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = T{real_of(a(i, i))};
        for (std::size_t j = i + 1; j < n; ++j) {
            const T v = (a(i, j) + conj_of(a(j, i))) * 0.5;
            a(i, j) = v;
            a(j, i) = conj_of(v);
        }
    }
    Matrix<T> v = Matrix<T>::identity(n);

    // Round-robin pairing: n_even players, player 0 fixed, the rest rotate.
    const std::size_t m = n + (n % 2);
    std::vector<std::size_t> ring(m);
    std::iota(ring.begin(), ring.end(), 0);

    struct Rot {
        std::size_t p, q;
        double c, s;
        T ph;  // e^{i phi}
    };
    std::vector<Rot> rots;
    rots.reserve(m / 2);

    auto off_norm = [&]() {
        double off = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const T* r = a.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) diag += abs2(r[j]);
                else off += abs2(r[j]);
            }
        }
        return std::pair<double, double>{std::sqrt(off), std::sqrt(diag)};
    };

    bool converged = false;
    int sweep = 0;
    while (true) {
        const auto [off, diag] = off_norm();
        if (off == 0.0 || off < tol * diag || n < 2) {
            converged = true;
            break;
        }
        if (sweep >= max_sweeps) break;
        ++sweep;
        for (std::size_t round = 0; round + 1 < m; ++round) {
            rots.clear();
            for (std::size_t k = 0; k < m / 2; ++k) {
                std::size_t p = ring[k], q = ring[m - 1 - k];
                if (p >= n || q >= n) continue;
                if (p > q) std::swap(p, q);
                const T apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const double app = real_of(a(p, p));
                const double aqq = real_of(a(q, q));
                // Skip rotations that would be lost in rounding.
                if (r < 1e-18 * (std::abs(app) + std::abs(aqq)) ) continue;
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                rots.push_back({p, q, c, t * c, unit_phase(apq)});
            }
            if (!rots.empty()) {
                // A <- A J and V <- V J, row by row (contiguous access).
                auto apply_cols = [&](Matrix<T>& x) {
                    for (std::size_t i = 0; i < n; ++i) {
                        T* xi = x.row(i);
                        for (const Rot& g : rots) {
                            const T xp = xi[g.p], xq = xi[g.q];
                            const T eq = conj_of(g.ph) * xq;
                            xi[g.p] = g.c * xp - g.s * eq;
                            xi[g.q] = g.s * xp + g.c * eq;
                        }
                    }
                };
                apply_cols(a);
                apply_cols(v);
                // A <- J* A, pair by pair.
                for (const Rot& g : rots) {
                    T* rp = a.row(g.p);
                    T* rq = a.row(g.q);
                    for (std::size_t j = 0; j < n; ++j) {
                        const T xp = rp[j], xq = g.ph * rq[j];
                        rp[j] = g.c * xp - g.s * xq;
                        rq[j] = g.s * xp + g.c * xq;
                    }
                }
                for (const Rot& g : rots) {
                    a(g.p, g.q) = T{};
                    a(g.q, g.p) = T{};
                    a(g.p, g.p) = T{real_of(a(g.p, g.p))};
                    a(g.q, g.q) = T{real_of(a(g.q, g.q))};
                }
            }
            // Rotate players 1..m-1.
            std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
        }
    }
    if (!converged) {
        throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return real_of(a(i, i)) < real_of(a(j, j));
    });
    out.values.resize(n);
    out.vectors = Matrix<T>(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = real_of(a(order[c], order[c]));
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v(i, order[c]);
    }
    out.sweeps = sweep;
    return out;
}

BandedSymMatrix::BandedSymMatrix(std::size_t n) : n_(n) {
    for (int d = 0; d <= bandwidth; ++d) band_[d].assign(n, 0.0);
}

double BandedSymMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw ValidationError("BandedSymMatrix: index out of range");
    if (i > j) std::swap(i, j);
    const std::size_t d = j - i;
    return d > static_cast<std::size_t>(bandwidth) ? 0.0 : band_[d][i];
}

void BandedSymMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i >= n_ || j >= n_) throw ValidationError("BandedSymMatrix: index out of range");
    if (i > j) std::swap(i, j);
    if (j - i > static_cast<std::size_t>(bandwidth))
        throw ValidationError("BandedSymMatrix: entry outside band");
    band_[j - i][i] = value;
}

void BandedSymMatrix::add(std::size_t i, std::size_t j, double value) {
    set(i, j, (*this)(i, j) + value);
}

std::vector<double> BandedSymMatrix::apply(const std::vector<double>& x) const {
    if (x.size() != n_) throw ValidationError("BandedSymMatrix::apply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = band_[0][i] * x[i];
        for (int d = 1; d <= bandwidth; ++d) {
            const std::size_t ud = static_cast<std::size_t>(d);
            if (i + ud < n_) s += band_[d][i] * x[i + ud];
            if (i >= ud) s += band_[d][i - ud] * x[i - ud];
        }
        y[i] = s;
    }
    return y;
}

RMatrix BandedSymMatrix::dense() const {
    RMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (int d = 0; d <= bandwidth; ++d) {
            const std::size_t j = i + static_cast<std::size_t>(d);
            if (j < n_) {
                m(i, j) = band_[d][i];
                m(j, i) = band_[d][i];
            }
        }
    return m;
}

BandedSymMatrix BandedSymMatrix::scaled_sum(double a, const BandedSymMatrix& other, double b) const {
    if (other.n_ != n_) throw ValidationError("BandedSymMatrix::scaled_sum: size mismatch");
    BandedSymMatrix r(n_);
    for (int d = 0; d <= bandwidth; ++d)
        for (std::size_t i = 0; i < n_; ++i) r.band_[d][i] = a * band_[d][i] + b * other.band_[d][i];
    return r;
}

BandedLDLT::BandedLDLT(const BandedSymMatrix& a)
    : n_(a.order()), d_(n_, 0.0), l1_(n_, 0.0), l2_(n_, 0.0) {
    // A(i,i) = d_i + l1_{i}^2 d_{i-1} + l2_i^2 d_{i-2}, with l1_i = L(i,i-1), l2_i = L(i,i-2).
    double maxpiv = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (i >= 2) l2_[i] = a(i, i - 2) / d_[i - 2];
        if (i >= 1) {
            double s = a(i, i - 1);
            if (i >= 2) s -= l2_[i] * d_[i - 2] * l1_[i - 1];
            l1_[i] = s / d_[i - 1];
        }
        double di = a(i, i);
        if (i >= 1) di -= l1_[i] * l1_[i] * d_[i - 1];
        if (i >= 2) di -= l2_[i] * l2_[i] * d_[i - 2];
        maxpiv = std::max(maxpiv, std::abs(di));
        if (!(di > 1e-14 * maxpiv)) {
            throw NumericalError("BandedLDLT: pivot " + std::to_string(i) + " not positive");
        }
        d_[i] = di;
    }
    for (double d : d_) {
        if (!(d > 1e-14 * maxpiv)) throw NumericalError("BandedLDLT: pivot below threshold");
    }
}

std::vector<double> BandedLDLT::solve(const std::vector<double>& b) const {
    if (b.size() != n_) throw ValidationError("BandedLDLT::solve: size mismatch");
    std::vector<double> x(b);
    for (std::size_t i = 0; i < n_; ++i) {
        if (i >= 1) x[i] -= l1_[i] * x[i - 1];
        if (i >= 2) x[i] -= l2_[i] * x[i - 2];
    }
    for (std::size_t i = 0; i < n_; ++i) x[i] /= d_[i];
    for (std::size_t ii = n_; ii-- > 0;) {
        if (ii + 1 < n_) x[ii] -= l1_[ii + 1] * x[ii + 1];
        if (ii + 2 < n_) x[ii] -= l2_[ii + 2] * x[ii + 2];
    }
    return x;
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double norm2(const std::vector<cplx>& x) {
    double s = 0.0;
    for (const cplx& v : x) s += std::norm(v);
    return std::sqrt(s);
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

template std::vector<double> matvec(const RMatrix&, const std::vector<double>&);
template std::vector<cplx> matvec(const CMatrix&, const std::vector<cplx>&);
template RMatrix matmul(const RMatrix&, const RMatrix&);
template CMatrix matmul(const CMatrix&, const CMatrix&);
template RMatrix adjoint(const RMatrix&);
template CMatrix adjoint(const CMatrix&);
template double quadratic_form(const RMatrix&, const std::vector<double>&, const std::vector<double>&);
template cplx quadratic_form(const CMatrix&, const std::vector<cplx>&, const std::vector<cplx>&);
template class Cholesky<double>;
template class Cholesky<cplx>;
template EigenDecomposition<double> jacobi_eigen(const RMatrix&, double, int);
template EigenDecomposition<cplx> jacobi_eigen(const CMatrix&, double, int);

}  // namespace p2wave
