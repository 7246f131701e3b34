#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Small dense complex linear algebra for the simulator. Matrices here never
// exceed a few rows, so everything is plain triple loops and full-matrix
// Jacobi/Householder routines; no attempt at BLAS-style performance.

namespace icdof {

using cplx = std::complex<double>;

class CVec {
public:
    CVec() = default;
    explicit CVec(std::size_t dim) : e_(dim) {}
    CVec(std::initializer_list<cplx> init) : e_(init) {}

    std::size_t dim() const { return e_.size(); }
    cplx& operator[](std::size_t i) { return e_[i]; }
    const cplx& operator[](std::size_t i) const { return e_[i]; }

    double norm2() const {
        double s = 0;
        for (const auto& x : e_) s += std::norm(x);
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    CVec& operator*=(cplx a) {
        for (auto& x : e_) x *= a;
        return *this;
    }

private:
    std::vector<cplx> e_;
};

// a^H b
inline cplx dot(const CVec& a, const CVec& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline CVec normalized(const CVec& v) {
    const double n = v.norm();
    if (n == 0) throw std::invalid_argument("normalized: zero vector");
    CVec w = v;
    w *= cplx(1.0 / n, 0.0);
    return w;
}

class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), e_(rows * cols) {}
    CMat(std::size_t rows, std::size_t cols, std::initializer_list<cplx> init) : r_(rows), c_(cols), e_(init) {
        if (e_.size() != rows * cols) throw std::invalid_argument("CMat: entry count mismatch");
    }

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    cplx& operator()(std::size_t i, std::size_t j) { return e_[i * c_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return e_[i * c_ + j]; }

    CMat adjoint() const {
        CMat m(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    CVec col(std::size_t j) const {
        CVec v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, const CVec& v) {
        for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }

    double frobenius_norm2() const {
        double s = 0;
        for (const auto& x : e_) s += std::norm(x);
        return s;
    }
    double frobenius_norm() const { return std::sqrt(frobenius_norm2()); }

    CMat& operator+=(const CMat& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    CMat& operator-=(const CMat& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    CMat& operator*=(cplx a) {
        for (auto& x : e_) x *= a;
        return *this;
    }

private:
    void check_same_shape(const CMat& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("CMat: shape mismatch");
    }

    std::size_t r_ = 0, c_ = 0;
    std::vector<cplx> e_;
};

inline CMat operator+(CMat a, const CMat& b) { return a += b; }
inline CMat operator-(CMat a, const CMat& b) { return a -= b; }
inline CMat operator*(cplx a, CMat m) { return m *= a; }

inline CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("CMat multiply: shape mismatch");
    CMat m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

inline CVec operator*(const CMat& a, const CVec& v) {
    if (a.cols() != v.dim()) throw std::invalid_argument("CMat apply: shape mismatch");
    CVec w(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        w[i] = s;
    }
    return w;
}

inline CMat as_column(const CVec& v) {
    CMat m(v.dim(), 1);
    for (std::size_t i = 0; i < v.dim(); ++i) m(i, 0) = v[i];
    return m;
}

// a * a^H, filled exactly Hermitian.
inline CMat gram_outer(const CMat& a) {
    CMat g(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.rows(); ++j) {
            cplx s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * std::conj(a(j, k));
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    for (std::size_t i = 0; i < a.rows(); ++i) g(i, i) = cplx(g(i, i).real(), 0.0);
    return g;
}

// a * diag(d) * a^H for real nonnegative weights d.
inline CMat weighted_gram_outer(const CMat& a, const std::vector<double>& d) {
    if (d.size() != a.cols()) throw std::invalid_argument("weighted_gram_outer: weight count mismatch");
    CMat g(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.rows(); ++j) {
            cplx s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += d[k] * a(i, k) * std::conj(a(j, k));
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    for (std::size_t i = 0; i < a.rows(); ++i) g(i, i) = cplx(g(i, i).real(), 0.0);
    return g;
}

inline void add_identity(CMat& a, double c = 1.0) {
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) a(i, i) += c;
}

inline double hermitian_asymmetry(const CMat& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(s);
}

inline void require_hermitian(const CMat& a, const char* who) {
    if (a.rows() != a.cols() || hermitian_asymmetry(a) > 1e-9 * std::max(1.0, a.frobenius_norm()))
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}

// Deterministic phase convention: the first entry of w with non-negligible
// magnitude is made real nonnegative.
inline void fix_phase(CVec& w) {
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const double m = std::abs(w[i]);
        if (m > 1e-12) {
            w *= std::conj(w[i]) / m;
            w[i] = cplx(std::abs(w[i]), 0.0);
            return;
        }
    }
}

// Unit vector orthogonal to a nonzero complex 2-vector.
inline CVec orth_complement(const CVec& v) {
    if (v.dim() != 2) throw std::invalid_argument("orth_complement: expected a 2-vector");
    if (v.norm() < 1e-14) throw std::invalid_argument("orth_complement: degenerate direction");
    const CVec u = normalized(v);
    CVec w{-std::conj(u[1]), std::conj(u[0])};
    fix_phase(w);
    return w;
}

enum class LogBase { Nats, Bits };

// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
inline CMat cholesky(const CMat& a) {
    require_hermitian(a, "cholesky");
    const std::size_t n = a.rows();
    CMat l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0)) throw std::domain_error("cholesky: not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / l(j, j).real();
        }
    }
    return l;
}

inline double logdet_posdef(const CMat& a, LogBase base = LogBase::Nats) {
    const CMat l = cholesky(a);
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::log(l(i, i).real());
    s *= 2.0;
    return base == LogBase::Nats ? s : s / std::log(2.0);
}

// log det(W + S) - log det(W): mutual-information style ratio of two
// Hermitian positive definite forms, stable for widely scaled summands.
inline double logdet_ratio(const CMat& w_plus_s, const CMat& w, LogBase base = LogBase::Bits) {
    return logdet_posdef(w_plus_s, base) - logdet_posdef(w, base);
}

namespace detail {

struct EigWork {
    std::vector<double> values;  // descending
    CMat vectors;                // columns paired with values
};

// Cyclic Jacobi for Hermitian matrices. Adequate for the <= 16x16 sizes used
// here; each rotation is applied as a full small-matrix product.
inline EigWork jacobi_hermitian(CMat a) {
    require_hermitian(a, "eig_hermitian");
    const std::size_t n = a.rows();
    CMat v = CMat::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    auto off_norm = [&]() {
        double s = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 60 && off_norm() > 1e-14 * scale; ++sweep) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-300) continue;
                const cplx phase = apq / m;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * m);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Unitary plane rotation J (phase-aligned so the pivot is real).
                CMat j = CMat::identity(n);
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -s * std::conj(phase);
                j(q, q) = c * std::conj(phase);

                a = j.adjoint() * a * j;
                v = v * j;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
    }
    if (off_norm() > 1e-10 * scale) throw std::runtime_error("eig_hermitian: Jacobi failed to converge");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

    EigWork out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        CVec col = v.col(order[k]);
        fix_phase(col);
        out.vectors.set_col(k, col);
    }
    return out;
}

struct QrPivoted {
    CMat q;                         // m x m unitary
    CMat r;                        // m x n upper triangular (column-permuted input)
    std::vector<std::size_t> perm;  // column permutation applied
    std::size_t rank = 0;
};

// Householder QR with column pivoting; rank detected from the R diagonal.
inline QrPivoted qr_col_pivot(const CMat& b) {
    const std::size_t m = b.rows(), n = b.cols();
    QrPivoted out;
    out.r = b;
    out.q = CMat::identity(m);
    out.perm.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.perm[j] = j;

    std::vector<double> colnorm(n);
    const std::size_t steps = std::min(m, n);
    for (std::size_t j = 0; j < steps; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            double s = 0;
            for (std::size_t i = j; i < m; ++i) s += std::norm(out.r(i, k));
            colnorm[k] = s;
        }
        const std::size_t piv = static_cast<std::size_t>(
            std::max_element(colnorm.begin() + static_cast<long>(j), colnorm.end()) - colnorm.begin());
        if (piv != j) {
            for (std::size_t i = 0; i < m; ++i) std::swap(out.r(i, piv), out.r(i, j));
            std::swap(out.perm[piv], out.perm[j]);
        }
        const double xnorm = std::sqrt(colnorm[piv]);
        if (xnorm <= 1e-300) continue;

        // Householder vector v: reflect column tail onto -phase * |x| e1.
        CVec v(m - j);
        for (std::size_t i = j; i < m; ++i) v[i - j] = out.r(i, j);
        const cplx x0 = v[0];
        const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
        v[0] += phase * xnorm;
        const double vnorm2 = v.norm2();
        if (vnorm2 <= 1e-300) continue;

        // Apply I - 2 v v^H / |v|^2 to R (left) and accumulate into Q (right).
        for (std::size_t k = j; k < n; ++k) {
            cplx s = 0;
            for (std::size_t i = j; i < m; ++i) s += std::conj(v[i - j]) * out.r(i, k);
            s *= 2.0 / vnorm2;
            for (std::size_t i = j; i < m; ++i) out.r(i, k) -= s * v[i - j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            cplx s = 0;
            for (std::size_t k = j; k < m; ++k) s += out.q(i, k) * v[k - j];
            s *= 2.0 / vnorm2;
            for (std::size_t k = j; k < m; ++k) out.q(i, k) -= s * std::conj(v[k - j]);
        }
        out.r(j, j) = -phase * xnorm;
        for (std::size_t i = j + 1; i < m; ++i) out.r(i, j) = 0.0;
    }

    double rmax = 0;
    for (std::size_t j = 0; j < steps; ++j) rmax = std::max(rmax, std::abs(out.r(j, j)));
    const double tol = static_cast<double>(std::max(m, n)) * 2.3e-16 * rmax;
    for (std::size_t j = 0; j < steps; ++j)
        if (std::abs(out.r(j, j)) > tol) ++out.rank;
    return out;
}

}  // namespace detail

inline std::vector<double> eig_hermitian(const CMat& a) { return detail::jacobi_hermitian(a).values; }

inline std::pair<std::vector<double>, CMat> eig_hermitian_vectors(const CMat& a) {
    auto w = detail::jacobi_hermitian(a);
    return {std::move(w.values), std::move(w.vectors)};
}

// Orthonormal basis (M x k) of the null space of the N x M matrix a.
inline CMat null_space_basis(const CMat& a, std::size_t k) {
    const std::size_t m = a.cols();
    const auto qr = detail::qr_col_pivot(a.adjoint());
    if (m < qr.rank + k)
        throw std::invalid_argument("null_space_basis: insufficient null dimension");
    CMat basis(m, k);
    for (std::size_t j = 0; j < k; ++j) {
        CVec col = qr.q.col(qr.rank + j);
        fix_phase(col);
        basis.set_col(j, col);
    }
    return basis;
}

// Orthonormal basis (M x N) of the conjugate row space of the N x M matrix a.
// Requires a to have full row rank.
inline CMat range_basis(const CMat& a) {
    const std::size_t n = a.rows(), m = a.cols();
    const auto qr = detail::qr_col_pivot(a.adjoint());
    if (qr.rank < n) throw std::invalid_argument("range_basis: rank-deficient input");
    CMat basis(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        CVec col = qr.q.col(j);
        fix_phase(col);
        basis.set_col(j, col);
    }
    return basis;
}

}  // namespace icdof
