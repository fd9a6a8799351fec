#include "gibbs/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gibbs {

using Idx = Eigen::Index;
using Offsets = std::vector<Idx>;

Eigen::Index hilbert_dim(int local_dim, std::size_t num_sites) {
    if (local_dim < 1) throw InvalidArgument("local dimension must be positive");
    Idx dim = 1;
    for (std::size_t i = 0; i < num_sites; ++i) {
        dim *= local_dim;
        if (dim > kDenseCap) {
            throw DimensionOverflow("Hilbert dimension " + std::to_string(local_dim) + "^" +
                                    std::to_string(num_sites) + " exceeds the dense cap " +
                                    std::to_string(kDenseCap));
        }
    }
    return dim;
}

Interval::Interval(Site lo_, Site hi_, int d) : lo(lo_), hi(hi_), local_dim(d) {
    if (lo > hi) throw InvalidArgument("interval requires lo <= hi");
    if (d < 1) throw InvalidArgument("local dimension must be positive");
}

Sites Interval::sites() const { return sites_range(lo, hi); }

Sites sites_union(const Sites& a, const Sites& b) {
    Sites out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Sites sites_intersection(const Sites& a, const Sites& b) {
    Sites out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Sites sites_difference(const Sites& a, const Sites& b) {
    Sites out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool sites_subset(const Sites& sub, const Sites& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

Sites sites_range(Site lo, Site hi) {
    Sites out;
    for (Site s = lo; s <= hi; ++s) out.push_back(s);
    return out;
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator() : matrix_(Matrix::Ones(1, 1)) {}

Operator::Operator(Sites support, Matrix matrix, int local_dim)
    : support_(std::move(support)), matrix_(std::move(matrix)), local_dim_(local_dim) {
    for (std::size_t i = 1; i < support_.size(); ++i) {
        if (support_[i - 1] >= support_[i]) throw InvalidArgument("operator support must be strictly increasing");
    }
    const Idx dim = hilbert_dim(local_dim_, support_.size());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw InvalidArgument("matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                              " but support requires dimension " + std::to_string(dim));
    }
}

Operator Operator::identity(Sites support, int local_dim) {
    const Idx dim = hilbert_dim(local_dim, support.size());
    return Operator(std::move(support), Matrix::Identity(dim, dim), local_dim);
}

Operator Operator::zero(Sites support, int local_dim) {
    const Idx dim = hilbert_dim(local_dim, support.size());
    return Operator(std::move(support), Matrix::Zero(dim, dim), local_dim);
}

Operator Operator::scalar(cplx value, int local_dim) {
    return Operator({}, Matrix::Constant(1, 1, value), local_dim);
}

Operator Operator::on_site(Site site, Matrix matrix) {
    const int d = static_cast<int>(matrix.rows());
    return Operator({site}, std::move(matrix), d);
}

Operator Operator::adjoint() const { return Operator(support_, matrix_.adjoint(), local_dim_); }

bool Operator::is_hermitian(double rel_tol) const {
    return linalg::hermitian_defect(matrix_) <= rel_tol * matrix_.norm();
}

void Operator::require_hermitian(const char* context) const {
    if (!is_hermitian()) {
        throw NotHermitian(std::string(context) + ": max |M - M^dagger| = " +
                           std::to_string(linalg::hermitian_defect(matrix_)));
    }
}

Operator& Operator::operator*=(cplx c) {
    matrix_ *= c;
    return *this;
}

Operator& Operator::operator+=(const Operator& other) {
    if (other.support_ != support_) throw SupportMismatch("in-place sum requires identical supports");
    matrix_ += other.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& other) {
    if (other.support_ != support_) throw SupportMismatch("in-place difference requires identical supports");
    matrix_ -= other.matrix_;
    return *this;
}

Operator operator*(cplx c, Operator op) { return op *= c; }
Operator operator*(Operator op, cplx c) { return op *= c; }

Operator operator+(const Operator& a, const Operator& b) {
    if (a.support() == b.support()) return Operator(a.support(), a.matrix() + b.matrix(), a.local_dim());
    const Sites u = sites_union(a.support(), b.support());
    Operator out = embed(a, u);
    out += embed(b, u);
    return out;
}

Operator operator-(const Operator& a, const Operator& b) {
    if (a.support() == b.support()) return Operator(a.support(), a.matrix() - b.matrix(), a.local_dim());
    const Sites u = sites_union(a.support(), b.support());
    Operator out = embed(a, u);
    out -= embed(b, u);
    return out;
}

// ---------------------------------------------------------------------------
// Index arithmetic

Offsets digit_offsets(const Sites& space, const Sites& subset, int local_dim) {
    Offsets offs{0};
    for (Site s : subset) {
        auto it = std::lower_bound(space.begin(), space.end(), s);
        if (it == space.end() || *it != s) throw SiteNotInSupport("site " + std::to_string(s) + " not in space");
        const auto pos = static_cast<std::size_t>(it - space.begin());
        Idx weight = 1;
        for (std::size_t k = pos + 1; k < space.size(); ++k) weight *= local_dim;
        Offsets next;
        next.reserve(offs.size() * static_cast<std::size_t>(local_dim));
        for (Idx o : offs) {
            for (int digit = 0; digit < local_dim; ++digit) next.push_back(o + digit * weight);
        }
        offs = std::move(next);
    }
    return offs;
}

namespace {

template <typename Mat>
Mat embed_kernel(const Mat& a, const Offsets& own, const Offsets& rest, Idx dim) {
    Mat out = Mat::Zero(dim, dim);
    const Idx ds = static_cast<Idx>(own.size());
    for (Idx r : rest) {
        for (Idx j = 0; j < ds; ++j) {
            const Idx col = own[j] + r;
            for (Idx i = 0; i < ds; ++i) out(own[i] + r, col) = a(i, j);
        }
    }
    return out;
}

template <typename Mat>
Mat trace_kernel(const Mat& a, const Offsets& kept, const Offsets& traced) {
    const Idx dk = static_cast<Idx>(kept.size());
    Mat out = Mat::Zero(dk, dk);
    for (Idx t : traced) {
        for (Idx j = 0; j < dk; ++j) {
            const Idx col = kept[j] + t;
            for (Idx i = 0; i < dk; ++i) out(i, j) += a(kept[i] + t, col);
        }
    }
    return out;
}

struct ComposePlan {
    // Offsets of the P (only a), K (shared), Q (only b) groups in each space.
    Offsets a_p, a_k, b_k, b_q, u_p, u_k, u_q;
    Idx dim_u = 1;
};

template <typename Mat>
Mat compose_kernel(const Mat& a, const Mat& b, const ComposePlan& pl) {
    const Idx dp = static_cast<Idx>(pl.a_p.size());
    const Idx dk = static_cast<Idx>(pl.a_k.size());
    const Idx dq = static_cast<Idx>(pl.b_q.size());

    // ma[(p, k, p'), k'] = a[(p, k), (p', k')]
    Mat ma(dp * dk * dp, dk);
    for (Idx kk = 0; kk < dk; ++kk) {
        for (Idx pp = 0; pp < dp; ++pp) {
            const Idx col = pl.a_p[pp] + pl.a_k[kk];
            for (Idx k = 0; k < dk; ++k) {
                for (Idx p = 0; p < dp; ++p) ma(p + dp * (k + dk * pp), kk) = a(pl.a_p[p] + pl.a_k[k], col);
            }
        }
    }
    // mb[k', (q, k'', q')] = b[(k', q), (k'', q')]
    Mat mb(dk, dq * dk * dq);
    for (Idx qq = 0; qq < dq; ++qq) {
        for (Idx k2 = 0; k2 < dk; ++k2) {
            const Idx bcol = pl.b_k[k2] + pl.b_q[qq];
            for (Idx q = 0; q < dq; ++q) {
                const Idx mcol = q + dq * (k2 + dk * qq);
                for (Idx k1 = 0; k1 < dk; ++k1) mb(k1, mcol) = b(pl.b_k[k1] + pl.b_q[q], bcol);
            }
        }
    }
    const Mat r = linalg::gemm(ma, mb);
    Mat out(pl.dim_u, pl.dim_u);
    for (Idx qq = 0; qq < dq; ++qq) {
        for (Idx k2 = 0; k2 < dk; ++k2) {
            for (Idx q = 0; q < dq; ++q) {
                const Idx rcol = q + dq * (k2 + dk * qq);
                const Idx q_row = pl.u_q[q];
                const Idx q_col = pl.u_q[qq];
                for (Idx pp = 0; pp < dp; ++pp) {
                    const Idx ucol = pl.u_p[pp] + pl.u_k[k2] + q_col;
                    for (Idx k = 0; k < dk; ++k) {
                        for (Idx p = 0; p < dp; ++p) {
                            out(pl.u_p[p] + pl.u_k[k] + q_row, ucol) = r(p + dp * (k + dk * pp), rcol);
                        }
                    }
                }
            }
        }
    }
    return out;
}

void require_same_dim(const Operator& a, const Operator& b) {
    if (a.local_dim() != b.local_dim()) throw SupportMismatch("operands have different local dimensions");
}

}  // namespace

Operator embed(const Operator& op, const Sites& target) {
    if (!sites_subset(op.support(), target)) {
        throw SupportNotContained("operator support is not contained in the target sites");
    }
    if (op.support() == target) return op;
    const int d = op.local_dim();
    const Idx dim = hilbert_dim(d, target.size());
    const Offsets own = digit_offsets(target, op.support(), d);
    const Offsets rest = digit_offsets(target, sites_difference(target, op.support()), d);
    if (linalg::is_real(op.matrix())) {
        linalg::RMat m = embed_kernel<linalg::RMat>(op.matrix().real(), own, rest, dim);
        return Operator(target, m.cast<cplx>(), d);
    }
    return Operator(target, embed_kernel<Matrix>(op.matrix(), own, rest, dim), d);
}

Operator embed(const Operator& op, const Interval& target) {
    if (target.local_dim != op.local_dim()) throw SupportMismatch("local dimension differs from the target interval");
    return embed(op, target.sites());
}

Operator compose(const Operator& a, const Operator& b) {
    require_same_dim(a, b);
    const int d = a.local_dim();
    if (a.support() == b.support()) return Operator(a.support(), linalg::multiply(a.matrix(), b.matrix()), d);

    const Sites u = sites_union(a.support(), b.support());
    ComposePlan pl;
    pl.dim_u = hilbert_dim(d, u.size());
    const Sites p = sites_difference(a.support(), b.support());
    const Sites k = sites_intersection(a.support(), b.support());
    const Sites q = sites_difference(b.support(), a.support());
    pl.a_p = digit_offsets(a.support(), p, d);
    pl.a_k = digit_offsets(a.support(), k, d);
    pl.b_k = digit_offsets(b.support(), k, d);
    pl.b_q = digit_offsets(b.support(), q, d);
    pl.u_p = digit_offsets(u, p, d);
    pl.u_k = digit_offsets(u, k, d);
    pl.u_q = digit_offsets(u, q, d);

    const bool ra = linalg::is_real(a.matrix());
    const bool rb = linalg::is_real(b.matrix());
    if (ra && rb) {
        linalg::RMat m = compose_kernel<linalg::RMat>(a.matrix().real(), b.matrix().real(), pl);
        return Operator(u, m.cast<cplx>(), d);
    }
    return Operator(u, compose_kernel<Matrix>(a.matrix(), b.matrix(), pl), d);
}

Operator compose(std::initializer_list<const Operator*> factors) {
    if (factors.size() == 0) return Operator();
    auto it = factors.begin();
    Operator out = **it;
    for (++it; it != factors.end(); ++it) out = compose(out, **it);
    return out;
}

Operator tensor(const Operator& a, const Operator& b) {
    if (!sites_intersection(a.support(), b.support()).empty()) {
        throw SupportMismatch("tensor product requires disjoint supports");
    }
    return compose(a, b);
}

Operator partial_trace(const Operator& op, const Sites& traced) {
    if (!sites_subset(traced, op.support())) {
        throw SiteNotInSupport("traced sites are not all in the operator support");
    }
    if (traced.empty()) return op;
    const int d = op.local_dim();
    const Sites kept = sites_difference(op.support(), traced);
    const Offsets ko = digit_offsets(op.support(), kept, d);
    const Offsets to = digit_offsets(op.support(), traced, d);
    if (linalg::is_real(op.matrix())) {
        linalg::RMat m = trace_kernel<linalg::RMat>(op.matrix().real(), ko, to);
        return Operator(kept, m.cast<cplx>(), d);
    }
    return Operator(kept, trace_kernel<Matrix>(op.matrix(), ko, to), d);
}

Operator reduce_to(const Operator& op, const Sites& kept) {
    if (!sites_subset(kept, op.support())) throw SiteNotInSupport("kept sites are not all in the operator support");
    return partial_trace(op, sites_difference(op.support(), kept));
}

Operator conditional_expectation(const Operator& op, const Sites& kept) {
    const Sites kept_in = sites_intersection(kept, op.support());
    if (kept_in.size() != kept.size()) throw SiteNotInSupport("kept sites are not all in the operator support");
    const Sites traced = sites_difference(op.support(), kept);
    Operator out = partial_trace(op, traced);
    const double norm = static_cast<double>(hilbert_dim(op.local_dim(), traced.size()));
    out *= cplx(1.0 / norm, 0.0);
    return out;
}

cplx trace_product(const Operator& a, const Operator& b) {
    require_same_dim(a, b);
    // Tr((a x 1)(1 x b)) = Tr_K(tr_P(a) tr_Q(b)) with K the shared sites.
    const Sites k = sites_intersection(a.support(), b.support());
    const Operator ra = reduce_to(a, k);
    const Operator rb = reduce_to(b, k);
    return (ra.matrix().transpose().array() * rb.matrix().array()).sum();
}

// ---------------------------------------------------------------------------
// Spectral calculus

bool ScalarFunction::needs_positive() const {
    return kind == Kind::Log || kind == Kind::Inv || kind == Kind::Sqrt || kind == Kind::Power;
}

SpectralDecomposition spectral_decomposition(const Operator& op) {
    op.require_hermitian("spectral_decomposition");
    SpectralDecomposition sd;
    sd.support = op.support();
    sd.local_dim = op.local_dim();
    sd.system = linalg::hermitian_eigen(op.matrix());
    return sd;
}

Operator apply_function(const SpectralDecomposition& spectral, const ScalarFunction& f) {
    const Eigen::VectorXd& w = spectral.system.values;
    if (f.needs_positive() && w.size() > 0) {
        const double lo = w(0);
        const double hi = w(w.size() - 1);
        if (!(lo > 1e-13 * hi) || !(hi > 0.0)) {
            throw SingularOperator("minimum eigenvalue " + std::to_string(lo) + " is not above 1e-13 * " +
                                   std::to_string(hi));
        }
    }
    using K = ScalarFunction::Kind;
    if (f.complex_valued()) {
        Eigen::VectorXcd v(w.size());
        for (Idx i = 0; i < w.size(); ++i) v(i) = std::exp(f.s * w(i));
        return Operator(spectral.support, linalg::reconstruct(spectral.system, v), spectral.local_dim);
    }
    Eigen::VectorXd v(w.size());
    for (Idx i = 0; i < w.size(); ++i) {
        const double x = w(i);
        switch (f.kind) {
            case K::Exp: v(i) = std::exp(x); break;
            case K::ComplexExp: v(i) = std::exp(f.s.real() * x); break;
            case K::Log: v(i) = std::log(x); break;
            case K::Inv: v(i) = 1.0 / x; break;
            case K::Sqrt: v(i) = std::sqrt(x); break;
            case K::Power: v(i) = std::pow(x, f.q); break;
        }
    }
    return Operator(spectral.support, linalg::reconstruct(spectral.system, v), spectral.local_dim);
}

Operator matrix_function(const Operator& op, const ScalarFunction& f) {
    return apply_function(spectral_decomposition(op), f);
}

Operator inverse(const Operator& op) {
    return Operator(op.support(), linalg::inverse(op.matrix()), op.local_dim());
}

double operator_norm(const Operator& op) { return linalg::operator_norm(op.matrix()); }
double trace_norm(const Operator& op) { return linalg::trace_norm(op.matrix()); }
double hs_norm(const Operator& op) { return linalg::hs_norm(op.matrix()); }

namespace pauli {
Matrix I() { return Matrix::Identity(2, 2); }
Matrix X() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Matrix Y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
Matrix Z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

}  // namespace gibbs
