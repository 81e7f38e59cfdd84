#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rspsim {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. The workhorse value type for
/// states, unitaries and measurement operators (dimensions stay tiny, <= 16).
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
        }
    }

    /// Build from nested braces: ComplexMatrix{{a, b}, {c, d}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        if (rows_ == 0) {
            throw std::invalid_argument("ComplexMatrix: empty initializer");
        }
        cols_ = rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw std::invalid_argument("ComplexMatrix: ragged initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
        return ComplexMatrix(rows, cols);
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// Column vector from amplitudes.
    static ComplexMatrix column(std::initializer_list<cplx> amps) {
        ComplexMatrix m(amps.size(), 1);
        std::size_t i = 0;
        for (cplx a : amps) m(i++, 0) = a;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& entries() const { return data_; }

    ComplexMatrix operator+(const ComplexMatrix& other) const {
        require_same_shape(other);
        ComplexMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + other.data_[k];
        return out;
    }

    ComplexMatrix operator-(const ComplexMatrix& other) const {
        require_same_shape(other);
        ComplexMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - other.data_[k];
        return out;
    }

    ComplexMatrix operator*(const ComplexMatrix& other) const {
        if (cols_ != other.rows_) {
            throw std::invalid_argument("ComplexMatrix: product dimension mismatch");
        }
        ComplexMatrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) {
                    out(i, j) += aik * other(k, j);
                }
            }
        }
        return out;
    }

    ComplexMatrix operator*(cplx s) const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * s;
        return out;
    }

    friend ComplexMatrix operator*(cplx s, const ComplexMatrix& m) { return m * s; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    cplx trace() const {
        require_square();
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest |a_ij - b_ij| over all entries.
    double max_abs_diff(const ComplexMatrix& other) const {
        require_same_shape(other);
        double m = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k) {
            m = std::max(m, std::abs(data_[k] - other.data_[k]));
        }
        return m;
    }

    bool approx_equal(const ComplexMatrix& other, double tau) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && max_abs_diff(other) <= tau;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Hermiticity defect, max |a_ij - conj(a_ji)|.
    double hermiticity_defect() const {
        require_square();
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i; j < cols_; ++j) {
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        }
        return m;
    }

    ComplexMatrix hermitized() const {
        require_square();
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            }
        }
        return out;
    }

    void require_square() const {
        if (!is_square()) throw std::invalid_argument("ComplexMatrix: square matrix required");
    }

private:
    void require_same_shape(const ComplexMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw std::invalid_argument("ComplexMatrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Kronecker product; (i*rows_b + k, j*cols_b + l) entry is a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

/// Partial trace over the subsystems not listed in `keep`. `dims` are the
/// subsystem dimensions in tensor order (most significant factor first);
/// kept subsystems appear in the output in ascending subsystem order.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho,
                                   const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
    rho.require_square();
    const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                              std::multiplies<>());
    if (total != rho.rows()) {
        throw std::invalid_argument("partial_trace: subsystem dimensions do not match matrix");
    }
    const std::size_t n = dims.size();
    std::vector<bool> kept(n, false);
    for (std::size_t s : keep) {
        if (s >= n) throw std::invalid_argument("partial_trace: subsystem index out of range");
        kept[s] = true;
    }

    // Strides of each subsystem index in the flattened row/column index.
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t s = n; s-- > 1;) {
        stride[s - 1] = stride[s] * dims[s];
    }

    std::size_t keep_dim = 1, trace_dim = 1;
    std::vector<std::size_t> keep_subs, trace_subs;
    for (std::size_t s = 0; s < n; ++s) {
        if (kept[s]) { keep_dim *= dims[s]; keep_subs.push_back(s); }
        else { trace_dim *= dims[s]; trace_subs.push_back(s); }
    }

    auto offset = [&](const std::vector<std::size_t>& subs, std::size_t combined) {
        // Decode a combined index over `subs` (row-major over those subsystems)
        // into a flattened offset.
        std::size_t off = 0;
        for (std::size_t s = subs.size(); s-- > 0;) {
            off += (combined % dims[subs[s]]) * stride[subs[s]];
            combined /= dims[subs[s]];
        }
        return off;
    };

    ComplexMatrix out(keep_dim, keep_dim);
    for (std::size_t i = 0; i < keep_dim; ++i) {
        const std::size_t ri = offset(keep_subs, i);
        for (std::size_t j = 0; j < keep_dim; ++j) {
            const std::size_t cj = offset(keep_subs, j);
            cplx sum = 0.0;
            for (std::size_t t = 0; t < trace_dim; ++t) {
                const std::size_t rt = offset(trace_subs, t);
                sum += rho(ri + rt, cj + rt);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

}  // namespace rspsim
