#include "gjbd/matrix_set.hpp"

#include <stdexcept>
#include <string>

namespace gjbd {

MatrixSet::MatrixSet(std::vector<Matrix> mats) : mats_(std::move(mats))
{
    if (mats_.empty()) throw std::invalid_argument("matrix set must contain at least one matrix");
    n_ = mats_.front().rows();
    if (n_ < 1) throw std::invalid_argument("matrix order must be at least 1");
    for (std::size_t i = 0; i < mats_.size(); ++i)
    {
        const Matrix& m = mats_[i];
        if (m.rows() != n_ || m.cols() != n_)
            throw std::invalid_argument("matrix " + std::to_string(i) + " is not square of order " + std::to_string(n_));
        if (!m.allFinite()) throw std::invalid_argument("matrix " + std::to_string(i) + " has non-finite entries");
    }
}

double MatrixSet::squared_norm() const
{
    double s = 0.0;
    for (const Matrix& m : mats_) s += m.squaredNorm();
    return s;
}

MatrixSet MatrixSet::compress(const Matrix& basis) const
{
    if (basis.rows() != n_) throw std::invalid_argument("compress: basis row count does not match matrix order");
    std::vector<Matrix> out;
    out.reserve(mats_.size());
    for (const Matrix& m : mats_) out.push_back(basis.transpose() * m * basis);
    return MatrixSet(std::move(out));
}

}  // namespace gjbd
