#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gjbd {

using Index  = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A family {A_1, ..., A_m} of real square matrices of a common order n.
/// Construction validates shape and finiteness; the set is immutable afterwards.
class MatrixSet
{
 public:
    explicit MatrixSet(std::vector<Matrix> mats);

    Index order() const { return n_; }
    Index count() const { return static_cast<Index>(mats_.size()); }

    const Matrix& operator[](Index i) const { return mats_[static_cast<std::size_t>(i)]; }
    const std::vector<Matrix>& matrices() const { return mats_; }

    auto begin() const { return mats_.begin(); }
    auto end() const { return mats_.end(); }

    /// Sum of squared Frobenius norms, the natural scale for cost values.
    double squared_norm() const;

    /// The congruence-compressed set {B^T A_i B}; B may be rectangular.
    MatrixSet compress(const Matrix& basis) const;

 private:
    std::vector<Matrix> mats_;
    Index n_ = 0;
};

}  // namespace gjbd
