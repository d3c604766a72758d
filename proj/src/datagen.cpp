#include "gjbd/datagen.hpp"

#include "gjbd/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gjbd {

double Rng::normal()
{
    if (spare_)
    {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

double noise_sigma(double snr)
{
    if (std::isinf(snr) && snr > 0) return 0.0;
    if (std::isnan(snr)) throw std::invalid_argument("snr must not be NaN");
    return std::pow(10.0, -snr / 20.0);
}

namespace {

Matrix normal_matrix(Rng& rng, Index rows, Index cols)
{
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

}  // namespace

ModelInstance generate_model(const Partition& p, Index m, double snr, std::uint64_t seed)
{
    if (m < 1) throw std::invalid_argument("generate_model: m must be at least 1");
    const Index n = p.order();
    const double sigma = noise_sigma(snr);
    Rng rng(seed);

    Matrix v;
    for (;;)
    {
        v = normal_matrix(rng, n, n);
        const Vector s = Eigen::JacobiSVD<Matrix>(v).singularValues();
        if (s(n - 1) > 0.0 && s(0) / s(n - 1) <= 1e8) break;
    }

    std::vector<Index> owner(static_cast<std::size_t>(n));
    for (Index j = 0; j < p.card(); ++j)
        for (Index k = 0; k < p.size(j); ++k) owner[static_cast<std::size_t>(p.offset(j) + k)] = j;

    std::vector<Matrix> d;
    std::vector<Matrix> a;
    d.reserve(static_cast<std::size_t>(m));
    a.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i)
    {
        Matrix di(n, n);
        // Noise is drawn even when sigma = 0 so that V and Bdiag(D_i) depend
        // on the seed only.
        for (Index c = 0; c < n; ++c)
            for (Index r = 0; r < n; ++r)
            {
                const double g = rng.normal();
                di(r, c) = owner[static_cast<std::size_t>(r)] == owner[static_cast<std::size_t>(c)] ? g : sigma * g;
            }
        a.push_back(v.transpose() * di * v);
        d.push_back(std::move(di));
    }

    return ModelInstance{MatrixSet(std::move(a)), v, v.inverse(), std::move(d), p, snr, seed};
}

NonuniqueExample nonunique_example(const std::vector<double>& a_coeffs, const std::vector<double>& b_coeffs)
{
    if (a_coeffs.empty() || a_coeffs.size() != b_coeffs.size())
        throw std::invalid_argument("nonunique_example: need equally many a and b coefficients");
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < a_coeffs.size(); ++i)
    {
        const double ai = a_coeffs[i], bi = b_coeffs[i];
        if (ai == 0.0 || bi == 0.0) throw std::invalid_argument("nonunique_example: coefficients must be nonzero");
        Matrix m = Matrix::Zero(4, 4);
        for (Index o : {0, 2})
        {
            m(o, o + 1) = ai;
            m(o + 1, o) = ai;
            m(o + 1, o + 1) = bi;
        }
        mats.push_back(m);
    }
    Matrix w4(4, 4);
    w4 << 1, 0, 0, -1,
          0, 1, 0, 0,
          0, 1, 1, 0,
          0, 0, 0, 1;
    return NonuniqueExample{MatrixSet(std::move(mats)), w4};
}

MatrixSet augment_identity(const MatrixSet& a)
{
    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(a.count() + 1));
    mats.push_back(Matrix::Identity(a.order(), a.order()));
    for (const Matrix& m : a) mats.push_back(m);
    return MatrixSet(std::move(mats));
}

}  // namespace gjbd
