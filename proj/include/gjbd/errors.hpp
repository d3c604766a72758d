#pragma once

#include <stdexcept>
#include <string>

namespace gjbd {

class Error : public std::runtime_error
{
 public:
    using std::runtime_error::runtime_error;
};

/// An underlying dense eigen/SVD iteration failed to converge.
class NumericalFailure : public Error
{
 public:
    using Error::Error;
};

/// Two eigenvalue clusters share (numerically) an eigenvalue, so the
/// Sylvester equation coupling them has no meaningful solution.
class InseparableClusters : public Error
{
 public:
    InseparableClusters(int first, int second, const std::string& what)
        : Error(what), first_(first), second_(second)
    {
    }

    int first() const { return first_; }
    int second() const { return second_; }

 private:
    int first_;
    int second_;
};

/// A column block handed to an orthonormalization is numerically rank deficient.
class DegenerateBasis : public Error
{
 public:
    using Error::Error;
};

/// A one-step split cannot produce two blocks for this matrix set.
class Unsplittable : public Error
{
 public:
    using Error::Error;
};

}  // namespace gjbd
