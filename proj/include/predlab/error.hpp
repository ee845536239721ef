#ifndef PREDLAB_ERROR_HPP
#define PREDLAB_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace predlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PREDLAB_DEFINE_ERROR(Name)                 \
    class Name : public Error {                    \
    public:                                        \
        explicit Name(const std::string& what)     \
            : Error(std::string(#Name ": ") + what) \
        {}                                         \
    }

PREDLAB_DEFINE_ERROR(InvalidArgument);
PREDLAB_DEFINE_ERROR(QuadratureNonConvergent);
PREDLAB_DEFINE_ERROR(Unclassifiable);
PREDLAB_DEFINE_ERROR(UnsupportedShape);
PREDLAB_DEFINE_ERROR(MultiSegment);
PREDLAB_DEFINE_ERROR(NotSymmetric);
PREDLAB_DEFINE_ERROR(OptimizerStalled);
PREDLAB_DEFINE_ERROR(NotNonnegative);
PREDLAB_DEFINE_ERROR(RootPairingFailed);
PREDLAB_DEFINE_ERROR(WindowTooShort);
PREDLAB_DEFINE_ERROR(PrecisionMismatch);
PREDLAB_DEFINE_ERROR(SchemaError);
PREDLAB_DEFINE_ERROR(IoError);

#undef PREDLAB_DEFINE_ERROR

/// A Toeplitz pivot became nonpositive: precision is exhausted at order n.
class LostPositivity : public Error {
public:
    explicit LostPositivity(std::size_t n)
        : Error("LostPositivity: pivot nonpositive at order " + std::to_string(n)), order_(n)
    {}
    [[nodiscard]] std::size_t order() const { return order_; }

private:
    std::size_t order_;
};

}  // namespace predlab

#endif
