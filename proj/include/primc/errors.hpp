#pragma once

#include <stdexcept>
#include <string>

namespace primc {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MismatchedContext : error {
    using error::error;
};
struct DivergentProduct : error {
    using error::error;
};
struct InsufficientTruncation : error {
    using error::error;
};
struct NotAlphaConvertible : error {
    using error::error;
};
struct IndexOutOfRange : error {
    using error::error;
};
struct UnsupportedRank : error {
    using error::error;
};
struct InconsistentEnergy : error {
    using error::error;
};
struct Disconnected : error {
    using error::error;
};
struct BadPath : error {
    using error::error;
};
struct NotGrounded : error {
    using error::error;
};
struct InvalidSpec : error {
    using error::error;
};

}  // namespace primc
