#ifndef VCSNDP_ERRORS_HPP
#define VCSNDP_ERRORS_HPP

#include <stdexcept>

namespace vcsndp {

/// A search or enumeration hit its configured work limit. Never silently approximated.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requirements cannot be met, even by buying every edge (or fractionally).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vcsndp

#endif // VCSNDP_ERRORS_HPP
