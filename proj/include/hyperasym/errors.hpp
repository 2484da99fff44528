#pragma once

#include <stdexcept>
#include <string>

namespace hyperasym {

// Input lies outside the mathematical domain of the routine.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// An API precondition was broken (mismatched centers, bad truncation
// orders, calling a specialised evaluator outside its regime, ...).
struct contract_violation : std::logic_error {
    using std::logic_error::logic_error;
};

// A numerical routine could not certify its accuracy target.  `achieved`
// carries the best error bound that was actually reached.
struct accuracy_error : std::runtime_error {
    accuracy_error(const std::string& msg, double achieved_bound)
        : std::runtime_error(msg), achieved(achieved_bound) {}
    double achieved;
};

}  // namespace hyperasym
