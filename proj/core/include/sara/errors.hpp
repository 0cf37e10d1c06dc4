#pragma once

#include <stdexcept>
#include <string>

namespace sara {

// A caller broke a documented precondition (e.g. asked for the SINR of a
// pair that is not transmitting).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Exact enumeration was requested for more pairs than the table guard allows.
class EnumerationLimit : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace sara
