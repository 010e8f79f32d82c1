#pragma once

#include <stdexcept>
#include <string>

namespace tgtm {

/// Raised for malformed or inconsistent external data (files, datasets,
/// headers). Distinct from std::invalid_argument so callers can map it to a
/// data-error exit code.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tgtm
