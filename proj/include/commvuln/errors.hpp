#pragma once

#include <stdexcept>
#include <string>

namespace commvuln {

/// Malformed or unusable input (edge lists, configuration). CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pipeline stage cannot proceed on otherwise well-formed input. CLI exit code 3.
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace commvuln
