#pragma once

#include <stdexcept>
#include <string>

namespace radtrim::core {

/// Input file could not be parsed (CLI exit code 2).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Series, pools, or intervals do not line up (CLI exit code 3).
class AlignmentError : public std::runtime_error {
public:
    explicit AlignmentError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radtrim::core
