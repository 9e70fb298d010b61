#pragma once

#include <stdexcept>
#include <string>

namespace fgcp {

// Raised when an orthogonal-tree construction cannot be completed,
// either because K exceeds the feasible count for n or because a
// greedy round ran out of unused edges. Carries the 1-based index
// of the tree that failed.
class CapacityError : public std::runtime_error {
public:
    CapacityError(int tree_index, const std::string& what)
        : std::runtime_error(what), tree_index_(tree_index) {}
    int tree_index() const noexcept { return tree_index_; }

private:
    int tree_index_;
};

// Raised when every split in the scan window is non-evaluable.
class ScanError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised on malformed input files; carries a 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(long line, const std::string& what)
        : std::runtime_error(what), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

}
