#ifndef CSTREE_ERROR_HPP
#define CSTREE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cstree {

enum class Errc {
    NotACylinder,
    Overlap,
    Gap,
    BadCardinality,
    BadIndex,
    BadGraph,
    OverlappingSets,
    Precondition,
    ShapeMismatch,
    IncompleteFamily,
    NotSameStage,
    Unbalanced,
    BoundTooLarge,
    BudgetExceeded,
    NotP3,
    Parse,
    Io,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace cstree

#endif
