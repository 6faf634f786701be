#ifndef CSTREE_EXEC_HPP
#define CSTREE_EXEC_HPP

namespace cstree {

// Kernels with an OpenMP path keep a serial reference; results are identical either way.
enum class Exec { Serial, Parallel };

// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace cstree

#endif
