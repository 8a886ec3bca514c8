#pragma once

#include <stdexcept>
#include <string>

namespace scrollcount {

// Error taxonomy. Each class corresponds to a distinct CLI exit code so that
// callers (and shell scripts) can tell a malformed problem from an
// out-of-scope one from a cache corruption.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A linear-space condition outside the admissible dimension range.
struct InvalidConditionError : Error {
    using Error::Error;
};

// Condition dimensions do not add up to the family dimension (the problem is
// not zero-dimensional), or a cycle-class query has mismatched grading.
struct DimensionError : Error {
    using Error::Error;
};

// The degeneration recursion refuses the problem: unbalanced bidegree, or no
// certified specialization order exists.
struct ScopeError : Error {
    using Error::Error;
};

// A leaf problem whose incidence pattern falls outside the supported
// resolution catalog. Always a refusal, never a guess.
struct BaseCaseGapError : ScopeError {
    using ScopeError::ScopeError;
};

// The associativity solver exhausted its budget (or its relation supply)
// before pinning the requested invariant.
struct UndeterminedError : Error {
    using Error::Error;
};

// A persisted value disagrees with a recomputed one, or the cache file is
// malformed. Fatal: caches are append/merge-only.
struct CacheIntegrityError : Error {
    using Error::Error;
};

// An audit calculator was handed an internally inconsistent configuration.
struct AuditError : Error {
    using Error::Error;
};

} // namespace scrollcount
