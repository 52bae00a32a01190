#pragma once

// Randomised property suites shared by the doctest binaries and the
// acceptance runner. Each report counts cases and counterexamples.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lpad::testing {

struct PropertyReport {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure; ///< description of the first counterexample

    bool ok() const { return failures == 0 && cases > 0; }
};

/// Boolean-algebra axioms, double negation, De Morgan, dnf soundness and
/// idempotence, gamma coherence, duals complement, mins, and the mins/hits
/// union identity; `cases` random instances per property.
std::vector<PropertyReport> algebra_properties(std::uint64_t seed, std::size_t cases);

/// The same identity with otimes (inconsistent unions dropped) on the left.
/// Not an invariant: it has counterexamples; reported for reference only.
PropertyReport filtered_union_probe(std::uint64_t seed, std::size_t cases);

/// Selection-level soundness and completeness of expl on random stratified
/// programs, plus oracle/engine/transform probability agreement.
std::vector<PropertyReport> program_properties(std::uint64_t seed, std::size_t programs);

} // namespace lpad::testing
