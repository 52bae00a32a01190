#pragma once

// World-enumeration kernels. Each comes in a serial form, kept as the
// reference, and an OpenMP form that splits the index range into fixed
// chunks and merges the partial sums in chunk order, so the result does not
// depend on the thread count.

#include "lpad/choice.hpp"
#include "lpad/grounder.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace lpad::kernels {

enum class Exec { Serial, Parallel };

inline constexpr std::uint64_t kWorldLimit = std::uint64_t{1} << 30;

/// Number of head assignments over the given radices; LimitError past `limit`.
std::uint64_t assignment_count(const std::vector<int>& radix, std::uint64_t limit = kWorldLimit);

/// Writes the 1-based heads of assignment `index`; the first position varies slowest.
void decode(std::uint64_t index, const std::vector<int>& radix, int* heads);

/// A ground program with interned atoms and clauses grouped by stratum.
class CompiledProgram {
public:
    /// Throws ProgramError when the program is not stratified.
    explicit CompiledProgram(const GroundProgram& g);

    std::size_t instance_count() const noexcept { return probs_.size(); }
    const std::vector<int>& radix() const noexcept { return radix_; }
    /// -1 when the atom occurs nowhere in the program.
    int atom_id(const Atom& a) const;
    std::size_t atom_count() const noexcept { return atoms_.size(); }

    double world_prob(const int* heads) const;
    /// Perfect model of the world picked by `heads`; truth[a] for every atom id.
    void model(const int* heads, std::vector<char>& truth) const;

    /// Ground query literals as (atom id, positive).
    std::vector<std::pair<int, bool>> compile_query(const Query& q) const;
    bool holds(const int* heads, const std::vector<std::pair<int, bool>>& q, std::vector<char>& truth) const;

private:
    struct Rule {
        int head = 0;
        int instance = -1; // -1: derived, always present
        int head_index = 0;
        std::vector<int> pos;
        std::vector<int> neg;
    };

    int intern(const Atom& a);

    std::map<Atom, int> ids_;
    std::vector<Atom> atoms_;
    std::vector<std::vector<Rule>> strata_;
    std::vector<int> radix_;
    std::vector<std::vector<double>> probs_;
};

/// Σ P(ω) over the worlds where the query holds.
double query_prob(const CompiledProgram& p, const Query& q, Exec exec, std::uint64_t limit = kWorldLimit);

/// Σ P(assignment) over head assignments to `order` satisfying `e`.
double expr_prob(const ChoiceExpr& e, const std::vector<InstanceKey>& order, const EventSpace& es, Exec exec,
                 std::uint64_t limit = kWorldLimit);

} // namespace lpad::kernels
