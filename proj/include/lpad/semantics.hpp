#pragma once

// Possible-world semantics: selections, worlds, perfect-model checking and
// exact probabilities by enumeration.

#include "lpad/choice.hpp"
#include "lpad/grounder.hpp"
#include "lpad/kernels.hpp"
#include "lpad/slpdnf.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lpad {

/// One atomic choice per instance of the enumerated space.
using Selection = CompositeChoice;

/// Streams every head assignment over a set of instances exactly once, the
/// first instance varying slowest.
class SelectionEnumerator {
public:
    /// `over` defaults to every instance of `es`. LimitError when the count passes `limit`.
    explicit SelectionEnumerator(const EventSpace& es, std::optional<std::vector<InstanceKey>> over = std::nullopt,
                                 std::uint64_t limit = kernels::kWorldLimit);

    std::uint64_t count() const noexcept { return total_; }
    bool next(Selection& out);

private:
    std::vector<InstanceKey> keys_;
    std::vector<int> radix_;
    std::uint64_t total_ = 0;
    std::uint64_t at_ = 0;
};

struct World {
    std::vector<Clause> clauses;
    Selection origin;
};

World world_of(const Selection& s, const GroundProgram& g);
double world_prob(const Selection& s, const EventSpace& es);

/// Truth of a ground query in the perfect model of a stratified world,
/// computed stratum by stratum. Reference implementation over plain clause
/// sets; the kernels do the same on interned atoms.
bool model_check(const World& w, const Query& q);

enum class Strategy { Oracle, Engine };

struct ProbOptions {
    kernels::Exec exec = kernels::Exec::Parallel;
    EngineOptions engine;
    std::uint64_t limit = kernels::kWorldLimit;
};

/// Oracle: sum over the worlds of the pruned, query-relevant grounding.
/// Engine: probability of the disjunction of the tree's success expressions.
double success_prob(const Query& q, const GroundProgram& g, Strategy s, const ProbOptions& opts = {});

/// Enumerates only the instances mentioned in `e`.
double event_prob(const ChoiceExpr& e, const EventSpace& es, const ProbOptions& opts = {});
double derivation_prob(const Derivation& d, const EventSpace& es, const ProbOptions& opts = {});

/// The grounding the oracle enumerates for `q`.
GroundProgram oracle_grounding(const GroundProgram& g, const Query& q);

} // namespace lpad
