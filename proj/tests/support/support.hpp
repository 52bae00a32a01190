#pragma once

// Shared fixtures, random generators and brute-force oracles for the tests.

#include "lpad/choice.hpp"
#include "lpad/grounder.hpp"
#include "lpad/semantics.hpp"
#include "lpad/syntax.hpp"

#include <random>
#include <string>
#include <vector>

namespace lpad::testing {

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);

/// Fixture program grounded with covid.restrict applied.
GroundProgram load_restricted(const std::string& name);
Program load_program(const std::string& name);

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Random programs

struct RandomProgramLimits {
    std::size_t max_instances = 6;
    std::size_t max_heads = 4; // none included
    std::size_t max_constants = 3;
    bool allow_negation = true;
};

struct RandomCase {
    Program program;
    GroundProgram ground;
    std::vector<Query> queries; ///< ground queries over the program's predicates
    std::string text;           ///< printed program, for failure messages
};

/// Stratified, acyclic, range-restricted program whose grounding has at most
/// `max_instances` probabilistic instances.
RandomCase random_case(Rng& rng, const RandomProgramLimits& lim = {});

// ---------------------------------------------------------------------------
// Random choice expressions over a synthetic event space

/// `n` instances c1..cn with 2..max_heads heads each, random probabilities.
EventSpace random_space(Rng& rng, std::size_t n, std::size_t max_heads = 4);

ChoiceExpr random_expr(Rng& rng, const EventSpace& es, int depth);
CompositeChoice random_composite(Rng& rng, const EventSpace& es, std::size_t max_size, bool force_consistent);
ChoiceFamily random_family(Rng& rng, const EventSpace& es, std::size_t max_members, std::size_t max_size);

// ---------------------------------------------------------------------------
// Oracles

/// All total selections over the instances of `es`.
std::vector<Selection> all_selections(const EventSpace& es);

/// Restriction of a selection to a head assignment.
HeadAssignment assignment_of(const Selection& s);

/// Set of selections (over `es`) covered by some member of `k`.
std::vector<bool> covered_mask(const ChoiceFamily& k, const std::vector<Selection>& sel);
std::vector<bool> truth_mask(const ChoiceExpr& e, const std::vector<Selection>& sel);

/// Σ over all worlds of the full grounding where `q` holds (model_check).
double brute_prob(const Query& q, const GroundProgram& g);

} // namespace lpad::testing
