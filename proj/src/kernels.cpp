#include "lpad/kernels.hpp"

#include "lpad/error.hpp"
#include "lpad/numeric.hpp"

#include <omp.h>

#include <algorithm>

namespace lpad::kernels {

std::uint64_t assignment_count(const std::vector<int>& radix, std::uint64_t limit) {
    std::uint64_t total = 1;
    for (int r : radix) {
        if (r <= 0)
            return 0;
        if (total > limit / static_cast<std::uint64_t>(r))
            throw LimitError("more than " + std::to_string(limit) + " head assignments to enumerate");
        total *= static_cast<std::uint64_t>(r);
    }
    return total;
}

void decode(std::uint64_t index, const std::vector<int>& radix, int* heads) {
    for (std::size_t i = radix.size(); i-- > 0;) {
        const auto r = static_cast<std::uint64_t>(radix[i]);
        heads[i] = static_cast<int>(index % r) + 1;
        index /= r;
    }
}

namespace {

// Odometer step matching decode's order.
inline void increment(const std::vector<int>& radix, int* heads) {
    for (std::size_t i = radix.size(); i-- > 0;) {
        if (heads[i] < radix[i]) {
            ++heads[i];
            return;
        }
        heads[i] = 1;
    }
}

// Fixed partition, independent of the thread count.
constexpr std::uint64_t kChunks = 64;

template <class Weight>
double enumerate(const std::vector<int>& radix, std::uint64_t total, Exec exec, Weight&& weight) {
    if (total == 0)
        return 0.0;
    if (exec == Exec::Serial) {
        std::vector<int> heads(radix.size() + 1, 1);
        CompensatedSum acc;
        for (std::uint64_t i = 0; i < total; ++i) {
            acc.add(weight(heads.data()));
            increment(radix, heads.data());
        }
        return acc.value();
    }
    const std::uint64_t chunks = std::min(total, kChunks);
    std::vector<CompensatedSum> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const auto uc = static_cast<std::uint64_t>(c);
        const std::uint64_t begin = total / chunks * uc + std::min(uc, total % chunks);
        const std::uint64_t end = begin + total / chunks + (uc < total % chunks ? 1 : 0);
        std::vector<int> heads(radix.size() + 1, 1);
        decode(begin, radix, heads.data());
        CompensatedSum acc;
        for (std::uint64_t i = begin; i < end; ++i) {
            acc.add(weight(heads.data()));
            increment(radix, heads.data());
        }
        partial[uc] = acc;
    }
    CompensatedSum total_sum;
    for (const auto& p : partial)
        total_sum.merge(p);
    return total_sum.value();
}

} // namespace

// ---------------------------------------------------------------------------

int CompiledProgram::intern(const Atom& a) {
    auto [it, fresh] = ids_.emplace(a, static_cast<int>(atoms_.size()));
    if (fresh)
        atoms_.push_back(a);
    return it->second;
}

int CompiledProgram::atom_id(const Atom& a) const {
    auto it = ids_.find(a);
    return it == ids_.end() ? -1 : it->second;
}

CompiledProgram::CompiledProgram(const GroundProgram& g) {
    const auto strat = stratify(g);
    if (!strat.ok)
        throw ProgramError("program is not stratified: negative cycle " + cycle_text(strat.cycle));
    int top = 0;
    for (const auto& [pred, s] : strat.strata)
        top = std::max(top, s);
    strata_.resize(static_cast<std::size_t>(top) + 1);

    auto add = [&](const Atom& head, const Query& body, int instance, int head_index) {
        Rule r;
        r.head = intern(head);
        r.instance = instance;
        r.head_index = head_index;
        for (const auto& l : body)
            (l.positive ? r.pos : r.neg).push_back(intern(l.atom));
        strata_[static_cast<std::size_t>(strat.strata.at(head.signature()))].push_back(std::move(r));
    };

    for (std::size_t i = 0; i < g.prob.size(); ++i) {
        const auto& heads = g.prob[i].instance.heads;
        radix_.push_back(static_cast<int>(heads.size()));
        std::vector<double> ps;
        for (std::size_t h = 0; h < heads.size(); ++h) {
            ps.push_back(heads[h].probability);
            if (heads[h].atom.predicate == kNonePredicate && heads[h].atom.args.empty())
                continue;
            add(heads[h].atom, g.prob[i].instance.body, static_cast<int>(i), static_cast<int>(h + 1));
        }
        probs_.push_back(std::move(ps));
    }
    for (const auto& c : g.derived)
        add(c.head, c.body, -1, 0);
}

double CompiledProgram::world_prob(const int* heads) const {
    double p = 1.0;
    for (std::size_t i = 0; i < probs_.size(); ++i)
        p *= probs_[i][static_cast<std::size_t>(heads[i] - 1)];
    return p;
}

void CompiledProgram::model(const int* heads, std::vector<char>& truth) const {
    truth.assign(atoms_.size(), 0);
    for (const auto& rules : strata_) {
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : rules) {
                if (truth[static_cast<std::size_t>(r.head)])
                    continue;
                if (r.instance >= 0 && heads[r.instance] != r.head_index)
                    continue;
                bool fire = std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return truth[static_cast<std::size_t>(a)] != 0; }) &&
                            std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return truth[static_cast<std::size_t>(a)] != 0; });
                if (fire) {
                    truth[static_cast<std::size_t>(r.head)] = 1;
                    changed = true;
                }
            }
        }
    }
}

std::vector<std::pair<int, bool>> CompiledProgram::compile_query(const Query& q) const {
    if (!is_ground(q))
        throw ProgramError("model checking needs a ground query, got " + to_string(q));
    std::vector<std::pair<int, bool>> out;
    for (const auto& l : q)
        out.push_back({atom_id(l.atom), l.positive});
    return out;
}

bool CompiledProgram::holds(const int* heads, const std::vector<std::pair<int, bool>>& q,
                            std::vector<char>& truth) const {
    model(heads, truth);
    for (auto [id, positive] : q) {
        const bool t = id >= 0 && truth[static_cast<std::size_t>(id)];
        if (t != positive)
            return false;
    }
    return true;
}

double query_prob(const CompiledProgram& p, const Query& q, Exec exec, std::uint64_t limit) {
    const auto lits = p.compile_query(q);
    const std::uint64_t total = assignment_count(p.radix(), limit);
    if (exec == Exec::Serial) {
        std::vector<char> truth;
        return enumerate(p.radix(), total, exec,
                         [&](const int* heads) { return p.holds(heads, lits, truth) ? p.world_prob(heads) : 0.0; });
    }
    // One scratch buffer per thread.
    std::vector<std::vector<char>> scratch(static_cast<std::size_t>(omp_get_max_threads()));
    return enumerate(p.radix(), total, exec, [&](const int* heads) {
        auto& truth = scratch[static_cast<std::size_t>(omp_get_thread_num())];
        return p.holds(heads, lits, truth) ? p.world_prob(heads) : 0.0;
    });
}

double expr_prob(const ChoiceExpr& e, const std::vector<InstanceKey>& order, const EventSpace& es, Exec exec,
                 std::uint64_t limit) {
    validate(e, es);
    std::vector<int> radix;
    std::vector<std::vector<double>> probs;
    for (const auto& k : order) {
        const auto& info = es.at(k);
        radix.push_back(static_cast<int>(info.probs.size()));
        probs.push_back(info.probs);
    }
    const std::uint64_t total = assignment_count(radix, limit);
    const FlatExpr flat(e, order);
    return enumerate(radix, total, exec, [&](const int* heads) {
        if (!flat.eval(heads))
            return 0.0;
        double w = 1.0;
        for (std::size_t i = 0; i < probs.size(); ++i)
            w *= probs[i][static_cast<std::size_t>(heads[i] - 1)];
        return w;
    });
}

} // namespace lpad::kernels
