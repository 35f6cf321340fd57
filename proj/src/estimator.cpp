#include "rwt/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>

#include "rwt/errors.hpp"

namespace rwt {

double empirical_coefficient(const Dataset& data, const BitVector& s) {
    if (s.len != data.dim()) throw std::invalid_argument("empirical_coefficient: length != dim");
    std::int64_t acc = 0;
    for (std::uint64_t x : data.samples())
        acc += (std::popcount(s.bits & x) & 1) ? -1 : 1;
    return coefficient_from_sign_sum(acc, data.size(), data.dim());
}

std::vector<std::int64_t> empirical_sign_sums(const Dataset& data, int oracle_cap) {
    const int d = data.dim();
    if (d > oracle_cap) throw capacity_error("empirical_sign_sums: dim over cap");
    std::vector<std::int64_t> counts(std::size_t{1} << d, 0);
    for (std::uint64_t x : data.samples()) ++counts[BitVector(x, d).lex_index()];
    wht_unnormalized(counts);
    return counts;
}

DenseVector empirical_all_coefficients(const Dataset& data, int oracle_cap) {
    const auto sums = empirical_sign_sums(data, oracle_cap);
    DenseVector out(data.dim());
    for (std::size_t i = 0; i < sums.size(); ++i)
        out.values[i] = coefficient_from_sign_sum(sums[i], data.size(), data.dim());
    return out;
}

double weight_direct(const Dataset& data, const BitVector& u, int suffix_cap) {
    const int d = data.dim();
    if (u.len > d) throw std::invalid_argument("weight_direct: prefix longer than dim");
    const int r = d - u.len;
    if (r > suffix_cap)
        throw capacity_error("weight_direct: suffix space 2^" + std::to_string(r) + " over cap");
    double acc = 0.0;
    const std::uint64_t count = 1ULL << r;
    for (std::uint64_t v = 0; v < count; ++v) {
        const BitVector s(u.bits | (v << u.len), d);
        const double theta = empirical_coefficient(data, s);
        acc += theta * theta;
    }
    return acc;
}

double weight_indirect(const Dataset& data, const BitVector& u) {
    const int d = data.dim();
    const int k = u.len;
    if (k > d) throw std::invalid_argument("weight_indirect: prefix longer than dim");
    const std::size_t n = data.size();
    std::vector<std::uint64_t> suf(n);
    std::vector<std::int8_t> sign(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t x = data.samples()[i];
        sign[i] = (std::popcount(u.bits & x) & 1) ? -1 : 1;
        suf[i] = x >> k;
    }
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t si = suf[i];
        const std::int64_t ci = sign[i];
        for (std::size_t j = 0; j < n; ++j)
            if (suf[j] == si) acc += ci * sign[j];
    }
    return weight_from_pair_sum(acc, n, k);
}

namespace {

// Signed suffix histogram of a prefix node: sorted (suffix, sum of sample
// signs) pairs with zero sums dropped. All values are exact integers.
using State = std::vector<std::pair<std::uint64_t, std::int64_t>>;

State build_root_state(const Dataset& data) {
    std::vector<std::uint64_t> sorted = data.samples();
    std::sort(sorted.begin(), sorted.end());
    State state;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        state.emplace_back(sorted[i], static_cast<std::int64_t>(j - i));
        i = j;
    }
    return state;
}

std::int64_t sum_of_squares(const State& s) {
    std::int64_t acc = 0;
    for (const auto& [y, a] : s) acc += a * a;
    return acc;
}

// One-bit split: child 0 keeps a_even + a_odd per halved suffix, child 1
// keeps a_even - a_odd. Returns the children's sums of squares alongside.
void split_state(const State& parent, State& c0, State& c1, std::int64_t& s0, std::int64_t& s1) {
    c0.clear();
    c1.clear();
    s0 = s1 = 0;
    for (std::size_t i = 0; i < parent.size();) {
        const std::uint64_t half = parent[i].first >> 1;
        std::int64_t even = 0, odd = 0;
        if ((parent[i].first & 1) == 0) {
            even = parent[i].second;
            ++i;
            if (i < parent.size() && (parent[i].first >> 1) == half && (parent[i].first & 1)) {
                odd = parent[i].second;
                ++i;
            }
        } else {
            odd = parent[i].second;
            ++i;
        }
        const std::int64_t p = even + odd;
        const std::int64_t m = even - odd;
        if (p != 0) {
            c0.emplace_back(half, p);
            s0 += p * p;
        }
        if (m != 0) {
            c1.emplace_back(half, m);
            s1 += m * m;
        }
    }
}

// Targeted extraction of the state of u.e from the state of u, where e packs
// step bits (bit 0 = the component right after u).
State extract_child(const State& parent, std::uint64_t e, int step) {
    State out;
    const std::uint64_t low_mask = BitVector::mask(step);
    for (std::size_t i = 0; i < parent.size();) {
        const std::uint64_t high = parent[i].first >> step;
        std::int64_t acc = 0;
        while (i < parent.size() && (parent[i].first >> step) == high) {
            const std::uint64_t m = parent[i].first & low_mask;
            acc += (std::popcount(e & m) & 1) ? -parent[i].second : parent[i].second;
            ++i;
        }
        if (acc != 0) out.emplace_back(high, acc);
    }
    return out;
}

struct QNode {
    std::uint64_t bits = 0;
    int depth = 0;
    double weight = 0.0;
    std::uint64_t lex = 0;
    State state;
};

struct Candidate {
    std::uint64_t bits = 0;
    std::uint64_t rel_bits = 0;
    int depth = 0;
    double weight = 0.0;
    std::uint64_t lex = 0;
    std::size_t parent = 0;
};

struct Traversal {
    const Dataset& data;
    const ThresholdSchedule& schedule;
    const TraversalConfig& cfg;
    int dim;
    std::size_t n;
    double leaf_lambda;
    std::optional<int> max_order;
    SparseDensity out;
    TraversalStats st;

    Traversal(const Dataset& d, const ThresholdSchedule& sch, const TraversalConfig& c)
        : data(d), schedule(sch), cfg(c), dim(d.dim()), n(d.size()),
          leaf_lambda(c.leaf_threshold_override.value_or(sch.lambda(d.dim(), d.size()))),
          max_order(c.max_order), out(d.dim()) {}

    double level_lambda(int k) const {
        return k == dim ? leaf_lambda : schedule.lambda(k, n);
    }

    // Explores all extensions of (bits, depth) down to stop_depth. Boundary
    // survivors (depth == stop_depth < dim) go to the sink; leaves are
    // resolved in place. Depth of recursion is bounded by the word size.
    template <typename SinkFn>
    void descend(std::uint64_t bits, int depth, const State& state, int stop_depth,
                 SinkFn&& sink) {
        State c0, c1;
        std::int64_t s0 = 0, s1 = 0;
        split_state(state, c0, c1, s0, s1);
        const int child_depth = depth + 1;
        for (int bit = 0; bit < 2; ++bit) {
            const std::uint64_t cbits = bits | (static_cast<std::uint64_t>(bit) << depth);
            if (bit == 1 && max_order && std::popcount(cbits) > *max_order) {
                ++st.pruned_by_order;
                continue;
            }
            const State& cstate = bit ? c1 : c0;
            const std::int64_t csum = bit ? s1 : s0;
            ++st.weight_evaluations;
            if (child_depth == dim) {
                const std::int64_t a = cstate.empty() ? 0 : cstate.front().second;
                const double theta = coefficient_from_sign_sum(a, n, dim);
                if (theta * theta >= leaf_lambda) {
                    out.set(BitVector(cbits, dim), theta);
                } else {
                    ++st.pruned_by_threshold;
                }
                continue;
            }
            const double w = weight_from_pair_sum(csum, n, child_depth);
            if (w < level_lambda(child_depth)) {
                ++st.pruned_by_threshold;
                continue;
            }
            if (child_depth == stop_depth) {
                sink(cbits, child_depth, w, cstate);
            } else {
                ++st.recursive_calls;
                descend(cbits, child_depth, cstate, stop_depth, sink);
            }
        }
    }

    int step_for(int depth) const {
        if (cfg.direct_at(depth, dim, n)) return dim - depth;
        return std::min(cfg.branching_bits, dim - depth);
    }

    void run_queue() {
        auto lex_of = [this](std::uint64_t bits, int depth) {
            return BitVector(bits, depth).lex_index() << (dim - depth);
        };
        auto higher_priority = [](const QNode& a, const QNode& b) {
            if (a.weight != b.weight) return a.weight > b.weight;
            if (a.depth != b.depth) return a.depth > b.depth;
            return a.lex < b.lex;
        };
        std::deque<QNode> queue;
        {
            QNode root;
            root.state = build_root_state(data);
            root.weight = weight_from_pair_sum(sum_of_squares(root.state), n, 0);
            queue.push_back(std::move(root));
        }
        std::vector<QNode> staged;
        while (!queue.empty()) {
            std::size_t pick = 0;
            switch (cfg.queue_policy) {
                case QueuePolicy::BreadthFirst: pick = 0; break;
                case QueuePolicy::DepthFirst: pick = queue.size() - 1; break;
                case QueuePolicy::MaxWeight: {
                    for (std::size_t i = 1; i < queue.size(); ++i)
                        if (higher_priority(queue[i], queue[pick])) pick = i;
                    break;
                }
            }
            QNode node = std::move(queue[pick]);
            queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(pick));
            ++st.recursive_calls;
            const int stop = node.depth + step_for(node.depth);
            staged.clear();
            descend(node.bits, node.depth, node.state, stop,
                    [&](std::uint64_t bits, int depth, double w, const State& state) {
                        QNode next;
                        next.bits = bits;
                        next.depth = depth;
                        next.weight = w;
                        next.lex = lex_of(bits, depth);
                        next.state = state;
                        staged.push_back(std::move(next));
                    });
            // children arrive in lex order; depth-first wants the smallest on top
            if (cfg.queue_policy == QueuePolicy::DepthFirst)
                for (auto it = staged.rbegin(); it != staged.rend(); ++it)
                    queue.push_back(std::move(*it));
            else
                for (auto& s : staged) queue.push_back(std::move(s));
        }
    }

    void run_waves(int top_q) {
        auto lex_of = [this](std::uint64_t bits, int depth) {
            return BitVector(bits, depth).lex_index() << (dim - depth);
        };
        std::vector<QNode> wave;
        {
            QNode root;
            root.state = build_root_state(data);
            root.weight = weight_from_pair_sum(sum_of_squares(root.state), n, 0);
            wave.push_back(std::move(root));
        }
        std::vector<Candidate> cands;
        while (!wave.empty()) {
            cands.clear();
            const int depth = wave.front().depth;
            const int stop = depth + step_for(depth);
            for (std::size_t pi = 0; pi < wave.size(); ++pi) {
                ++st.recursive_calls;
                descend(wave[pi].bits, depth, wave[pi].state, stop,
                        [&](std::uint64_t bits, int cdepth, double w, const State&) {
                            Candidate c;
                            c.bits = bits;
                            c.rel_bits = bits >> depth;
                            c.depth = cdepth;
                            c.weight = w;
                            c.lex = lex_of(bits, cdepth);
                            c.parent = pi;
                            cands.push_back(c);
                        });
            }
            if (cands.empty()) break;
            // highest weight first; on ties the lexicographically smaller
            // index survives
            std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
                if (a.weight != b.weight) return a.weight > b.weight;
                return a.lex < b.lex;
            });
            const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(top_q),
                                                           cands.size());
            st.pruned_by_top_q += cands.size() - keep;
            cands.resize(keep);
            std::sort(cands.begin(), cands.end(),
                      [](const Candidate& a, const Candidate& b) { return a.lex < b.lex; });
            std::vector<QNode> next;
            next.reserve(cands.size());
            for (const Candidate& c : cands) {
                QNode node;
                node.bits = c.bits;
                node.depth = c.depth;
                node.weight = c.weight;
                node.lex = c.lex;
                node.state = extract_child(wave[c.parent].state, c.rel_bits, c.depth - depth);
                next.push_back(std::move(node));
            }
            wave = std::move(next);
        }
    }
};

} // namespace

RwtResult rwt_estimate(const Dataset& data, const ThresholdSchedule& schedule,
                       const TraversalConfig& config) {
    if (schedule.dim() != data.dim())
        throw std::invalid_argument("rwt_estimate: schedule dim != data dim");
    config.validate(data.dim());
    const auto t0 = std::chrono::steady_clock::now();
    Traversal tr(data, schedule, config);
    const std::optional<int> top_q = config.top_q ? config.top_q : schedule.top_q();
    if (top_q)
        tr.run_waves(*top_q);
    else
        tr.run_queue();
    tr.st.retained_coefficients = tr.out.size();
    tr.st.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return RwtResult{std::move(tr.out), tr.st};
}

std::vector<double> child_weights(const Dataset& data, const BitVector& u, int step_bits) {
    const int d = data.dim();
    const int k = u.len;
    if (step_bits < 1 || k + step_bits > d)
        throw std::invalid_argument("child_weights: step out of range");
    if (step_bits > 26) throw capacity_error("child_weights: 2^step children over cap");
    // state of u from one pass over the samples
    State state;
    {
        std::vector<std::pair<std::uint64_t, std::int64_t>> items;
        items.reserve(data.size());
        for (std::uint64_t x : data.samples()) {
            const std::int64_t c = (std::popcount(u.bits & x) & 1) ? -1 : 1;
            items.emplace_back(x >> k, c);
        }
        std::sort(items.begin(), items.end());
        for (std::size_t i = 0; i < items.size();) {
            std::int64_t acc = 0;
            std::size_t j = i;
            while (j < items.size() && items[j].first == items[i].first) acc += items[j++].second;
            if (acc != 0) state.emplace_back(items[i].first, acc);
            i = j;
        }
    }
    // b successive one-bit splits; the sums of squares at the last level are
    // the pair sums of all 2^b extensions
    std::vector<std::pair<std::uint64_t, State>> level{{0, std::move(state)}};
    for (int j = 0; j < step_bits; ++j) {
        std::vector<std::pair<std::uint64_t, State>> next;
        next.reserve(level.size() * 2);
        State c0, c1;
        std::int64_t s0, s1;
        for (auto& [e, s] : level) {
            split_state(s, c0, c1, s0, s1);
            next.emplace_back(e, std::move(c0));
            next.emplace_back(e | (1ULL << j), std::move(c1));
            c0 = State{};
            c1 = State{};
        }
        level = std::move(next);
    }
    std::vector<double> weights(std::size_t{1} << step_bits, 0.0);
    for (auto& [e, s] : level)
        weights[e] = weight_from_pair_sum(sum_of_squares(s), data.size(), k + step_bits);
    return weights;
}

std::set<std::uint64_t> accepting_set_reference(const Dataset& data,
                                                const ThresholdSchedule& schedule,
                                                const TraversalConfig& config) {
    const int d = data.dim();
    if (d > 12) throw capacity_error("accepting_set_reference: d > 12");
    if (schedule.dim() != d)
        throw std::invalid_argument("accepting_set_reference: schedule dim != data dim");
    if (config.top_q || schedule.top_q())
        throw std::invalid_argument("accepting_set_reference: top-q not supported");
    const std::size_t n = data.size();
    const double leaf_lambda =
        config.leaf_threshold_override.value_or(schedule.lambda(d, n));
    std::map<std::pair<int, std::uint64_t>, double> weight_memo;
    auto weight_at = [&](int k, std::uint64_t prefix_bits) {
        const auto key = std::make_pair(k, prefix_bits);
        auto it = weight_memo.find(key);
        if (it == weight_memo.end())
            it = weight_memo.emplace(key, weight_direct(data, BitVector(prefix_bits, k))).first;
        return it->second;
    };
    std::set<std::uint64_t> accepted;
    const std::uint64_t count = 1ULL << d;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        const BitVector s(bits, d);
        if (config.max_order && s.popcount() > *config.max_order) continue;
        const double theta = empirical_coefficient(data, s);
        if (!(theta * theta >= leaf_lambda)) continue;
        bool ok = true;
        for (int k = 1; k < d && ok; ++k)
            ok = weight_at(k, bits & BitVector::mask(k)) >= schedule.lambda(k, n);
        if (ok) accepted.insert(bits);
    }
    return accepted;
}

double min_alpha_for_failure_budget(int k, std::size_t n, int dim, double delta, double c1,
                                    double c2) {
    if (k < 1 || dim < k || n < 1) throw std::invalid_argument("alpha bound: bad k/n/dim");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("alpha bound: delta in (0,1)");
    if (!(c1 > 0.0) || c2 < 0.0) throw std::invalid_argument("alpha bound: need c1 > 0, c2 >= 0");
    const double rhs = k * std::log(2.0) + std::log(static_cast<double>(dim)) - std::log(delta);
    const double nd = static_cast<double>(n);
    auto satisfied = [&](double alpha) {
        const double a = 0.2 * std::sqrt(alpha / nd) - std::sqrt(c2 * c2 / (std::exp2(k) * nd));
        if (a <= 0.0) return false;
        const double lhs = nd * c1 * std::min(std::exp2(k) * a * a, std::exp2(0.5 * k) * a);
        return lhs >= rhs;
    };
    double lo = 25.0 * c2 * c2 / std::exp2(k); // where a crosses zero
    double hi = std::max(lo, 1e-12);
    int guard = 0;
    while (!satisfied(hi)) {
        hi = hi > 0.0 ? hi * 2.0 : 1e-12;
        if (++guard > 4000) throw std::domain_error("alpha bound: no feasible alpha");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (satisfied(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace rwt
