#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwt {

// Per-level thresholds lambda_{k,n} = alpha_k / n for k = 1..d.
//
// Presets (M = 2^d):
//   constant     alpha_k = 2/M
//   logarithmic  alpha_k = 2 log2(d-k+2) / M
//   linear       alpha_k = 2 (d-k+1) / M
// All three meet alpha_d = 2/M, i.e. the leaf threshold is twice the
// variance of an empirical coefficient whose true value is zero.
//
// adaptive_top_q carries no preset level thresholds (alpha_k = 0 below the
// leaves); pruning is then driven by the traversal's top-q selection, with
// the leaf level still guarded at 2/M.
class ThresholdSchedule {
  public:
    enum class Kind { Constant, Logarithmic, Linear, Custom, AdaptiveTopQ };

    static ThresholdSchedule constant(int dim) { return preset(Kind::Constant, dim); }
    static ThresholdSchedule logarithmic(int dim) { return preset(Kind::Logarithmic, dim); }
    static ThresholdSchedule linear(int dim) { return preset(Kind::Linear, dim); }

    static ThresholdSchedule custom(int dim, std::vector<double> alphas) {
        if (static_cast<int>(alphas.size()) != dim)
            throw std::invalid_argument("ThresholdSchedule: need one alpha per level");
        for (double a : alphas)
            if (!(a >= 0.0)) throw std::invalid_argument("ThresholdSchedule: alpha must be >= 0");
        ThresholdSchedule s;
        s.kind_ = Kind::Custom;
        s.dim_ = dim;
        s.alphas_ = std::move(alphas);
        return s;
    }

    static ThresholdSchedule adaptive_top_q(int dim, int q) {
        if (q < 1) throw std::invalid_argument("ThresholdSchedule: q must be >= 1");
        ThresholdSchedule s;
        s.kind_ = Kind::AdaptiveTopQ;
        s.dim_ = dim;
        s.alphas_.assign(static_cast<std::size_t>(dim), 0.0);
        s.alphas_.back() = std::ldexp(2.0, -dim);
        s.top_q_ = q;
        return s;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::optional<int> top_q() const { return top_q_; }
    const std::vector<double>& alphas() const { return alphas_; }

    // Multiplies every alpha_k; sensitivity-study knob.
    void scale(double factor) {
        if (!(factor > 0.0)) throw std::invalid_argument("ThresholdSchedule: scale must be > 0");
        for (double& a : alphas_) a *= factor;
    }

    double lambda(int k, std::size_t n) const {
        if (k < 1 || k > dim_) throw std::invalid_argument("ThresholdSchedule: level out of range");
        return alphas_[static_cast<std::size_t>(k - 1)] / static_cast<double>(n);
    }

    static ThresholdSchedule from_name(const std::string& name, int dim);

  private:
    static ThresholdSchedule preset(Kind kind, int dim) {
        if (dim < 1 || dim > 64) throw std::invalid_argument("ThresholdSchedule: dim out of [1,64]");
        ThresholdSchedule s;
        s.kind_ = kind;
        s.dim_ = dim;
        s.alphas_.resize(static_cast<std::size_t>(dim));
        for (int k = 1; k <= dim; ++k) {
            double a = 2.0;
            if (kind == Kind::Logarithmic) a = 2.0 * std::log2(static_cast<double>(dim - k + 2));
            if (kind == Kind::Linear) a = 2.0 * static_cast<double>(dim - k + 1);
            s.alphas_[static_cast<std::size_t>(k - 1)] = std::ldexp(a, -dim);
        }
        return s;
    }

    Kind kind_ = Kind::Constant;
    int dim_ = 0;
    std::vector<double> alphas_;
    std::optional<int> top_q_;
};

inline ThresholdSchedule ThresholdSchedule::from_name(const std::string& name, int dim) {
    if (name == "constant") return constant(dim);
    if (name == "log" || name == "logarithmic") return logarithmic(dim);
    if (name == "linear") return linear(dim);
    throw std::invalid_argument("ThresholdSchedule: unknown preset '" + name + "'");
}

enum class QueuePolicy { DepthFirst, BreadthFirst, MaxWeight };

struct TraversalConfig {
    // Children per expansion step: 2^branching_bits. branching_bits = 1 is the
    // plain binary tree; 8 matches the wide-tree setting used for the large-d
    // benchmarks.
    int branching_bits = 1;

    // Discard every index with more than max_order set bits (applied to
    // prefixes: a prefix over the cap cannot recover).
    std::optional<int> max_order;

    // Per level, expand only the top_q candidates with the highest weights.
    std::optional<int> top_q;

    // Switch to direct computation of all coefficients under a node once the
    // suffix space is small enough. Auto: depth k >= d - log2(n*d).
    enum class Switch { Auto, Never, AtLevel };
    Switch direct_switch = Switch::Auto;
    int switch_level = 0; // used when direct_switch == AtLevel

    QueuePolicy queue_policy = QueuePolicy::MaxWeight;

    std::optional<double> leaf_threshold_override; // replaces lambda_{d,n}

    static TraversalConfig binary() { return TraversalConfig{}; }

    int branching() const { return 1 << branching_bits; }

    bool direct_at(int k, int dim, std::size_t n) const {
        switch (direct_switch) {
            case Switch::Never: return false;
            case Switch::AtLevel: return k >= switch_level;
            case Switch::Auto:
            default:
                return static_cast<double>(k) >=
                       static_cast<double>(dim) -
                           std::log2(static_cast<double>(n) * static_cast<double>(dim));
        }
    }

    void validate(int dim) const {
        if (branching_bits < 1 || branching_bits > 16)
            throw std::invalid_argument("TraversalConfig: branching must be 2^b, b in [1,16]");
        if (max_order && (*max_order < 0 || *max_order > dim))
            throw std::invalid_argument("TraversalConfig: max_order out of [0,dim]");
        if (top_q && *top_q < 1) throw std::invalid_argument("TraversalConfig: top_q must be >= 1");
    }
};

struct TraversalStats {
    std::uint64_t recursive_calls = 0;     // nodes popped and expanded
    std::uint64_t weight_evaluations = 0;  // tree nodes whose weight was computed
    std::uint64_t retained_coefficients = 0;
    std::uint64_t pruned_by_threshold = 0;
    std::uint64_t pruned_by_order = 0;
    std::uint64_t pruned_by_top_q = 0;
    double wall_time_seconds = 0.0;
};

} // namespace rwt
