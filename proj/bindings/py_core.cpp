#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rwt/baselines.hpp"
#include "rwt/errors.hpp"
#include "rwt/estimator.hpp"
#include "rwt/io.hpp"
#include "rwt/risk.hpp"

namespace py = pybind11;
using namespace rwt;

namespace {

BitVector to_bitvector(const std::string& s) { return BitVector::from_string(s); }

py::dict density_to_dict(const SparseDensity& f) {
    py::dict out;
    for (const BitVector& s : f.sorted_indices())
        out[py::str(s.to_string())] = f.coeffs.at(s.bits);
    return out;
}

SparseDensity density_from_dict(int dim, const py::dict& d) {
    SparseDensity f(dim);
    for (auto item : d)
        f.set(BitVector::from_string(py::cast<std::string>(item.first)),
              py::cast<double>(item.second));
    return f;
}

py::dict stats_to_dict(const TraversalStats& st) {
    py::dict out;
    out["recursive_calls"] = st.recursive_calls;
    out["weight_evaluations"] = st.weight_evaluations;
    out["retained_coefficients"] = st.retained_coefficients;
    out["pruned_by_threshold"] = st.pruned_by_threshold;
    out["pruned_by_order"] = st.pruned_by_order;
    out["pruned_by_top_q"] = st.pruned_by_top_q;
    out["wall_time_seconds"] = st.wall_time_seconds;
    return out;
}

ThresholdSchedule schedule_from_args(const std::string& name, int dim,
                                     const std::vector<double>& alphas, int adaptive_q,
                                     double scale) {
    ThresholdSchedule s = [&] {
        if (name == "custom") return ThresholdSchedule::custom(dim, alphas);
        if (name == "adaptive") return ThresholdSchedule::adaptive_top_q(dim, adaptive_q);
        return ThresholdSchedule::from_name(name, dim);
    }();
    if (scale != 1.0) s.scale(scale);
    return s;
}

TraversalConfig config_from_args(int branching, std::optional<int> max_order,
                                 std::optional<int> top_q, const std::string& queue,
                                 std::optional<double> leaf_threshold, bool direct_switch) {
    TraversalConfig cfg;
    if (branching < 2 || (branching & (branching - 1)) != 0)
        throw std::invalid_argument("branching must be a power of two >= 2");
    cfg.branching_bits = std::countr_zero(static_cast<unsigned>(branching));
    cfg.max_order = max_order;
    cfg.top_q = top_q;
    if (queue == "depth")
        cfg.queue_policy = QueuePolicy::DepthFirst;
    else if (queue == "breadth")
        cfg.queue_policy = QueuePolicy::BreadthFirst;
    else if (queue == "weight")
        cfg.queue_policy = QueuePolicy::MaxWeight;
    else
        throw std::invalid_argument("queue must be depth|breadth|weight");
    cfg.leaf_threshold_override = leaf_threshold;
    if (!direct_switch) cfg.direct_switch = TraversalConfig::Switch::Never;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse Walsh density estimation on the binary hypercube";

    py::register_exception<capacity_error>(m, "CapacityError");
    py::register_exception<parse_error>(m, "ParseError");

    py::class_<BernoulliMixture>(m, "BernoulliMixture")
        .def(py::init<int, std::vector<double>, std::vector<std::vector<double>>>(),
             py::arg("dim"), py::arg("weights"), py::arg("components"))
        .def_readonly("dim", &BernoulliMixture::dim)
        .def_readonly("weights", &BernoulliMixture::weights)
        .def_readonly("components", &BernoulliMixture::components)
        .def("density", [](const BernoulliMixture& mix, const std::string& x) {
            return mixture_density(mix, to_bitvector(x));
        })
        .def("walsh_coefficient", [](const BernoulliMixture& mix, const std::string& s) {
            return mixture_walsh_coefficient(mix, to_bitvector(s));
        })
        .def("total_energy", [](const BernoulliMixture& mix) { return total_energy(mix); });

    m.def("benchmark_mixture", &make_benchmark_mixture, py::arg("dim"), py::arg("components"),
          py::arg("biased_count"), py::arg("bias"), py::arg("seed"));

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](int dim, const std::vector<std::string>& rows) {
                 std::vector<std::uint64_t> packed;
                 packed.reserve(rows.size());
                 for (const auto& r : rows) {
                     const BitVector x = to_bitvector(r);
                     if (x.len != dim) throw std::invalid_argument("sample length != dim");
                     packed.push_back(x.bits);
                 }
                 return Dataset(dim, std::move(packed));
             }),
             py::arg("dim"), py::arg("samples"))
        .def_property_readonly("dim", &Dataset::dim)
        .def("__len__", &Dataset::size)
        .def("sample", [](const Dataset& d, std::size_t i) { return d.sample(i).to_string(); });

    m.def("sample", &sample, py::arg("mixture"), py::arg("n"), py::arg("seed"));

    m.def("walsh_eval", [](const std::string& s, const std::string& x) {
        return walsh_eval(to_bitvector(s), to_bitvector(x));
    });

    m.def("fwht", [](const std::vector<double>& values, int dim) {
        DenseVector v(dim);
        if (values.size() != v.size()) throw std::invalid_argument("need 2^dim values");
        v.values = values;
        return fwht(v).values;
    });

    m.def("empirical_coefficient", [](const Dataset& data, const std::string& s) {
        return empirical_coefficient(data, to_bitvector(s));
    });

    m.def("weight_direct", [](const Dataset& data, const std::string& u) {
        return weight_direct(data, to_bitvector(u));
    });
    m.def("weight_indirect", [](const Dataset& data, const std::string& u) {
        return weight_indirect(data, to_bitvector(u));
    });
    m.def("child_weights", [](const Dataset& data, const std::string& u, int step_bits) {
        return child_weights(data, to_bitvector(u), step_bits);
    });

    m.def(
        "rwt_estimate",
        [](const Dataset& data, const std::string& schedule, double threshold_scale,
           int branching, std::optional<int> max_order, std::optional<int> top_q,
           const std::string& queue, std::optional<double> leaf_threshold, bool direct_switch,
           const std::vector<double>& alphas, int adaptive_q) {
            const auto sched =
                schedule_from_args(schedule, data.dim(), alphas, adaptive_q, threshold_scale);
            const auto cfg = config_from_args(branching, max_order, top_q, queue, leaf_threshold,
                                              direct_switch);
            auto result = rwt_estimate(data, sched, cfg);
            return py::make_tuple(density_to_dict(result.density), stats_to_dict(result.stats));
        },
        py::arg("data"), py::arg("schedule") = "constant", py::arg("threshold_scale") = 1.0,
        py::arg("branching") = 2, py::arg("max_order") = std::nullopt,
        py::arg("top_q") = std::nullopt, py::arg("queue") = "weight",
        py::arg("leaf_threshold") = std::nullopt, py::arg("direct_switch") = true,
        py::arg("alphas") = std::vector<double>{}, py::arg("adaptive_q") = 16);

    m.def("ott_kronmal",
          [](const Dataset& data) { return density_to_dict(ott_kronmal(data)); });
    m.def("unthresholded", [](const Dataset& data) {
        return density_to_dict(unthresholded_estimator(data));
    });

    m.def(
        "mse_exact_mixture",
        [](int dim, const py::dict& estimate, const BernoulliMixture& mix) {
            const auto truth = truth_from_mixture(mix);
            const auto r = mse_exact(density_from_dict(dim, estimate), truth);
            py::dict out;
            out["mse"] = r.mse;
            out["variance_term"] = r.variance_term;
            out["bias_term"] = r.bias_term;
            out["retained"] = r.retained;
            return out;
        },
        py::arg("dim"), py::arg("estimate"), py::arg("mixture"));

    m.def(
        "mse_sampled_mixture",
        [](int dim, const py::dict& estimate, const BernoulliMixture& mix,
           std::size_t probe_count, std::uint64_t seed) {
            return mse_sampled(
                density_from_dict(dim, estimate),
                [&](const BitVector& x) { return mixture_density(mix, x); }, probe_count, seed);
        },
        py::arg("dim"), py::arg("estimate"), py::arg("mixture"), py::arg("probe_count") = 100000,
        py::arg("seed") = 1);

    m.def("eval_density", [](int dim, const py::dict& estimate, const std::string& x) {
        return density_from_dict(dim, estimate).evaluate(to_bitvector(x));
    });
}
