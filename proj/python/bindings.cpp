#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "onlinecolor/bias_tree.hpp"
#include "onlinecolor/diagnostics.hpp"
#include "onlinecolor/enumerate.hpp"
#include "onlinecolor/generators.hpp"

namespace py = pybind11;
using namespace onlinecolor;

namespace {

using EdgeTuple = std::pair<VertexId, VertexId>;

EdgeTuple as_tuple(const Edge& e) { return {e.u, e.v}; }

Instance make_instance(int n, int delta, const std::vector<EdgeTuple>& edges,
                       const std::vector<std::vector<std::int32_t>>& palettes) {
    if (!palettes.empty() && palettes.size() != edges.size())
        throw std::invalid_argument("palettes must be empty or one per edge");
    Instance inst{n, delta, {}};
    for (std::size_t i = 0; i < edges.size(); ++i)
        inst.arrivals.push_back({Edge(edges[i].first, edges[i].second), palettes.empty() ? std::vector<std::int32_t>{}
                                                                                         : palettes[i]});
    return inst;
}

Params make_params(const Instance& inst, std::optional<double> eps, std::optional<double> cap,
                   std::optional<double> badness, std::optional<double> dangerous, const std::string& mode) {
    ParamOverrides o;
    o.eps = eps;
    o.cap = cap;
    o.badness_threshold = badness;
    o.dangerous_threshold = dangerous;
    return derive_params(std::max(inst.n, 2), inst.delta, parse_mode(mode), o);
}

RunResult run(const Instance& inst, const std::string& algorithm, std::uint64_t seed, std::optional<double> eps,
              std::optional<double> cap, std::optional<double> badness, std::optional<double> dangerous,
              int palette_size, bool keep_trace, bool continue_after_failure, const std::string& mode) {
    auto stream = inst.stream();
    RngHandle rng(seed, 1);
    RunOptions opts;
    opts.keep_trace = keep_trace;
    opts.continue_after_failure = continue_after_failure;
    py::gil_scoped_release release;
    switch (parse_algorithm(algorithm)) {
        case Algorithm::Greedy: return run_greedy(stream, opts);
        case Algorithm::RandGreedy:
            return run_randomized_greedy(stream, palette_size > 0 ? palette_size : 2 * inst.delta - 1, rng, opts);
        case Algorithm::ListGreedy: return run_list_greedy(stream, rng, opts);
        case Algorithm::Alg1: return run_alg1(stream, make_params(inst, eps, cap, badness, dangerous, mode), rng, opts);
        case Algorithm::Alg2: return run_alg2(stream, make_params(inst, eps, cap, badness, dangerous, mode), rng, opts);
    }
    throw std::logic_error("unreachable");
}

py::dict enumerate(const Instance& inst, const std::string& algorithm, std::optional<double> eps,
                   std::optional<double> cap, int palette_size, std::int64_t budget) {
    const Algorithm alg = parse_algorithm(algorithm);
    std::optional<Params> params;
    if (alg == Algorithm::Alg1 || alg == Algorithm::Alg2)
        params = make_params(inst, eps, cap, std::nullopt, std::nullopt, "adaptive");
    EnumerateOptions o;
    o.budget = budget;
    o.palette_size = palette_size > 0 ? palette_size : 2 * inst.delta - 1;
    const auto r = enumerate_exact(inst, alg, params ? &*params : nullptr, o);
    py::dict d;
    d["nodes"] = r.nodes;
    d["leaves"] = r.leaves;
    d["probability_sum"] = r.probability_sum;
    d["failure_probability"] = r.failure_probability;
    d["marked_probability"] = r.marked_probability;
    d["distribution"] = r.distribution_truncated ? py::object(py::none()) : py::cast(r.distribution);
    if (params) {
        d["max_z_drift"] = r.max_z_drift;
        d["max_abs_y_drift"] = r.max_abs_y_drift;
        d["max_abs_z_step"] = r.max_abs_z_step;
        d["max_decomposition_error"] = r.max_decomposition_error;
        d["max_q_drift"] = r.max_q_drift;
        d["max_abs_dq_step"] = r.max_abs_dq_step;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Online edge coloring: colorers, lower-bound generators and diagnostics";

    py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
    py::register_exception<StreamViolation>(m, "StreamViolation", PyExc_RuntimeError);
    py::register_exception<GenerationFailure>(m, "GenerationFailure", PyExc_RuntimeError);
    py::register_exception<TraceMissing>(m, "TraceMissing", PyExc_RuntimeError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<PoolExhaustion>(m, "PoolExhaustion", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    py::class_<Params>(m, "Params")
        .def_readonly("n", &Params::n)
        .def_readonly("delta", &Params::delta)
        .def_readonly("eps", &Params::eps)
        .def_readonly("cap", &Params::cap)
        .def_readonly("alpha", &Params::alpha)
        .def_readonly("badness_threshold", &Params::badness_threshold)
        .def_readonly("dangerous_threshold", &Params::dangerous_threshold)
        .def_readonly("invalid_reason", &Params::invalid_reason)
        .def_property_readonly("valid", &Params::valid)
        .def_property_readonly("initial_p", &Params::initial_p);

    m.def(
        "derive_params",
        [](int n, int delta, const std::string& mode, std::optional<double> eps, std::optional<double> cap) {
            ParamOverrides o;
            o.eps = eps;
            o.cap = cap;
            return derive_params(n, delta, parse_mode(mode), o);
        },
        py::arg("n"), py::arg("delta"), py::arg("mode") = "adaptive", py::arg("eps") = py::none(),
        py::arg("cap") = py::none());

    py::class_<Instance>(m, "Instance")
        .def(py::init(&make_instance), py::arg("n"), py::arg("delta"), py::arg("edges"),
             py::arg("palettes") = std::vector<std::vector<std::int32_t>>{})
        .def_readonly("n", &Instance::n)
        .def_readonly("delta", &Instance::delta)
        .def_property_readonly("edges",
                               [](const Instance& i) {
                                   std::vector<EdgeTuple> out;
                                   for (const auto& a : i.arrivals) out.push_back(as_tuple(a.edge));
                                   return out;
                               })
        .def_property_readonly("palettes",
                               [](const Instance& i) {
                                   std::vector<std::vector<std::int32_t>> out;
                                   for (const auto& a : i.arrivals) out.push_back(a.palette);
                                   return out;
                               })
        .def("to_text", [](const Instance& i) { return write_instance(i); })
        .def_static("from_text", &read_instance_string)
        .def("__len__", [](const Instance& i) { return i.arrivals.size(); });

    m.def("two_star_bridge", [](int delta) {
        auto s = gen_two_star_bridge(delta);
        return to_instance(s);
    });
    m.def(
        "gadget_farm",
        [](int delta, int copies, bool interleave) {
            auto s = gen_gadget_farm(delta, copies, interleave);
            return to_instance(s);
        },
        py::arg("delta"), py::arg("copies"), py::arg("interleave") = false);
    m.def(
        "random_graph",
        [](int n, int delta, int m, std::uint64_t seed) {
            RngHandle rng(seed, 0);
            auto s = gen_random_graph(n, delta, m, rng);
            return to_instance(s);
        },
        py::arg("n"), py::arg("delta"), py::arg("m"), py::arg("seed"));
    m.def(
        "random_order",
        [](const Instance& inst, std::uint64_t seed) {
            RngHandle rng(seed, 0);
            auto s = wrap_random_order(inst.stream(), rng);
            return to_instance(s);
        },
        py::arg("instance"), py::arg("seed"));
    m.def(
        "list_lb_randomized",
        [](int delta, int copies, std::uint64_t seed, int star_palette_size) {
            RngHandle rng(seed, 0);
            auto s = gen_list_lb_randomized(delta, copies, rng, star_palette_size);
            return to_instance(s);
        },
        py::arg("delta"), py::arg("copies") = 1, py::arg("seed") = 0, py::arg("star_palette_size") = 0);
    m.def(
        "list_lb_deterministic_fails",
        [](int delta, std::uint64_t seed) {
            auto s = gen_list_lb_deterministic(delta);
            RngHandle rng(seed, 1);
            return run_list_greedy(*s, rng).failure().has_value();
        },
        py::arg("delta"), py::arg("seed") = 0,
        "Runs list greedy against the adaptive list instance; True when the bridge could not be colored.");

    py::class_<RunResult>(m, "RunResult")
        .def_property_readonly("algorithm", [](const RunResult& r) { return to_string(r.algorithm); })
        .def_property_readonly("colors",
                               [](const RunResult& r) {
                                   std::map<EdgeTuple, std::string> out;
                                   for (const auto& [e, c] : r.state.assignment()) out[as_tuple(e)] = to_string(c);
                                   return out;
                               })
        .def_property_readonly("marked",
                               [](const RunResult& r) {
                                   std::vector<EdgeTuple> out;
                                   for (const auto& e : r.marked) out.push_back(as_tuple(e));
                                   return out;
                               })
        .def_property_readonly("failures",
                               [](const RunResult& r) {
                                   std::vector<std::size_t> out;
                                   for (const auto& f : r.failures) out.push_back(f.edge_index);
                                   return out;
                               })
        .def_property_readonly("total_colors", [](const RunResult& r) { return r.metrics.total_colors; })
        .def_property_readonly("alg_palette_size", [](const RunResult& r) { return r.metrics.alg_palette_size; })
        .def_property_readonly("greedy_palette_size", [](const RunResult& r) { return r.metrics.greedy_palette_size; })
        .def_property_readonly("max_marked_degree", [](const RunResult& r) { return r.metrics.max_marked_degree; })
        .def_property_readonly("params", [](const RunResult& r) { return r.params; })
        .def("trace_text", &RunResult::trace_text)
        .def("serialize", &RunResult::serialize)
        .def(
            "validate",
            [](const RunResult& r) {
                const auto edges = r.arrived_edges();
                return validate_coloring(edges, r.state).describe();
            },
            "Empty string when every arrived edge is colored and no two adjacent edges share a color.")
        .def(
            "trajectory",
            [](const RunResult& r, EdgeTuple f, std::vector<std::int32_t> colors) {
                const auto tr = compute_trajectory(r, Edge(f.first, f.second), colors);
                py::list out;
                for (const auto& pt : tr.points)
                    out.append(py::dict(py::arg("t") = pt.t, py::arg("z") = pt.z, py::arg("y") = pt.y,
                                        py::arg("zbar") = pt.zbar, py::arg("bad_colors") = pt.bad_colors,
                                        py::arg("cls") = to_string(pt.cls)));
                return out;
            },
            py::arg("edge"), py::arg("colors") = std::vector<std::int32_t>{})
        .def(
            "scaling_identity_error",
            [](const RunResult& r, EdgeTuple e) {
                return compute_scaling_factors(r, Edge(e.first, e.second)).max_identity_error();
            },
            py::arg("edge"));

    m.def("run", &run, py::arg("instance"), py::arg("algorithm"), py::arg("seed") = 0, py::arg("eps") = py::none(),
          py::arg("cap") = py::none(), py::arg("badness_threshold") = py::none(),
          py::arg("dangerous_threshold") = py::none(), py::arg("palette_size") = 0, py::arg("keep_trace") = false,
          py::arg("continue_after_failure") = false, py::arg("mode") = "adaptive");

    m.def("enumerate", &enumerate, py::arg("instance"), py::arg("algorithm"), py::arg("eps") = py::none(),
          py::arg("cap") = py::none(), py::arg("palette_size") = 0, py::arg("budget") = 1'000'000);

    m.def(
        "bias_tree",
        [](int delta, double palette_ratio, int layers, int pool_size, std::uint64_t seed) {
            BiasTreeConfig c;
            c.delta = delta;
            c.palette_ratio = palette_ratio;
            c.layers = layers;
            c.pool_size = pool_size;
            c.seed = seed;
            BiasTreeReport rep;
            {
                py::gil_scoped_release release;
                rep = run_bias_tree(c);
            }
            py::list out;
            for (const auto& l : rep.layers)
                out.append(py::dict(py::arg("layer") = l.layer, py::arg("mean_bias") = l.mean_bias,
                                    py::arg("mean_signed_bias") = l.mean_signed_bias,
                                    py::arg("saturated_fraction") = l.saturated_fraction,
                                    py::arg("failures") = l.failures, py::arg("acceptance_rate") = l.acceptance_rate));
            return out;
        },
        py::arg("delta") = 256, py::arg("palette_ratio") = 1.5, py::arg("layers") = 6, py::arg("pool_size") = 4096,
        py::arg("seed") = 1);

    m.def("azuma_bound", &azuma_bound, py::arg("lam"), py::arg("steps"), py::arg("step_size"));
}
