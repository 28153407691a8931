#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "divekit/base_graph.hpp"
#include "divekit/block_mapping.hpp"
#include "divekit/dive.hpp"
#include "divekit/mapsearch.hpp"
#include "divekit/qclift.hpp"
#include "divekit/simkit.hpp"

namespace py = pybind11;
using namespace divekit;

namespace {

Rational rational_from_obj(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) return Rational::parse(obj.cast<std::string>());
    if (py::isinstance<py::tuple>(obj)) {
        const auto t = obj.cast<std::pair<std::int64_t, std::int64_t>>();
        return Rational(t.first, t.second);
    }
    return Rational(obj.cast<std::int64_t>(), 1);
}

}  // namespace

PYBIND11_MODULE(_divekit, m) {
    m.doc() = "Boolean diversity evolution, mapping search, QC lifting and "
              "block-fading simulation for protograph LDPC codes";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<ValidationError>(m, "ValidationError");

    py::class_<Rational>(m, "Rational")
        .def(py::init<std::int64_t, std::int64_t>())
        .def_readonly("num", &Rational::num)
        .def_readonly("den", &Rational::den)
        .def("__float__", &Rational::to_double)
        .def("__str__", &Rational::str)
        .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; });

    py::class_<BaseGraph>(m, "BaseGraph")
        .def_property_readonly("rows", &BaseGraph::rows)
        .def_property_readonly("cols", &BaseGraph::cols)
        .def_property_readonly("info_cols", &BaseGraph::info_cols)
        .def_property_readonly("lifting_size", &BaseGraph::lifting_size)
        .def_property_readonly("punctured_cols", &BaseGraph::punctured_cols)
        .def("row_cols", &BaseGraph::row_cols, py::return_value_policy::copy)
        .def("col_rows", &BaseGraph::col_rows, py::return_value_policy::copy)
        .def("checksum", &BaseGraph::checksum)
        .def("save", &BaseGraph::save);

    m.def("load_base_graph", &BaseGraph::load, py::arg("path"), py::arg("lifting_size"));

    py::class_<RateSelection>(m, "RateSelection")
        .def_readonly("active_cols", &RateSelection::active_cols)
        .def_readonly("active_rows", &RateSelection::active_rows)
        .def_property_readonly("rate", [](const RateSelection& s) { return s.rate; });

    m.def("select_rate", &select_rate, py::arg("bg"), py::arg("parity_cols"));
    m.def("parity_cols_for_rate",
          [](const BaseGraph& bg, const py::object& rate) {
              return parity_cols_for_rate(bg, rational_from_obj(rate));
          });
    m.def("identical_neighborhood_pairs", &identical_neighborhood_pairs);
    m.def("singleton_bound", [](int m_blocks, const py::object& rate) {
        return singleton_bound(m_blocks, rational_from_obj(rate));
    });

    py::class_<FadingFunction>(m, "FadingFunction")
        .def_static("zero", &FadingFunction::zero)
        .def_static("atom", &FadingFunction::atom)
        .def_static("full_diversity", &FadingFunction::full_diversity)
        .def_static("from_hex", &FadingFunction::from_hex)
        .def_property_readonly("num_blocks", &FadingFunction::num_blocks)
        .def("bit", &FadingFunction::bit)
        .def("is_monotone", &FadingFunction::is_monotone)
        .def("is_full_diversity", &FadingFunction::is_full_diversity)
        .def("diversity_order", &FadingFunction::diversity_order)
        .def("to_hex", &FadingFunction::to_hex)
        .def("__and__", [](const FadingFunction& a, const FadingFunction& b) { return a & b; })
        .def("__or__", [](const FadingFunction& a, const FadingFunction& b) { return a | b; })
        .def("__eq__", [](const FadingFunction& a, const FadingFunction& b) { return a == b; });

    py::class_<BlockMapping>(m, "BlockMapping")
        .def(py::init([](int num_blocks, const std::vector<int>& assign) {
                 BlockMapping bm;
                 bm.num_blocks = num_blocks;
                 for (const int b : assign) bm.assign.push_back(static_cast<std::int8_t>(b));
                 return bm;
             }),
             py::arg("num_blocks"), py::arg("assign"))
        .def_readonly("num_blocks", &BlockMapping::num_blocks)
        .def_property_readonly("assign",
                               [](const BlockMapping& bm) {
                                   return std::vector<int>(bm.assign.begin(), bm.assign.end());
                               })
        .def("populations", &BlockMapping::populations)
        .def("is_balanced", &BlockMapping::is_balanced);

    m.def("load_mapping", [](const std::string& path) { return load_mapping(path).first; });
    m.def("save_mapping",
          [](const std::string& path, const BlockMapping& bm) { save_mapping(path, bm); });
    m.def("random_mapping", &random_mapping, py::arg("bg"), py::arg("sel"), py::arg("num_blocks"),
          py::arg("seed"), py::arg("balanced") = true);

    py::class_<RootcheckEvent>(m, "RootcheckEvent")
        .def_readonly("iteration", &RootcheckEvent::iteration)
        .def_readonly("cn", &RootcheckEvent::cn)
        .def_readonly("target_vn", &RootcheckEvent::target_vn)
        .def_readonly("block", &RootcheckEvent::block);

    py::class_<DiveReport>(m, "DiveReport")
        .def_readonly("num_blocks", &DiveReport::num_blocks)
        .def_readonly("iters", &DiveReport::iters)
        .def_readonly("fixpoint_iteration", &DiveReport::fixpoint_iteration)
        .def_readonly("first_full_iteration", &DiveReport::first_full_iteration)
        .def_readonly("diversity_orders", &DiveReport::diversity_orders)
        .def_readonly("full_div_count_info", &DiveReport::full_div_count_info)
        .def_readonly("rootcheck_events", &DiveReport::rootcheck_events)
        .def("function_at", &DiveReport::function_at, py::return_value_policy::copy)
        .def("full_count_at", &DiveReport::full_count_at);

    m.def("dive_run", &dive_run, py::arg("bg"), py::arg("sel"), py::arg("mapping"),
          py::arg("num_blocks"), py::arg("iters"));
    m.def("fading_msd",
          [](const BaseGraph& bg, const RateSelection& sel, const BlockMapping& mapping,
             const std::vector<int>& bits, int iters) {
              FadingRealization r;
              for (const int b : bits) r.bits.push_back(static_cast<std::uint8_t>(b));
              const auto out = fading_msd(bg, sel, mapping, r, iters);
              return std::vector<int>(out.begin(), out.end());
          });

    py::class_<SearchResult>(m, "SearchResult")
        .def_readonly("mapping", &SearchResult::mapping)
        .def_property_readonly("rate", [](const SearchResult& r) { return r.rate; })
        .def_readonly("parity_cols", &SearchResult::parity_cols)
        .def_readonly("iterations_to_full", &SearchResult::iterations_to_full)
        .def_readonly("trials_used", &SearchResult::trials_used)
        .def_readonly("candidate_index", &SearchResult::candidate_index);

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init<>())
        .def_readwrite("max_trials", &SearchConfig::max_trials)
        .def_readwrite("iters", &SearchConfig::iters)
        .def_readwrite("rng_seed", &SearchConfig::rng_seed)
        .def_readwrite("balanced", &SearchConfig::balanced)
        .def_readwrite("start_parity_cols", &SearchConfig::start_parity_cols)
        .def_readwrite("max_parity_cols", &SearchConfig::max_parity_cols)
        .def_readwrite("max_pre3", &SearchConfig::max_pre3)
        .def_readwrite("max_local_bits", &SearchConfig::max_local_bits);

    m.def("search_da_mapping", [](const BaseGraph& bg, const SearchConfig& cfg) -> py::object {
        const auto outcome = search_da_mapping(bg, cfg);
        if (std::holds_alternative<SearchResult>(outcome))
            return py::cast(std::get<SearchResult>(outcome));
        return py::none();
    });

    py::class_<LiftedCode>(m, "LiftedCode")
        .def_readonly("z", &LiftedCode::z)
        .def_readonly("n_rows", &LiftedCode::n_rows)
        .def_readonly("n_cols", &LiftedCode::n_cols)
        .def_readonly("info_bits", &LiftedCode::info_bits)
        .def("transmitted_bits", &LiftedCode::transmitted_bits)
        .def("syndrome_ok", &LiftedCode::syndrome_ok);

    m.def("lift", &lift);
    m.def("expand_mapping", &expand_mapping);
    m.def("write_alist", &write_alist);
    m.def("encode", [](const LiftedCode& code, const std::vector<std::uint8_t>& info) {
        return Encoder(code).encode(info);
    });

    py::class_<PointResult>(m, "PointResult")
        .def_readonly("snr_db", &PointResult::snr_db)
        .def_readonly("trials", &PointResult::trials)
        .def_readonly("block_errors", &PointResult::block_errors)
        .def_readonly("info_bit_errors", &PointResult::info_bit_errors)
        .def_readonly("bler", &PointResult::bler)
        .def_readonly("ber", &PointResult::ber)
        .def_readonly("ci_low", &PointResult::ci_low)
        .def_readonly("ci_high", &PointResult::ci_high);

    m.def(
        "run_bler",
        [](const LiftedCode& code, const std::vector<int>& block_of_bit,
           const std::vector<double>& snr_db, int num_blocks, int max_iters, double scaling,
           std::int64_t trials, std::uint64_t seed, std::int64_t stop_at_errors, int threads) {
            ChannelConfig ccfg;
            ccfg.num_blocks = num_blocks;
            ccfg.snr_db = snr_db;
            DecoderConfig dcfg;
            dcfg.max_iters = max_iters;
            dcfg.scaling = scaling;
            BlerOptions opt;
            opt.trials_per_point = trials;
            opt.seed = seed;
            opt.stop_at_errors = stop_at_errors;
            opt.threads = threads;
            return run_bler(code, block_of_bit, ccfg, dcfg, opt);
        },
        py::arg("code"), py::arg("block_of_bit"), py::arg("snr_db"), py::arg("num_blocks") = 2,
        py::arg("max_iters") = 50, py::arg("scaling") = 1.0, py::arg("trials") = 10000,
        py::arg("seed") = 0, py::arg("stop_at_errors") = 100, py::arg("threads") = 1);

    m.def("estimate_diversity_slope", &estimate_diversity_slope, py::arg("results"),
          py::arg("min_errors") = 100);
}
