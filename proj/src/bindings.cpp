#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "varlp/cz_sparse.hpp"
#include "varlp/kernels.hpp"
#include "varlp/verify.hpp"

namespace py = pybind11;
using namespace varlp;

namespace {

std::vector<Interval> to_intervals(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Interval> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) out.emplace_back(a, b);
    return out;
}

py::dict norm_result(const NormResult& n) {
    py::dict d;
    d["value"] = n.value;
    d["bracket_lo"] = n.bracket_lo;
    d["bracket_hi"] = n.bracket_hi;
    d["modular_at_value"] = n.modular_at_value;
    return d;
}

py::dict class_report(const ClassTestReport& rep) {
    py::dict d;
    d["verdict"] = to_string(rep.verdict);
    d["max_ratio"] = rep.max_ratio;
    d["trend_slope"] = rep.trend_slope;
    d["trend_scales"] = rep.trend_scales;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "variable-exponent Lebesgue toolkit: Luxemburg norms, fractional maximal "
              "operators, Muckenhoupt-type weight classes, Calderon-Zygmund/sparse "
              "decompositions and Hormander-condition kernel probes on 1-D grids";

    py::register_exception<RangeError>(m, "RangeError");
    py::register_exception<ExponentMismatch>(m, "ExponentMismatch");
    py::register_exception<RootAboveThreshold>(m, "RootAboveThreshold");
    py::register_exception<ScenarioInvalid>(m, "ScenarioInvalid");
    py::register_exception<ParseError>(m, "ParseFailure");

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>())
        .def_readonly("a", &Interval::a)
        .def_readonly("b", &Interval::b)
        .def("center", &Interval::center)
        .def("length", &Interval::length)
        .def("dilated", &Interval::dilated)
        .def("contains", py::overload_cast<double>(&Interval::contains, py::const_));

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def_static("uniform",
                    [](Interval w, std::size_t cells) {
                        return std::const_pointer_cast<Grid>(Grid::uniform(w, cells));
                    })
        .def_static(
            "graded",
            [](Interval w, const std::vector<double>& sing, std::size_t cells, int floor_exp) {
                return std::const_pointer_cast<Grid>(Grid::graded(w, sing, cells, floor_exp));
            },
            py::arg("window"), py::arg("singular_points"), py::arg("cells"),
            py::arg("floor_exp") = Grid::kDefaultFloorExp)
        .def("cell_count", &Grid::cell_count)
        .def("midpoint", &Grid::midpoint)
        .def("breakpoints", &Grid::breakpoints);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init([](std::shared_ptr<Grid> g, std::vector<double> v) {
            return GridFunction(std::move(g), std::move(v));
        }))
        .def_static("sample",
                    [](std::shared_ptr<Grid> g, const std::function<double(double)>& f) {
                        return GridFunction::sample(std::move(g), f);
                    })
        .def("values", &GridFunction::values)
        .def("__call__", &GridFunction::operator())
        .def("write_csv", &GridFunction::write_csv)
        .def_static("read_csv", &GridFunction::read_csv);

    m.def("integrate", py::overload_cast<const GridFunction&, const Interval&>(&integrate));

    py::class_<VariableExponent>(m, "VariableExponent")
        .def_static("constant", &VariableExponent::constant)
        .def_static("from_json", &VariableExponent::from_json_string)
        .def("__call__", &VariableExponent::operator())
        .def("reciprocal", &VariableExponent::reciprocal)
        .def("p_infinity", &VariableExponent::p_infinity);

    m.attr("INF") = kInf;
    m.def("conjugate", &conjugate);
    m.def("combine", &combine);
    m.def("beta_from_pair", &beta_from_pair);
    m.def("harmonic_mean", &harmonic_mean, py::arg("p"), py::arg("cube"),
          py::arg("cells") = 4096);
    m.def(
        "verify_log_holder",
        [](const VariableExponent& p, Interval domain, std::size_t samples, double cap) {
            const auto rep = verify_log_holder(p, domain, samples, cap);
            py::dict d;
            d["c0"] = rep.c0;
            d["c_inf"] = rep.c_inf;
            d["pass"] = rep.pass;
            d["witness"] = py::make_tuple(rep.witness_x, rep.witness_y);
            return d;
        },
        py::arg("p"), py::arg("domain"), py::arg("samples") = 512, py::arg("cap") = 20.0);

    m.def(
        "modular",
        [](const GridFunction& f, const VariableExponent& p, double lam) {
            return modular(f, p, lam);
        },
        py::arg("f"), py::arg("p"), py::arg("lam"));
    m.def(
        "luxemburg_norm",
        [](const GridFunction& f, const VariableExponent& p) {
            return norm_result(luxemburg_norm(f, p));
        },
        py::arg("f"), py::arg("p"));
    m.def(
        "luxemburg_norm_on",
        [](const GridFunction& f, const VariableExponent& p, const Interval& q) {
            return norm_result(luxemburg_norm(f, p, q));
        },
        py::arg("f"), py::arg("p"), py::arg("cube"));
    m.def(
        "indicator_norm",
        [](const VariableExponent& p, const Interval& q, std::size_t cells) {
            return indicator_norm(p, q, cells).value;
        },
        py::arg("p"), py::arg("cube"), py::arg("cells") = 256);
    m.def("holder", [](const GridFunction& f, const GridFunction& g, const VariableExponent& p) {
        const auto rep = holder(f, g, p);
        py::dict d;
        d["lhs"] = rep.lhs;
        d["rhs"] = rep.rhs;
        d["ratio"] = rep.ratio;
        return d;
    });
    m.def("power_norm_identity_check",
          [](const GridFunction& f, const VariableExponent& p, double s0) {
              const auto rep = power_norm_identity_check(f, p, s0);
              py::dict d;
              d["lhs"] = rep.lhs;
              d["rhs"] = rep.rhs;
              d["rel_gap"] = rep.rel_gap;
              return d;
          });
    m.def(
        "conjugate_norm",
        [](const GridFunction& f, const VariableExponent& p, const VariableExponent& r) {
            const auto rep = conjugate_norm(f, p, r);
            py::dict d;
            d["value"] = rep.value;
            d["witness"] = rep.witness;
            return d;
        },
        py::arg("f"), py::arg("p"), py::arg("r"));

    m.def(
        "average_op",
        [](const GridFunction& f, const Interval& q, const VariableExponent& beta,
           const VariableExponent& r) { return average_op(f, q, beta, r); },
        py::arg("f"), py::arg("cube"), py::arg("beta"), py::arg("r"));
    m.def(
        "maximal",
        [](const GridFunction& f, double x, const std::vector<std::pair<double, double>>& cubes,
           const VariableExponent& beta, const VariableExponent& r) {
            MaximalConfig cfg{to_intervals(cubes), beta, r};
            return maximal(f, x, cfg);
        },
        py::arg("f"), py::arg("x"), py::arg("cubes"), py::arg("beta"), py::arg("r"));
    m.def(
        "sharp_maximal",
        [](const GridFunction& f, double x, const std::vector<std::pair<double, double>>& cubes) {
            return sharp_maximal(f, x, to_intervals(cubes));
        },
        py::arg("f"), py::arg("x"), py::arg("cubes"));
    m.def(
        "test_cubes",
        [](const Interval& window, int d0, int d1, int shifts) {
            std::vector<std::pair<double, double>> out;
            for (const auto& q : test_cubes(window, d0, d1, shifts)) out.emplace_back(q.a, q.b);
            return out;
        },
        py::arg("window"), py::arg("depth_from"), py::arg("depth_to"), py::arg("shifts") = 0);

    py::class_<Weight>(m, "Weight")
        .def_static("constant",
                    [](std::shared_ptr<Grid> g, double c) {
                        return Weight::constant(std::move(g), c);
                    })
        .def_static("power",
                    [](std::shared_ptr<Grid> g, double delta, double x0) {
                        return Weight::power(std::move(g), delta, x0);
                    })
        .def("values", &Weight::values);
    m.def("test_Ap_classical",
          [](const Weight& w, double p, const std::vector<std::pair<double, double>>& cubes) {
              return class_report(test_Ap_classical(w, p, to_intervals(cubes)));
          });
    m.def("test_Ap_variable",
          [](const Weight& w, const VariableExponent& p,
             const std::vector<std::pair<double, double>>& cubes) {
              return class_report(test_Ap_variable(w, p, to_intervals(cubes)));
          });
    m.def("test_Apr",
          [](const Weight& w, const VariableExponent& p, const VariableExponent& r,
             const std::vector<std::pair<double, double>>& cubes) {
              return class_report(test_Apr(w, p, r, to_intervals(cubes)));
          });

    py::class_<DyadicFamily>(m, "DyadicFamily")
        .def(py::init<Interval, int>())
        .def("aligned_grid",
             [](const DyadicFamily& fam) {
                 return std::const_pointer_cast<Grid>(fam.aligned_grid());
             })
        .def("root", &DyadicFamily::root);
    m.def(
        "cz_decompose",
        [](const GridFunction& f, const VariableExponent& beta, const VariableExponent& r,
           const DyadicFamily& fam, double lam) {
            const CZLevel level = cz_decompose(f, beta, r, fam, lam);
            py::list cubes;
            for (std::size_t i = 0; i < level.cubes.size(); ++i) {
                const Interval iv = fam.interval_of(level.cubes[i]);
                cubes.append(py::make_tuple(iv.a, iv.b, level.averages[i]));
            }
            return cubes;
        },
        py::arg("f"), py::arg("beta"), py::arg("r"), py::arg("family"), py::arg("lam"));
    m.def(
        "build_sparse",
        [](const GridFunction& f, const VariableExponent& beta, const VariableExponent& r,
           const DyadicFamily& fam, double a, int k_min, int k_max) {
            const SparseFamily s = build_sparse(f, beta, r, fam, a, k_min, k_max);
            py::dict d;
            d["empty"] = s.empty;
            d["eta"] = s.eta;
            d["json"] = s.to_json().dump();
            return d;
        },
        py::arg("f"), py::arg("beta"), py::arg("r"), py::arg("family"), py::arg("a"),
        py::arg("k_min"), py::arg("k_max"));

    py::class_<Kernel>(m, "Kernel")
        .def_readonly("name", &Kernel::name)
        .def("__call__", [](const Kernel& k, double x, double y) { return k.eval(x, y); });
    m.def("kernel_K1", &kernel_K1);
    m.def("kernel_K2", &kernel_K2);
    m.def("kernel_by_name", &kernel_by_name, py::arg("name"), py::arg("beta_param") = 1.0,
          py::arg("alpha") = 0.5);
    m.def("apply_operator",
          [](const Kernel& k, const GridFunction& f, double x) { return apply_operator(k, f, x); });
    m.def(
        "hormander_sum",
        [](const Kernel& k, const Interval& q, double x, double z, const VariableExponent& beta,
           const VariableExponent& r, int variant, int m_max) {
            return hormander_sum(k, q, x, z, beta, r, variant, m_max).total;
        },
        py::arg("kernel"), py::arg("cube"), py::arg("x"), py::arg("z"), py::arg("beta"),
        py::arg("r"), py::arg("variant") = 1, py::arg("m_max") = 40);
    m.def(
        "hormander_class_probe",
        [](const Kernel& k, const VariableExponent& beta, const VariableExponent& r, int variant,
           const std::vector<std::pair<double, double>>& cubes) {
            HormanderProbeConfig cfg;
            cfg.cubes = to_intervals(cubes);
            const auto rep = hormander_class_probe(k, beta, r, variant, cfg);
            py::dict d;
            d["verdict"] = to_string(rep.verdict);
            d["sup"] = rep.sup;
            d["json"] = rep.to_json().dump();
            return d;
        },
        py::arg("kernel"), py::arg("beta"), py::arg("r"), py::arg("variant"), py::arg("cubes"));
    m.def(
        "size_condition_probe",
        [](const Kernel& k, const VariableExponent& beta, const VariableExponent& r, int variant,
           const std::vector<std::pair<double, double>>& cubes) {
            HormanderProbeConfig cfg;
            cfg.cubes = to_intervals(cubes);
            cfg.ladder = {40, 48};
            const auto rep = size_condition_probe(k, beta, r, variant, cfg);
            py::dict d;
            d["verdict"] = to_string(rep.verdict);
            d["sup_ratio"] = rep.sup_ratio;
            d["raw_slope"] = rep.raw_slope;
            return d;
        },
        py::arg("kernel"), py::arg("beta"), py::arg("r"), py::arg("variant"), py::arg("cubes"));
    m.def(
        "bmo_seminorm",
        [](const GridFunction& f, const Weight& w,
           const std::vector<std::pair<double, double>>& cubes) {
            return bmo_seminorm(f, w, to_intervals(cubes));
        },
        py::arg("f"), py::arg("weight"), py::arg("cubes"));

    m.def(
        "run_scenario",
        [](const std::string& spec) {
            const auto s = Scenario::from_json(nlohmann::json::parse(spec));
            return run_scenario(s).to_json().dump();
        },
        py::arg("scenario_json"), "run one verification scenario, returns the report as JSON");
    m.def(
        "run_suite",
        [](const std::string& path, const std::string& out_dir, unsigned jobs) {
            const auto res = run_suite(path, out_dir, jobs);
            py::dict d;
            d["all_pass"] = res.all_pass;
            py::list reports;
            for (const auto& rep : res.reports) reports.append(rep.to_json().dump());
            d["reports"] = reports;
            return d;
        },
        py::arg("suite_path"), py::arg("out_dir") = "reports", py::arg("jobs") = 1);
}
