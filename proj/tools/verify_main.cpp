#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "varlp/kernels.hpp"
#include "varlp/verify.hpp"

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("VARLP_OUT_DIR");
    return env ? env : "reports";
}

int cmd_run(const std::string& suite, const std::string& out_dir, unsigned jobs,
            std::uint64_t seed_override, bool have_seed) {
    nlohmann::json patched;
    std::string path = suite;
    if (have_seed) {
        // materialize a patched suite with the seed override
        std::ifstream in(suite);
        if (!in) throw varlp::ParseError("cannot open suite file " + suite);
        in >> patched;
        auto& arr = patched.is_array() ? patched : patched.at("scenarios");
        for (auto& sj : arr) sj["seed"] = seed_override;
        path = out_dir + "/.suite_patched.json";
        std::filesystem::create_directories(out_dir);
        std::ofstream out(path);
        out << patched.dump();
    }
    const varlp::SuiteResult res = varlp::run_suite(path, out_dir, jobs);
    for (const auto& rep : res.reports)
        std::cout << (rep.pass ? "pass  " : "FAIL  ") << rep.scenario_id << "  (" << rep.target
                  << ", max ratio " << rep.max_ratio << ")\n";
    std::cout << (res.all_pass ? "suite: all scenarios pass" : "suite: FAILURES present") << "\n";
    return res.all_pass ? 0 : 1;
}

int cmd_list(const std::string& suite) {
    if (!suite.empty()) {
        std::ifstream in(suite);
        if (!in) throw varlp::ParseError("cannot open suite file " + suite);
        nlohmann::json doc;
        in >> doc;
        const auto& arr = doc.is_array() ? doc : doc.at("scenarios");
        std::cout << "scenarios in " << suite << ":\n";
        for (const auto& sj : arr)
            std::cout << "  " << sj.at("id").get<std::string>() << "  ["
                      << sj.at("target").get<std::string>() << "]\n";
        return 0;
    }
    std::cout << "verification targets:\n";
    for (const auto& [name, desc] : varlp::list_targets())
        std::cout << "  " << name << "  -  " << desc << "\n";
    return 0;
}

int cmd_probe(const std::string& name, double beta_param, double alpha,
              const std::string& r_spec, int variant, const std::string& out_dir) {
    using namespace varlp;
    const Kernel kernel = kernel_by_name(name, beta_param, alpha);
    const VariableExponent r = VariableExponent::from_json_string(r_spec);
    const bool fractional = name.rfind("fractional", 0) == 0;
    const VariableExponent beta = fractional ? VariableExponent::constant(1.0 / alpha)
                                             : VariableExponent::constant(kInf);

    HormanderProbeConfig cfg;
    const Interval active = kernel.x_support.value_or(Interval(-8.0, 8.0));
    for (double len : {0.5, 1.0, 2.0, 4.0})
        for (double c = active.a - 6.0; c <= active.b + 6.0; c += 0.5 * len)
            cfg.cubes.emplace_back(c, c + len);

    const HormanderReport hr = hormander_class_probe(kernel, beta, r, variant, cfg);
    const SizeReport sr = size_condition_probe(kernel, beta, r, variant, cfg);

    nlohmann::json out;
    out["kernel"] = name;
    out["variant"] = variant;
    out["hormander"] = hr.to_json();
    out["size"] = sr.to_json();
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/probe_" + name + "_v" + std::to_string(variant) + ".json";
    std::ofstream f(path);
    f << out.dump(2) << "\n";
    std::cout << "hormander verdict: " << to_string(hr.verdict)
              << "  (sup " << hr.sup << ")\n"
              << "size verdict:      " << to_string(sr.verdict) << "  (sup ratio "
              << sr.sup_ratio << ", raw slope " << sr.raw_slope << ")\n"
              << "report written to " << path << "\n";
    return hr.verdict == varlp::Verdict::diverging ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale verification harness for variable-exponent maximal and"
                 " rough-operator inequalities"};
    app.require_subcommand(1);

    std::string suite, out_dir = default_out_dir();
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    bool have_seed = false;

    auto* run = app.add_subcommand("run", "run a scenario suite");
    run->add_option("suite", suite, "suite JSON file")->required();
    run->add_option("--out", out_dir, "output directory (env VARLP_OUT_DIR)");
    run->add_option("--jobs", jobs, "parallel scenarios");
    run->add_option("--seed", seed, "override every scenario seed")
        ->each([&](const std::string&) { have_seed = true; });

    std::string list_suite;
    auto* list = app.add_subcommand("list", "list targets or suite scenarios");
    list->add_option("suite", list_suite, "optional suite JSON file");

    std::string kname;
    double beta_param = 1.0, alpha = 0.5;
    std::string r_spec = R"({"kind":"constant","value":2})";
    int variant = 1;
    auto* probe = app.add_subcommand("probe-kernel", "probe a kernel's H- and S-conditions");
    probe->add_option("name", kname, "K | Ktilde | fractional_K | fractional_Ktilde")->required();
    probe->add_option("--beta-param", beta_param, "K2 parameter beta");
    probe->add_option("--alpha", alpha, "fractional order");
    probe->add_option("--r", r_spec, "exponent r(.) as JSON");
    probe->add_option("--variant", variant, "1 or 2")->check(CLI::Range(1, 2));
    probe->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (*run) return cmd_run(suite, out_dir, jobs, seed, have_seed);
        if (*list) return cmd_list(list_suite);
        if (*probe) return cmd_probe(kname, beta_param, alpha, r_spec, variant, out_dir);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const varlp::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const varlp::ScenarioInvalid& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
