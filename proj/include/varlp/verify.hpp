#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varlp/cz_sparse.hpp"
#include "varlp/exponent.hpp"
#include "varlp/grid.hpp"
#include "varlp/kernels.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/maximal.hpp"
#include "varlp/weights.hpp"

namespace varlp {

enum class Target {
    thm_M,
    coro_Mr,
    thm_hormander_a,
    thm_hormander_b,
    thm_T,
    thm_hormander_frac,
    thm_TB,
    thm_borde,
    prop_conj_norm,
    lemma_cz,
    holder,
    cube_norms,
};

Target target_from_string(const std::string& s);
std::string to_string(Target t);

// one line per registered target: (name, description)
std::vector<std::pair<std::string, std::string>> list_targets();

struct Scenario {
    std::string id;
    Target target = Target::holder;
    std::uint64_t seed = 1;
    nlohmann::json raw;

    static Scenario from_json(const nlohmann::json& j);
};

struct CaseResult {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct VerificationReport {
    std::string scenario_id;
    std::string target;
    std::vector<CaseResult> cases;
    double max_ratio = 0.0;
    double recorded_constant = 0.0;
    double trend = 0.0;  // target-specific: slope or spread
    bool pass = false;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

VerificationReport run_scenario(const Scenario& s);

struct SuiteResult {
    std::vector<VerificationReport> reports;
    bool all_pass = true;
};

// Runs every scenario in the file; writes one JSON report per scenario and
// a suite-level CSV into out_dir. jobs > 1 runs scenarios concurrently.
SuiteResult run_suite(const std::string& suite_path, const std::string& out_dir,
                      unsigned jobs = 1);

// Named test-function suite: dyadic indicators, tents, sign-oscillating
// steps, then seeded random piecewise-constant profiles. Functions are
// centered at `center` with unit-scale support.
struct SuiteFunction {
    std::string id;
    std::function<double(double)> f;
};

std::vector<SuiteFunction> default_function_suite(std::size_t count, double center,
                                                  std::uint64_t seed);

// dilation about c: x -> f(c + t (x - c))
std::function<double(double)> dilate_about(const std::function<double(double)>& f, double c,
                                           double t);

}  // namespace varlp
