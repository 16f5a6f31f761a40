#pragma once

#include "ammcalc/ammcalc.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ammcli {

using nlohmann::json;

enum Exit : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

struct Globals {
    std::string curve;
    std::string out;
    std::string format;  // empty: command default
    double tol = 1e-8;
    std::uint64_t seed = 20240101;
    unsigned jobs = 1;
    bool skip_validate = false;
};

/// Raised for bad command-line input that CLI11 cannot catch (exit 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// %.12g
std::string fmt12(double v);
/// Rounds to 12 significant digits so JSON and CSV outputs agree.
double round12(double v);
json num(double v);

/// Rows of optional numbers (nullopt prints as an empty CSV cell / null).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    std::string csv() const;
    json to_json() const;
};

/// Writes to --out or stdout.
void emit(const Globals& g, const std::string& text);
void emit_table(const Globals& g, const Table& t, const std::string& default_format);
void emit_json(const Globals& g, const json& j);

std::string resolve_format(const Globals& g, const std::string& default_format);

/// Loads --curve (required) and runs the axiom check unless skipped.
ammcalc::Curve load_curve(const Globals& g);
void require_valid(const Globals& g, const ammcalc::Curve& c);

/// "a,b,c" -> three-way valuation.
ammcalc::ThreeWayValuation parse_three_way(const std::string& s);

/// Deterministic uniform doubles in [lo, hi) from a 64-bit Mersenne Twister.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed);
    double uniform(double lo, double hi);

private:
    std::mt19937_64 rng_;
};

json law_json(const ammcalc::LawResidual& l, double tol);

int cmd_measure(const Globals& g, int grid, const std::vector<double>& vs,
                const std::vector<double>& v2s);
int cmd_verify(const Globals& g, int samples);
int cmd_expect(const Globals& g, double v0, const std::vector<double>& alphas,
               const std::string& dist, const std::string& measure, bool capitalization);
struct ComposeArgs {
    std::string spec;
    std::string op = "seq";
    std::string right;
    double a = 1.0;
    double b = 1.0;
    std::vector<double> queries;
    std::string V;
    std::string V2;
    double v = 0.5;
    double v2 = 0.2;
};
int cmd_compose(const Globals& g, const ComposeArgs& args);
struct AdjustArgs {
    double x = 1.0;
    std::string state;
    std::optional<double> v;
    std::string p = "uniform";
    std::string p_tilde;
};
int cmd_adjust(const Globals& g, const AdjustArgs& args);
struct PartitionArgs {
    std::string spec;
    std::string axis = "X";
    double anchor = 1.0;
    double ratio = 2.0;
    std::size_t count = 60;
    bool no_tail = false;
    bool conservation = false;
};
int cmd_partition(const Globals& g, const PartitionArgs& args);

}  // namespace ammcli
