// herzmult: command-line front end for the Herz multiplier toolbox.
//
//   herzmult frame       --d 1 --L 512 --N 65536 --k-min -4 --k-max 6
//   herzmult norm        --input f.csv --space tl --p 1/2 --q 2 --k-min -2 --k-max 4
//   herzmult apply       --input f.csv --symbol hilbert --output g.csv
//   herzmult class-norm  --case TL0 --params "n_start=2,slope=1,n_terms=5" --u 1/2 --t 1/2
//   herzmult classify    --family tl --p 1/2 --q 2 --u 1/2 --t 1/2 --s 0
//   herzmult experiment  sharp-tl0 --config run.cfg --set n_to=8 --out results/run
//   herzmult validate    sharp-tl0 --set slope=10 --set n_to=8
//
// Data goes to CSV, metadata to JSON. Errors exit with status 2 and print
// the name of the failed precondition first.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "herzmult/experiments.hpp"

namespace {

using hm::PreconditionError;
using json = nlohmann::ordered_json;

hm::SampledFunction read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("input", "cannot open " + path);
    if (path.size() > 4 && path.substr(path.size() - 4) == ".bin") return hm::read_binary(in);
    return hm::read_csv(in);
}

void write_output(const std::string& path, const hm::SampledFunction& f) {
    if (path.empty() || path == "-") return hm::write_csv(std::cout, f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("output", "cannot write " + path);
    if (path.size() > 4 && path.substr(path.size() - 4) == ".bin")
        hm::write_binary(out, f);
    else
        hm::write_csv(out, f);
}

double real_of(const std::string& key, const std::string& v) { return hm::parse_real(key, v); }

json report_json(const hm::Report& r) {
    json j;
    j["experiment"] = r.experiment;
    j["config"] = r.config;
    json summary = json::object();
    for (const auto& [k, v] : r.summary) summary[k] = v;
    j["summary"] = summary;
    j["columns"] = r.columns;
    j["rows"] = r.rows.size();
    return j;
}

hm::Config gather(const std::string& config_path, const std::vector<std::string>& sets) {
    hm::Config cfg = config_path.empty() ? hm::Config{} : hm::Config::load(config_path);
    for (const auto& s : sets) cfg.assign(s);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Herz-type Fourier multiplier toolbox"};
    app.require_subcommand(1);

    // Shared box and frame options.
    int d = 1, k_min = -4, k_max = 6;
    long long N = 65536;
    std::string L = "512";

    auto* frame = app.add_subcommand("frame", "Write the dyadic band profiles as CSV");
    int samples = 512;
    frame->add_option("--d", d);
    frame->add_option("--L", L);
    frame->add_option("--N", N);
    frame->add_option("--k-min", k_min);
    frame->add_option("--k-max", k_max);
    frame->add_option("--samples", samples);

    auto* norm = app.add_subcommand("norm", "Norm of a sampled function");
    std::string input, space = "tl", p = "2", q = "2", alpha = "0", u = "1", t = "1", s = "0";
    bool inhomogeneous = false;
    norm->add_option("--input", input, "CSV or .bin sampled function")->required();
    norm->add_option("--space", space)->check(CLI::IsMember({"lebesgue", "herz", "besov", "tl"}));
    norm->add_option("--p", p);
    norm->add_option("--q", q);
    norm->add_option("--alpha", alpha);
    norm->add_option("--u", u);
    norm->add_option("--t", t);
    norm->add_option("--s", s);
    norm->add_option("--k-min", k_min);
    norm->add_option("--k-max", k_max);
    norm->add_flag("--inhomogeneous", inhomogeneous);

    auto* apply = app.add_subcommand("apply", "Apply a multiplier to a sampled function");
    std::string symbol, case_kind, params, output;
    apply->add_option("--input", input)->required();
    apply->add_option("--symbol", symbol, "registered symbol name");
    apply->add_option("--case", case_kind, "example construction id");
    apply->add_option("--params", params, "construction parameters key=value,...");
    apply->add_option("--output", output, "CSV or .bin; stdout when omitted");

    auto* cnorm = app.add_subcommand("class-norm", "Per-scale Herz class norm of a multiplier");
    std::string route = "unit";
    cnorm->add_option("--symbol", symbol);
    cnorm->add_option("--case", case_kind);
    cnorm->add_option("--params", params);
    cnorm->add_option("--d", d);
    cnorm->add_option("--L", L);
    cnorm->add_option("--N", N);
    cnorm->add_option("--k-min", k_min);
    cnorm->add_option("--k-max", k_max);
    cnorm->add_option("--u", u);
    cnorm->add_option("--t", t);
    cnorm->add_option("--s", s);
    cnorm->add_option("--route", route)->check(CLI::IsMember({"unit", "dilated", "windowed"}));

    auto* classify = app.add_subcommand("classify", "Boundedness verdict for a parameter tuple");
    std::string family = "tl", weight_exponent;
    int l_max = 64;
    classify->add_option("--family", family)->check(CLI::IsMember({"tl", "besov", "weighted"}));
    classify->add_option("--d", d);
    classify->add_option("--p", p);
    classify->add_option("--q", q);
    classify->add_option("--u", u);
    classify->add_option("--t", t);
    classify->add_option("--s", s);
    classify->add_option("--weight-exponent", weight_exponent, "w(l) = (1+l)^e for --family weighted");
    classify->add_option("--l-max", l_max);

    std::string id, config_path, out_prefix;
    std::vector<std::string> sets;
    auto* experiment = app.add_subcommand("experiment", "Run a catalogued experiment");
    experiment->add_option("id", id)->required()->check(CLI::IsMember(hm::experiment_ids()));
    experiment->add_option("--config", config_path, "flat key=value file");
    experiment->add_option("--set", sets, "override key=value (repeatable)");
    experiment->add_option("--out", out_prefix, "write <prefix>.csv and <prefix>.json");

    auto* validate = app.add_subcommand("validate", "Dry-run the preconditions of an experiment");
    validate->add_option("id", id)->required()->check(CLI::IsMember(hm::experiment_ids()));
    validate->add_option("--config", config_path);
    validate->add_option("--set", sets);

    CLI11_PARSE(app, argc, argv);

    try {
        if (frame->parsed()) {
            hm::LPFrame fr(k_min, k_max, hm::BoxSpec{d, real_of("L", L), N});
            hm::write_frame_csv(std::cout, fr, samples);
        } else if (norm->parsed()) {
            const auto f = read_input(input);
            const hm::SpaceParams sp{real_of("p", p), real_of("q", q), real_of("alpha", alpha), !inhomogeneous};
            double v = 0;
            if (space == "lebesgue") {
                v = hm::lebesgue_norm(f, sp.p);
            } else if (space == "herz") {
                v = hm::herz_norm(f, {real_of("u", u), real_of("t", t), real_of("s", s)});
            } else {
                const hm::LPFrame fr(k_min, k_max, f.box);
                v = space == "besov" ? hm::besov_norm(f, sp, fr) : hm::tl_norm(f, sp, fr);
            }
            std::cout << hm::format_number(v) << '\n';
        } else if (apply->parsed()) {
            const auto f = read_input(input);
            if (symbol.empty() == case_kind.empty())
                throw PreconditionError("parameter", "give exactly one of --symbol and --case");
            const hm::MultiplierSymbol m = symbol.empty()
                                               ? hm::build_example(hm::parse_example(case_kind, params), f.box)
                                               : hm::standard_symbol(symbol, f.box.d);
            write_output(output, hm::apply(m, f));
        } else if (cnorm->parsed()) {
            const hm::BoxSpec box{d, real_of("L", L), N};
            if (symbol.empty() == case_kind.empty())
                throw PreconditionError("parameter", "give exactly one of --symbol and --case");
            const hm::MultiplierSymbol m = symbol.empty()
                                               ? hm::build_example(hm::parse_example(case_kind, params), box)
                                               : hm::standard_symbol(symbol, d);
            const hm::LPFrame fr(k_min, k_max, box);
            hm::ClassNormOptions opts;
            opts.route = route == "dilated"    ? hm::KernelRoute::Dilated
                         : route == "windowed" ? hm::KernelRoute::Windowed
                                               : hm::KernelRoute::UnitBox;
            const auto r = hm::class_norm(m, {real_of("u", u), real_of("t", t), real_of("s", s)}, k_min, k_max,
                                          fr, opts);
            hm::write_class_norm_csv(std::cout, r);
        } else if (classify->parsed()) {
            hm::Verdict v;
            const double P = real_of("p", p), Q = real_of("q", q), U = real_of("u", u);
            if (family == "weighted") {
                const double e = weight_exponent.empty() ? std::abs(1 / P - 1 / Q) : real_of("weight", weight_exponent);
                v = hm::classify_weighted(d, P, Q, U, hm::WeightSeq::from(l_max, [e](int l) {
                                              return std::pow(1.0 + l, e);
                                          }));
            } else if (family == "besov") {
                v = hm::classify_besov(d, P, Q, U, real_of("t", t), real_of("s", s));
            } else {
                v = hm::classify_tl(d, P, Q, U, real_of("t", t), real_of("s", s));
            }
            std::cout << hm::to_string(v) << '\n';
        } else if (experiment->parsed()) {
            const hm::Report r = hm::run_experiment(id, gather(config_path, sets));
            const json meta = report_json(r);
            if (out_prefix.empty()) {
                hm::write_report_csv(std::cout, r);
                std::cerr << meta.dump(2) << '\n';
            } else {
                std::ofstream csv(out_prefix + ".csv"), js(out_prefix + ".json");
                if (!csv || !js) throw PreconditionError("output", "cannot write " + out_prefix + ".{csv,json}");
                hm::write_report_csv(csv, r);
                js << meta.dump(2) << '\n';
            }
        } else if (validate->parsed()) {
            const auto diags = hm::validate(id, gather(config_path, sets));
            json j = json::array();
            for (const auto& dg : diags) j.push_back({{"name", dg.name}, {"detail", dg.detail}});
            std::cout << j.dump(2) << '\n';
        }
    } catch (const PreconditionError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
