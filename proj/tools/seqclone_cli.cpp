// seqclone: verification reports for the sequential cloning machine.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error,
// 3 dense dimension over the cap.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqclone/appendix_audit.hpp"
#include "seqclone/direct_cloner.hpp"
#include "seqclone/mps_cloner.hpp"
#include "seqclone/sequential_machine.hpp"
#include "seqclone/svd_oracle.hpp"

using json = nlohmann::ordered_json;
using namespace seqclone;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TaskOptions {
    int n = 1;
    int m = 1;
    int d = 2;
    std::uint64_t cap = kDefaultDenseCap;
    std::string out;
};

void add_task_options(CLI::App* cmd, TaskOptions& o) {
    cmd->add_option("--n", o.n, "input copies N")->required();
    cmd->add_option("--m", o.m, "output copies M")->required();
    cmd->add_option("--d", o.d, "levels per site")->capture_default_str();
    cmd->add_option("--cap", o.cap, "maximum dense amplitude count")->capture_default_str();
    cmd->add_option("--out", o.out, "write to this file instead of stdout");
}

CloneTask make_task(const TaskOptions& o) {
    CloneTask task;
    try {
        task = CloneTask(o.n, o.m, o.d);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    task.dense_cap = o.cap;
    return task;
}

json task_json(const CloneTask& t) { return json{{"N", t.inputs}, {"M", t.copies}, {"d", t.levels}}; }

json report_head(const std::string& command, const CloneTask& task) {
    json r;
    r["engine_version"] = std::string(kEngineVersion);
    r["command"] = command;
    r["task"] = task_json(task);
    return r;
}

std::vector<OccupationVector> parse_inputs(const CloneTask& task, const std::string& text) {
    if (text == "all") return input_labels(task);
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw usage_error("--input: cannot parse '" + text + "'");
        }
    }
    try {
        if (parts.size() == 1 && task.is_qubit()) return {OccupationVector::qubit(task.inputs, parts[0])};
        if (static_cast<int>(parts.size()) != task.levels) throw usage_error("--input: expected d comma-separated counts");
        OccupationVector label(parts);
        if (label.site_span() != task.inputs) throw usage_error("--input: counts must sum to N");
        return {label};
    } catch (const std::invalid_argument& e) {
        throw usage_error(std::string("--input: ") + e.what());
    }
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw usage_error("cannot open output file " + path);
    f << text;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct FidelityOptions : TaskOptions {
    int samples = 20;
    std::uint64_t seed = 0;
    double tol = 1e-12;
    std::string csv;
};

int cmd_fidelity(const FidelityOptions& o) {
    const CloneTask task = make_task(o);
    task.require_dense();
    const auto scan = universality_scan(task, o.samples, o.seed);
    const auto inputs = random_inputs(task.levels, o.samples, o.seed);
    const auto direct = measure_fidelity(task, inputs);

    json r = report_head("fidelity", task);
    r["parameters"] = {{"samples", o.samples}, {"seed", o.seed}, {"tol", o.tol}};
    json res;
    res["closed_form"] = to_string(scan.closed_form);
    res["closed_form_decimal"] = to_double(scan.closed_form);
    res["sequential_min"] = scan.min;
    res["sequential_max"] = scan.max;
    res["spread"] = scan.spread;
    res["sequential_max_abs_error"] = scan.max_abs_error;
    res["direct_max_abs_error"] = direct.max_abs_error;
    r["results"] = res;
    const bool pass = scan.max_abs_error <= o.tol && direct.max_abs_error <= o.tol && scan.spread <= o.tol;
    r["pass"] = pass;
    emit(render(r), o.out);

    if (!o.csv.empty()) {
        std::ostringstream table;
        table << "sample,site,sequential,direct\n";
        table.precision(17);
        for (std::size_t k = 0; k < scan.measured.size(); ++k) {
            table << scan.measured[k].input_index << ',' << scan.measured[k].site << ',' << scan.measured[k].value << ','
                  << direct.measured[k].value << '\n';
        }
        emit(table.str(), o.csv);
    }
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct VerifyOptions : TaskOptions {
    std::string input = "all";
    double tol = 1e-10;
    double iso_tol = 1e-12;
    int samples = 20;
    std::uint64_t seed = 0;
};

int cmd_verify(const VerifyOptions& o) {
    const CloneTask task = make_task(o);
    task.require_dense();
    const auto labels = parse_inputs(task, o.input);

    json r = report_head("verify", task);
    r["parameters"] = {{"input", o.input}, {"tol", o.tol}, {"isometry_tol", o.iso_tol}};
    bool pass = true;
    json per = json::array();
    for (const auto& label : labels) {
        const CloneChain chain = build_chain(task, label);
        const IsometryReport iso = verify_isometry(chain, o.iso_tol);
        const PureState oracle = clone_symmetric(task, label);
        const ComparisonReport cmp = compare(chain, oracle, o.tol);
        json spectra = json::array();
        for (const auto& s : chain.spectra) {
            json w = json::array();
            for (const auto& v : s.weights) w.push_back(to_string(v));
            spectra.push_back({{"cut", s.cut}, {"region", to_string(s.region)}, {"lambda_squared", w}});
        }
        const bool ok = iso.passed() && cmp.pass;
        pass = pass && ok;
        per.push_back({{"input", label.str()},
                       {"isometry_max_deviation", iso.max_deviation()},
                       {"isometry_failing_sites", iso.failing_sites},
                       {"contraction_max_error", cmp.contraction_delta},
                       {"spectrum_max_delta", cmp.max_spectrum_delta()},
                       {"ranks_match", cmp.ranks_match},
                       {"spectra", spectra},
                       {"pass", ok}});
    }
    json res;
    res["inputs"] = per;
    if (o.input == "all") {
        const SectorChain machine = build_sector_machine(task);
        const IsometryReport stacked = verify_stacked_isometry(machine, o.iso_tol);
        double worst = 0;
        for (const auto& x : random_inputs(task.levels, o.samples, o.seed)) {
            worst = std::max(worst, max_abs_difference(clone_input(task, x), run(machine, x)));
        }
        const bool ok = stacked.passed() && worst <= o.tol;
        pass = pass && ok;
        res["machine"] = {{"sector_count", machine.sectors.size()},
                          {"stacked_left_dims", stacked_left_dims(machine)},
                          {"stacked_isometry_max_deviation", stacked.max_deviation()},
                          {"samples", o.samples},
                          {"seed", o.seed},
                          {"run_vs_direct_max_error", worst},
                          {"pass", ok}};
    }
    r["results"] = res;
    r["pass"] = pass;
    emit(render(r), o.out);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct BondOptions : TaskOptions {
    std::string csv;
};

int cmd_bond_report(const BondOptions& o) {
    const CloneTask task = make_task(o);
    task.require_dense();
    const BondReport br = bond_report(task);

    json r = report_head("bond-report", task);
    r["parameters"] = {{"rank_threshold", kDefaultRankThreshold}};
    bool ranks_match = true;
    json per = json::array();
    for (std::size_t k = 0; k < br.inputs.size(); ++k) {
        std::vector<int> numeric;
        const PureState state = clone_symmetric(task, br.inputs[k]);
        for (int n = 1; n < task.site_count(); ++n) numeric.push_back(schmidt_spectrum_numeric(state, n).rank_at());
        ranks_match = ranks_match && numeric == br.profiles[k].ranks;
        per.push_back({{"input", br.inputs[k].str()},
                       {"ranks", br.profiles[k].ranks},
                       {"numeric_ranks", numeric},
                       {"max_rank", br.profiles[k].max_rank}});
    }
    json res;
    res["inputs"] = per;
    res["global_max_rank"] = br.global_max;
    res["bound"] = br.bound ? json(*br.bound) : json(nullptr);
    res["within_bound"] = br.within_bound;
    res["sector_count"] = br.sector_count;
    res["stacked_uniform"] = br.stacked_uniform;
    res["stacked_direct_sum"] = br.stacked_direct_sum;
    res["stacked_within_bound"] = br.bound ? json(br.stacked_direct_sum <= *br.bound) : json(nullptr);
    res["ranks_match_numeric"] = ranks_match;
    r["results"] = res;
    const bool pass = br.within_bound && ranks_match;
    r["pass"] = pass;
    emit(render(r), o.out);

    if (!o.csv.empty()) {
        std::ostringstream table;
        table << "input,cut,rank\n";
        for (std::size_t k = 0; k < br.inputs.size(); ++k) {
            for (std::size_t c = 0; c < br.profiles[k].ranks.size(); ++c) {
                table << '"' << br.inputs[k].str() << "\"," << c + 1 << ',' << br.profiles[k].ranks[c] << '\n';
            }
        }
        emit(table.str(), o.csv);
    }
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct DumpOptions : TaskOptions {
    std::string input;
    std::string what = "state";
    double tol = 1e-10;
};

int cmd_dump(const DumpOptions& o) {
    const CloneTask task = make_task(o);
    task.require_dense();
    const auto labels = parse_inputs(task, o.input);
    if (labels.size() != 1) throw usage_error("dump: --input must name a single label");
    std::ostringstream text;
    if (o.what == "state") {
        write_state_dump(text, clone_symmetric(task, labels.front()));
    } else if (o.what == "chain") {
        write_chain_dump(text, build_chain(task, labels.front()).tensors);
    } else if (o.what == "appendix-audit") {
        if (!task.is_qubit()) throw usage_error("appendix-audit needs --d 2");
        appendix::write_audit(text, appendix::audit(build_chain(task, labels.front()), o.tol));
    } else {
        throw usage_error("--what must be state, chain or appendix-audit");
    }
    emit(text.str(), o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential universal cloning machine: construction and verification"};
    app.require_subcommand(1);

    FidelityOptions fo;
    auto* fid = app.add_subcommand("fidelity", "closed-form vs measured single-copy fidelity");
    add_task_options(fid, fo);
    fid->add_option("--samples", fo.samples, "random inputs")->capture_default_str()->check(CLI::PositiveNumber);
    fid->add_option("--seed", fo.seed, "random seed")->capture_default_str();
    fid->add_option("--tol", fo.tol, "pass tolerance")->capture_default_str();
    fid->add_option("--csv", fo.csv, "also write the per-sample table as CSV");

    VerifyOptions vo;
    auto* ver = app.add_subcommand("verify", "isometry, contraction and spectrum checks against the dense oracle");
    add_task_options(ver, vo);
    ver->add_option("--input", vo.input, "symmetric input label (m, comma list, or all)")->capture_default_str();
    ver->add_option("--tol", vo.tol, "comparison tolerance")->capture_default_str();
    ver->add_option("--isometry-tol", vo.iso_tol, "isometry tolerance")->capture_default_str();
    ver->add_option("--samples", vo.samples, "random inputs for the combined machine")->capture_default_str();
    ver->add_option("--seed", vo.seed, "random seed")->capture_default_str();

    BondOptions bo;
    auto* bond = app.add_subcommand("bond-report", "bond dimension profiles and the linear bound");
    add_task_options(bond, bo);
    bond->add_option("--csv", bo.csv, "also write the rank table as CSV");

    DumpOptions dopt;
    auto* dump = app.add_subcommand("dump", "state, chain or appendix-audit listing");
    add_task_options(dump, dopt);
    dump->add_option("--input", dopt.input, "symmetric input label (m or comma list)")->required();
    dump->add_option("--what", dopt.what, "state | chain | appendix-audit")->capture_default_str();
    dump->add_option("--tol", dopt.tol, "audit tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*fid) return cmd_fidelity(fo);
        if (*ver) return cmd_verify(vo);
        if (*bond) return cmd_bond_report(bo);
        if (*dump) return cmd_dump(dopt);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const too_large_error& e) {
        std::cerr << "too large: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
