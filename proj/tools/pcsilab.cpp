// Batch experiment runner: audits schemes, emits rate/capacity tables and
// vector-bank files, everything reproducible from the seed in the report.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcsilab/factory.hpp"
#include "pcsilab/pcsilab.hpp"

namespace {

using namespace pcsilab;

void write_output(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << data;
}

int cmd_audit(const std::string& scheme_name, std::uint32_t q, std::uint32_t K, std::uint32_t M,
              std::uint32_t l, std::uint64_t seed, const std::string& privacy_mode,
              std::uint64_t privacy_samples, const std::string& message_mode,
              std::uint64_t message_samples, std::uint64_t enum_budget, double p_threshold,
              const std::string& out_path) {
    std::unique_ptr<Scheme> scheme;
    try {
        scheme = build_scheme(scheme_name, q, K, M, l, seed);
    } catch (const SearchFailed& e) {
        std::cerr << "search failed: " << e.what() << " after " << e.attempts << " attempts\n";
        return kExitBudgetExceeded;
    } catch (const std::exception& e) {
        std::cerr << "invalid scheme/params: " << e.what() << "\n";
        return kExitUsage;
    }

    AuditOptions opt;
    opt.seed = seed;
    opt.privacy_mode =
        privacy_mode == "theta_S_lambda" ? PrivacyMode::ThetaSLambda : PrivacyMode::ThetaS;
    opt.privacy_samples = privacy_samples;
    opt.exhaustive_messages = message_mode != "sampled";
    opt.message_samples = message_samples;
    opt.correctness_max_trials = 400'000'000;
    opt.enumeration_budget = enum_budget;
    opt.p_threshold = p_threshold;

    // Refuse exhaustive message replay when the store space is unreasonable.
    const Params p = scheme->params();
    double log_states = double(p.K) * double(p.L) * std::log2(double(p.q));
    if (opt.exhaustive_messages && log_states > 26) {
        std::cerr << "note: q^(K*L) too large for exhaustive replay, sampling "
                  << opt.message_samples << " stores per scenario\n";
        opt.exhaustive_messages = false;
    }

    Field f = make_field(scheme->params().q);
    auto outcome = run_audit(*scheme, f, opt);
    write_output(out_path, outcome.report.dump(2) + "\n");
    return outcome.exit_code;
}

int cmd_capacity_table(std::uint32_t K_min, std::uint32_t K_max, std::uint32_t M_min,
                       std::uint32_t M_max, const std::string& out_path) {
    auto rows = capacity_table(K_min, K_max, M_min, M_max);
    write_output(out_path, capacity_table_csv(rows));
    return kExitPass;
}

int cmd_search(const std::string& mode, std::uint32_t q, std::uint32_t K, std::uint32_t M,
               std::uint32_t l, std::uint64_t seed, std::uint32_t budget,
               const std::string& out_path) {
    try {
        Field f = make_field(q);
        auto bank = search_vectors(f, K, M, bank_mode_from_string(mode), seed, l, budget);
        write_output(out_path, bank_to_json(bank).dump(2) + "\n");
        return kExitPass;
    } catch (const SearchFailed& e) {
        std::cerr << "search failed: " << e.what() << " after " << e.attempts << " attempts\n";
        return kExitBudgetExceeded;
    } catch (const std::exception& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-server PIR with coded side information: schemes, audits, capacities"};
    app.require_subcommand(1);

    // audit
    std::string scheme_name, privacy_mode = "theta_S", message_mode = "exhaustive", out_path;
    std::uint32_t q = 0, K = 0, M = 0, l = 0;
    std::uint64_t seed = 0, privacy_samples = 10000, message_samples = 100;
    std::uint64_t enum_budget = pcsilab::default_enumeration_budget();
    double p_threshold = 0.01;
    auto* audit = app.add_subcommand("audit", "audit one scheme end to end");
    audit->add_option("--scheme", scheme_name, "scheme name")->required();
    audit->add_option("--q", q, "field order");
    audit->add_option("--K", K, "number of messages");
    audit->add_option("--M", M, "side information support size");
    audit->add_option("--l", l, "extension degree override for bank schemes");
    audit->add_option("--seed", seed, "seed recorded in the report");
    audit->add_option("--privacy-mode", privacy_mode, "theta_S or theta_S_lambda")
        ->check(CLI::IsMember({"theta_S", "theta_S_lambda"}));
    audit->add_option("--samples", privacy_samples, "samples per cell in sampled privacy mode");
    audit->add_option("--message-mode", message_mode, "exhaustive or sampled")
        ->check(CLI::IsMember({"exhaustive", "sampled"}));
    audit->add_option("--message-samples", message_samples, "stores per scenario when sampled");
    audit->add_option("--enum-budget", enum_budget, "exact enumeration budget per cell");
    audit->add_option("--p-threshold", p_threshold, "chi-square pass threshold");
    audit->add_option("--out", out_path, "report file (stdout if omitted)");

    // capacity-table
    std::uint32_t K_min = 2, K_max = 6, M_min = 1, M_max = 0;
    std::string table_out;
    auto* table = app.add_subcommand("capacity-table", "emit the capacity table as CSV");
    table->add_option("--K-min", K_min, "smallest K");
    table->add_option("--K-max", K_max, "largest K");
    table->add_option("--M-min", M_min, "smallest M");
    table->add_option("--M-max", M_max, "largest M (0 = up to K)");
    table->add_option("--out", table_out, "CSV file (stdout if omitted)");

    // search
    std::string search_mode, bank_out;
    std::uint32_t sq = 0, sK = 0, sM = 0, sl = 0, sbudget = 64;
    std::uint64_t sseed = 0;
    auto* search = app.add_subcommand("search", "search and certify a vector bank");
    search->add_option("--mode", search_mode, "pcsi2|pcsi2_private|pcsi1|pcsi1_private")
        ->required()
        ->check(CLI::IsMember({"pcsi2", "pcsi2_private", "pcsi1", "pcsi1_private"}));
    search->add_option("--q", sq, "field order")->required();
    search->add_option("--K", sK, "number of messages")->required();
    search->add_option("--M", sM, "support size")->required();
    search->add_option("--l", sl, "extension degree (default: smallest satisfying the bound)");
    search->add_option("--seed", sseed, "seed");
    search->add_option("--budget", sbudget, "attempt budget");
    search->add_option("--out", bank_out, "bank file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return pcsilab::kExitUsage;
    }

    try {
        if (audit->parsed())
            return cmd_audit(scheme_name, q, K, M, l, seed, privacy_mode, privacy_samples,
                             message_mode, message_samples, enum_budget, p_threshold, out_path);
        if (table->parsed()) return cmd_capacity_table(K_min, K_max, M_min, M_max, table_out);
        if (search->parsed())
            return cmd_search(search_mode, sq, sK, sM, sl, sseed, sbudget, bank_out);
    } catch (const pcsilab::EnumerationBudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return pcsilab::kExitBudgetExceeded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pcsilab::kExitUsage;
    }
    return pcsilab::kExitUsage;
}
