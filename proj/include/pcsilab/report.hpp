#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "pcsilab/auditor.hpp"
#include "pcsilab/capacity.hpp"
#include "pcsilab/model.hpp"
#include "pcsilab/scheme.hpp"

namespace pcsilab {

/// Exit-code contract shared by the CLI and CI pipelines.
enum ExitCode : int {
    kExitPass = 0,
    kExitCorrectnessFailure = 1,
    kExitPrivacyFailure = 2,
    kExitBudgetExceeded = 3,
    kExitUsage = 64,
};

struct AuditOptions {
    bool exhaustive_messages = true;
    std::uint64_t message_samples = 1000;
    // Exhaustive replay bails out to sampling past this many trials (0: no cap).
    std::uint64_t correctness_max_trials = 0;
    PrivacyMode privacy_mode = PrivacyMode::ThetaS;
    std::uint64_t privacy_samples = 10000;
    std::uint64_t enumeration_budget = default_enumeration_budget();
    std::uint64_t rate_rounds = 16;
    std::uint64_t seed = 0;
    double p_threshold = 0.01;
};

struct AuditOutcome {
    CorrectnessReport correctness;
    PrivacyReport privacy;
    RateReport rate;
    GapReport gap;
    int exit_code = kExitPass;
    json report;
};

/// Full audit pipeline: correctness, privacy (exact where the budget allows,
/// sampled otherwise), measured rate and the capacity gap.
inline AuditOutcome run_audit(const Scheme& s, const Field& f, const AuditOptions& opt) {
    AuditOutcome out;
    try {
        out.correctness = audit_correctness(s, f, opt.exhaustive_messages, opt.message_samples,
                                            opt.seed, opt.correctness_max_trials);
    } catch (const EnumerationBudgetExceeded&) {
        out.correctness = audit_correctness(s, f, false, opt.message_samples, opt.seed);
    }
    try {
        out.privacy = audit_privacy_exact(s, opt.privacy_mode, opt.enumeration_budget);
    } catch (const EnumerationBudgetExceeded&) {
        out.privacy = audit_privacy_sampled(s, opt.privacy_mode, opt.privacy_samples,
                                            opt.seed + 1, opt.p_threshold);
    }
    out.rate = measure_rate(s, f, opt.rate_rounds, opt.seed + 2);
    out.gap = gap_report(s.variant(), s.params(), out.rate.rate);

    if (!out.correctness.pass())
        out.exit_code = kExitCorrectnessFailure;
    else if (!out.privacy.pass())
        out.exit_code = kExitPrivacyFailure;

    const Params p = s.params();
    json j;
    j["report_version"] = 1;
    j["scheme"] = s.name();
    j["variant"] = to_string(s.variant());
    j["params"] = json{{"q", p.q}, {"K", p.K}, {"M", p.M}, {"L", p.L}};
    j["seed"] = opt.seed;
    j["declared_rate"] = s.rate().str();
    j["csi_alpha"] = s.csi_alpha().str();
    j["correctness"] = out.correctness;
    j["privacy"] = out.privacy;
    j["rate"] = out.rate;
    json gap;
    gap["reference_mode"] = to_string(out.gap.reference_mode);
    gap["reference"] = capacity_value_str(out.gap.reference);
    if (out.gap.gap) gap["gap"] = out.gap.gap->str();
    gap["capacity_achieving"] = out.gap.capacity_achieving;
    gap["unknown"] = out.gap.unknown;
    j["capacity"] = gap;
    j["exit_code"] = out.exit_code;
    out.report = std::move(j);
    return out;
}

}  // namespace pcsilab
