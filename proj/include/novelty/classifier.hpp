#pragma once

#include <array>
#include <string>
#include <vector>

#include "novelty/framework.hpp"
#include "novelty/measures.hpp"

namespace novelty {

/// Subtype labels a classified scenario can carry. A report holds the full
/// set that applies, since one scenario often earns several.
enum class NoveltyLabel {
    Unanimous,
    Imperceptible,
    Faux,
    Ignored,
    Managed,
    Nuisance,
    WithRegret,
    NoNovelty,
};

inline const char* to_string(NoveltyLabel label) noexcept {
    switch (label) {
        case NoveltyLabel::Unanimous: return "Unanimous";
        case NoveltyLabel::Imperceptible: return "Imperceptible";
        case NoveltyLabel::Faux: return "Faux";
        case NoveltyLabel::Ignored: return "Ignored";
        case NoveltyLabel::Managed: return "Managed";
        case NoveltyLabel::Nuisance: return "Nuisance";
        case NoveltyLabel::WithRegret: return "WithRegret";
        case NoveltyLabel::NoNovelty: return "NoNovelty";
    }
    return "Unknown";
}

/// Full classification verdict: the raw flags and regrets that produced it,
/// the regret indicators, the decomposed label set, and the verbatim
/// taxonomy cell string. cell_name alone is lossy (several flag rows share
/// a string); flags plus labels are the lossless record.
struct NoveltyReport {
    NoveltyFlags flags;
    RegretValues regrets;
    bool world_regret_high = false;
    bool observation_regret_high = false;
    std::vector<NoveltyLabel> labels;
    std::string cell_name;

    bool has_label(NoveltyLabel label) const noexcept {
        for (NoveltyLabel l : labels)
            if (l == label) return true;
        return false;
    }
};

// Taxonomy cells, verbatim. Rows order the flag triple (world, observation,
// agent) with Yes before No, so row 0 is YYY and row 7 is NNN; columns
// order (world regret high, observation regret high) as (Y,Y), (Y,N),
// (N,Y), (N,N).
inline constexpr std::array<std::array<const char*, 4>, 8> kSubtypeCells{{
    {"Unanimous w/ Regret", "Unanimous Nuisance", "Unanimous Nuisance", "Unanimous Managed"},
    {"Ignored", "Ignored Nuisance", "Ignored Nuisance", "Ignored Managed"},
    {"Imperceptible", "Imperceptible Nuis.", "Imperceptible Nuis.", "Managed Imperceptible"},
    {"Imperceptible Ignored", "Imper. Ignored Nuis.", "Imper. Ignored Nuis.", "Managed Imperceptible"},
    {"Faux", "Faux Nuis.", "Faux Nuis.", "Managed Faux"},
    {"Faux Ignored", "Faux Ignored Nuis.", "Faux Ignored Nuis.", "Managed Faux"},
    {"Faux", "Faux Nuis.", "Faux Nuis.", "Managed Faux"},
    {"No novelty", "No novelty Nuis.", "No novelty Nuis.", "No Novelty"},
}};

inline int subtype_row(const NoveltyFlags& flags) noexcept {
    return (flags.world_novel ? 0 : 4) + (flags.observation_novel ? 0 : 2) + (flags.agent_novel ? 0 : 1);
}

inline int subtype_column(bool world_regret_high, bool observation_regret_high) noexcept {
    return (world_regret_high ? 0 : 2) + (observation_regret_high ? 0 : 1);
}

/// Map flags and regrets to the taxonomy cell and the decomposed subtype
/// set. Regret indicators use strict comparison against the thresholds.
inline NoveltyReport classify(const NoveltyFlags& flags, const RegretValues& regrets,
                              const Thresholds& thresholds) {
    thresholds.require_valid();

    NoveltyReport report;
    report.flags = flags;
    report.regrets = regrets;
    report.world_regret_high = regrets.world_regret > thresholds.eps_w;
    report.observation_regret_high = regrets.observation_regret > thresholds.eps_o;
    report.cell_name = kSubtypeCells[static_cast<std::size_t>(subtype_row(flags))]
                                    [static_cast<std::size_t>(subtype_column(report.world_regret_high,
                                                                             report.observation_regret_high))];

    const bool any = flags.any();
    if (flags.world_novel && flags.observation_novel && flags.agent_novel)
        report.labels.push_back(NoveltyLabel::Unanimous);
    if (flags.world_novel && !flags.observation_novel)
        report.labels.push_back(NoveltyLabel::Imperceptible);
    if (!flags.world_novel && (flags.observation_novel || flags.agent_novel))
        report.labels.push_back(NoveltyLabel::Faux);
    if (!flags.agent_novel && (flags.world_novel || flags.observation_novel))
        report.labels.push_back(NoveltyLabel::Ignored);
    if (any && !report.world_regret_high && !report.observation_regret_high)
        report.labels.push_back(NoveltyLabel::Managed);
    if (report.world_regret_high != report.observation_regret_high)
        report.labels.push_back(NoveltyLabel::Nuisance);
    if (report.world_regret_high && report.observation_regret_high)
        report.labels.push_back(NoveltyLabel::WithRegret);
    if (!any)
        report.labels.push_back(NoveltyLabel::NoNovelty);
    return report;
}

}  // namespace novelty
