#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <string>

#include "novelty/classifier.hpp"

using namespace novelty;

namespace {

// Independent copy of the taxonomy, row order YYY..NNN over (world,
// observation, agent), column order (Rw high, Ro high) = YY, YN, NY, NN.
// Kept separate from the library table on purpose.
constexpr std::array<std::array<const char*, 4>, 8> kExpectedCells{{
    {"Unanimous w/ Regret", "Unanimous Nuisance", "Unanimous Nuisance", "Unanimous Managed"},
    {"Ignored", "Ignored Nuisance", "Ignored Nuisance", "Ignored Managed"},
    {"Imperceptible", "Imperceptible Nuis.", "Imperceptible Nuis.", "Managed Imperceptible"},
    {"Imperceptible Ignored", "Imper. Ignored Nuis.", "Imper. Ignored Nuis.", "Managed Imperceptible"},
    {"Faux", "Faux Nuis.", "Faux Nuis.", "Managed Faux"},
    {"Faux Ignored", "Faux Ignored Nuis.", "Faux Ignored Nuis.", "Managed Faux"},
    {"Faux", "Faux Nuis.", "Faux Nuis.", "Managed Faux"},
    {"No novelty", "No novelty Nuis.", "No novelty Nuis.", "No Novelty"},
}};

NoveltyFlags flags_for_row(int row) {
    NoveltyFlags flags;
    flags.world_novel = (row & 4) == 0;
    flags.observation_novel = (row & 2) == 0;
    flags.agent_novel = (row & 1) == 0;
    return flags;
}

RegretValues regrets_for_column(int column) {
    RegretValues regrets;
    regrets.world_regret = (column & 2) == 0 ? 1.0 : 0.0;
    regrets.observation_regret = (column & 1) == 0 ? 1.0 : 0.0;
    return regrets;
}

bool contains(const std::string& haystack, const char* needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("every flag and regret combination lands in its taxonomy cell") {
    for (int row = 0; row < 8; ++row) {
        for (int column = 0; column < 4; ++column) {
            const NoveltyFlags flags = flags_for_row(row);
            const RegretValues regrets = regrets_for_column(column);
            const NoveltyReport report = classify(flags, regrets, Thresholds{});

            INFO("row " << row << " column " << column);
            REQUIRE(subtype_row(flags) == row);
            REQUIRE(subtype_column(report.world_regret_high, report.observation_regret_high) == column);
            REQUIRE(report.cell_name ==
                    kExpectedCells[static_cast<std::size_t>(row)][static_cast<std::size_t>(column)]);
        }
    }
}

TEST_CASE("regret indicators compare strictly against their thresholds") {
    Thresholds thresholds;
    thresholds.eps_w = 0.5;
    thresholds.eps_o = 0.5;

    RegretValues at_threshold;
    at_threshold.world_regret = 0.5;
    at_threshold.observation_regret = 0.5;
    NoveltyReport report = classify(NoveltyFlags{}, at_threshold, thresholds);
    REQUIRE_FALSE(report.world_regret_high);
    REQUIRE_FALSE(report.observation_regret_high);

    RegretValues above;
    above.world_regret = 0.5000001;
    above.observation_regret = 0.0;
    report = classify(NoveltyFlags{}, above, thresholds);
    REQUIRE(report.world_regret_high);
    REQUIRE_FALSE(report.observation_regret_high);
}

TEST_CASE("cell names decompose into the label set") {
    for (int row = 0; row < 8; ++row) {
        for (int column = 0; column < 4; ++column) {
            const NoveltyReport report =
                classify(flags_for_row(row), regrets_for_column(column), Thresholds{});
            INFO("cell '" << report.cell_name << "'");

            if (contains(report.cell_name, "Unanimous")) REQUIRE(report.has_label(NoveltyLabel::Unanimous));
            if (contains(report.cell_name, "Imper")) REQUIRE(report.has_label(NoveltyLabel::Imperceptible));
            if (contains(report.cell_name, "Faux")) REQUIRE(report.has_label(NoveltyLabel::Faux));
            if (contains(report.cell_name, "Ignored")) REQUIRE(report.has_label(NoveltyLabel::Ignored));
            if (contains(report.cell_name, "Managed")) REQUIRE(report.has_label(NoveltyLabel::Managed));
            if (contains(report.cell_name, "w/ Regret")) REQUIRE(report.has_label(NoveltyLabel::WithRegret));
            if (contains(report.cell_name, "No novelty") || contains(report.cell_name, "No Novelty")) {
                REQUIRE(report.has_label(NoveltyLabel::NoNovelty));
            }
            // The disagreement subtype and the cell text always co-occur.
            REQUIRE(contains(report.cell_name, "Nuis") == report.has_label(NoveltyLabel::Nuisance));

            REQUIRE_FALSE(report.labels.empty());
        }
    }
}

TEST_CASE("label combinations respect their exclusions") {
    for (int row = 0; row < 8; ++row) {
        for (int column = 0; column < 4; ++column) {
            const NoveltyReport report =
                classify(flags_for_row(row), regrets_for_column(column), Thresholds{});
            INFO("row " << row << " column " << column);

            // Managed needs both regrets low; Nuisance needs them to differ;
            // WithRegret needs both high. Pairwise incompatible.
            REQUIRE_FALSE(
                (report.has_label(NoveltyLabel::Managed) && report.has_label(NoveltyLabel::Nuisance)));
            REQUIRE_FALSE(
                (report.has_label(NoveltyLabel::Managed) && report.has_label(NoveltyLabel::WithRegret)));
            REQUIRE_FALSE(
                (report.has_label(NoveltyLabel::Nuisance) && report.has_label(NoveltyLabel::WithRegret)));

            // No flags raised excludes every flag-bearing subtype.
            if (report.has_label(NoveltyLabel::NoNovelty)) {
                REQUIRE_FALSE(report.flags.any());
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Unanimous));
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Imperceptible));
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Faux));
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Ignored));
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Managed));
            }

            // Unanimity means every flag, which rules out the partial kinds.
            if (report.has_label(NoveltyLabel::Unanimous)) {
                REQUIRE(report.flags.world_novel);
                REQUIRE(report.flags.observation_novel);
                REQUIRE(report.flags.agent_novel);
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Imperceptible));
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Faux));
                REQUIRE_FALSE(report.has_label(NoveltyLabel::Ignored));
            }
        }
    }
}

TEST_CASE("the report echoes its inputs") {
    NoveltyFlags flags;
    flags.world_novel = true;
    RegretValues regrets;
    regrets.world_regret = 0.25;
    regrets.agent_regret = 0.125;
    const NoveltyReport report = classify(flags, regrets, Thresholds{});
    REQUIRE(report.flags == flags);
    REQUIRE(report.regrets == regrets);
    REQUIRE(report.world_regret_high);
    REQUIRE_FALSE(report.observation_regret_high);
    REQUIRE(report.has_label(NoveltyLabel::Imperceptible));
    REQUIRE_FALSE(report.has_label(NoveltyLabel::Unanimous));
}

TEST_CASE("classification rejects invalid thresholds") {
    Thresholds thresholds;
    thresholds.eps_o = -0.5;
    REQUIRE_THROWS_AS(classify(NoveltyFlags{}, RegretValues{}, thresholds), NoveltyError);
}

TEST_CASE("label names are stable strings") {
    REQUIRE(std::string(to_string(NoveltyLabel::Unanimous)) == "Unanimous");
    REQUIRE(std::string(to_string(NoveltyLabel::Nuisance)) == "Nuisance");
    REQUIRE(std::string(to_string(NoveltyLabel::WithRegret)) == "WithRegret");
    REQUIRE(std::string(to_string(NoveltyLabel::NoNovelty)) == "NoNovelty");
}
