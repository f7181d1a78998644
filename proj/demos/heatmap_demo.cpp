// Sweeps observation dissimilarity over a small push-force grid and renders
// the result as CSV and SVG in the working directory.
#include <cstdio>

#include "novelty/config_io.hpp"
#include "novelty/sweep.hpp"

int main() {
    novelty::SweepSpec spec;
    spec.parameter = novelty::SweepParameter::PushForce;
    spec.measure = novelty::SweepMeasure::DissimilarityO;
    spec.assumed_grid = {5.0, 7.5, 10.0, 12.5, 15.0};
    spec.actual_grid = {5.0, 7.5, 10.0, 12.5, 15.0};
    spec.config.n_samples = 10;
    spec.config.horizon = 150;
    spec.config.master_seed = 7;

    const novelty::HeatmapGrid grid = novelty::run_sweep(spec, 4);
    novelty::write_text_file("push_force_heatmap.csv", novelty::grid_to_csv(grid));
    novelty::write_text_file("push_force_heatmap.svg", novelty::grid_to_svg(grid));

    std::printf("observation dissimilarity, assumed push force (rows) x actual (columns)\n");
    std::printf("%8s", "");
    for (double actual : spec.actual_grid) std::printf("  %8.1f", actual);
    std::printf("\n");
    for (std::size_t i = 0; i < spec.assumed_grid.size(); ++i) {
        std::printf("%8.1f", spec.assumed_grid[i]);
        for (std::size_t j = 0; j < spec.actual_grid.size(); ++j) {
            std::printf("  %8.5f", grid.at(i, j).mean);
        }
        std::printf("\n");
    }
    std::printf("wrote push_force_heatmap.csv and push_force_heatmap.svg\n");
    return 0;
}
