// Minimizes a 10-dimensional sphere with the full and the vanilla optimizer.

#include <iostream>
#include <numeric>

#include "snakeopt/snakeopt.hpp"

int main() {
    using namespace snakeopt;
    const auto space = SearchSpace::cube(10, -100.0, 100.0);
    for (auto toggles : {StrategyToggles::none(), StrategyToggles::all()}) {
        Objective sphere(10, [](std::span<const double> x) {
            return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        });
        SnakeConfig cfg;
        cfg.max_iter = 200;
        cfg.toggles = toggles;
        RngStream rng(42);
        const auto r = run_snake(sphere, space, cfg, rng);
        std::cout << (toggles.count() ? "full   " : "vanilla") << "  best " << r.best_fitness << "  after "
                  << r.evaluations << " evaluations\n";
    }
}
