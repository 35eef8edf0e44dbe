// One HD-EA run and one H-EA run with equal evaluation budgets on the same
// NK landscape, printing the best-fitness trajectory of each.

#include <cstdio>

#include "hdea/hdea.hpp"

int main() {
    using namespace hdea;

    const std::size_t n = 50;
    const std::size_t k = 8;
    const auto landscape = generate_nk(n, k, 2024);

    auto init = [n](Rng& rng) { return BitGenome::random(n, rng); };
    auto eval = [&landscape](const BitGenome& g, Rng&) { return evaluate_nk(landscape, g); };

    EvolutionParams params;
    params.pop_size = 50;
    params.generations = 20000;
    params.history_stride = 2000;

    Rng hd_rng = make_rng(1);
    const auto hd = run_hdea<BitGenome>(params, init, eval, hd_rng);

    params.generations *= 2;
    params.history_stride *= 2;
    Rng h_rng = make_rng(2);
    const auto h = run_hea<BitGenome>(params, init, eval, h_rng);

    std::printf("NK landscape N=%zu K=%zu\n", n, k);
    std::printf("%10s %12s | %10s %12s\n", "HD-EA gen", "best", "H-EA gen", "best");
    for (std::size_t i = 0; i < hd.best_fitness_history.size() && i < h.best_fitness_history.size(); ++i) {
        const auto& a = hd.best_fitness_history[i];
        const auto& b = h.best_fitness_history[i];
        std::printf("%10llu %12.6f | %10llu %12.6f\n", static_cast<unsigned long long>(a.generation), a.best_fitness,
                    static_cast<unsigned long long>(b.generation), b.best_fitness);
    }
    std::printf("evaluations: HD-EA %llu (init %llu), H-EA %llu (init %llu)\n",
                static_cast<unsigned long long>(hd.evaluations), static_cast<unsigned long long>(hd.initial_evaluations),
                static_cast<unsigned long long>(h.evaluations), static_cast<unsigned long long>(h.initial_evaluations));
    return 0;
}
