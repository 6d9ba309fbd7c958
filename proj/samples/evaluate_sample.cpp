// Evaluates the bundled sample covers and prints the global consensus.
//
//   sample_evaluate [config.json]

#include <iostream>

#include "covereval/pipeline.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : COVEREVAL_SAMPLE_CONFIG;
  try {
    const auto cfg = covereval::load_run_config(path);
    const auto rep = covereval::run(cfg);

    std::cout << "ground truth: " << rep.truth.community_count << " communities, community-graph of "
              << rep.truth.community_graph_nodes << " nodes\n";
    for (const auto& ev : rep.candidates)
      std::cout << ev.name << ": NMI " << ev.clustering->nmi << ", Omega " << ev.clustering->omega << ", F1 "
                << ev.clustering->f1 << '\n';

    const auto* all = rep.ranking("all-properties");
    if (!all) return 0;
    std::cout << "\nconsensus over " << all->table.criterion_count() << " properties\n";
    for (std::size_t a = 0; a < all->table.alternative_count(); ++a)
      std::cout << "  " << all->table.alternatives[a] << "  Kemeny " << all->kemeny->ranks[a] << "  TOPSIS "
                << all->topsis->ranks[a] << '\n';
  } catch (const covereval::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
