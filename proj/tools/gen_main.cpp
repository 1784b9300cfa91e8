// Regenerates the synthetic benchmark edge lists used by the test suite.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "binder/dataset.hpp"
#include "taxonomy_gen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"binder-gen: deterministic synthetic taxonomy benchmarks"};
  std::string family;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--family", family, "animals or medical")->required();
  app.add_option("--out", out, "Output edge TSV (child<TAB>parent)")->required();
  app.add_option("--seed", seed, "Generator seed (default: the frozen benchmark seed)")
      ->each([&](const std::string&) { seed_set = true; });
  CLI11_PARSE(app, argc, argv);

  binder::bench::Taxonomy t;
  if (family == "animals")
    t = binder::bench::gen_animals_like(seed_set ? seed
                                                 : binder::bench::kAnimalsSeed);
  else if (family == "medical")
    t = binder::bench::gen_medical_like(seed_set ? seed
                                                 : binder::bench::kMedicalSeed);
  else {
    std::cerr << "config error: unknown family '" << family << "'\n";
    return 2;
  }

  std::ofstream f(out);
  if (!f) {
    std::cerr << "data error: cannot open for writing: " << out << '\n';
    return 3;
  }
  for (binder::Pair p : t.direct)
    f << t.vocab.name(p.hypo) << '\t' << t.vocab.name(p.hyper) << '\n';

  const auto closure = binder::transitive_closure(t.direct, t.vocab.size());
  std::cerr << family << ": " << t.vocab.size() << " concepts, " << t.direct.size()
            << " direct edges, closure " << closure.size() << " pairs\n";
  return 0;
}
