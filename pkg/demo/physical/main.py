# # Traditional GA on the square-law receiver model
#
# `physical_lite` computes gain, noise figure and power of a common-source
# LNA followed by a single-balanced mixer from square-law device equations,
# and combines the stage noise factors with the Friis formula. Running the
# traditional GA without elitism shows that the best individual of a
# generation can be worse than the one of the previous generation.

from pathlib import Path

import cgaopt

here = Path(__file__).parent
manifest = cgaopt.load_manifest(here / "run.toml")

log = cgaopt.run_ga(manifest.space, manifest.ga_config(), manifest.build_evaluator())
for record in log.records:
    print(
        record.generation,
        record.champion.fitness,
        record.selected_mean_fitness,
        record.population_mean_fitness,
    )
print("monotone:", log.is_monotone())

# Every champion value stays inside the ranges of the space file

champion = manifest.space.expand(log.champion.values)
for spec in manifest.space.specs:
    assert spec.min <= champion[spec.name] <= spec.max
