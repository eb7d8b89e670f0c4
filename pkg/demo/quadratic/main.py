# # Optimizing the receiver surrogate
#
# The `quadratic_rf` evaluator is a smooth stand-in for the circuit
# simulator: gain, noise figure and power depend quadratically on the
# distance of the normalized parameters to a target point. It is cheap,
# so it is a good place to see how the two optimizers behave.

from pathlib import Path

import cgaopt
from cgaopt.compare import run_compare
from cgaopt.save import summarize, write_run

here = Path(__file__).parent

# Load the run config. Without a `space` key the shipped receiver space
# (21 parameters, 19 free variables) is used.

manifest = cgaopt.load_manifest(here / "run.json")
print(manifest.space.num_free)

# Run the circuit-centric GA

log = cgaopt.run_cga(manifest.space, manifest.cga_config(), manifest.build_evaluator())
print(log.terminated_by.value, log.total_evaluations, log.final_best)
assert log.is_monotone()

# The champion fitness per generation is what `convergence.csv` contains

for record in log.records[:5]:
    print(record.generation, record.champion.fitness)

write_run(log, manifest.output_dir)

# Compare with the traditional GA on a few seeds, with the same number of
# evaluations

rows = run_compare(manifest, manifest.seeds)
for algorithm, stats in summarize(rows).items():
    print(algorithm, stats["median"], stats["iqr"])
