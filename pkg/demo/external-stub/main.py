# # Driving an external simulator
#
# The `external` evaluator renders a netlist template for every individual,
# runs a command in a fresh working directory and reads `key=value` lines
# from a result file. Here the command is a small Python script, so the
# demo runs without a SPICE installation.

import sys
from pathlib import Path

import cgaopt
from cgaopt.load import default_netlist
from cgaopt.manifest import manifest_from_dict

here = Path(__file__).parent

config = {
    "evaluator": {
        "kind": "external",
        "params": {
            "template": str(default_netlist()),
            "command": [sys.executable, str(here / "stub_sim.py"), "{netlist}"],
            "constants": {"VDD": 1.2, "RF_amp": 0.3, "L": 0.18},
            "timeout_s": 30,
        },
    },
    "pop_size": 5,
    "n_gen": 2,
    "seed": 1,
}
manifest = manifest_from_dict(config, base=here)

# Evaluating the initial point goes through render, invoke and parse

evaluator = manifest.build_evaluator()
initial = cgaopt.Individual(values=manifest.space.initial_values())
print(evaluator(initial).metrics, evaluator(initial).fitness)

# A short campaign

log = cgaopt.run_cga(manifest.space, manifest.cga_config(), evaluator)
print(log.total_evaluations, log.final_best)
