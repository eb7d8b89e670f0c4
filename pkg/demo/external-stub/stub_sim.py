"""Stand-in for a circuit simulator.

Reads the rendered netlist given on the command line and writes the result
file the external evaluator expects. The reported gain grows with the LNA
load resistor R3, everything else is fixed.
"""

import re
import sys
from pathlib import Path

netlist = Path(sys.argv[1]).read_text()
r3 = float(re.search(r"^R3 \S+ \S+ (\S+)$", netlist, re.MULTILINE).group(1))

gain_db = 13.13 + 2.0 * (r3 - 897) / 1000
Path("metrics.txt").write_text(
    "# measured by stub_sim.py\n" f"gain_db = {gain_db}\n" "power_w = 0.011\n" "nf_db = 2.01\n"
)
