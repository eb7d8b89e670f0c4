from importlib.metadata import metadata

from . import cli
from . import exceptions
from . import fitness
from . import space
from . import evaluators
from . import simulator
from . import cga
from . import ga
from . import compare
from . import load
from . import manifest
from . import runlog
from . import save
from . import units
from .cga import CgaConfig, run_cga
from .evaluators import get_evaluator
from .fitness import FomConfig, Metrics, compute_fom, friis_cascade
from .ga import GaConfig, run_ga
from .load import default_space, load_space
from .manifest import RunManifest, load_manifest
from .runlog import RunLog
from .save import load_runlog
from .space import Individual, ParameterSpace, ParameterSpec


meta = metadata("cgaopt")
__version__ = meta["Version"]
__author__ = meta.get("Author", meta.get("Author-email"))
__license__ = meta.get("License")
__email__ = meta.get("Author-email")
__program_name__ = meta["Name"]

__all__ = [
    "cli",
    "exceptions",
    "fitness",
    "space",
    "evaluators",
    "simulator",
    "cga",
    "ga",
    "compare",
    "load",
    "manifest",
    "runlog",
    "save",
    "units",
    "CgaConfig",
    "run_cga",
    "GaConfig",
    "run_ga",
    "get_evaluator",
    "FomConfig",
    "Metrics",
    "compute_fom",
    "friis_cascade",
    "default_space",
    "load_space",
    "RunManifest",
    "load_manifest",
    "RunLog",
    "load_runlog",
    "Individual",
    "ParameterSpace",
    "ParameterSpec",
]

import structlog as _structlog
import logging as _logging

_structlog.configure(
    wrapper_class=_structlog.make_filtering_bound_logger(_logging.INFO),
)
