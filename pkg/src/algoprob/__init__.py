"""algoprob: algorithmic probability and complexity estimates for short binary strings."""

__version__ = "0.1.0"

from algoprob.ctm import compute_D, ctm_complexity
from algoprob.distribution import FrequencyDistribution
from algoprob.machine import MachineClass

__all__ = ["FrequencyDistribution", "MachineClass", "__version__", "compute_D", "ctm_complexity"]
