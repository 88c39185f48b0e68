from .registry import REGISTRY, Experiment, get_experiment, register
from .simulate import EXPERIMENTS as simulate_experiments
from .transversality import EXPERIMENTS as transversality_experiments
from .verify import EXPERIMENTS as verify_experiments

# Register experiment kinds
for _experiment in (*simulate_experiments, *verify_experiments, *transversality_experiments):
    register(_experiment)

__all__ = ["REGISTRY", "Experiment", "get_experiment", "register"]
