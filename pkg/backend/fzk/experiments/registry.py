from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Type

from pydantic import BaseModel

from ..errors import ParameterError

Runner = Callable[[Any, Path], Dict[str, Any]]


@dataclass(frozen=True)
class Experiment:
    """One experiment kind: its config schema, runner and the statement it targets"""
    kind: str
    schema: Type[BaseModel]
    runner: Runner
    target: str
    anchor: str


REGISTRY: Dict[str, Experiment] = {}


def register(experiment: Experiment) -> None:
    REGISTRY[experiment.kind] = experiment


def get_experiment(kind: str) -> Experiment:
    try:
        return REGISTRY[kind]
    except KeyError:
        raise ParameterError(f"unknown experiment kind '{kind}'; expected one of {sorted(REGISTRY)}")
