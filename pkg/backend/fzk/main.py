"""
Command-line entry: ``fzk <kind> --config run.toml`` and ``fzk describe <kind>``.

Exit status: 0 on success, 1 for unexpected failures, 2 for configuration
errors, 3 for numerical failures, 4 for I/O failures. Failures also print
one JSON object on stderr.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence
import argparse
import json
import logging
import platform
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import matplotlib
import numpy as np
import pandas as pd
import pydantic
import scipy
from pydantic import BaseModel, TypeAdapter, ValidationError

from . import __version__
from .config import settings
from .errors import FZKError, ParameterError
from .experiments import REGISTRY, get_experiment
from .schemas import ExperimentSpec
from .utils.io import write_json, write_manifest
from .utils.parallel import configure_threads

logger = logging.getLogger(__name__)

_spec_adapter = TypeAdapter(ExperimentSpec)

EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_IO = 4


def versions() -> Dict[str, str]:
    return {
        "fzk": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "matplotlib": matplotlib.__version__,
        "pydantic": pydantic.VERSION,
    }


# ============================================================================
# CONFIGURATION
# ============================================================================

def load_spec(kind: str, config: Optional[Path] = None, seed: Optional[int] = None) -> BaseModel:
    """Read the TOML config (defaults when absent), apply overrides and validate"""
    get_experiment(kind)
    data: Dict[str, Any] = {}
    if config is not None:
        with open(config, "rb") as fh:
            data = tomllib.load(fh)
    declared = data.get("kind", kind)
    if declared != kind:
        raise ParameterError(f"config declares kind '{declared}' but '{kind}' was requested")
    data["kind"] = kind
    if seed is not None:
        data["seed"] = seed
    return _spec_adapter.validate_python(data)


# ============================================================================
# RUN
# ============================================================================

def run(spec: BaseModel, out: Optional[Path] = None, threads: Optional[int] = None) -> Path:
    """
    Execute one validated experiment and write its artifacts.

    Returns the path of manifest.json.
    """
    experiment = get_experiment(spec.kind)
    out_dir = settings.resolve_out_dir(out or spec.out_dir, spec.kind)
    out_dir.mkdir(parents=True, exist_ok=True)
    if threads is not None:
        configure_threads(threads)
    spec = spec.model_copy(update={"out_dir": out_dir})

    echo = spec.model_dump(mode="json")
    write_json(out_dir / "config.json", echo)
    logger.info(f"🔍 Running {spec.kind} (seed {spec.seed}) into {out_dir}")

    summary = experiment.runner(spec, out_dir)
    write_json(out_dir / "summary.json", {"kind": spec.kind, "seed": spec.seed, **summary})
    manifest = write_manifest(out_dir, echo, versions())
    logger.info(f"✅ {spec.kind} finished")
    return manifest


# ============================================================================
# DESCRIBE
# ============================================================================

def _type_name(annotation: Any) -> str:
    name = getattr(annotation, "__name__", None)
    return name if name and not getattr(annotation, "__args__", None) else str(annotation).replace("typing.", "")


def describe(kind: str) -> str:
    """Config fields, defaults and the statement an experiment targets"""
    experiment = get_experiment(kind)
    schema = experiment.schema
    lines: List[str] = [
        f"{kind}: {experiment.target}",
        f"  statement: {experiment.anchor}",
        "",
        "fields:",
    ]
    for name, info in schema.model_fields.items():
        if name == "kind":
            continue
        line = f"  {name}: {_type_name(info.annotation)}"
        if info.description:
            line += f"  # {info.description}"
        lines.append(line)
    lines += ["", "defaults:", json.dumps(schema().model_dump(mode="json"), indent=2)]
    return "\n".join(lines)


# ============================================================================
# ENTRY POINT
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fzk",
        description="Fractional Zakharov-Kuznetsov simulation and verification lab",
    )
    parser.add_argument("kind", help=f"Experiment kind ({', '.join(sorted(REGISTRY))}) or 'describe'")
    parser.add_argument("target", nargs="?", help="Kind to describe (with 'describe')")
    parser.add_argument("--config", type=Path, help="TOML experiment config")
    parser.add_argument("--seed", type=int, help="Override the config seed")
    parser.add_argument("--out", type=Path, help="Output directory (overrides config and FZK_OUT_DIR)")
    parser.add_argument("--threads", type=int, help="Cap on worker threads and FFT workers")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return parser


def _fail(kind: Optional[str], exc: BaseException, exit_code: int) -> int:
    detail = exc.detail if isinstance(exc, FZKError) else str(exc)
    payload = {"error": detail, "type": type(exc).__name__, "exit_code": exit_code, "kind": kind}
    logger.error(f"❌ {type(exc).__name__}: {detail}")
    print(json.dumps(payload), file=sys.stderr)
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    kind = args.target if args.kind == "describe" else args.kind
    try:
        if args.kind == "describe":
            if kind is None:
                raise ParameterError("describe needs an experiment kind")
            print(describe(kind))
            return 0
        if args.target is not None:
            raise ParameterError(f"unexpected argument '{args.target}'")
        spec = load_spec(kind, args.config, args.seed)
        run(spec, args.out, args.threads)
        return 0
    except (ValidationError, tomllib.TOMLDecodeError) as exc:
        return _fail(kind, exc, EXIT_CONFIG)
    except FZKError as exc:
        return _fail(kind, exc, exc.exit_code)
    except OSError as exc:
        return _fail(kind, exc, EXIT_IO)
    except Exception as exc:
        logger.debug("Unexpected failure", exc_info=True)
        return _fail(kind, exc, EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
