import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml


def get_project_root() -> Path:
    # Allow override for testing
    env_root = os.environ.get("LSM_PROJECT_ROOT")
    if env_root:
        return Path(env_root).resolve()
    return Path(__file__).resolve().parent.parent


def load_yaml(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Required config missing: {path}")
    with path.open("r", encoding="utf-8") as f:
        return yaml.safe_load(f)


@dataclass(frozen=True)
class SuiteConfig:
    sweep_orders: Tuple[int, ...]
    sweep_length: int
    featured_squares: Tuple[str, ...]
    featured_length: int
    oracle_length: int
    controls_length: int
    jobs: int


def _positive_int(section: Dict[str, Any], key: str, where: str, minimum: int = 1) -> int:
    if key not in section:
        raise KeyError(f"{where} must define '{key}'")
    try:
        value = int(section[key])
    except (TypeError, ValueError):
        raise ValueError(f"{where}.{key} must be an integer") from None
    if value < minimum:
        raise ValueError(f"{where}.{key} must be >= {minimum}")
    return value


def _section(cfg: Dict[str, Any], key: str) -> Dict[str, Any]:
    section = cfg.get(key)
    if not isinstance(section, dict):
        raise KeyError(f"suite config must contain a '{key}' mapping")
    return section


def parse_suite_config(cfg: Any) -> SuiteConfig:
    """Validate a loaded suite mapping; raises KeyError/ValueError naming the key."""
    if not isinstance(cfg, dict):
        raise KeyError("suite config must be a mapping")
    sweep = _section(cfg, "sweep")
    featured = _section(cfg, "featured")
    controls = _section(cfg, "controls")

    orders = sweep.get("orders")
    if not isinstance(orders, list) or not orders:
        raise ValueError("sweep.orders must be a non-empty list")
    try:
        orders_t = tuple(sorted(int(o) for o in orders))
    except (TypeError, ValueError):
        raise ValueError("sweep.orders must contain integers") from None
    if orders_t[0] < 2:
        raise ValueError("sweep.orders must be >= 2; order 1 has the trivial overlap 111")

    names = featured.get("squares", [])
    if not isinstance(names, list) or not all(isinstance(s, str) and s for s in names):
        raise ValueError("featured.squares must be a list of square names")

    return SuiteConfig(
        sweep_orders=orders_t,
        sweep_length=_positive_int(sweep, "length", "sweep"),
        featured_squares=tuple(names),
        featured_length=_positive_int(featured, "length", "featured"),
        oracle_length=_positive_int(featured, "oracle_length", "featured", minimum=0),
        controls_length=_positive_int(controls, "length", "controls"),
        jobs=_positive_int(cfg, "jobs", "suite") if "jobs" in cfg else 1,
    )


def load_suite_config(path: Optional[Union[str, Path]] = None) -> SuiteConfig:
    if path is None:
        path = get_project_root() / "suites" / "default.yaml"
    return parse_suite_config(load_yaml(path))


def resolve_square_path(name: str) -> Path:
    """Featured squares live in squares/<name>.txt (or .yaml) under the project root; an explicit suffix is kept."""
    base = get_project_root() / "squares"
    if Path(name).suffix.lower() in {".txt", ".yaml", ".yml"}:
        candidates = [base / name]
    else:
        candidates = [base / f"{name}{suffix}" for suffix in (".txt", ".yaml", ".yml")]
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"square '{name}' not found under {base}")
