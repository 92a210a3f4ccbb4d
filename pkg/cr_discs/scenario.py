"""
Scenario files: a manifold, a submanifold N, a closed-form function and the
parameters of the disc families used to explore them.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .config import check_keys, find_line, parse_text
from .deform import KGraph, ParameterBox
from .errors import ConfigurationError, CRDiscsError
from .extend.singular import EmptySet, SingularSet, SubmanifoldSet
from .functions import ScenarioFunction, function_from_dict
from .manifold import GenericManifold, PolynomialMap, Submanifold

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).parent / "scenarios"
SCENARIO_KEYS = (
    "name", "description", "manifold", "submanifold", "m1", "k", "singular",
    "function", "disc", "box", "deformation", "grid", "expect",
)
DISC_KEYS = ("c", "delta")
BOX_KEYS = ("t", "tau", "a", "p0_u1", "p0_w", "p0_x", "samples", "seed")
DEFORMATION_KEYS = ("kappa_radius", "mu_radius", "chi_delta")
EXPECT_KEYS = ("removable", "defect")


def hyperplane_tables(p: int, q: int, index: int) -> List[List[List[Any]]]:
    """Tables of the single linear equation P[index] = 0."""
    exponents = [0] * (2 * p + q)
    exponents[index] = 1
    return [[[exponents, 1.0]]]


@dataclass
class Scenario:
    """Everything a pipeline needs to run on one geometry."""
    name: str
    manifold: GenericManifold
    submanifold: Submanifold
    m1: Submanifold
    kgraph: KGraph
    singular: SingularSet
    function: ScenarioFunction
    box: ParameterBox
    c: float = 0.05
    delta: float = 0.02
    grid: int = 2048
    deformation: Dict[str, Any] = field(default_factory=dict)
    removable: Optional[bool] = None
    expected_defect: Optional[int] = None
    description: str = ""
    data: Dict[str, Any] = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: Optional[str] = None) -> "Scenario":
        """
        Build a scenario from its JSON description.

        Raises:
            ConfigurationError: on unknown keys or malformed blocks
        """
        data = {k: v for k, v in data.items() if k != "__source__"}
        check_keys(data, SCENARIO_KEYS, "scenario", source)
        for block, allowed in (("disc", DISC_KEYS), ("box", BOX_KEYS), ("deformation", DEFORMATION_KEYS), ("expect", EXPECT_KEYS)):
            if block in data:
                check_keys(data[block], allowed, f"scenario block '{block}'", source, find_line(source, block) or 1)
        for required in ("name", "manifold", "submanifold", "function"):
            if required not in data:
                raise ConfigurationError(f"scenario is missing '{required}'")
        try:
            manifold = GenericManifold.from_dict(data["manifold"])
        except CRDiscsError as e:
            raise ConfigurationError(f"scenario manifold: {e.message}", find_line(source, "manifold")) from e
        p, q = manifold.p, manifold.q
        submanifold = Submanifold.from_dict(manifold, data["submanifold"], "N")
        m1 = Submanifold.from_dict(manifold, data.get("m1", {"equations": hyperplane_tables(p, q, p)}), "M1")
        kgraph = KGraph(manifold)
        if "k" in data:
            kgraph = KGraph(manifold, PolynomialMap.from_tables([data["k"]], kgraph.names))

        singular_name = data.get("singular", "none")
        if singular_name == "none":
            singular: SingularSet = EmptySet()
        elif singular_name == "N":
            singular = SubmanifoldSet(submanifold)
        else:
            raise ConfigurationError(f"singular set must be 'none' or 'N', got {singular_name!r}", find_line(source, "singular"))

        disc = data.get("disc", {})
        expect = data.get("expect", {})
        grid = data.get("grid", 2048)
        if isinstance(grid, bool) or not isinstance(grid, int) or grid < 16 or grid & (grid - 1):
            raise ConfigurationError(f"scenario grid {grid!r}: size must be a power of two", find_line(source, "grid"))
        return cls(
            name=str(data["name"]),
            manifold=manifold,
            submanifold=submanifold,
            m1=m1,
            kgraph=kgraph,
            singular=singular,
            function=function_from_dict(data["function"], manifold.n),
            box=ParameterBox.from_dict(data.get("box", {})),
            c=float(disc.get("c", 0.05)),
            delta=float(disc.get("delta", 0.02)),
            grid=grid,
            deformation=dict(data.get("deformation", {})),
            removable=expect.get("removable"),
            expected_defect=expect.get("defect"),
            description=str(data.get("description", "")),
            data=data,
        )

    def to_dict(self) -> Dict[str, Any]:
        return self.data


def bundled_scenarios() -> List[Path]:
    return sorted(SCENARIO_DIR.glob("*.json"))


def resolve_scenario_path(name: Union[str, Path], base_dir: Optional[str] = None) -> Path:
    """A scenario file path, or the bundled scenario of that name."""
    path = Path(name)
    if path.suffix in (".json", ".toml"):
        if not path.is_absolute() and base_dir is not None and not path.exists():
            path = Path(base_dir) / path
        return path
    return SCENARIO_DIR / f"{name}.json"


def load_scenario(name: Union[str, Path], base_dir: Optional[str] = None) -> Scenario:
    path = resolve_scenario_path(name, base_dir)
    if not path.is_file():
        available = ", ".join(p.stem for p in bundled_scenarios())
        raise ConfigurationError(f"scenario not found: {name} (bundled: {available})")
    text = path.read_text(encoding="utf-8")
    scenario = Scenario.from_dict(parse_text(text, path.suffix.lower()), text)
    logger.info("Loaded scenario %s from %s", scenario.name, path)
    return scenario
