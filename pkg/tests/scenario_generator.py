"""
Utility for building the manifolds, submanifolds and scenarios used by the tests.
"""

from typing import Dict, List

from cr_discs.deform import KGraph, ParameterBox
from cr_discs.extend.singular import EmptySet, SubmanifoldSet
from cr_discs.functions import ExponentialFunction, PoleFunction
from cr_discs.manifold import GenericManifold, PolynomialMap, Submanifold, variable_names
from cr_discs.scenario import Scenario, bundled_scenarios, hyperplane_tables, load_scenario


def monomial(p: int, q: int, **powers) -> List[int]:
    """Exponent vector over (u, v, x) from keyword powers such as u1=2."""
    names = variable_names(p, q)
    exponents = [0] * len(names)
    for name, power in powers.items():
        exponents[names.index(name)] = power
    return exponents


def quadric(p: int = 1, q: int = 1) -> GenericManifold:
    """y_k = |w_1|^2 + ... + |w_p|^2 for every k."""
    terms = []
    for k in range(1, p + 1):
        terms.append([monomial(p, q, **{f"u{k}": 2}), 1.0])
        terms.append([monomial(p, q, **{f"v{k}": 2}), 1.0])
    return GenericManifold(p, q, PolynomialMap.from_tables([terms] * q, variable_names(p, q)))


def flat(p: int = 1, q: int = 1) -> GenericManifold:
    """y = 0."""
    return GenericManifold(p, q, PolynomialMap.from_tables([[] for _ in range(q)], variable_names(p, q)))


def x_coupled(p: int = 1, coupling: float = 1.0) -> GenericManifold:
    """y = |w|^2 + coupling u1 x1, whose r_z varies along a disc so nu is nontrivial."""
    terms = [[monomial(p, 1, **{f"u{k}": 2}), 1.0] for k in range(1, p + 1)]
    terms += [[monomial(p, 1, **{f"v{k}": 2}), 1.0] for k in range(1, p + 1)]
    terms.append([monomial(p, 1, u1=1, x1=1), coupling])
    return GenericManifold(p, 1, PolynomialMap.from_tables([terms], variable_names(p, 1)))


def linear_submanifold(manifold: GenericManifold, names: List[str], label: str = "N") -> Submanifold:
    """{name = 0 for each name} as a submanifold of M."""
    p, q = manifold.p, manifold.q
    tables = [[[monomial(p, q, **{name: 1}), 1.0]] for name in names]
    return Submanifold(manifold, PolynomialMap.from_tables(tables, variable_names(p, q)), label)


def quadric_scenario(box: ParameterBox = None, grid: int = 512) -> Scenario:
    """The removable C^3 geometry with a configurable box and grid."""
    manifold = quadric(2, 1)
    submanifold = linear_submanifold(manifold, ["v1", "v2"])
    m1 = Submanifold(manifold, PolynomialMap.from_tables(hyperplane_tables(2, 1, 2), variable_names(2, 1)), "M1")
    return Scenario(
        name="quadric-test",
        manifold=manifold,
        submanifold=submanifold,
        m1=m1,
        kgraph=KGraph(manifold),
        singular=SubmanifoldSet(submanifold),
        function=PoleFunction(0, 0.3),
        box=box or ParameterBox(),
        grid=grid,
        removable=True,
        expected_defect=0,
    )


def entire_scenario(grid: int = 512) -> Scenario:
    """Quadric in C^2 with an entire function and no singular set."""
    manifold = quadric(1, 1)
    submanifold = linear_submanifold(manifold, ["u1", "v1"])
    m1 = Submanifold(manifold, PolynomialMap.from_tables(hyperplane_tables(1, 1, 1), variable_names(1, 1)), "M1")
    return Scenario(
        name="entire-test",
        manifold=manifold,
        submanifold=submanifold,
        m1=m1,
        kgraph=KGraph(manifold),
        singular=EmptySet(),
        function=ExponentialFunction([1.0, 0.5]),
        box=ParameterBox(),
        grid=grid,
    )


def generate_all_scenarios() -> Dict[str, Scenario]:
    """Bundled scenarios by name plus the constructed ones."""
    scenarios = {}
    for path in bundled_scenarios():
        scenario = load_scenario(path)
        scenarios[scenario.name] = scenario
    scenarios["quadric-test"] = quadric_scenario()
    scenarios["entire-test"] = entire_scenario()
    return scenarios
