import pytest

from polybasis.groups import build_atlas
from polybasis.realify import solve_all
from polybasis.basis import build_basis_set


@pytest.fixture(scope="session")
def atlas():
    """(group, irreps) for each of the three polyhedral groups."""
    return {name: build_atlas(name) for name in "TOI"}


@pytest.fixture(scope="session")
def real_irreps(atlas):
    """(verdicts, {p: RealIrrep}) per group, seed 7."""
    return {name: solve_all(g, irreps, seed=7)
            for name, (g, irreps) in atlas.items()}


@pytest.fixture(scope="session")
def basis_sets(atlas, real_irreps):
    """Basis sets to l_max=10 per group, seed 7."""
    out = {}
    for name, (g, irreps) in atlas.items():
        _, real = real_irreps[name]
        out[name] = build_basis_set(g, irreps, real, l_max=10, seed=7)
    return out
