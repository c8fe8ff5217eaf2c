"""Session fixtures for the expensive pipeline objects.

The P^5 constructions and linkages take minutes; build each once and
share across unit tests and the acceptance suite.
"""

import pytest

from codim2.kernel import AmbientSpace


@pytest.fixture(scope="session")
def P4s():
    return AmbientSpace(4)


@pytest.fixture(scope="session")
def P5s():
    return AmbientSpace(5)


@pytest.fixture(scope="session")
def bordiga_out(P4s):
    from codim2.determinantal import bordiga

    return bordiga(P4s, seed=1)


@pytest.fixture(scope="session")
def ex49_out(P4s):
    from codim2.determinantal import example_4_9

    return example_4_9(P4s, seed=0)


@pytest.fixture(scope="session")
def ex16_out(P5s):
    from codim2.determinantal import example_1_6

    return example_1_6(P5s, seed=0)


@pytest.fixture(scope="session")
def section6(P5s):
    """The full section-6 chain: Z, X = (5,5)-residual, X' = (5,6)-residual."""
    from codim2.liaison import LinkSpec, build_Z_config, link

    z_gens, maps, lines = build_Z_config(P5s, seed=1)
    X = link(LinkSpec(z_gens, 5, 5, seed=0), P5s)
    Xp = link(LinkSpec(X.ideal_gens, 5, 6, seed=0), P5s)
    return {"z_gens": z_gens, "z_maps": maps, "lines": lines, "X": X, "Xp": Xp}


@pytest.fixture(scope="session")
def castelnuovo_chain(P5s):
    """P^3 -> (2,3) Castelnuovo 3-fold -> (4,4) degree-11 3-fold."""
    from codim2.liaison import LinkSpec, link

    p3 = [P5s.variable(4), P5s.variable(5)]
    cast = link(LinkSpec(p3, 2, 3, seed=2), P5s)
    x18 = link(LinkSpec(cast.ideal_gens, 4, 4, seed=2), P5s)
    back = link(LinkSpec(x18.ideal_gens, 4, 4, seed=7), P5s)
    return {"castelnuovo": cast, "x18": x18, "back": back}
