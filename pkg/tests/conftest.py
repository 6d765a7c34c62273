import pytest

from functcat.exactlin import FieldSpec
from functcat.instance import load_instance
from functcat.pathcat import Quiver, Relation, build_path_category, linear_quiver


@pytest.fixture(scope="session")
def z6_inst():
    return load_instance("z6")


@pytest.fixture(scope="session")
def z6(z6_inst):
    return z6_inst.category


@pytest.fixture(scope="session")
def a2():
    return load_instance("a2").category


@pytest.fixture(scope="session")
def a3h():
    return load_instance("a3h").category


@pytest.fixture(scope="session")
def aus():
    return load_instance("aus_a2").category


@pytest.fixture(scope="session")
def z6_f5():
    """The z6 quiver over F_5, to exercise prime-field arithmetic end to end."""
    q = linear_quiver(6)
    rels = [Relation(((1, (f"a{i + 1}", f"a{i}")),)) for i in range(1, 5)]
    return build_path_category(q, rels, FieldSpec.prime(5), max_len=2)


@pytest.fixture(scope="session")
def square():
    """Commutative square 1 -> 2, 1 -> 3, 2 -> 4, 3 -> 4 with c.a = d.b."""
    q = Quiver.from_lists("1234", [("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4")])
    return build_path_category(q, [Relation(((1, ("c", "a")), (-1, ("d", "b"))))], max_len=3)
