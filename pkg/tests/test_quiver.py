import pytest

from varcat.errors import BudgetExceeded
from varcat.geometry import Morphism, Variety, compose
from varcat.quiver import System, bfs_closure, path_components

from conftest import poly


def system(vertices, arrows):
    return System.build(vertices, [(n, s, d, [poly(c, vertices[s].vars) for c in cs])
                                   for n, s, d, cs in arrows])


@pytest.fixture
def line():
    return Variety("A", ["x"])


class TestPathComponents:
    def test_cycle_and_bridge(self, line):
        vs = [Variety(n, ["x"]) for n in "ABCD"]
        S = system(vs, [("f", 0, 1, ["x"]), ("g", 1, 0, ["x"]),
                        ("h", 1, 2, ["x"]), ("k", 3, 3, ["-x"])])
        rep = path_components(S)
        assert rep.classes == [[0, 1], [2], [3]]
        assert [a.name for a in rep.core] == ["f", "g", "k"]
        assert [a.name for a in rep.bridges] == ["h"]

    def test_no_arrows(self):
        vs = [Variety(n, ["x"]) for n in "AB"]
        assert path_components(system(vs, [])).classes == [[0], [1]]

    def test_long_cycle(self):
        vs = [Variety(f"V{i}", ["x"]) for i in range(6)]
        arrows = [(f"a{i}", i, (i + 1) % 6, ["x"]) for i in range(6)]
        assert path_components(system(vs, arrows)).classes == [list(range(6))]

    def test_component_systems(self):
        vs = [Variety(n, ["x"]) for n in "AB"]
        S = system(vs, [("f", 0, 0, ["-x"]), ("g", 0, 1, ["x"])])
        subs = path_components(S).component_systems(S)
        assert [s.label for s in subs] == ["S/{A}", "S/{B}"]
        assert [a.name for a in subs[0].arrows] == ["f"] and not subs[1].arrows


class TestClosure:
    def test_identity_only(self, line):
        table, _ = bfs_closure(system([line], []))
        assert table.complete and len(table) == 1

    def test_negation(self, line):
        table, _ = bfs_closure(system([line], [("f", 0, 0, ["-x"])]))
        assert len(table) == 2 and [e.word for e in table.entries] == [(), ("f",)]

    def test_three_rotations_and_zero(self, line):
        S = system([line], [("f", 0, 0, ["-x"]), ("z", 0, 0, ["0"])])
        table, _ = bfs_closure(S)
        assert len(table) == 3

    def test_shift_hits_cap(self, line):
        with pytest.raises(BudgetExceeded):
            bfs_closure(system([line], [("f", 0, 0, ["x + 1"])]), cap=10)

    def test_closed_under_composition(self):
        A2 = Variety("P", ["x", "y"])
        S = system([A2], [("r", 0, 0, ["-y", "x"]), ("s", 0, 0, ["y", "x"])])
        table, _ = bfs_closure(S)
        assert len(table) == 8
        for e1 in table.entries:
            for e2 in table.entries:
                assert (0, 0, compose(e1.morphism, e2.morphism)) in table

    def test_hook_stops(self, line):
        S = system([line], [("f", 0, 0, ["x + 1"])])
        table, verdict = bfs_closure(S, hook=lambda e, t: "stop" if len(t) == 3 else None)
        assert verdict == "stop" and not table.complete and len(table) == 3

    def test_words_spell_morphisms(self):
        vs = [Variety("A", ["x"]), Variety("B", ["x", "y"])]
        S = system(vs, [("i", 0, 1, ["x", "0"]), ("p", 1, 0, ["x"]),
                        ("s", 1, 1, ["x", "-y"])])
        table, _ = bfs_closure(S)
        for e in table.entries:
            m = Morphism.identity(vs[e.src])
            for name in e.word:
                m = compose(S.arrow(name).morphism, m)
            assert m == e.morphism
        assert len(table) == 6
