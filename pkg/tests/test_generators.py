from fractions import Fraction

import pytest

from lightspan.generators import GenerationError, GeneratorSpec, generate


class TestUnitClique:
    def test_k6(self):
        g, terminals, levels = generate(GeneratorSpec("unit-clique", 6))
        assert g.n == 6 and len(g.edges) == 15
        assert all(w == 1 for _, _, w in g.edges)
        assert terminals == frozenset(range(6))
        assert levels is None


class TestPartitionGadget:
    def test_counts_and_weights(self):
        g, terminals, _ = generate(
            GeneratorSpec("partition-gadget", 3, delta=Fraction(1, 10)))
        assert g.n == 6 and len(g.edges) == 15
        crossing = [e for e in g.edges if (e[0] < 3) != (e[1] < 3)]
        inner = [e for e in g.edges if (e[0] < 3) == (e[1] < 3)]
        assert len(crossing) == 9 and all(w == 2 for _, _, w in crossing)
        assert len(inner) == 6 and all(w == Fraction(21, 10)
                                       for _, _, w in inner)
        assert terminals == frozenset(range(6))

    def test_subdivided_variant(self):
        g, terminals, _ = generate(
            GeneratorSpec("partition-gadget", 3, subdivided=True))
        # every original edge becomes two half-weight edges via a midpoint
        assert g.n == 6 + 15
        assert len(g.edges) == 30
        assert terminals == frozenset(range(6))
        assert g.is_exact
        halves = sorted({w for _, _, w in g.edges})
        assert halves == [Fraction(1), Fraction(21, 20)]


class TestRandomFamilies:
    @pytest.mark.parametrize("kind", ["erdos-renyi", "geometric", "grid"])
    def test_connected_and_deterministic(self, kind):
        spec = GeneratorSpec(kind, 20, seed=7)
        g1, t1, _ = generate(spec)
        g2, t2, _ = generate(spec)
        assert g1 == g2 and t1 == t2
        assert g1.is_connected()
        assert len(t1) >= 2

    def test_weights_quantized_and_in_range(self):
        g, _, _ = generate(GeneratorSpec("erdos-renyi", 15, seed=1,
                                         weight_range=(2, 5)))
        for _, _, w in g.edges:
            assert 2 <= w <= 5
            assert (w * 8).denominator == 1

    def test_exact_flag_controls_types(self):
        ge, _, _ = generate(GeneratorSpec("erdos-renyi", 12, seed=3, exact=True))
        gf, _, _ = generate(GeneratorSpec("erdos-renyi", 12, seed=3, exact=False))
        assert ge.is_exact and not gf.is_exact
        # same instance, different arithmetic
        assert [(u, v) for u, v, _ in ge.edges] == [(u, v) for u, v, _ in gf.edges]
        assert all(float(w1) == w2 for (_, _, w1), (_, _, w2)
                   in zip(ge.edges, gf.edges))

    def test_grid_is_path_when_one_row(self):
        g, _, _ = generate(GeneratorSpec("grid", 3, seed=2))
        assert len(g.edges) == 2  # rows=1, cols=3

    def test_levels_attached_with_top_level_present(self):
        spec = GeneratorSpec("erdos-renyi", 16, seed=5, levels_k=3)
        _, terminals, levels = generate(spec)
        assert levels is not None
        assert set(levels) == set(terminals)
        assert max(levels.values()) == 3

    def test_retry_exhaustion(self):
        with pytest.raises(GenerationError):
            generate(GeneratorSpec("erdos-renyi", 8, seed=1, p=0.0))

    def test_bad_specs(self):
        with pytest.raises(GenerationError):
            GeneratorSpec("mystery", 5)
        with pytest.raises(GenerationError):
            GeneratorSpec("grid", 5, weight_range=(0, 3))
        with pytest.raises(GenerationError):
            GeneratorSpec("grid", 5, terminal_fraction=0.0)
