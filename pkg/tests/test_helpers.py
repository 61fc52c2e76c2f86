"""Testes para os utilitarios de seeds e lotes."""

from src.utils.helpers import derive_seed, in_seed_class, seed_residue, take_seed_batch


class TestSeedClass:
    """Testes para seed_residue e in_seed_class."""

    def test_residue(self):
        """Resto modulo stride."""
        assert seed_residue(7, 3) == 1
        assert seed_residue(2, 3) == 2

    def test_single_owner(self):
        """Cada chave pertence a exatamente uma das seeds 0..stride-1."""
        for key in [(1, 2), ((0, 1), (1, 5)), "abc"]:
            owners = [s for s in range(3) if in_seed_class(key, s, 3)]
            assert len(owners) == 1

    def test_derive_seed_stable(self):
        """Sub-seeds dependem dos rotulos."""
        assert derive_seed(1, "a") == derive_seed(1, "a")
        assert derive_seed(1, "a") != derive_seed(1, "b")


class TestTakeSeedBatch:
    """Testes para take_seed_batch."""

    def test_windows_by_seed(self):
        """Seed s le as posicoes [s*count, (s+1)*count)."""
        assert take_seed_batch(range(12), 0, 3) == [0, 1, 2]
        assert take_seed_batch(range(12), 1, 3) == [3, 4, 5]
        assert take_seed_batch(range(12), 3, 3) == [9, 10, 11]

    def test_wraps_when_exhausted(self):
        """Janela alem do fim recomeca do inicio."""
        assert take_seed_batch(range(10), 3, 3) == [9, 0, 1]
        assert take_seed_batch(range(10), 5, 3) == [5, 6, 7]

    def test_short_sequence(self):
        """Sequencia menor que count devolve todos os elementos."""
        assert take_seed_batch(["a", "b"], 4, 3) == ["a", "b"]

    def test_lazy_consumption(self):
        """Nao consome alem da janela."""
        consumed = []

        def items():
            for i in range(100):
                consumed.append(i)
                yield i

        assert take_seed_batch(items(), 2, 2) == [4, 5]
        assert consumed == [0, 1, 2, 3, 4, 5]

    def test_empty_inputs(self):
        """Sequencia vazia, count nulo ou seed negativa."""
        assert take_seed_batch([], 0, 3) == []
        assert take_seed_batch(range(5), 0, 0) == []
        assert take_seed_batch(range(5), -2, 2) == [0, 1]
