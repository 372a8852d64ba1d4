import itertools

import numpy as np
import pytest
from conftest import worked_space, worked_system

from logdecomp.atoms import (
    Atom,
    AtomSet,
    FormalSum,
    atomset_algebra,
    enumerate_atoms,
    formal_combine,
    num_atoms,
)
from logdecomp.errors import SpaceMismatchError
from logdecomp.space import new_space


def labels(s):
    return set(s.render())


class TestEnumerate:
    def test_worked(self):
        sp = worked_space()
        atoms = enumerate_atoms(sp)
        assert len(atoms) == 11
        got = {sp.render(a.mask) for a in atoms}
        assert got == {"12", "13", "14", "23", "24", "34", "123", "124", "134", "234", "1234"}
        assert [a.mask for a in atoms] == sorted(a.mask for a in atoms)

    def test_single(self):
        assert enumerate_atoms(new_space(["a"], [1.0])) == []

    def test_five(self):
        assert len(enumerate_atoms(new_space(list("abcde"), [1] * 5))) == 26

    @pytest.mark.parametrize("n", range(0, 13))
    def test_count(self, n):
        assert num_atoms(n) == 2 ** n - n - 1
        sp = new_space([str(i) for i in range(n)], [1.0] * n)
        assert len(AtomSet.full(sp)) == 2 ** n - n - 1

    def test_atom_degree(self):
        assert Atom(0b1011).degree == 3
        with pytest.raises(ValueError):
            Atom(0b100)


class TestAlgebra:
    def test_worked_intersection(self):
        s = worked_system()
        got = atomset_algebra("intersection", s.content("X"), s.content("Y"))
        assert labels(got) == {"14", "23", "123", "124", "134", "234", "1234"}

    def test_identities(self):
        s = worked_system()
        a = s.content("X")
        assert atomset_algebra("union", a, AtomSet.empty(a.space)) == a
        assert not atomset_algebra("difference", a, a)

    def test_mismatch(self):
        a = AtomSet.full(worked_space())
        b = AtomSet.full(new_space(list("abcd"), [1] * 4))
        with pytest.raises(SpaceMismatchError):
            a | b

    def test_rejects_non_atoms(self):
        sp = worked_space()
        with pytest.raises(ValueError):
            AtomSet.from_masks(sp, [0b0001])

    def test_immutable(self):
        a = AtomSet.full(worked_space())
        with pytest.raises(ValueError):
            a.bits[3] = False

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_de_morgan_exhaustive_pairs(self, n):
        sp = new_space([str(i) for i in range(n)], [1.0] * n)
        atoms = [int(m) for m in AtomSet.full(sp)]
        subsets = [AtomSet.from_masks(sp, c)
                   for k in range(len(atoms) + 1) for c in itertools.combinations(atoms, k)]
        if len(subsets) > 64:
            subsets = subsets[::max(1, len(subsets) // 64)]
        for a, b in itertools.product(subsets, repeat=2):
            assert (a | b).complement() == a.complement() & b.complement()
            assert (a & b).complement() == a.complement() | b.complement()
            assert a - b == a & b.complement()

    def test_de_morgan_n5_random(self):
        sp = new_space(list("abcde"), [1] * 5)
        rng = np.random.default_rng(0)
        full = AtomSet.full(sp).bits
        for _ in range(300):
            a = AtomSet(sp, full & (rng.random(32) < 0.5))
            b = AtomSet(sp, full & (rng.random(32) < 0.5))
            assert (a | b).complement() == a.complement() & b.complement()
            assert (a & b).complement() == a.complement() | b.complement()


class TestFormalSum:
    def test_inverse(self):
        a = FormalSum.from_set(AtomSet.full(worked_space()))
        assert formal_combine(a, a, 1, -1) == FormalSum(a.space, {})
        assert len(a + (-a)) == 0

    def test_inclusion_exclusion(self):
        s = worked_system()
        x, y = s.content("X"), s.content("Y")
        z = FormalSum.from_set(x) + FormalSum.from_set(y) - FormalSum.from_set(x | y)
        assert z == FormalSum.from_set(x & y)

    def test_scalar(self):
        sp = worked_space()
        b12 = FormalSum(sp, {0b11: 1})
        assert formal_combine(b12, b12, 2, 1)[0b11] == 3
        assert (b12 * 2)[0b11] == 2

    def test_zero_dropped(self):
        z = FormalSum(worked_space(), {0b11: 0, 0b101: 2})
        assert 0b11 not in z.coeffs

    def test_roundtrip(self):
        s = worked_system()
        for a in (s.content("X"), s.content("Y"), AtomSet.empty(s.space)):
            assert FormalSum.from_set(a).to_set() == a

    def test_to_set_rejects_multiplicity(self):
        z = FormalSum(worked_space(), {0b11: 2})
        with pytest.raises(ValueError):
            z.to_set()

    def test_render(self):
        sp = new_space(list("abcd"), [1] * 4)
        z = FormalSum(sp, {0b11: 1, 0b110: 2, 0b1001: -1})
        assert z.render() == "ab + 2bc - ad"
        assert FormalSum(sp, {}).render() == "0"
