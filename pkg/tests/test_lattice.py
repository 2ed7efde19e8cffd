import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qstforge.lattice import (
    Bond,
    BondKind,
    LatticeSpec,
    Site,
    build_grid,
    inversion_map,
    mirror_bond,
    mirror_bond_indices,
    mirror_site,
    sites_from,
)


@pytest.mark.parametrize(
    "n1,n2,cross,counts",
    [
        (6, 1, False, (5, 0, 0)),
        (3, 3, True, (6, 6, 8)),
        (6, 6, True, (30, 30, 50)),
    ],
)
def test_bond_counts_examples(n1, n2, cross, counts):
    spec = build_grid(n1, n2, cross)
    got = tuple(spec.count(k) for k in (BondKind.NN_X, BondKind.NN_Y, BondKind.CROSS))
    assert got == counts


def test_bond_counts_exhaustive():
    for n1 in range(1, 9):
        for n2 in range(1, 9):
            spec = build_grid(n1, n2, cross=True)
            assert spec.count(BondKind.NN_X) == (n1 - 1) * n2
            assert spec.count(BondKind.NN_Y) == n1 * (n2 - 1)
            assert spec.count(BondKind.CROSS) == 2 * (n1 - 1) * (n2 - 1)


def test_bonds_are_canonical_and_unique():
    spec = build_grid(4, 3, cross=True)
    pairs = spec.bond_sites()
    assert np.all(pairs[:, 0] < pairs[:, 1])
    assert len({tuple(p) for p in pairs}) == len(pairs)
    for b in spec.bonds:
        dx, dy = b.b.x - b.a.x, b.b.y - b.a.y
        if b.kind is BondKind.NN_X:
            assert (dx, dy) == (1, 0)
        elif b.kind is BondKind.NN_Y:
            assert (dx, dy) == (0, 1)
        else:
            assert abs(dx) == 1 and dy == 1


@pytest.mark.parametrize("n1,n2", [(0, 3), (3, 0), (-1, 2)])
def test_bad_dimensions(n1, n2):
    with pytest.raises(ValueError):
        build_grid(n1, n2)


def test_linear_index_row_major():
    spec = build_grid(6, 6)
    assert spec.index((1, 1)) == 0
    assert spec.index((6, 6)) == 35
    assert spec.index((3, 2)) == 8
    assert Site(3, 2).label(6) == "Q9"
    assert [spec.index(spec.site(i)) for i in range(36)] == list(range(36))
    with pytest.raises(ValueError):
        spec.index((7, 1))


def test_inversion_map_examples():
    s6 = build_grid(6, 6)
    assert mirror_site(s6, (1, 1)) == Site(6, 6)
    assert not np.any(inversion_map(s6) == np.arange(36))
    s3 = build_grid(3, 3)
    assert mirror_site(s3, (2, 2)) == Site(2, 2)
    assert np.sum(inversion_map(s3) == np.arange(9)) == 1


def test_mirror_bond_examples():
    s6 = build_grid(6, 6)
    m = mirror_bond(s6, s6.bond((1, 1), (2, 1)))
    assert m.key == (Site(5, 6), Site(6, 6))
    s3 = build_grid(3, 3)
    m = mirror_bond(s3, s3.bond((2, 1), (2, 2)))
    assert m.key == (Site(2, 2), Site(2, 3))


def test_no_self_mirrored_nn_bond_on_6x6():
    spec = build_grid(6, 6)
    mirror = mirror_bond_indices(spec)
    nn = [k for k, b in enumerate(spec.bonds) if b.kind.is_nn]
    assert len(nn) == 60
    assert sum(mirror[k] == k for k in nn) == 0


def test_mirror_bond_foreign_bond():
    spec = build_grid(3, 3)
    with pytest.raises(KeyError):
        mirror_bond(spec, Bond(Site(1, 1), Site(3, 3), BondKind.CROSS))


@given(st.integers(1, 7), st.integers(1, 7), st.booleans())
def test_inversion_is_involution_and_preserves_kind(n1, n2, cross):
    spec = build_grid(n1, n2, cross)
    perm = inversion_map(spec)
    assert np.array_equal(perm[perm], np.arange(spec.n_sites))
    mirror = mirror_bond_indices(spec)
    assert np.array_equal(mirror[mirror], np.arange(len(spec.bonds)))
    for k, b in enumerate(spec.bonds):
        assert spec.bonds[mirror[k]].kind is b.kind


def test_defect_pins_bond_and_round_trips():
    spec = build_grid(3, 3, cross=True).with_defect((3, 2), (3, 3), 0.3)
    b = spec.bond((3, 2), (3, 3))
    assert b.fixed == 0.3 and b.kind is BondKind.NN_Y
    assert spec.defects == [(b, 0.3)]
    again = LatticeSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
    assert again == spec
    with pytest.raises(KeyError):
        build_grid(3, 3).with_defect((1, 1), (3, 3), 0.3)


def test_sites_from_mixed_forms():
    spec = build_grid(3, 3)
    assert sites_from(spec, ["Q1", [3, 3], Site(2, 1)]) == [0, 8, 1]
    with pytest.raises(ValueError):
        sites_from(spec, ["X4"])
    with pytest.raises(IndexError):
        sites_from(spec, ["Q10"])
