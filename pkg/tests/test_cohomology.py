import pytest

from lieposet.cohomology import ce_cohomology_dims, ce_ranks_unblocked
from lieposet.complexes import betti_numbers, order_complex
from lieposet.errors import SizeBound
from lieposet.liealg import build_raw, build_type_a, center
from lieposet.posets import complete_poset, enumerate_posets, make_poset


def cg_right_hand_side(P, g):
    """Dimension bookkeeping of the semidirect-product decomposition of H^2:
    wedge-square of the Cartan dual tensor the center, plus Cartan dual
    tensor H^1 of the order complex, plus H^2 of the order complex."""
    h = P.n - 1
    c = len(center(g))
    b = betti_numbers(order_complex(P), reduced=True, up_to=2)
    b = b + [0] * (3 - len(b))
    return (h * (h - 1) // 2) * c + h * b[1] + b[2]


class TestSmallCases:
    def test_one_dimensional_abelian(self):
        assert ce_cohomology_dims(build_raw(1, [])) == (1, 1, 0)

    def test_two_dimensional_abelian(self):
        # all differentials vanish: H^k = dim C^k
        assert ce_cohomology_dims(build_raw(2, [])) == (2, 4, 2)

    def test_complete_111_is_rigid(self):
        g = build_type_a(complete_poset([1, 1, 1]))
        assert ce_cohomology_dims(g)[2] == 0

    def test_fork_is_rigid(self, fork_poset):
        g = build_type_a(fork_poset)
        assert ce_cohomology_dims(g)[2] == 0

    def test_h0_is_center_dimension(self):
        for rel in ([], [(1, 2)], [(1, 2), (1, 3)]):
            P = make_poset(3, rel)
            g = build_type_a(P)
            assert ce_cohomology_dims(g)[0] == len(center(g))

    def test_size_bound(self):
        chain6 = make_poset(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)])
        with pytest.raises(SizeBound):
            ce_cohomology_dims(build_type_a(chain6))


class TestWeightBlocking:
    @pytest.mark.parametrize(
        "rel",
        [
            [],
            [(1, 2)],
            [(1, 2), (2, 3)],
            [(1, 3), (2, 3)],
            [(1, 2), (2, 3), (2, 4)],
            [(1, 3), (2, 3), (3, 4)],
        ],
    )
    def test_blocked_ranks_match_unblocked(self, rel):
        n = max((max(p) for p in rel), default=2)
        P = make_poset(max(n, 2), rel)
        g = build_type_a(P)
        r0, r1, r2 = ce_ranks_unblocked(g)
        dim = g.dim
        c1 = dim * dim
        c2 = dim * (dim * (dim - 1) // 2)
        expected = (dim - r0, c1 - r1 - r0, c2 - r2 - r1)
        assert ce_cohomology_dims(g) == expected


class TestDecompositionIdentity:
    def test_holds_for_posets_up_to_four_elements(self):
        for n in range(2, 5):
            for P in enumerate_posets(n):
                g = build_type_a(P)
                assert ce_cohomology_dims(g)[2] == cg_right_hand_side(P, g), P

    def test_chain_five_top_size(self):
        chain5 = make_poset(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
        g = build_type_a(chain5)
        assert g.dim == 14
        assert ce_cohomology_dims(g) == (0, 0, 0)
