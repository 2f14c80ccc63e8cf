import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldpclab.errors import DimensionError, FormatError, ParameterError
from ldpclab.pcm import (ACYCLIC, BaseMatrix, SparseBinaryMatrix, count_short_cycles, expand_base,
                         girth, load_alist, load_base_matrix, save_alist, save_base_matrix, syndrome)

from conftest import random_sparse

matrices = st.integers(1, 7).flatmap(
    lambda m: st.integers(1, 9).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def to_nx(H):
    G = nx.Graph()
    G.add_nodes_from(range(H.m + H.n))
    for i, adj in enumerate(H.row_adj):
        G.add_edges_from((i, H.m + int(j)) for j in adj)
    return G


def nx_cycle_counts(H, max_len):
    counts = np.zeros(H.m + H.n, dtype=int)
    for cyc in nx.simple_cycles(to_nx(H), length_bound=max_len):
        if len(cyc) >= 4:
            counts[cyc] += 1
    return counts[:H.m], counts[H.m:]


def triple_oracle(H):
    """Cycles of length 4 and 6 per node, by combinatorics over check pairs/triples."""
    m = H.m
    rows = [set(r.tolist()) for r in H.row_adj]
    c4 = np.zeros(m + H.n, dtype=int)
    for a, b in itertools.combinations(range(m), 2):
        common = sorted(rows[a] & rows[b])
        for x, y in itertools.combinations(common, 2):
            c4[[a, b, m + x, m + y]] += 1
    c6 = np.zeros(m + H.n, dtype=int)
    for a, b, c in itertools.combinations(range(m), 3):
        ab, bc, ca = rows[a] & rows[b], rows[b] & rows[c], rows[c] & rows[a]
        if not (ab and bc and ca):
            continue
        for x in ab:
            for y in bc:
                for z in ca:
                    if len({x, y, z}) == 3:
                        c6[[a, b, c, m + x, m + y, m + z]] += 1
    return c4, c6


class TestMatrix:
    def test_transpose_consistency(self, rng=np.random.default_rng(0)):
        for _ in range(20):
            H = random_sparse(rng, 6, 10)
            H.check_consistency()
            assert np.array_equal(H.to_dense().T, SparseBinaryMatrix.from_dense(H.to_dense().T).to_dense())

    def test_rejects_bad_index(self):
        with pytest.raises(DimensionError):
            SparseBinaryMatrix(1, 3, [[0, 3]])
        with pytest.raises(DimensionError):
            SparseBinaryMatrix(1, 3, [[1, 1]])

    def test_tanner_edge_ids_dense(self, tiny):
        g = tiny.graph
        assert g.num_edges == 4
        assert [g.edge_id(i, j) for i, j in [(0, 0), (0, 1), (1, 1), (1, 2)]] == [0, 1, 2, 3]
        assert sorted(g.var_edges.tolist()) == list(range(4))


class TestSyndrome:
    def test_direct(self, tiny):
        assert syndrome(tiny, [1, 1, 0]).tolist() == [0, 1]

    def test_zero_word(self, wifi12):
        assert not syndrome(wifi12.H, np.zeros(672)).any()

    def test_encoded_word(self, wifi12):
        msg = np.random.default_rng(3).integers(0, 2, wifi12.k)
        assert not syndrome(wifi12.H, wifi12.encode(msg)).any()

    def test_length_mismatch(self, tiny):
        with pytest.raises(DimensionError):
            syndrome(tiny, [1, 0])

    def test_batch_matches_dense(self):
        rng = np.random.default_rng(1)
        H = random_sparse(rng, 5, 9)
        c = rng.integers(0, 2, (7, 9))
        assert np.array_equal(syndrome(H, c), (c @ H.to_dense().T) % 2)

    def test_empty_rows(self):
        H = SparseBinaryMatrix(3, 2, [[], [0, 1], []])
        assert syndrome(H, [1, 0]).tolist() == [0, 1, 0]


class TestExpand:
    def test_zero_shift(self):
        assert np.array_equal(expand_base(BaseMatrix(1, 1, 3, ((0,),))).to_dense(), np.eye(3))

    def test_shift_one(self):
        H = expand_base(BaseMatrix(1, 1, 3, ((1,),)))
        assert [r.tolist() for r in H.row_adj] == [[1], [2], [0]]

    def test_blocks(self):
        H = expand_base(BaseMatrix(2, 2, 3, ((-1, 0), (2, -1)))).to_dense()
        assert H.shape == (6, 6)
        assert not H[:3, :3].any() and not H[3:, 3:].any()
        assert np.array_equal(H[:3, 3:], np.eye(3))
        assert np.array_equal(H[3:, :3], np.roll(np.eye(3), 2, axis=1))

    def test_out_of_range(self):
        with pytest.raises(FormatError):
            BaseMatrix(1, 1, 3, ((3,),))

    @pytest.mark.parametrize("name", ["wifi_r12", "wifi_r58", "wifi_r34", "wifi_r1316", "rootcheck_r12"])
    def test_block_weights(self, name):
        from importlib import resources
        b = load_base_matrix(resources.files("ldpclab.data").joinpath(f"{name}.txt").read_text())
        H = expand_base(b)
        nonnull = b.array >= 0
        for bj in range(b.nb):
            assert (H.col_degrees[bj * b.s:(bj + 1) * b.s] == nonnull[:, bj].sum()).all()
        for bi in range(b.mb):
            assert (H.row_degrees[bi * b.s:(bi + 1) * b.s] == nonnull[bi].sum()).all()

    def test_wifi_size(self):
        from importlib import resources
        b = load_base_matrix(resources.files("ldpclab.data").joinpath("wifi_r12.txt").read_text())
        assert (b.mb, b.nb, b.s) == (8, 16, 42)
        assert expand_base(b).shape == (336, 672)


class TestGirth:
    def test_four_cycle(self, square4):
        assert girth(square4) == 4

    def test_tree(self, tiny):
        assert girth(tiny) == ACYCLIC

    def test_peg96(self, peg96):
        assert girth(peg96.H) >= 6
        assert girth(peg96.H) == nx.girth(to_nx(peg96.H))

    @settings(max_examples=150, deadline=None)
    @given(matrices)
    def test_matches_networkx(self, rows):
        H = SparseBinaryMatrix.from_dense(np.array(rows))
        g = nx.girth(to_nx(H))
        assert girth(H) == (ACYCLIC if g == float("inf") else g)

    def test_random_200_nodes(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            H = random_sparse(rng, 60, 120, density=0.03)
            g = nx.girth(to_nx(H))
            assert girth(H) == (ACYCLIC if g == float("inf") else g)


class TestCycles:
    def test_single_four_cycle(self, square4):
        c, v = count_short_cycles(square4, 4)
        assert c.tolist() == [1, 1] and v.tolist() == [1, 1]

    def test_tree(self, tiny):
        c, v = count_short_cycles(tiny, 8)
        assert not c.any() and not v.any()

    def test_bad_length(self, tiny):
        with pytest.raises(ParameterError):
            count_short_cycles(tiny, 5)

    def test_peg96_against_enumeration(self, peg96):
        c4, c6 = triple_oracle(peg96.H)
        c, v = count_short_cycles(peg96.H, 6)
        total = c4 + c6
        assert np.array_equal(np.concatenate([c, v]), total)
        assert total.sum() > 0

    @settings(max_examples=60, deadline=None)
    @given(matrices, st.sampled_from([4, 6, 8]))
    def test_matches_networkx(self, rows, max_len):
        H = SparseBinaryMatrix.from_dense(np.array(rows))
        c, v = count_short_cycles(H, max_len)
        oc, ov = nx_cycle_counts(H, max_len)
        assert np.array_equal(c, oc) and np.array_equal(v, ov)


ALIST_2x3 = """3 2
2 2
1 2 1
2 2
1 0
1 2
2 0
1 2
2 3
"""


class TestAlist:
    def test_canonical_text(self, tiny):
        assert save_alist(tiny) == ALIST_2x3
        assert load_alist(ALIST_2x3) == tiny

    def test_disagreeing_column(self):
        bad = ALIST_2x3.replace("2 0\n1 2\n2 3", "1 0\n1 2\n2 3")
        with pytest.raises(FormatError) as exc:
            load_alist(bad)
        assert exc.value.line is not None

    def test_out_of_range(self):
        bad = ALIST_2x3.replace("1 2\n2 3\n", "1 2\n2 4\n")
        with pytest.raises(FormatError, match="line 9"):
            load_alist(bad)

    def test_truncated(self):
        with pytest.raises(FormatError):
            load_alist("3 2\n1 2\n")

    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_round_trip(self, rows):
        H = SparseBinaryMatrix.from_dense(np.array(rows))
        back = load_alist(save_alist(H))
        assert back == H
        back.check_consistency()

    def test_shipped_expansion_round_trip(self, wifi12):
        back = load_alist(save_alist(wifi12.H))
        assert back == wifi12.H
        back.check_consistency()


class TestBaseMatrixText:
    def test_parse(self):
        assert load_base_matrix("1 1 3\n0\n") == BaseMatrix(1, 1, 3, ((0,),))

    def test_entry_too_large(self):
        with pytest.raises(FormatError, match="line 2"):
            load_base_matrix("1 2 3\n0 3\n")

    def test_entry_below_minus_one(self):
        with pytest.raises(FormatError):
            load_base_matrix("1 1 3\n-2\n")

    def test_row_count(self):
        with pytest.raises(FormatError):
            load_base_matrix("2 1 3\n0\n")

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 50), st.data())
    def test_round_trip(self, mb, nb, s, data):
        entries = data.draw(st.lists(st.lists(st.integers(-1, s - 1), min_size=nb, max_size=nb),
                                     min_size=mb, max_size=mb))
        b = BaseMatrix(mb, nb, s, tuple(map(tuple, entries)))
        text = save_base_matrix(b)
        assert load_base_matrix(text) == b
        assert save_base_matrix(load_base_matrix(text)).split() == text.split()
