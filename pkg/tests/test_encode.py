import numpy as np
import pytest
from conftest import SHIPPED, random_sparse
from hypothesis import given, settings
from hypothesis import strategies as st

from ldpclab.codes import load_code
from ldpclab.encode import (derive_generator, encode_ira, encode_systematic, gf2_rank, gf2_rref,
                            ira_structure)
from ldpclab.errors import DegenerateCodeError, DimensionError, StructureError
from ldpclab.pcm import SparseBinaryMatrix, syndrome


def brute_rank(a):
    # size of the row space by enumeration
    a = np.asarray(a, dtype=np.int64)
    m = a.shape[0]
    span = {tuple(((np.array(c) @ a) & 1).tolist()) for c in np.ndindex(*([2] * m))}
    return int(np.log2(len(span)))


class TestElimination:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 7), st.integers(0, 2**32 - 1))
    def test_rank_matches_span(self, m, n, seed):
        a = np.random.default_rng(seed).integers(0, 2, (m, n))
        assert gf2_rank(a) == brute_rank(a)

    def test_rref_shape(self):
        a = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1]])
        R, piv = gf2_rref(a)
        assert piv.tolist() == [0, 1]
        assert R.astype(int).tolist() == [[1, 0, 1], [0, 1, 1]]


class TestGenerator:
    def test_tiny(self, tiny):
        G = derive_generator(tiny)
        assert G.k == 1
        assert G.G.tolist() == [[1, 1, 1]]

    def test_identity_is_degenerate(self):
        with pytest.raises(DegenerateCodeError):
            derive_generator(SparseBinaryMatrix.from_dense(np.eye(3, dtype=int)))

    def test_rank_deficient(self, square4):
        G = derive_generator(square4)
        assert G.k == 1 and G.rank == 1
        assert G.G.tolist() == [[1, 1]]

    def test_duplicate_rows_tolerated(self, tiny):
        H = SparseBinaryMatrix.from_dense(np.vstack([tiny.to_dense()] * 2))
        assert derive_generator(H).G.tolist() == [[1, 1, 1]]

    @pytest.mark.parametrize("seed", range(10))
    def test_random_null_space(self, seed):
        rng = np.random.default_rng(seed)
        H = random_sparse(rng, 6, 12, 0.35)
        G = derive_generator(H)
        assert G.k == H.n - gf2_rank(H.to_dense())
        assert not ((G.G.astype(int) @ H.to_dense().T) & 1).any()
        assert gf2_rank(G.G) == G.k
        assert np.array_equal(G.G[:, G.info_positions], np.eye(G.k))

    def test_deterministic(self, wifi12):
        a = derive_generator(wifi12.H)
        b = derive_generator(wifi12.H)
        assert np.array_equal(a.G, b.G)
        assert np.array_equal(a.info_positions, b.info_positions)

    def test_wifi_dimensions(self, wifi12):
        assert wifi12.k == 336


class TestSystematic:
    def test_zero(self, tiny):
        assert not encode_systematic(derive_generator(tiny), [0]).any()

    def test_single(self, tiny):
        assert encode_systematic(derive_generator(tiny), [1]).tolist() == [1, 1, 1]

    def test_length_mismatch(self, tiny):
        with pytest.raises(DimensionError):
            encode_systematic(derive_generator(tiny), [1, 0])

    def test_message_verbatim(self, wifi12):
        msgs = np.random.default_rng(1).integers(0, 2, (20, wifi12.k))
        cw = encode_systematic(wifi12.generator, msgs)
        assert np.array_equal(cw[:, wifi12.info_positions], msgs)

    def test_wifi_1e4_encodes(self, wifi12):
        msgs = np.random.default_rng(2).integers(0, 2, (10_000, wifi12.k))
        assert not syndrome(wifi12.H, wifi12.encode(msgs)).any()


class TestIra:
    H_EX = SparseBinaryMatrix.from_dense([[1, 0, 1, 0], [0, 1, 1, 1]])

    def test_example(self):
        assert encode_ira(self.H_EX, [1, 0]).tolist() == [1, 0, 1, 1]

    def test_zero(self):
        assert encode_ira(self.H_EX, [0, 0]).tolist() == [0, 0, 0, 0]

    def test_structure_error(self):
        H = SparseBinaryMatrix.from_dense([[1, 0, 1, 1], [0, 1, 1, 1]])
        with pytest.raises(StructureError):
            encode_ira(H, [1, 0])

    def test_missing_diagonal(self):
        H = SparseBinaryMatrix.from_dense([[1, 0, 0, 0], [0, 1, 1, 1]])
        with pytest.raises(StructureError):
            ira_structure(H)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            encode_ira(self.H_EX, [1, 0, 1])

    def test_matches_generator(self):
        code = load_code("ira96")
        G = derive_generator(code.H)
        msgs = np.random.default_rng(3).integers(0, 2, (500, code.k))
        cw = encode_ira(code.H, msgs)
        assert np.array_equal(cw, encode_systematic(G, cw[:, G.info_positions]))
        # both encoders span the same code: equal dimension and every IRA word is valid
        assert G.k == code.k

    def test_root_check_cross_encoder(self, rootcheck):
        G = derive_generator(rootcheck.H)
        rng = np.random.default_rng(4)
        msgs = rng.integers(0, 2, (1000, rootcheck.k))
        cw = rootcheck.encode(msgs)
        # align layouts: read the generator's information positions off the IRA codeword
        ref = encode_systematic(G, cw[:, G.info_positions])
        assert np.array_equal(cw, ref)

    def test_single_and_batch_agree(self, rootcheck):
        msgs = np.random.default_rng(5).integers(0, 2, (4, rootcheck.k))
        batch = rootcheck.encode(msgs)
        for m, c in zip(msgs, batch):
            assert np.array_equal(rootcheck.encode(m), c)


@pytest.mark.parametrize("name", SHIPPED)
class TestShipped:
    def test_syndrome_zero(self, name):
        code = load_code(name)
        msgs = np.random.default_rng(6).integers(0, 2, (2000, code.k))
        cw = code.encode(msgs)
        assert not syndrome(code.H, cw).any()
        assert np.array_equal(cw[:, code.info_positions], msgs)

    def test_linearity(self, name):
        code = load_code(name)
        rng = np.random.default_rng(7)
        a, b = rng.integers(0, 2, (2, 50, code.k))
        assert np.array_equal(code.encode(a ^ b), code.encode(a) ^ code.encode(b))

    def test_rate(self, name):
        code = load_code(name)
        assert code.k == code.n - gf2_rank(code.H.to_dense())
