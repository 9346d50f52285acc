import numpy as np
import pytest

from polybasis.groups import Irrep
from polybasis.realify import (ConeigenProblem, RealifyError, build_C,
                               frobenius_schur, realify_irrep, solve_all,
                               solve_real_irrep, takagi_via_real_eig)


def scrambled(irrep, seed):
    """Conjugate a real irrep by a fixed random unitary to make its
    matrices genuinely complex, as external irrep tables would be."""
    rng = np.random.default_rng(seed)
    d = irrep.dim
    q = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))[0]
    mats = np.einsum("ij,gjk,kl->gil", q.conj().T, irrep.matrices, q)
    return Irrep(p=irrep.p, matrices=mats)


class TestFrobeniusSchur:
    @pytest.mark.parametrize("name,expected", [
        ("T", [1, 0, 0, 1]),
        ("O", [1, 1, 1, 1, 1]),
        ("I", [1, 1, 1, 1, 1]),
    ])
    def test_indicators(self, atlas, name, expected):
        group, irreps = atlas[name]
        got = [frobenius_schur(ir, group).indicator for ir in irreps]
        assert got == expected

    def test_potentially_real_flag(self, atlas):
        group, irreps = atlas["T"]
        assert frobenius_schur(irreps[0], group).potentially_real
        assert not frobenius_schur(irreps[1], group).potentially_real

    def test_trivial_irrep_indicator_one(self, atlas):
        for name, (group, irreps) in atlas.items():
            assert frobenius_schur(irreps[0], group).indicator == 1


class TestBuildC:
    def test_one_dim(self, atlas):
        group, irreps = atlas["O"]
        prob = build_C(irreps[1], seed=0)      # sign rep
        assert prob.C.shape == (1, 1)
        assert abs(abs(prob.C[0, 0]) - 1.0) < 1e-12

    @pytest.mark.parametrize("name,p", [("T", 4), ("O", 3), ("O", 5), ("I", 5)])
    def test_C_symmetric_counitary(self, atlas, name, p):
        group, irreps = atlas[name]
        prob = build_C(scrambled(irreps[p - 1], seed=11), seed=0)
        d = prob.C.shape[0]
        assert np.abs(prob.C - prob.C.T).max() < 1e-12
        assert np.abs(prob.C.conj() @ prob.C - np.eye(d)).max() < 1e-10
        assert np.abs(prob.B - prob.B.T).max() < 1e-12

    def test_rejects_asymmetric_C(self):
        c = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
        b = np.block([[c.real, c.imag], [c.imag, -c.real]])
        with pytest.raises(RealifyError):
            ConeigenProblem(C=c, B=b)


class TestTakagi:
    def test_identity_C(self):
        c = np.eye(2, dtype=complex)
        b = np.block([[c.real, c.imag], [c.imag, -c.real]])
        s = takagi_via_real_eig(ConeigenProblem(C=c, B=b))
        assert np.abs(s @ s.T - c).max() < 1e-12
        assert np.abs(s.conj().T @ s - np.eye(2)).max() < 1e-12

    @pytest.mark.parametrize("theta", [0.3, 1.2, -2.0])
    def test_scalar_phase(self, theta):
        c = np.array([[np.exp(1j * theta)]])
        b = np.block([[c.real, c.imag], [c.imag, -c.real]])
        s = takagi_via_real_eig(ConeigenProblem(C=c, B=b))
        assert abs(s[0, 0] ** 2 - c[0, 0]) < 1e-12

    @pytest.mark.parametrize("name,p", [("T", 4), ("O", 4), ("I", 2), ("I", 5)])
    def test_B_eigenvalues_pm_one(self, atlas, name, p):
        group, irreps = atlas[name]
        prob = build_C(scrambled(irreps[p - 1], seed=5), seed=1)
        w = np.linalg.eigvalsh(prob.B)
        d = irreps[p - 1].dim
        assert (np.abs(w - 1.0) < 1e-8).sum() == d
        assert (np.abs(w + 1.0) < 1e-8).sum() == d
        assert np.abs(w).min() > 1e-8          # B nonsingular

    @pytest.mark.parametrize("name,p", [("O", 3), ("I", 4)])
    def test_S_properties(self, atlas, name, p):
        group, irreps = atlas[name]
        prob = build_C(scrambled(irreps[p - 1], seed=5), seed=1)
        s = takagi_via_real_eig(prob)
        d = irreps[p - 1].dim
        assert np.abs(s.conj().T @ s - np.eye(d)).max() < 1e-9
        assert np.abs(s @ s.T - prob.C).max() < 1e-9


class TestRealify:
    def test_trivial_unchanged(self, atlas):
        group, irreps = atlas["I"]
        r = solve_real_irrep(irreps[0], group, seed=0)
        assert np.abs(r.matrices - 1.0).max() < 1e-14
        assert np.abs(r.S - 1.0).max() == 0.0

    def test_refuses_complex_tetrahedral(self, atlas):
        group, irreps = atlas["T"]
        for p in (2, 3):
            with pytest.raises(RealifyError, match="indicator"):
                solve_real_irrep(irreps[p - 1], group, seed=0)

    @pytest.mark.parametrize("name", "TOI")
    def test_all_real_irreps_orthogonal_homomorphic(self, real_irreps, atlas, name):
        group, irreps = atlas[name]
        _, real = real_irreps[name]
        for p, r in real.items():
            eye = np.eye(r.dim)
            assert r.matrices.dtype.kind == "f"
            for m in r.matrices:
                assert np.abs(m.T @ m - eye).max() < 1e-10
            prod = np.einsum("iab,jbc->ijac", r.matrices, r.matrices)
            assert np.abs(prod - r.matrices[group.mult_table]).max() < 1e-10

    @pytest.mark.parametrize("name", "TOI")
    def test_characters_preserved(self, real_irreps, atlas, name):
        group, irreps = atlas[name]
        _, real = real_irreps[name]
        for p, r in real.items():
            assert np.abs(r.characters - irreps[p - 1].characters).max() < 1e-10

    def test_fs_indicator_still_one_after_realify(self, real_irreps, atlas):
        group, _ = atlas["O"]
        _, real = real_irreps["O"]
        sq = np.diag(group.mult_table)
        for r in real.values():
            val = r.characters[sq].sum() / group.order
            assert abs(val - 1.0) < 1e-10

    @pytest.mark.parametrize("name,p", [("T", 4), ("O", 3), ("O", 5),
                                        ("I", 2), ("I", 4), ("I", 5)])
    def test_recovers_real_form_from_complex_input(self, atlas, name, p):
        group, irreps = atlas[name]
        complex_ir = scrambled(irreps[p - 1], seed=23)
        assert np.abs(complex_ir.matrices.imag).max() > 0.1
        r = solve_real_irrep(complex_ir, group, seed=3)
        sim = np.einsum("ij,gjk,kl->gil", r.S.conj().T, complex_ir.matrices, r.S)
        assert np.abs(sim.imag).max() < 1e-10
        prod = np.einsum("iab,jbc->ijac", r.matrices, r.matrices)
        assert np.abs(prod - r.matrices[group.mult_table]).max() < 1e-10

    def test_large_residue_fails_loudly(self, atlas):
        group, irreps = atlas["T"]
        bad_s = np.linalg.qr(np.arange(9.0).reshape(3, 3) + 1j * np.eye(3))[0]
        with pytest.raises(RealifyError):
            realify_irrep(irreps[3], bad_s)


def test_solve_all_covers_expected_reps(real_irreps):
    verdicts, real = real_irreps["T"]
    assert sorted(real) == [1, 4]
    for name in "OI":
        _, real = real_irreps[name]
        assert sorted(real) == [1, 2, 3, 4, 5]
