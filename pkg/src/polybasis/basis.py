"""Symmetry-adapted basis functions as coefficient matrices over Y^l.

For each irrep p and degree l the group-averaged projector is applied to
real harmonics (one fixed projector column k, m swept over -l..l), the
resulting d_p x (2l+1) candidate blocks are normalized and orthogonalized
by modified Gram-Schmidt under the Frobenius inner product, and exactly
the character-theory multiplicity of blocks must survive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import Group, Irrep, irrep_multiplicity
from .realify import RealIrrep
from . import wigner

RANK_TOL = 1e-6            # post-projection norm below this discards a candidate
DUAL_ROUTE_TOL = 1e-11     # agreement of the M-product and explicit-D routes


class BasisError(RuntimeError):
    """Survivor count disagreeing with the multiplicity oracle, or a
    broken construction invariant."""


@dataclass(frozen=True)
class CoeffMatrix:
    """One d_p-dimensional basis function: I(x) = H @ Y^l(x/|x|).

    Rows are orthonormal; every row c obeys conj(c_{m'}) = (-1)^{m'} c_{-m'},
    which makes H @ Y^l real-valued pointwise.
    """

    p: int
    l: int
    n: int                   # 1-based index within the (p, l) block
    H: np.ndarray            # (d_p, 2l+1) complex

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def evaluate(self, theta, phi) -> np.ndarray:
        """Real d_p-vector function at the given sphere angles."""
        y = wigner.eval_sh_vector(self.l, theta, phi)
        vals = np.tensordot(self.H, y, axes=(1, 0))
        resid = np.abs(vals.imag).max()
        if resid > 1e-8:
            raise BasisError(f"basis function evaluated non-real ({resid:.2e})")
        return vals.real


@dataclass
class BasisSet:
    """All coefficient matrices of one group up to l_max, plus provenance."""

    group_name: str
    l_max: int
    seed: int
    blocks: list[CoeffMatrix] = field(default_factory=list)

    def select(self, p: int | None = None, l: int | None = None) -> list[CoeffMatrix]:
        return [b for b in self.blocks
                if (p is None or b.p == p) and (l is None or b.l == l)]

    def get(self, p: int, l: int, n: int) -> CoeffMatrix:
        for b in self.blocks:
            if (b.p, b.l, b.n) == (p, l, n):
                return b
        raise KeyError(f"no basis function (p={p}, l={l}, n={n}); "
                       f"available: {sorted((b.p, b.l, b.n) for b in self.blocks)}")


def projection_coefficients(real_irrep: RealIrrep, group: Group, l: int,
                            m: int, k: int,
                            d_stack: np.ndarray | None = None) -> np.ndarray:
    """Projector coefficient block: D[j, m'] such that
    P_{j,k} Z_{l,m} = sum_{m'} D[j, m'] Y_{l,m'}.

    Computed both through M = D U and through the explicit three-case
    combination of Wigner-D columns; the routes must agree to 1e-11.
    """
    if not 1 <= k <= real_irrep.dim:
        raise ValueError("k out of range")
    if abs(m) > l:
        raise ValueError("|m| must be <= l")
    if d_stack is None:
        d_stack = wigner.wigner_D_stack(l, group.elements)
    weights = real_irrep.matrices[:, :, k - 1]          # (N, d_p), column k
    scale = real_irrep.dim / group.order
    u = wigner.real_sh_transform(l)
    # Route 1: through M = D U.
    m_cols = np.einsum("gab,b->ga", d_stack, u[:, l + m])
    route1 = scale * np.einsum("gj,ga->ja", weights, m_cols)
    # Route 2: explicit three-case combination of D columns.
    rt2 = 1.0 / np.sqrt(2.0)
    if m == 0:
        comb = d_stack[:, :, l]
    elif m < 0:
        comb = 1j * rt2 * (d_stack[:, :, l + m] - (-1.0) ** m * d_stack[:, :, l - m])
    else:
        comb = rt2 * (d_stack[:, :, l - m] + (-1.0) ** m * d_stack[:, :, l + m])
    route2 = scale * np.einsum("gj,ga->ja", weights, comb)
    gap = np.abs(route1 - route2).max()
    if gap > DUAL_ROUTE_TOL:
        raise BasisError(f"projection routes disagree by {gap:.2e} "
                         f"(p={real_irrep.p}, l={l}, m={m}, k={k})")
    # The projector output satisfies conj(c_{m'}) = (-1)^{m'} c_{-m'}
    # exactly; project the numerical result back onto that subspace so the
    # condition survives downstream Gram-Schmidt to machine precision.
    signs = (-1.0) ** np.arange(-l, l + 1)
    sym = 0.5 * (route1 + signs * route1[:, ::-1].conj())
    drift = np.abs(sym - route1).max()
    if drift > 1e-8:
        raise BasisError(f"projection violates the realness condition by "
                         f"{drift:.2e} (p={real_irrep.p}, l={l}, m={m})")
    return sym


def realness_row_condition(h: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff every row c satisfies conj(c_{m'}) = (-1)^{m'} c_{-m'}."""
    h = np.atleast_2d(np.asarray(h, complex))
    l = (h.shape[1] - 1) // 2
    signs = (-1.0) ** np.arange(-l, l + 1)
    return bool(np.abs(h.conj() - signs * h[:, ::-1]).max() <= tol)


def _canonical_sign(h: np.ndarray) -> np.ndarray:
    """Flip the whole block so its first nonzero entry (row-major) has a
    positive leading component.  Only +-1 is applied: a complex phase
    would break the realness row condition and the transformation law."""
    flat = h.ravel()
    idx = np.flatnonzero(np.abs(flat) > 1e-9)
    if idx.size == 0:
        return h
    z = flat[idx[0]]
    lead = z.real if abs(z.real) > 1e-9 else z.imag
    return -h if lead < 0 else h


def build_basis(real_irrep: RealIrrep, group: Group, l: int,
                multiplicity: int | None = None,
                d_stack: np.ndarray | None = None) -> list[CoeffMatrix]:
    """Orthonormal coefficient matrices for one (p, l); exactly the
    character-theory multiplicity of them, or an empty list if the irrep
    does not occur at this degree.
    """
    if multiplicity is None:
        val = np.vdot(real_irrep.characters, _so3_chi(group, l)).real / group.order
        multiplicity = int(round(val))
    if multiplicity == 0:
        return []
    if d_stack is None:
        d_stack = wigner.wigner_D_stack(l, group.elements)

    d_p = real_irrep.dim
    accepted: list[np.ndarray] = []
    for k in range(1, d_p + 1):
        for m in range(-l, l + 1):
            if len(accepted) == multiplicity:
                break
            cand = projection_coefficients(real_irrep, group, l, m, k,
                                           d_stack=d_stack)
            c_norm = np.linalg.norm(cand[k - 1])        # c^p_{k,l,m}
            if c_norm < RANK_TOL:
                continue
            cand = cand / c_norm
            # Modified Gram-Schmidt under the Frobenius inner product.
            for a in accepted:
                cand = cand - (np.vdot(a, cand) / np.vdot(a, a)) * a
            resid = np.linalg.norm(cand) / np.sqrt(d_p)
            if resid < RANK_TOL:
                continue
            cand = cand * (np.sqrt(d_p) / np.linalg.norm(cand))
            accepted.append(cand)
        if len(accepted) == multiplicity:
            break

    if len(accepted) != multiplicity:
        raise BasisError(
            f"survivor count {len(accepted)} != multiplicity {multiplicity} "
            f"for p={real_irrep.p}, l={l}; convention or irrep bug")

    out = []
    for n, h in enumerate(accepted, start=1):
        h = _canonical_sign(h)
        if not realness_row_condition(h):
            raise BasisError(f"realness row condition violated (p={real_irrep.p}, "
                             f"l={l}, n={n})")
        out.append(CoeffMatrix(p=real_irrep.p, l=l, n=n, H=h))
    return out


def _so3_chi(group: Group, l: int) -> np.ndarray:
    from .groups import so3_character
    return so3_character(l, group.rotation_angles())


def build_basis_set(group: Group, irreps: list[Irrep],
                    real_irreps: dict[int, RealIrrep], l_max: int,
                    seed: int = 0) -> BasisSet:
    """All coefficient matrices up to l_max for the potentially-real irreps."""
    bs = BasisSet(group_name=group.name or "?", l_max=l_max, seed=seed)
    for l in range(l_max + 1):
        d_stack = wigner.wigner_D_stack(l, group.elements)
        for irrep in irreps:
            r = real_irreps.get(irrep.p)
            if r is None:
                continue
            mult = irrep_multiplicity(group, irrep, l)
            bs.blocks.extend(build_basis(r, group, l, multiplicity=mult,
                                         d_stack=d_stack))
    return bs


def assemble_full_H(basis_set: BasisSet, l: int) -> np.ndarray:
    """Concatenate all rows of degree l (p ascending, n ascending, row
    ascending) into the full coefficient matrix H^l."""
    blocks = sorted(basis_set.select(l=l), key=lambda b: (b.p, b.n))
    if not blocks:
        raise BasisError(f"no basis functions at l={l}")
    return np.vstack([b.H for b in blocks])
