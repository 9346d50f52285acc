"""Polyhedral rotation groups and their complex irreducible representations.

The three groups (tetrahedral T, octahedral O, icosahedral I) are generated
from embedded exact-expression generator matrices, so every element, the
multiplication table and all irrep matrices are mutually consistent by
construction.  Irreps are extended from generator images along each
element's generator word.
"""

from __future__ import annotations


from dataclasses import dataclass

import numpy as np

MAT_TOL = 1e-8          # matrix-distance tolerance for deduplication
HOM_TOL = 1e-10         # homomorphism residual tolerance
MAX_GROUP_ORDER = 120   # closure beyond this is not a polyhedral rotation group


class GroupError(ValueError):
    """Invalid generator data or corrupted group/irrep structure."""


@dataclass(frozen=True)
class Group:
    """A finite rotation group given by an ordered element list.

    elements[0] is the identity; mult_table[i, j] is the index of
    elements[i] @ elements[j]; generator_words[i] is the factorization of
    elements[i] over the generators (empty tuple for the identity).
    """

    name: str | None
    elements: np.ndarray          # (N, 3, 3)
    mult_table: np.ndarray        # (N, N) int
    generators: np.ndarray        # (k, 3, 3)
    generator_words: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def inverse(self, i: int) -> int:
        return int(np.argwhere(self.mult_table[i] == 0)[0, 0])

    def rotation_angles(self) -> np.ndarray:
        """Rotation angle of every element, from the trace."""
        tr = np.trace(self.elements, axis1=1, axis2=2)
        return np.arccos(np.clip((tr - 1.0) / 2.0, -1.0, 1.0))


@dataclass(frozen=True)
class Irrep:
    """One complex unitary irrep: matrices[g] represents group element g."""

    p: int                        # 1-based rep index
    matrices: np.ndarray          # (N, d, d) complex

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def characters(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)


def _is_rotation(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m, float)
    return (m.shape == (3, 3)
            and np.abs(m.T @ m - np.eye(3)).max() < tol
            and abs(np.linalg.det(m) - 1.0) < tol)


def _canonical_order(elements: list[np.ndarray]) -> list[int]:
    """Identity first, then lexicographic on rounded row-major entries."""
    keys = [tuple(np.round(e, 10).ravel() + 0.0) for e in elements]
    idx = sorted(range(len(elements)), key=lambda i: keys[i])
    ident = next(i for i in idx if np.abs(elements[i] - np.eye(3)).max() < MAT_TOL)
    return [ident] + [i for i in idx if i != ident]


def generate_group(generators, name: str | None = None) -> Group:
    """Close a set of rotation generators into a finite group.

    Elements are deduplicated at distance 1e-8 and ordered canonically
    (identity first, then lexicographic on rounded entries) so repeated
    runs produce identical tables.
    """
    gens = [np.asarray(g, float) for g in generators]
    for g in gens:
        if not _is_rotation(g):
            raise GroupError("generator is not a rotation matrix (orthogonal, det +1)")

    elements: list[np.ndarray] = [np.eye(3)]
    words: list[tuple[int, ...]] = [()]

    def find(m: np.ndarray) -> int | None:
        for i, e in enumerate(elements):
            if np.abs(m - e).max() < MAT_TOL:
                return i
        return None

    frontier = [0]
    while frontier:
        new = []
        for i in frontier:
            for k, g in enumerate(gens):
                m = elements[i] @ g
                if find(m) is None:
                    if len(elements) >= MAX_GROUP_ORDER:
                        raise GroupError(
                            "closure exceeds %d elements; generator set is not "
                            "a polyhedral rotation group" % MAX_GROUP_ORDER)
                    elements.append(m)
                    words.append(words[i] + (k,))
                    new.append(len(elements) - 1)
        frontier = new

    order = _canonical_order(elements)
    elements = [elements[i] for i in order]
    words = [words[i] for i in order]

    n = len(elements)
    stack = np.array(elements)
    mult = np.empty((n, n), dtype=int)
    for i in range(n):
        prod = stack[i] @ stack            # (n, 3, 3)
        for j in range(n):
            k = int(np.argmin(np.abs(prod[j] - stack).max(axis=(1, 2))))
            if np.abs(prod[j] - stack[k]).max() >= MAT_TOL:
                raise GroupError("group not closed under multiplication")
            mult[i, j] = k

    # Latin-square sanity: every row/column a permutation.
    full = set(range(n))
    for i in range(n):
        if set(mult[i]) != full or set(mult[:, i]) != full:
            raise GroupError("multiplication table is not a Latin square")

    return Group(name=name, elements=stack, mult_table=mult,
                 generators=np.array(gens), generator_words=tuple(words))


def extend_irrep(group: Group, generator_images, p: int = 1) -> Irrep:
    """Extend unitary generator images to a full irrep along generator words.

    Raises GroupError if the images are inconsistent with the group's
    multiplication table (two words for one element disagreeing).
    """
    imgs = [np.asarray(m, complex) for m in generator_images]
    if len(imgs) != group.generators.shape[0]:
        raise GroupError("one image required per generator")
    d = imgs[0].shape[0]
    for m in imgs:
        if m.shape != (d, d) or np.abs(m.conj().T @ m - np.eye(d)).max() > 1e-10:
            raise GroupError("generator image is not unitary")

    mats = np.empty((group.order, d, d), dtype=complex)
    for i, word in enumerate(group.generator_words):
        m = np.eye(d, dtype=complex)
        for k in word:
            m = m @ imgs[k]
        mats[i] = m

    # Homomorphism replay over the full multiplication table.
    prod = np.einsum("iab,jbc->ijac", mats, mats)
    err = np.abs(prod - mats[group.mult_table]).max()
    if err > MAT_TOL:
        raise GroupError(
            "generator images are inconsistent with the multiplication table "
            f"(residual {err:.2e})")
    return Irrep(p=p, matrices=mats)


# ---------------------------------------------------------------------------
# Embedded generators and generator irrep images.
#
# Orientations: T and O have their 2-fold / 4-fold axes along the coordinate
# axes; I has the z axis through two opposite vertices with one edge in the
# xz plane.  All entries are exact expressions in sqrt(2), sqrt(3), sqrt(5).
# ---------------------------------------------------------------------------

_CYCLE_XYZ = np.array([[0.0, 0.0, 1.0],
                       [1.0, 0.0, 0.0],
                       [0.0, 1.0, 0.0]])      # x -> y -> z -> x, 3-fold about (1,1,1)


def _rz(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _tetra_generators() -> list[np.ndarray]:
    return [np.diag([-1.0, -1.0, 1.0]), _CYCLE_XYZ]


def _octa_generators() -> list[np.ndarray]:
    return [_rz(np.pi / 2.0), _CYCLE_XYZ]


def _icosa_generators() -> list[np.ndarray]:
    s5 = np.sqrt(5.0)
    # pi rotation about the midpoint axis of the edge joining the top vertex
    # (0,0,1) and the ring vertex (2,0,1)/sqrt(5); the axis lies in the xz plane.
    edge_flip = np.array([[-1.0 / s5, 0.0, 2.0 / s5],
                          [0.0, -1.0, 0.0],
                          [2.0 / s5, 0.0, 1.0 / s5]])
    return [_rz(2.0 * np.pi / 5.0), edge_flip]


def _sym_traceless_rep(r: np.ndarray) -> np.ndarray:
    """5x5 orthogonal image of a rotation acting on traceless symmetric
    matrices, M -> R M R^T, in a fixed orthonormal (Frobenius) basis."""
    s2, s6 = np.sqrt(2.0), np.sqrt(6.0)
    basis = [
        np.diag([1.0, -1.0, 0.0]) / s2,
        np.diag([1.0, 1.0, -2.0]) / s6,
        np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]) / s2,
        np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]]) / s2,
        np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]]) / s2,
    ]
    out = np.empty((5, 5))
    for b, bb in enumerate(basis):
        img = r @ bb @ r.T
        for a, ba in enumerate(basis):
            out[a, b] = np.sum(ba * img)
    return out


def _perm_rep_4d(perm: tuple[int, ...]) -> np.ndarray:
    """4x4 orthogonal image of a permutation of 5 objects: the permutation
    matrix restricted to the complement of (1,1,1,1,1) in the Helmert basis."""
    p5 = np.zeros((5, 5))
    for k, img in enumerate(perm):
        p5[img, k] = 1.0
    q = np.zeros((5, 4))
    for k in range(1, 5):
        q[:k, k - 1] = 1.0
        q[k, k - 1] = -float(k)
        q[:, k - 1] /= np.sqrt(k * (k + 1.0))
    return q.T @ p5 @ q


# Action of the icosahedral generators on the five orthogonal triples of
# 2-fold axes: g1 (5-fold) is the 5-cycle 0->2->3->4->1->0, g2 (edge flip)
# is the double transposition (1 4)(2 3).
_ICOSA_TRIPLE_PERM_G1 = (2, 0, 3, 4, 1)
_ICOSA_TRIPLE_PERM_G2 = (0, 4, 3, 2, 1)


def _galois_conjugate_icosa(g1: np.ndarray, g2: np.ndarray):
    """Images of the icosahedral generators in the second 3-D irrep,
    obtained by the sign flip sqrt(5) -> -sqrt(5) on exact entries."""
    s5 = np.sqrt(5.0)
    g1c = _rz(4.0 * np.pi / 5.0)   # cos 72 = (sqrt5-1)/4 -> cos 144, etc.
    g2c = np.array([[1.0 / s5, 0.0, -2.0 / s5],
                    [0.0, -1.0, 0.0],
                    [-2.0 / s5, 0.0, -1.0 / s5]])
    return g1c, g2c


def _irrep_generator_images(name: str, gens: list[np.ndarray]):
    """Generator images for every irrep of the named group, ordered by p."""
    g1, g2 = gens
    omega = np.exp(2j * np.pi / 3.0)
    if name == "T":
        return [
            [np.eye(1), np.eye(1)],
            [np.eye(1), omega * np.eye(1)],
            [np.eye(1), omega.conj() * np.eye(1)],
            [g1, g2],
        ]
    if name == "O":
        # 2-D irrep: quotient action on the three unsigned coordinate axes,
        # realized in the plane a+b+c=0.  g1 swaps x,y; g2 cycles x->y->z.
        s3 = np.sqrt(3.0)
        two_t = np.diag([-1.0, 1.0])
        two_c = np.array([[-0.5, -s3 / 2.0], [s3 / 2.0, -0.5]])
        sign_g1 = -1.0   # g1 is a 4-cycle on the body diagonals (odd)
        return [
            [np.eye(1), np.eye(1)],
            [sign_g1 * np.eye(1), np.eye(1)],
            [two_t, two_c],
            [g1, g2],
            [sign_g1 * g1, g2],
        ]
    if name == "I":
        g1c, g2c = _galois_conjugate_icosa(g1, g2)
        return [
            [np.eye(1), np.eye(1)],
            [g1, g2],
            [g1c, g2c],
            [_perm_rep_4d(_ICOSA_TRIPLE_PERM_G1), _perm_rep_4d(_ICOSA_TRIPLE_PERM_G2)],
            [_sym_traceless_rep(g1), _sym_traceless_rep(g2)],
        ]
    raise GroupError(f"unknown group name {name!r} (expected 'T', 'O' or 'I')")


_GENERATORS = {"T": _tetra_generators, "O": _octa_generators, "I": _icosa_generators}

GROUP_NAMES = ("T", "O", "I")
GROUP_ORDERS = {"T": 12, "O": 24, "I": 60}


def build_atlas(name: str) -> tuple[Group, list[Irrep]]:
    """Build one polyhedral group and all of its complex irreps."""
    if name not in _GENERATORS:
        raise GroupError(f"unknown group name {name!r} (expected 'T', 'O' or 'I')")
    gens = _GENERATORS[name]()
    group = generate_group(gens, name=name)
    if group.order != GROUP_ORDERS[name]:
        raise GroupError(f"group {name} closed to order {group.order}, "
                         f"expected {GROUP_ORDERS[name]}")
    irreps = [extend_irrep(group, images, p=p + 1)
              for p, images in enumerate(_irrep_generator_images(name, gens))]
    if sum(ir.dim ** 2 for ir in irreps) != group.order:
        raise GroupError("irrep dimensions do not satisfy sum d_p^2 = N_g")
    return group, irreps


def so3_character(l: int, angles: np.ndarray) -> np.ndarray:
    """Character of the degree-l rotation representation at the given
    rotation angles: sin((2l+1) w/2) / sin(w/2), with value 2l+1 at w=0."""
    angles = np.asarray(angles, float)
    out = np.full(angles.shape, float(2 * l + 1))
    mask = np.abs(np.sin(angles / 2.0)) > 1e-12
    w = angles[mask]
    out[mask] = np.sin((2 * l + 1) * w / 2.0) / np.sin(w / 2.0)
    return out


def irrep_multiplicity(group: Group, irrep: Irrep, l: int) -> int:
    """Number of degree-l basis-function vectors transforming as this irrep.

    Standard character theory: N = (1/N_g) sum_g conj(chi(g)) chi_l(w_g).
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    chi_l = so3_character(l, group.rotation_angles())
    val = np.vdot(irrep.characters, chi_l).real / group.order
    n = round(val)
    if abs(val - n) >= 1e-6:
        raise GroupError(f"multiplicity {val} is not an integer; corrupted irrep data")
    return int(n)


def group_to_dict(group: Group, irreps: list[Irrep]) -> dict:
    """JSON-ready dump of a group and its irreps."""
    return {
        "name": group.name,
        "order": group.order,
        "elements": [list(e.ravel()) for e in group.elements],
        "mult_table": group.mult_table.tolist(),
        "irreps": [
            {
                "p": ir.p,
                "dim": ir.dim,
                "matrices": [[[z.real, z.imag] for z in m.ravel()]
                             for m in ir.matrices],
            }
            for ir in irreps
        ],
    }
