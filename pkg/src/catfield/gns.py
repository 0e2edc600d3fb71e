"""GNS construction, the per-object module functor and its induced pre-Hilbert functor."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgElement, left_mult_matrix, unit
from .category import FinCategory
from .errors import (
    CarrierNotWholeCategory,
    ContractivityFails,
    DegenerateTolerance,
    NotPSD,
    SingularBlock,
)
from .rig import COMPLEX
from .states import DEFAULT_TOL, State, gram_blocks, psd_tolerance

CLIFF_RATIO = 10.0


def gram_matrix(s: State) -> np.ndarray:
    """G[c', c] = φ̂(dagger(c')∘c), zero when not composable."""
    cat, inv = s.category, s.involution
    n = len(cat.arrows)
    g = np.zeros((n, n), dtype=complex)
    for i, cp in enumerate(cat.arrows):
        d = inv.dagger[cp]
        for c in cat.arrows_into(cat.dom[d]):
            g[i, cat.index[c]] = s.weight(cat.table[(d, c)])
    return g


@dataclass(frozen=True)
class Quotient:
    """Orthonormal coordinates on V/N for a PSD form on V."""

    coords: np.ndarray  # d × n: vector ↦ coordinates of its class
    basis: np.ndarray  # n × d: representatives of an orthonormal basis
    null: np.ndarray  # n × (n - d): orthonormal basis of the null space
    eigenvalues: np.ndarray

    @property
    def dimension(self) -> int:
        return self.coords.shape[0]


def quotient(form: np.ndarray, tol: float = DEFAULT_TOL, check_cliff: bool = True) -> Quotient:
    n = form.shape[0]
    if n == 0:
        return Quotient(np.zeros((0, 0), complex), np.zeros((0, 0), complex), np.zeros((0, 0), complex), np.zeros(0))
    h = (form + form.conj().T) / 2
    w, v = np.linalg.eigh(h)
    if w.min() < -psd_tolerance(h, tol):
        raise NotPSD(f"form has eigenvalue {w.min():.3e}")
    smax = max(np.abs(w).max(), 0.0)
    keep = w > tol * smax if smax > 0 else np.zeros(n, dtype=bool)
    if check_cliff and keep.any() and not keep.all():
        kept, dropped = w[keep].min(), np.abs(w[~keep]).max()
        if dropped > 0 and kept / dropped < CLIFF_RATIO:
            raise DegenerateTolerance(
                f"rank decision is unstable: smallest kept eigenvalue {kept:.3e}, largest dropped {dropped:.3e}"
            )
    root = np.sqrt(w[keep])
    coords = (v[:, keep] * root).conj().T
    basis = v[:, keep] / root
    return Quotient(coords, basis, v[:, ~keep], w)


@dataclass(frozen=True, eq=False)
class GnsSpace:
    state: State
    dimension: int
    basis_map: np.ndarray
    coords: np.ndarray
    vacuum: np.ndarray
    rep: dict[str, np.ndarray]
    gram: np.ndarray
    eigenvalues: np.ndarray
    rank_tolerance: float

    def vector(self, a: AlgElement) -> np.ndarray:
        """Coordinates of the class of a."""
        return self.coords @ a.dense().astype(complex)

    def represent(self, a: AlgElement) -> np.ndarray:
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for c, v in a.weights.items():
            out += complex(v) * self.rep[c]
        return out

    def report(self, include_rep: bool = False) -> dict:
        out = {
            "dimension": self.dimension,
            "gram_spectrum": [float(x) for x in self.eigenvalues],
            "vacuum": [[float(z.real), float(z.imag)] for z in self.vacuum],
            "rank_tolerance": self.rank_tolerance,
        }
        if include_rep:
            out["representation"] = {
                c: [[[float(z.real), float(z.imag)] for z in row] for row in m] for c, m in self.rep.items()
            }
        return out


def gns_construct(s: State, tol: float = DEFAULT_TOL, check: bool = True) -> GnsSpace:
    if not s.involution.is_whole:
        raise CarrierNotWholeCategory("GNS needs a dagger on every arrow")
    cat = s.category
    g = gram_matrix(s)
    q = quotient(g, tol)
    rep = {c: q.coords @ left_mult_matrix(cat, c) @ q.basis for c in cat.arrows}
    eps = unit(cat, COMPLEX).dense().astype(complex)
    space = GnsSpace(s, q.dimension, q.basis, q.coords, q.coords @ eps, rep, g, q.eigenvalues, tol)
    if check:
        _check_space(space)
    return space


def _check_space(space: GnsSpace, tol: float = 1e-8) -> None:
    s, cat = space.state, space.state.category
    g = space.gram
    if np.linalg.norm(g - g.conj().T) > tol * (1 + np.linalg.norm(g)):
        raise NotPSD("Gram matrix is not Hermitian")
    om = space.vacuum
    if abs(np.vdot(om, om) - 1) > tol:
        raise DegenerateTolerance(f"<vacuum, vacuum> = {np.vdot(om, om)}")
    for c in cat.arrows:
        if abs(np.vdot(om, space.rep[c] @ om) - s.weight(c)) > tol:
            raise DegenerateTolerance(f"<vacuum, pi({c}) vacuum> differs from the state")
    zero = np.zeros((space.dimension, space.dimension))
    for f in cat.arrows:
        for h in cat.arrows:
            gf = cat.compose(h, f)
            expect = space.rep[gf] if gf is not None else zero
            if np.abs(space.rep[h] @ space.rep[f] - expect).max(initial=0.0) > tol:
                raise DegenerateTolerance(f"pi is not multiplicative at ({h}, {f})")


# ------------------------------------------------------------- module functor
@dataclass(frozen=True)
class ObjectModuleMap:
    arrow: str
    source_object: str
    target_object: str
    source_basis: tuple[str, ...]
    target_basis: tuple[str, ...]
    matrix: np.ndarray


def module_map(cat: FinCategory, c: str) -> ObjectModuleMap:
    """Left multiplication by ι^c from the arrows into dom(c) to the arrows into cod(c)."""
    cat.check_arrow(c)
    src, tgt = cat.arrows_into(cat.dom[c]), cat.arrows_into(cat.cod[c])
    pos = {a: i for i, a in enumerate(tgt)}
    m = np.zeros((len(tgt), len(src)))
    for j, f in enumerate(src):
        m[pos[cat.table[(c, f)]], j] = 1.0
    return ObjectModuleMap(c, cat.dom[c], cat.cod[c], src, tgt, m)


def _object_forms(s: State) -> dict[str, np.ndarray]:
    return {y: m for y, (_, m) in gram_blocks(s.involution, s.weights).items()}


def _object_quotient(s: State, y: str, tol: float) -> Quotient:
    return quotient(_object_forms(s)[y], tol, check_cliff=False)


@dataclass(frozen=True)
class ContractivityReport:
    arrow: str
    holds: bool
    operator_bound: float
    null_preserved: bool


def contractivity_check(s: State, c: str, tol: float = DEFAULT_TOL) -> ContractivityReport:
    """Largest ratio φ((ι^c α)*(ι^c α)) / φ(α*α) over α supported on arrows into dom(c)."""
    cat = s.category
    if not s.involution.is_whole:
        raise CarrierNotWholeCategory("the module functor needs a dagger on every arrow")
    mm = module_map(cat, c)
    g_cod = _object_forms(s)[mm.target_object]
    qd = _object_quotient(s, mm.source_object, tol)
    if cat.is_identity(c):
        return ContractivityReport(c, True, 1.0 if qd.dimension else 0.0, True)
    pulled = mm.matrix.T @ g_cod @ mm.matrix
    scale = 1.0 + np.linalg.norm(g_cod, 2)
    null_ok = True
    for k in range(qd.null.shape[1]):
        n = qd.null[:, k]
        if abs(np.vdot(n, pulled @ n)) > tol * scale:
            null_ok = False
    if qd.dimension == 0:
        bound = 0.0
    else:
        k = qd.basis.conj().T @ pulled @ qd.basis
        try:
            bound = float(np.linalg.eigvalsh((k + k.conj().T) / 2).max())
        except np.linalg.LinAlgError as exc:
            raise SingularBlock(f"eigenvalue solve failed for arrow {c!r}") from exc
    if not null_ok:
        bound = float("inf")
    return ContractivityReport(c, null_ok and bound <= 1.0 + tol, bound, null_ok)


def hilbert_functor_map(s: State, c: str, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The induced map between per-object quotients, in orthonormal coordinates."""
    rep = contractivity_check(s, c, tol)
    if not rep.holds:
        raise ContractivityFails(f"contractivity fails at arrow {c!r} (bound {rep.operator_bound:.6g})")
    mm = module_map(s.category, c)
    qd = _object_quotient(s, mm.source_object, tol)
    qc = _object_quotient(s, mm.target_object, tol)
    return qc.coords @ mm.matrix @ qd.basis
