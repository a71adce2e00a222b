"""LOCC/SLOCC decision procedures, one-way protocol synthesis, multi-round
protocol simulation, one-way reduction, and one-shot entanglement.

Feasibility of pure-state LOCC conversion is classical majorization of the
Schmidt spectra (target majorizes source).  Synthesis follows the standard
route: mix the source marginal out of the target marginal by doubly
stochastic combination of partial isometries, turn each term into an Alice
Kraus operator ``k_x = sqrt(p_x) rho_phi^{1/2} u_x^dagger rho_psi^{-1/2}``,
and align Bob per branch by connecting purifications.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import (
    InfeasibleError,
    InvalidInputError,
    NotReducibleError,
    NumericalFailureError,
)
from .quantum import (
    DensityMatrix,
    LocalIsometryPair,
    PureBipartiteState,
    _psd_sqrt,
    connect_purifications,
    marginal,
    pure_state,
    schmidt,
    sorted_eigh,
)
from .spectra import Spectrum, majorizes, tensor_spectrum

KRAUS_TOL = 1e-9
SUPPORT_CUT = 1e-12
MASS_TOL = 1e-8
DEFAULT_MAX_ROUNDS = 16
BRANCH_PRUNE = 1e-12
REST_LABEL = "__rest__"


# --------------------------------------------------------------------------- #
#                                    types                                     #
# --------------------------------------------------------------------------- #

@dataclass(frozen=True, eq=False)
class Instrument:
    """One Kraus operator per outcome; may be subnormalized (sum k^dag k <= 1)."""

    kraus: tuple[np.ndarray, ...]
    labels: tuple[str, ...]


def instrument(kraus: Sequence, labels: Optional[Sequence[str]] = None) -> Instrument:
    ks = tuple(np.asarray(k, dtype=complex) for k in kraus)
    if not ks:
        raise InvalidInputError("instrument needs at least one outcome")
    shape = ks[0].shape
    if any(k.ndim != 2 or k.shape != shape or k.shape[0] != k.shape[1] for k in ks):
        raise InvalidInputError("instrument Kraus operators must be equal square matrices")
    if labels is None:
        labels = tuple(str(i) for i in range(len(ks)))
    labels = tuple(str(label) for label in labels)
    if len(labels) != len(ks) or len(set(labels)) != len(ks):
        raise InvalidInputError("labels must be distinct and match the outcome count")
    total = sum(k.conj().T @ k for k in ks)
    top = float(np.linalg.eigvalsh(total)[-1])
    if top > 1.0 + KRAUS_TOL:
        raise InvalidInputError(f"instrument is super-normalized: max eigenvalue {top!r}")
    return Instrument(ks, labels)


@dataclass(frozen=True, eq=False)
class LoccRound:
    """One communication round: the acting party and, per message history,
    the instrument it applies."""

    party: str
    branches: Mapping[tuple[str, ...], Instrument]


def locc_round(party: str, branches: Mapping) -> LoccRound:
    if party not in ("A", "B"):
        raise InvalidInputError(f"party must be 'A' or 'B', got {party!r}")
    fixed = {}
    for hist, instr in branches.items():
        key = tuple(str(x) for x in hist)
        if not isinstance(instr, Instrument):
            raise InvalidInputError("branch values must be Instruments")
        fixed[key] = instr
    return LoccRound(party, fixed)


@dataclass(frozen=True, eq=False)
class LoccProtocol:
    rounds: tuple[LoccRound, ...]


def locc_protocol(rounds: Sequence[LoccRound]) -> LoccProtocol:
    return LoccProtocol(tuple(rounds))


@dataclass(frozen=True, eq=False)
class OneWayProtocol:
    """Alice measures (one Kraus per outcome), Bob applies the matching
    partial isometry.  Probabilities are implied by the Kraus norms."""

    alice_kraus: tuple[np.ndarray, ...]
    bob_unitaries: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class MixingDecomposition:
    """weights (p_x) and partial isometries (u_x) with
    sum_x p_x u_x rho_phi u_x^dagger = rho_psi."""

    weights: tuple[float, ...]
    unitaries: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class Branch:
    probability: float
    state: PureBipartiteState
    history: tuple[str, ...]


@dataclass(frozen=True)
class VerificationReport:
    completeness_residual: float
    overlaps: tuple[float, ...]
    probabilities: tuple[float, ...]
    probability_sum: float
    passed: bool


@dataclass(frozen=True, eq=False)
class SloccResult:
    feasible: bool
    filter: Optional[LocalIsometryPair]
    success_prob: float


@dataclass(frozen=True)
class OneShotReport:
    n_max: int
    ebits: float


# --------------------------------------------------------------------------- #
#                                  decisions                                   #
# --------------------------------------------------------------------------- #

def locc_feasible(psi: PureBipartiteState, phi: PureBipartiteState) -> bool:
    """Deterministic LOCC conversion psi -> phi is possible iff the target's
    Schmidt spectrum classically majorizes the source's."""
    return majorizes(schmidt(phi).spectrum, schmidt(psi).spectrum)


def locc_embezzle_feasible(
    psi: PureBipartiteState, phi1: PureBipartiteState, phi2: PureBipartiteState
) -> bool:
    """Exact feasibility of psi (x) phi1 -> psi (x) phi2 by LOCC.

    Decided through majorization of the tensor spectra.  Any target whose
    top Schmidt weight exceeds the start's is refused automatically (the
    first partial sum already fails), which is the finite no-go for exact
    embezzlement.
    """
    sp = schmidt(psi).spectrum
    t1 = tensor_spectrum(sp, schmidt(phi1).spectrum)
    t2 = tensor_spectrum(sp, schmidt(phi2).spectrum)
    return majorizes(t2, t1)


# --------------------------------------------------------------------------- #
#                 doubly stochastic mixing (T-transforms, Birkhoff)            #
# --------------------------------------------------------------------------- #

def _t_transform_chain(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Doubly stochastic D with a = D b, as a product of at most d-1
    T-transforms (a majorized by b, both sorted descending).

    Each step pivots on the first index where b exceeds a and the first
    later index where b falls short; at least one of the two indices is
    finalized per step.
    """
    m = a.size
    d_mat = np.eye(m)
    cur = b.astype(float).copy()
    tol = 1e-13
    for _ in range(2 * m + 2):
        over = np.flatnonzero(cur > a + tol)
        if over.size == 0:
            return d_mat
        j = int(over[0])
        under = np.flatnonzero(cur[j + 1:] < a[j + 1:] - tol)
        if under.size == 0:
            return d_mat
        k = j + 1 + int(under[0])
        t = min(cur[j] - a[j], a[k] - cur[k])
        lam = 1.0 - t / (cur[j] - cur[k])
        tmat = np.eye(m)
        tmat[j, j] = tmat[k, k] = lam
        tmat[j, k] = tmat[k, j] = 1.0 - lam
        cur = tmat @ cur
        d_mat = tmat @ d_mat
    raise NumericalFailureError("T-transform chain did not converge")


def _perfect_matching_exists(mask: np.ndarray) -> bool:
    if mask.size == 0:
        return True
    if not mask.any(axis=1).all() or not mask.any(axis=0).all():
        return False
    match = maximum_bipartite_matching(csr_matrix(mask), perm_type="column")
    return bool((match >= 0).all())


def _bottleneck_permutation(d_mat: np.ndarray, tol: float) -> np.ndarray:
    """Permutation maximizing the minimum selected entry; ties broken by
    lexicographically smallest permutation."""
    m = d_mat.shape[0]
    vals = np.unique(d_mat[d_mat > tol])
    lo, hi = 0, vals.size - 1
    best = vals[0]
    while lo <= hi:
        mid = (lo + hi) // 2
        if _perfect_matching_exists(d_mat >= vals[mid]):
            best = vals[mid]
            lo = mid + 1
        else:
            hi = mid - 1
    mask = d_mat >= best
    perm = np.full(m, -1, dtype=int)
    used = np.zeros(m, dtype=bool)
    for i in range(m):
        for c in np.flatnonzero(mask[i] & ~used):
            used[c] = True
            rest = mask[np.ix_(range(i + 1, m), np.flatnonzero(~used))]
            if _perfect_matching_exists(rest):
                perm[i] = c
                break
            used[c] = False
        if perm[i] < 0:
            raise NumericalFailureError("bottleneck matching lost feasibility")
    return perm


def _birkhoff(d_mat: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Greedy bottleneck Birkhoff decomposition; at most (m-1)^2 + 1 terms."""
    m = d_mat.shape[0]
    rest = d_mat.copy()
    terms: list[tuple[float, np.ndarray]] = []
    rows = np.arange(m)
    for _ in range((m - 1) ** 2 + 1):
        if rest.max() <= 1e-12:
            return terms
        perm = _bottleneck_permutation(rest, 1e-12)
        w = float(rest[rows, perm].min())
        terms.append((w, perm))
        rest[rows, perm] -= w
        rest[rest < 1e-15] = 0.0
    if rest.max() > 1e-12:
        raise NumericalFailureError("Birkhoff decomposition exceeded its term bound")
    return terms


def _padded_eigendata(rho: DensityMatrix, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenvalues padded to length m (clipped at 0) and the
    eigenbasis extended by zero columns to width m."""
    vals, vecs = sorted_eigh(rho)
    pad_vals = np.zeros(m)
    pad_vals[: vals.size] = np.clip(vals, 0.0, None)
    ext = np.zeros((rho.dim, m), dtype=complex)
    ext[:, : rho.dim] = vecs
    return pad_vals, ext


def mixing_decomposition(rho_psi: DensityMatrix, rho_phi: DensityMatrix) -> MixingDecomposition:
    """Express rho_psi as a probabilistic unitary (partial-isometry) mixture
    of rho_phi.  Requires spectrum(rho_psi) to be majorized by
    spectrum(rho_phi)."""
    if not majorizes(rho_phi.spectrum(), rho_psi.spectrum()):
        raise InfeasibleError("source spectrum is not majorized by the mixed state's")
    m = max(rho_psi.dim, rho_phi.dim)
    a, va = _padded_eigendata(rho_psi, m)
    b, vb = _padded_eigendata(rho_phi, m)
    d_mat = _t_transform_chain(a, b)
    terms = _birkhoff(d_mat)
    weights = []
    unitaries = []
    rows = np.arange(m)
    for w, perm in terms:
        p_mat = np.zeros((m, m))
        p_mat[rows, perm] = 1.0
        weights.append(w)
        unitaries.append(va @ p_mat @ vb.conj().T)
    return MixingDecomposition(tuple(weights), tuple(unitaries))


# --------------------------------------------------------------------------- #
#                             one-way synthesis                                #
# --------------------------------------------------------------------------- #

def _support_data(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """(support projector, inverse square root on the support)."""
    vals, vecs = sorted_eigh(rho)
    top = float(vals.max())
    keep = vals > SUPPORT_CUT * top
    kept = vals[keep]
    if float(kept.min()) < 1e-12:
        raise NumericalFailureError(
            f"support eigenvalue {float(kept.min()):.3e} below 1e-12: ill-conditioned"
        )
    basis = vecs[:, keep]
    proj = basis @ basis.conj().T
    inv_sqrt = (basis * kept**-0.5) @ basis.conj().T
    return proj, inv_sqrt


def support_projector(rho: DensityMatrix) -> np.ndarray:
    vals, vecs = sorted_eigh(rho)
    keep = vals > SUPPORT_CUT * float(vals.max())
    basis = vecs[:, keep]
    return basis @ basis.conj().T


def nielsen_synthesize(psi: PureBipartiteState, phi: PureBipartiteState) -> OneWayProtocol:
    """One-way protocol for a feasible pure-state conversion.

    Alice's Kraus operators are
    ``k_x = sqrt(p_x) rho_phi^{1/2} u_x^dagger rho_psi^{-1/2}``
    from the mixing decomposition of the marginals; each branch then has
    A-marginal exactly p_x rho_phi, and Bob's partial isometry connects the
    branch to the target purification.
    """
    if not locc_feasible(psi, phi):
        raise InfeasibleError("target spectrum does not majorize the source spectrum")
    rho_psi = marginal(psi, "A")
    rho_phi = marginal(phi, "A")
    mix = mixing_decomposition(rho_psi, rho_phi)
    _, inv_sqrt = _support_data(rho_psi)
    sqrt_phi = _psd_sqrt(rho_phi)
    d_b_psi = psi.dims[1]
    alice = []
    bob = []
    for p_x, u_x in zip(mix.weights, mix.unitaries):
        k = math.sqrt(p_x) * (sqrt_phi @ u_x.conj().T @ inv_sqrt)
        vec = (k @ psi.matrix).ravel()
        q = float(np.vdot(vec, vec).real)
        if abs(q - p_x) > MASS_TOL:
            raise NumericalFailureError(
                f"branch probability leaked: expected {p_x!r}, got {q!r}"
            )
        branch = pure_state((phi.dims[0], d_b_psi), vec / math.sqrt(q))
        v = connect_purifications(phi, branch).op_B
        alice.append(k)
        bob.append(v)
    return OneWayProtocol(tuple(alice), tuple(bob))


def verify_protocol(
    protocol: OneWayProtocol, psi: PureBipartiteState, phi: PureBipartiteState
) -> VerificationReport:
    """Check completeness on the source support, per-branch target overlap,
    and total probability; the report carries failures instead of raising."""
    rho_psi = marginal(psi, "A")
    supp = support_projector(rho_psi)
    total = np.zeros((psi.dims[0], psi.dims[0]), dtype=complex)
    overlaps = []
    probs = []
    for k, v in zip(protocol.alice_kraus, protocol.bob_unitaries):
        if k.shape[1] != psi.dims[0] or v.shape[1] != psi.dims[1]:
            raise InvalidInputError("protocol operator shapes do not match the source state")
        if k.shape[0] != phi.dims[0] or v.shape[0] != phi.dims[1]:
            raise InvalidInputError("protocol operator shapes do not match the target state")
        total += k.conj().T @ k
        mid = k @ psi.matrix
        probs.append(float(np.einsum("xy,xy->", mid.conj(), mid).real))
        out = (mid @ v.T).ravel()
        norm = float(np.linalg.norm(out))
        overlaps.append(
            0.0 if norm == 0.0 else float(abs(np.vdot(phi.amplitudes, out)) / norm)
        )
    residual = float(np.abs(np.linalg.eigvalsh(total - supp)).max())
    prob_sum = float(math.fsum(probs))
    passed = (
        residual <= 1e-9
        and all(o >= 1.0 - 1e-8 for o in overlaps)
        and abs(prob_sum - 1.0) <= 1e-9
    )
    return VerificationReport(residual, tuple(overlaps), tuple(probs), prob_sum, passed)


# --------------------------------------------------------------------------- #
#                                 simulation                                   #
# --------------------------------------------------------------------------- #

def _thread_count() -> int:
    try:
        n = int(os.environ.get("ENTLAB_THREADS", "1"))
    except ValueError:
        n = 1
    return max(n, 1)


def _completed(instr: Instrument, dim: int) -> Instrument:
    """Validate against the acting dimension and append the deterministic
    complement Kraus operator when the instrument is subnormalized."""
    if instr.kraus[0].shape[0] != dim:
        raise InvalidInputError(
            f"instrument acts on dimension {instr.kraus[0].shape[0]}, state has {dim}"
        )
    total = sum(k.conj().T @ k for k in instr.kraus)
    gap = np.eye(dim) - total
    vals, vecs = np.linalg.eigh(gap)
    if float(vals.min()) < -KRAUS_TOL:
        raise InvalidInputError("instrument is super-normalized")
    if float(vals.max()) <= KRAUS_TOL:
        return instr
    comp = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    if REST_LABEL in instr.labels:
        raise InvalidInputError(f"label {REST_LABEL!r} is reserved for the completion outcome")
    return Instrument(instr.kraus + (comp,), instr.labels + (REST_LABEL,))


def simulate(
    protocol: LoccProtocol,
    psi: PureBipartiteState,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> tuple[Branch, ...]:
    """Exact breadth-first expansion of the protocol on a pure state.

    Subnormalized instruments are completed; branches below probability
    1e-12 are pruned.  Leaves come back in deterministic label order.
    """
    if len(protocol.rounds) > max_rounds:
        raise InvalidInputError(
            f"protocol depth {len(protocol.rounds)} exceeds the cap {max_rounds}"
        )
    dA, dB = psi.dims
    leaves: list[tuple[float, np.ndarray, tuple[str, ...]]] = [(1.0, psi.amplitudes, ())]
    for rnd in protocol.rounds:
        acting_dim = dA if rnd.party == "A" else dB

        def expand(leaf):
            p, vec, hist = leaf
            instr = rnd.branches.get(hist)
            if instr is None:
                raise InvalidInputError(f"no instrument for reachable history {hist!r}")
            instr = _completed(instr, acting_dim)
            mat = vec.reshape(dA, dB)
            out = []
            for k, label in zip(instr.kraus, instr.labels):
                new = (k @ mat if rnd.party == "A" else mat @ k.T).ravel()
                q = float(np.vdot(new, new).real)
                if q > BRANCH_PRUNE:
                    out.append((p * q, new / math.sqrt(q), hist + (label,)))
            return out

        workers = _thread_count()
        if workers > 1 and len(leaves) >= 4:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(expand, leaves))
        else:
            chunks = [expand(leaf) for leaf in leaves]
        leaves = [item for chunk in chunks for item in chunk]
    return tuple(
        Branch(p, pure_state((dA, dB), vec), hist) for p, vec, hist in leaves
    )


# --------------------------------------------------------------------------- #
#                              one-way reduction                               #
# --------------------------------------------------------------------------- #

def _mirror_bob(vec: np.ndarray, dims: tuple[int, int], d_op: np.ndarray):
    """Alice operator m and Bob partial isometry w with
    (m (x) w) sigma = (1 (x) d) sigma for the pure state sigma = vec.

    Through the Schmidt frame sigma = E diag(s) F^T: with
    X = diag(s) (d F)^T = H Omega (polar), take
    m = E H diag(s)^+ E^dagger and w = Omega^T F^dagger.
    """
    dA, dB = dims
    mat = vec.reshape(dims)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    cut = float(s.max()) * SUPPORT_CUT if s.size else 0.0
    r = int((s > cut).sum())
    e_b = u[:, :r]
    f_b = vh.T[:, :r]
    sr = s[:r]
    x = sr[:, None] * (d_op @ f_b).T
    xx = x @ x.conj().T
    hvals, hvecs = np.linalg.eigh(xx)
    hvals = np.sqrt(np.clip(hvals, 0.0, None))
    h = (hvecs * hvals) @ hvecs.conj().T
    hcut = float(hvals.max()) * 1e-13 if hvals.size else 0.0
    inv = np.divide(1.0, hvals, out=np.zeros_like(hvals), where=hvals > hcut)
    h_pinv = (hvecs * inv) @ hvecs.conj().T
    omega = h_pinv @ x
    m_op = e_b @ h @ np.diag(1.0 / sr) @ e_b.conj().T
    w_op = omega.T @ f_b.conj().T
    lhs = (m_op @ mat @ w_op.T).ravel()
    rhs = (mat @ d_op.T).ravel()
    if float(np.abs(lhs - rhs).max()) > 1e-8:
        raise NotReducibleError("branch operator could not be mirrored within tolerance")
    return m_op, w_op


def one_way_reduce(
    protocol: LoccProtocol,
    psi: PureBipartiteState,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> OneWayProtocol:
    """Collapse a multi-round protocol on psi into Alice-then-Bob form with
    identical branch probabilities and states.

    Alice rounds compose directly; each Bob operator is mirrored through the
    current branch state into an Alice operator and a Bob partial isometry.
    """
    if len(protocol.rounds) > max_rounds:
        raise InvalidInputError(
            f"protocol depth {len(protocol.rounds)} exceeds the cap {max_rounds}"
        )
    dA, dB = psi.dims
    pi_a = support_projector(marginal(psi, "A"))
    pi_b = support_projector(marginal(psi, "B"))
    branches = [(1.0, psi.amplitudes, (), pi_a.copy(), pi_b.copy())]
    for rnd in protocol.rounds:
        acting_dim = dA if rnd.party == "A" else dB
        new_branches = []
        for p, vec, hist, a_acc, w_acc in branches:
            instr = rnd.branches.get(hist)
            if instr is None:
                raise InvalidInputError(f"no instrument for reachable history {hist!r}")
            instr = _completed(instr, acting_dim)
            mat = vec.reshape(dA, dB)
            for k, label in zip(instr.kraus, instr.labels):
                if rnd.party == "A":
                    new = (k @ mat).ravel()
                    q = float(np.vdot(new, new).real)
                    if q <= BRANCH_PRUNE:
                        continue
                    new_branches.append(
                        (p * q, new / math.sqrt(q), hist + (label,), k @ a_acc, w_acc)
                    )
                else:
                    new = (mat @ k.T).ravel()
                    q = float(np.vdot(new, new).real)
                    if q <= BRANCH_PRUNE:
                        continue
                    m_op, w_op = _mirror_bob(vec, (dA, dB), k)
                    new_branches.append(
                        (p * q, new / math.sqrt(q), hist + (label,), m_op @ a_acc, w_op @ w_acc)
                    )
        branches = new_branches
    return OneWayProtocol(
        tuple(a for _, _, _, a, _ in branches),
        tuple(w for _, _, _, _, w in branches),
    )


def one_way_branches(
    protocol: OneWayProtocol, psi: PureBipartiteState
) -> tuple[Branch, ...]:
    """Run an Alice-then-Bob protocol on a pure state.

    Outcome ``x`` applies ``alice_kraus[x] (x) bob_unitaries[x]``; the branch
    probability is the squared norm after Alice's Kraus alone (Bob's side is
    an isometry on the branch support).  Labels are the outcome indices.
    """
    if len(protocol.alice_kraus) != len(protocol.bob_unitaries):
        raise InvalidInputError("alice_kraus and bob_unitaries must pair up one-to-one")
    mat = psi.matrix
    out: list[Branch] = []
    for x, (k_op, w_op) in enumerate(zip(protocol.alice_kraus, protocol.bob_unitaries)):
        if k_op.shape[1] != psi.dims[0] or w_op.shape[1] != psi.dims[1]:
            raise InvalidInputError(
                f"branch {x} operators do not act on a {psi.dims} state"
            )
        new = k_op @ mat @ w_op.T
        prob = float(np.vdot(new, new).real)
        if prob <= BRANCH_PRUNE:
            continue
        state = pure_state((k_op.shape[0], w_op.shape[0]), new.ravel() / math.sqrt(prob))
        out.append(Branch(probability=prob, state=state, history=(str(x),)))
    return tuple(out)


# --------------------------------------------------------------------------- #
#                                   SLOCC                                      #
# --------------------------------------------------------------------------- #

def slocc(psi: PureBipartiteState, phi: PureBipartiteState) -> SloccResult:
    """Single-filter SLOCC conversion: feasible iff the target Schmidt rank
    does not exceed the source's; the canonical filter rescales Schmidt
    weights with success probability 1/max_i(phi_i/psi_i)."""
    dp = schmidt(psi)
    df = schmidt(phi)
    s2 = np.asarray(dp.spectrum.values)
    t2 = np.asarray(df.spectrum.values)
    if t2.size > s2.size:
        return SloccResult(False, None, 0.0)
    r = t2.size
    ratios = t2 / s2[:r]
    max_ratio = float(ratios.max())
    diag_vals = np.sqrt(ratios / max_ratio)
    a_filter = (df.basis_A[:, :r] * diag_vals) @ dp.basis_A[:, :r].conj().T
    b_filter = df.basis_B[:, :r] @ dp.basis_B[:, :r].conj().T
    return SloccResult(True, LocalIsometryPair(a_filter, b_filter), 1.0 / max_ratio)


# --------------------------------------------------------------------------- #
#                            one-shot entanglement                             #
# --------------------------------------------------------------------------- #

def one_shot_entanglement(psi: PureBipartiteState) -> OneShotReport:
    """Largest n such that psi (x) |00> -> residual (x) Phi_n is feasible:
    n_max = floor(min_k k / S_k) over the top-k Schmidt partial sums."""
    values = np.asarray(schmidt(psi).spectrum.values)
    partial = np.cumsum(values)
    ks = np.arange(1, values.size + 1)
    n_max = int(math.floor(float((ks / partial).min()) + 1e-9))
    n_max = max(n_max, 1)
    return OneShotReport(n_max, math.log2(n_max))
