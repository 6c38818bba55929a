"""Numeric verification of the transform on twisted first homology.

Working over the free group on loops a_1 .. a_n (the diagonal loop is
eliminated through d = (a_1 ... a_n)^{-1}), the space C_1/dC_2 of
one-cycles modulo simplex boundaries is C^{n r} with basis symbols
G[a_i, v_j].  The braid generator u_k acts by an explicit word
substitution; restricting to the kernel of the boundary map gives the
raw convolution, and quotienting by the cycles on local fixed vectors
gives the middle convolution.  Measured per-point eigenvalue multisets
are then compared against the symbolic transform prediction.

All matrices here are dense complex numpy arrays; tolerances are
explicit and every rank decision is an SVD/eigenvalue threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linear_sum_assignment
from scipy.stats import unitary_group

from .divisors import EigDivisor, MonodromyVector
from .errors import (BoundaryNotSurjective, ConventionViolationNumeric,
                     QuotientRankMismatch, SizeMismatch)
from .katz import Convoluter, kappa
from .scalars import GroupElement, GroupMode

__all__ = [
    "NumericInstance",
    "ChainSpace",
    "RawConvolutionRep",
    "MiddleConvolutionRep",
    "VerificationProblem",
    "VerifyReport",
    "expand_word",
    "braid_action",
    "raw_convolution_rep",
    "middle_convolution_rep",
    "generate_instance",
    "verify_instance",
    "match_multisets",
]

DEFAULT_TOL = 1e-9


@dataclass
class NumericInstance:
    """Explicit monodromy matrices plus numeric twisting scalars.

    ``M[i]`` is the r x r local monodromy at point i (product over all
    points equal to the identity), ``b``/``w`` are the horizontal and
    vertical twisting scalars, ``chi`` the diagonal scalar.  The
    twisting relations chi * prod(b) = 1 and prod(w) = prod(b) are
    enforced within ``tol`` at construction.
    """

    M: list
    b: np.ndarray
    w: np.ndarray
    chi: complex
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.M = [np.asarray(Mi, dtype=complex) for Mi in self.M]
        r = self.M[0].shape[0]
        for Mi in self.M:
            if Mi.shape != (r, r):
                raise SizeMismatch("all matrices must be r x r")
        self.b = np.asarray(self.b, dtype=complex)
        self.w = np.asarray(self.w, dtype=complex)
        if len(self.b) != len(self.M) or len(self.w) != len(self.M):
            raise SizeMismatch("need one b and one w scalar per point")
        self.chi = complex(self.chi)
        prod = np.eye(r, dtype=complex)
        for Mi in self.M:
            prod = prod @ Mi
        checks = {
            "prod(M) = 1": np.linalg.norm(prod - np.eye(r)),
            "chi * prod(b) = 1": abs(self.chi * np.prod(self.b) - 1),
            "prod(w) = prod(b)": abs(np.prod(self.w) - np.prod(self.b)),
        }
        bad = {k: v for k, v in checks.items() if v > max(self.tol, 1e-10) * 100}
        if bad:
            raise ValueError(f"instance violates its defining relations: {bad}")

    @property
    def n(self) -> int:
        return len(self.M)

    @property
    def r(self) -> int:
        return self.M[0].shape[0]

    def fixed_multiplicity(self, k: int) -> int:
        """Multiplicity of eigenvalue 1 in b_k M_k, within tol."""
        lam = np.linalg.eigvals(self.b[k] * self.M[k])
        return int(np.sum(np.abs(lam - 1) <= self.tol))

    def measured_defect(self) -> int:
        n, r = self.n, self.r
        return (n - 2) * r - sum(self.fixed_multiplicity(k) for k in range(n))

    def to_json(self) -> dict:
        as_pair = lambda z: [float(np.real(z)), float(np.imag(z))]
        return {
            "points": self.n,
            "rank": self.r,
            "tol": self.tol,
            "matrices": [[[as_pair(z) for z in row] for row in Mi] for Mi in self.M],
            "b": [as_pair(z) for z in self.b],
            "w": [as_pair(z) for z in self.w],
            "chi": as_pair(self.chi),
        }

    @classmethod
    def from_json(cls, doc) -> "NumericInstance":
        as_c = lambda p: complex(p[0], p[1])
        M = [np.array([[as_c(z) for z in row] for row in Mi]) for Mi in doc["matrices"]]
        return cls(M=M,
                   b=[as_c(z) for z in doc["b"]],
                   w=[as_c(z) for z in doc["w"]],
                   chi=as_c(doc["chi"]),
                   tol=float(doc.get("tol", DEFAULT_TOL)))


# ---------------------------------------------------------------------------
# Words and the chain space
# ---------------------------------------------------------------------------

def _delta_word(n: int) -> list[int]:
    # d = (a_1 ... a_n)^{-1} = a_n^{-1} ... a_1^{-1}
    return [-i for i in range(n, 0, -1)]


def _delta_k_word(n: int, k: int) -> list[int]:
    # d_k = (a_{k+1} ... a_n) d (a_{k+1} ... a_n)^{-1}, with d_n = d: the
    # diagonal loop re-based through the gap next to point k.  This is the
    # unique conjugate for which the closed-form 2x2 action below is the
    # restriction of the substitution action on the a-basis.
    suffix = list(range(k + 1, n + 1))
    return suffix + _delta_word(n) + [-i for i in reversed(suffix)]


def _inverse_word(word: Sequence[int]) -> list[int]:
    return [-x for x in reversed(word)]


class ChainSpace:
    """C_1/dC_2 = C^{n r} with basis G[a_i, v_j] and its boundary map.

    The twisted action of a_i is A_i = b_i M_i; the boundary sends
    G[a_i, v] to (A_i - 1) v.
    """

    def __init__(self, inst: NumericInstance):
        self.inst = inst
        self.n, self.r = inst.n, inst.r
        self.A = [inst.b[i] * inst.M[i] for i in range(self.n)]
        self.Ainv = [np.linalg.inv(Ai) for Ai in self.A]
        self.boundary = np.hstack([Ai - np.eye(self.r) for Ai in self.A])
        self._kernel = None
        self._braid = {}

    def expand_word(self, word: Sequence[int], v: np.ndarray) -> np.ndarray:
        """Expansion of G[word, v] over the basis symbols.

        Uses G[xy, v] = G[y, v] + G[x, y(v)] and
        G[x^{-1}, v] = -G[x, x^{-1}(v)], processed from the rightmost
        letter (which acts first).  ``v`` may be a vector or an (r, m)
        block; the result has a leading axis of size n*r.
        """
        v = np.asarray(v, dtype=complex)
        single = v.ndim == 1
        cur = v.reshape(self.r, -1).copy()
        out = np.zeros((self.n * self.r, cur.shape[1]), dtype=complex)
        for letter in reversed(list(word)):
            i = abs(letter) - 1
            if not 0 <= i < self.n:
                raise IndexError(f"letter {letter} out of range for n={self.n}")
            block = slice(i * self.r, (i + 1) * self.r)
            if letter > 0:
                out[block] += cur
                cur = self.A[i] @ cur
            else:
                cur = self.Ainv[i] @ cur
                out[block] -= cur
        return out[:, 0] if single else out

    def word_action(self, word: Sequence[int]) -> np.ndarray:
        """The r x r matrix by which the word acts on coefficients."""
        out = np.eye(self.r, dtype=complex)
        for letter in reversed(list(word)):
            i = abs(letter) - 1
            out = (self.A[i] if letter > 0 else self.Ainv[i]) @ out
        return out

    def embed(self, i: int, v: np.ndarray) -> np.ndarray:
        """Coefficient vector of G[a_{i+1}, v] (i is 0-based)."""
        v = np.asarray(v, dtype=complex)
        out = np.zeros((self.n * self.r,) + v.shape[1:], dtype=complex)
        out[i * self.r:(i + 1) * self.r] = v
        return out

    def delta_k_vector(self, k: int, v: np.ndarray) -> np.ndarray:
        """Coefficient vector of G[d_k, v] (k is 1-based)."""
        return self.expand_word(_delta_k_word(self.n, k), v)

    def braid_matrix(self, k: int) -> np.ndarray:
        """Natural action of the braid generator u_k on C_1/dC_2.

        u_k fixes a_i for i != k and conjugates a_k by d_k.  (1-based k;
        the basepoint twist by w_k is *not* applied here.)
        """
        if not 1 <= k <= self.n:
            raise IndexError(f"k={k} out of range")
        if k not in self._braid:
            dk = _delta_k_word(self.n, k)
            word = _inverse_word(dk) + [k] + dk
            U = np.eye(self.n * self.r, dtype=complex)
            block = slice((k - 1) * self.r, k * self.r)
            U[:, block] = self.expand_word(word, np.eye(self.r, dtype=complex))
            self._braid[k] = U
        return self._braid[k]

    def kernel_basis(self) -> np.ndarray:
        """Orthonormal basis of ker(boundary); raises if the boundary is
        not numerically surjective."""
        if self._kernel is None:
            tol = self.inst.tol
            sv = np.linalg.svd(self.boundary, compute_uv=False)
            if sv[self.r - 1] <= tol:
                raise BoundaryNotSurjective(
                    f"boundary rank below {self.r}: smallest kept singular value "
                    f"{sv[self.r - 1]:.3e}")
            K = null_space(self.boundary)
            if K.shape[1] != (self.n - 1) * self.r:
                raise BoundaryNotSurjective(
                    f"kernel dimension {K.shape[1]} != (n-1) r = {(self.n - 1) * self.r}")
            self._kernel = K
        return self._kernel


def expand_word(inst: NumericInstance, word: Sequence[int], v: np.ndarray) -> np.ndarray:
    return ChainSpace(inst).expand_word(word, v)


def braid_action(inst: NumericInstance, k: int) -> np.ndarray:
    return ChainSpace(inst).braid_matrix(k)


def braid_block_closed_form(chi: complex, b_k: complex, r_kj: complex) -> np.ndarray:
    """Closed-form action of u_k on span(G[a_k, v], G[d_k, v]) for an
    eigenvector v of M_k with eigenvalue r_kj (columns are images)."""
    return np.array([
        [chi, chi - chi ** 2],
        [1 - b_k * r_kj, 1 + chi * (b_k * r_kj - 1)],
    ], dtype=complex)


# ---------------------------------------------------------------------------
# Raw and middle convolution representations
# ---------------------------------------------------------------------------

@dataclass
class RawConvolutionRep:
    dim: int
    kernel: np.ndarray          # (n r, (n-1) r) orthonormal
    matrices: list              # action of u_k on the kernel, w-twisted


@dataclass
class MiddleConvolutionRep:
    dim: int
    matrices: list              # action of u_k on the middle quotient, w-twisted
    fixed_dims: list            # dim of the local fixed spaces F_k
    raw: RawConvolutionRep


def raw_convolution_rep(inst: NumericInstance) -> RawConvolutionRep:
    """Action of every u_k on H_1 = ker(boundary), twisted by w_k.

    The kernel has dimension (n-1) r whenever the boundary is
    surjective, and u_k acts (before the twist) with the eigenvalues of
    chi * b_k M_k together with 1 of multiplicity (n-2) r.
    """
    space = ChainSpace(inst)
    K = space.kernel_basis()
    mats = [inst.w[k - 1] * (K.conj().T @ space.braid_matrix(k) @ K)
            for k in range(1, inst.n + 1)]
    return RawConvolutionRep(dim=K.shape[1], kernel=K, matrices=mats)


def _fixed_space(inst: NumericInstance, k: int) -> np.ndarray:
    """Orthonormal basis of the eigenvalue-1 eigenspace of b_k M_k."""
    A = inst.b[k] * inst.M[k]
    lam, vecs = np.linalg.eig(A)
    sel = np.abs(lam - 1) <= inst.tol
    if not np.any(sel):
        return np.zeros((inst.r, 0), dtype=complex)
    Q, _ = np.linalg.qr(vecs[:, sel])
    return Q


def middle_convolution_rep(inst: NumericInstance) -> MiddleConvolutionRep:
    """Quotient of H_1 by the middling span of local fixed vectors.

    The quotient is realized on the orthogonal complement of the span
    inside ker(boundary); the span is invariant under every u_k, so the
    compressed matrices carry exactly the quotient eigenvalues.
    """
    if abs(inst.chi - 1) <= inst.tol:
        raise ConventionViolationNumeric("chi is numerically 1")
    for k in range(inst.n):
        lam = np.linalg.eigvals(inst.M[k])
        bad = np.abs(inst.chi * inst.b[k] * lam - 1) <= inst.tol
        if np.any(bad):
            raise ConventionViolationNumeric(
                f"chi * b_{k} * eigenvalue is numerically 1 at point {k}")
    raw = raw_convolution_rep(inst)
    space = ChainSpace(inst)
    K = raw.kernel
    fixed = [_fixed_space(inst, k) for k in range(inst.n)]
    fixed_dims = [F.shape[1] for F in fixed]
    total = sum(fixed_dims)
    if total == 0:
        return MiddleConvolutionRep(dim=raw.dim, matrices=list(raw.matrices),
                                    fixed_dims=fixed_dims, raw=raw)
    phi_ambient = np.hstack([space.embed(k, fixed[k]) for k in range(inst.n)
                             if fixed_dims[k]])
    phi = K.conj().T @ phi_ambient
    # the columns must lie in the kernel and stay independent
    residual = np.linalg.norm(phi_ambient - K @ phi)
    if residual > 100 * inst.tol:
        raise QuotientRankMismatch(
            f"middling cycles leave the kernel by {residual:.3e}")
    U_phi, sv, _ = np.linalg.svd(phi, full_matrices=True)
    rank = int(np.sum(sv > inst.tol))
    if rank != total:
        raise QuotientRankMismatch(
            f"middling span has rank {rank}, expected {total}")
    C = U_phi[:, rank:]
    mats = [C.conj().T @ Rk @ C for Rk in raw.matrices]
    return MiddleConvolutionRep(dim=C.shape[1], matrices=mats,
                                fixed_dims=fixed_dims, raw=raw)


def predicted_middle_spectrum(inst: NumericInstance, k: int) -> list[complex]:
    """Per-point middle eigenvalues predicted from the instance data:
    w_k chi b_k lam for eigenvalues lam of M_k with b_k lam != 1, plus
    w_k with multiplicity m_k + defect."""
    lam = np.linalg.eigvals(inst.M[k])
    keep = np.abs(inst.b[k] * lam - 1) > inst.tol
    out = list(inst.w[k] * inst.chi * inst.b[k] * lam[keep])
    mult = int(np.sum(~keep)) + inst.measured_defect()
    out.extend([complex(inst.w[k])] * mult)
    return out


def match_multisets(predicted: Sequence[complex], measured: Sequence[complex]) -> float:
    """Best-matching maximum deviation between two equal-size multisets
    of complex numbers (optimal assignment, not greedy)."""
    if len(predicted) != len(measured):
        raise SizeMismatch(
            f"multiset sizes differ: {len(predicted)} vs {len(measured)}")
    if not predicted:
        return 0.0
    p = np.asarray(predicted, dtype=complex)
    m = np.asarray(measured, dtype=complex)
    cost = np.abs(p[:, None] - m[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


# ---------------------------------------------------------------------------
# Instance generation and end-to-end verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationProblem:
    """A numeric instance together with the symbolic model it realizes."""

    instance: NumericInstance
    vector: MonodromyVector
    beta: Convoluter
    assignment: dict

    def predicted_kappa_spectra(self) -> list[list[complex]]:
        """Per-point eigenvalue multisets of the symbolic transform,
        instantiated through the assignment."""
        result = kappa(self.beta, self.vector, check=True)
        if not isinstance(result, MonodromyVector):
            raise ValueError(f"symbolic transform is not effective: {result!r}")
        spectra = []
        for g in result:
            values = []
            for elem, mult in g.entries:
                values.extend([elem.to_complex(self.assignment)] * mult)
            spectra.append(values)
        return spectra


def _cluster_angles(values: np.ndarray, tol: float) -> list[tuple[float, int]]:
    """Cluster sorted angle values within 10*tol; returns (angle, mult)."""
    out: list[list] = []
    for v in sorted(values):
        if out and v - out[-1][0] <= 10 * tol:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    # wrap-around: 0 and 1 are the same angle
    if len(out) > 1 and (out[0][0] + 1) - out[-1][0] <= 10 * tol:
        out[0][1] += out[-1][1]
        out.pop()
    return [(a, m) for a, m in out]


def generate_instance(seed: int, r: int, n: int,
                      aim: str = "support",
                      v_policy: str = "same",
                      mults: Sequence[Sequence[int]] | None = None,
                      tol: float = DEFAULT_TOL) -> VerificationProblem:
    """Random unit-modulus instance plus the symbolic model it realizes.

    Points 1..n-1 get prescribed eigenvalue angles (one fresh angle per
    class, with multiplicities from ``mults``, default all ones) and are
    realized as random unitary conjugates of diagonal matrices; the last
    matrix is the inverse of the product, its classes measured by
    eigenvalue clustering.  ``aim="support"`` points each b_i at the
    inverse of the point's first class; ``aim="fresh"`` draws free
    twisting angles.  ``v_policy`` is "same" (w = b) or "fresh"
    (w_i = b_i * fresh, product-corrected).
    """
    rng = np.random.default_rng(seed)
    mode = GroupMode.MULTIPLICATIVE
    if mults is None:
        mults = [[1] * r for _ in range(n - 1)]
    if len(mults) != n - 1 or any(sum(p) != r for p in mults):
        raise SizeMismatch("need n-1 multiplicity patterns summing to r")

    assignment: dict[str, float] = {}
    gens: list[list[GroupElement]] = []
    matrices = []
    for i in range(n - 1):
        classes = []
        for j, m in enumerate(mults[i]):
            name = f"e{i}_{j}"
            theta = float(rng.uniform(0.02, 0.98))
            assignment[name] = theta
            classes.append((GroupElement.generator(name, mode), m, theta))
        gens.append([c[0] for c in classes])
        diag = np.concatenate([[np.exp(2j * np.pi * th)] * m for _, m, th in classes])
        if len(diag) == 1:
            matrices.append(np.diag(diag))
        else:
            Q = unitary_group.rvs(len(diag), random_state=rng)
            matrices.append(Q @ np.diag(diag) @ Q.conj().T)

    prod = np.eye(r, dtype=complex)
    for Mi in matrices:
        prod = prod @ Mi
    M_last = prod.conj().T  # unitary inverse, keeps the product relation exact
    matrices.append(M_last)

    angles = np.angle(np.linalg.eigvals(M_last)) / (2 * np.pi) % 1.0
    last_classes = []
    for j, (theta, m) in enumerate(_cluster_angles(angles, tol)):
        name = f"e{n - 1}_{j}"
        assignment[name] = float(theta)
        last_classes.append((GroupElement.generator(name, mode), m))
    gens.append([c[0] for c in last_classes])

    divisors = [EigDivisor(mode, list(zip(gens[i], mults[i])))
                for i in range(n - 1)]
    divisors.append(EigDivisor(mode, last_classes))
    vector = MonodromyVector(divisors)

    if aim == "support":
        h = [g[0].invert() for g in gens]
        b = np.array([np.conj(np.exp(2j * np.pi * assignment[g[0].expr.generators()[0]]))
                      for g in gens])
    elif aim == "fresh":
        h = []
        b = []
        for i in range(n):
            name = f"h{i}"
            theta = float(rng.uniform(0.02, 0.98))
            assignment[name] = theta
            h.append(GroupElement.generator(name, mode))
            b.append(np.exp(2j * np.pi * theta))
        b = np.array(b)
    else:
        raise ValueError(f"unknown aim {aim!r}")

    if v_policy == "same":
        beta = Convoluter(h)
        w = b.copy()
    elif v_policy == "fresh":
        names = [f"s{i}" for i in range(n - 1)]
        beta = Convoluter.with_fresh_v(h, names)
        phis = rng.uniform(0.0, 1.0, size=n - 1)
        for name, phi in zip(names, phis):
            assignment[name] = float(phi)
        w = b * np.exp(2j * np.pi * np.concatenate([phis, [-phis.sum()]]))
    else:
        raise ValueError(f"unknown v policy {v_policy!r}")

    chi = 1 / np.prod(b)
    inst = NumericInstance(M=matrices, b=b, w=w, chi=chi, tol=tol)
    return VerificationProblem(instance=inst, vector=vector, beta=beta,
                               assignment=assignment)


@dataclass
class VerifyReport:
    """Outcome of a full numeric-vs-symbolic comparison."""

    n: int
    r: int
    raw_dim: int
    middle_dim: int
    expected_raw_dim: int
    expected_middle_dim: int
    max_deviation: float
    det_product_error: float
    per_point_deviation: list
    ok: bool

    def to_json(self) -> dict:
        return {
            "points": self.n,
            "rank": self.r,
            "raw_dim": self.raw_dim,
            "expected_raw_dim": self.expected_raw_dim,
            "middle_dim": self.middle_dim,
            "expected_middle_dim": self.expected_middle_dim,
            "max_deviation": self.max_deviation,
            "det_product_error": self.det_product_error,
            "per_point_deviation": self.per_point_deviation,
            "ok": self.ok,
        }


def verify_instance(problem: VerificationProblem | NumericInstance,
                    deviation_tol: float = 1e-8) -> VerifyReport:
    """Compare the measured middle-convolution data with the prediction.

    With a full VerificationProblem the prediction comes from the
    symbolic transform through the assignment; with a bare instance it
    comes from the instance's own eigenvalue data.
    """
    if isinstance(problem, NumericInstance):
        inst = problem
        predicted = [predicted_middle_spectrum(inst, k) for k in range(inst.n)]
    else:
        inst = problem.instance
        predicted = problem.predicted_kappa_spectra()
    middle = middle_convolution_rep(inst)
    n, r = inst.n, inst.r
    expected_middle = r + inst.measured_defect()
    deviations = []
    det_prod = 1.0 + 0j
    for k in range(n):
        measured = list(np.linalg.eigvals(middle.matrices[k]))
        det_prod *= np.prod(measured) if measured else 1.0
        deviations.append(match_multisets(predicted[k], measured))
    max_dev = max(deviations) if deviations else 0.0
    det_err = abs(det_prod - 1)
    ok = (middle.raw.dim == (n - 1) * r
          and middle.dim == expected_middle
          and max_dev <= deviation_tol)
    return VerifyReport(
        n=n, r=r,
        raw_dim=middle.raw.dim,
        middle_dim=middle.dim,
        expected_raw_dim=(n - 1) * r,
        expected_middle_dim=expected_middle,
        max_deviation=max_dev,
        det_product_error=det_err,
        per_point_deviation=deviations,
        ok=ok,
    )
