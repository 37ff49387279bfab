"""Dense Hermitian linear algebra for the quantum side of the lab.

Everything is plain dense ``complex128`` numpy at desk scale (dims up to a
few thousand), with spectral decompositions cached on the wrapper objects so
that sweeps over many Renyi orders reuse a single diagonalization.

Conventions: hbar = k_B = 1; temperatures enter only as inverse temperatures.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, ValidationError

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-12
# Floor a spectrum must clear (pre-clip) before fractional/negative powers
# and logarithms are allowed.
POSITIVITY_FLOOR = 1e-300


def _as_square_array(entries, name: str = "matrix") -> np.ndarray:
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be a square 2-d array, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValidationError(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


def check_hermitian(entries: np.ndarray, name: str = "matrix") -> None:
    """Validate entries == entries^dagger within HERMITICITY_TOL relative to max |entry|.

    Raises ValidationError naming the worst offending entry pair.
    """
    dev = np.abs(entries - entries.conj().T)
    scale = float(np.max(np.abs(entries)))
    worst = float(np.max(dev))
    if worst > HERMITICITY_TOL * scale:
        i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise ValidationError(
            f"{name} is not Hermitian: entry ({i},{j})={entries[i, j]:.6g} vs "
            f"conj entry ({j},{i})={entries[j, i]:.6g}, deviation {worst:.3e} "
            f"exceeds {HERMITICITY_TOL:.0e} * max|entry|"
        )


class HermitianOperator:
    """Dense self-adjoint matrix (observable or Hamiltonian)."""

    __slots__ = ("dim", "entries", "_eig")

    def __init__(self, entries):
        m = _as_square_array(entries, "HermitianOperator")
        check_hermitian(m, "HermitianOperator")
        self.entries = m
        self.dim = m.shape[0]
        self._eig = None

    def eig(self):
        """Cached (eigenvalues ascending, unitary eigenvector matrix)."""
        if self._eig is None:
            vals, vecs = np.linalg.eigh(self.entries)
            self._eig = (vals, vecs)
        return self._eig

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class UnitaryPropagator:
    """Time-development operator exp(-i * duration * H)."""

    __slots__ = ("dim", "entries", "duration")

    def __init__(self, entries, duration: float):
        m = _as_square_array(entries, "UnitaryPropagator")
        dev = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
        if dev > UNITARITY_TOL:
            raise ValidationError(
                f"propagator is not unitary: max |U^dag U - I| = {dev:.3e} > {UNITARITY_TOL:.0e}"
            )
        self.entries = m
        self.dim = m.shape[0]
        self.duration = float(duration)

    def __repr__(self):
        return f"UnitaryPropagator(dim={self.dim}, duration={self.duration})"


class DensityMatrix:
    """Dense density matrix with a cached eigendecomposition.

    Validates Hermiticity, unit trace and spectrum >= -1e-12 at construction.
    Raw (unclipped) eigenvalues are kept so operations that need strict
    positivity can tell roundoff from genuine rank deficiency.
    """

    __slots__ = ("dim", "entries", "_eig")

    def __init__(self, entries):
        m = _as_square_array(entries, "DensityMatrix")
        check_hermitian(m, "DensityMatrix")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"DensityMatrix trace = {tr:.15g}, must be 1 within {TRACE_TOL:.0e}")
        vals, vecs = np.linalg.eigh(m)
        if vals[0] < EIGENVALUE_FLOOR:
            raise ValidationError(
                f"DensityMatrix has negative eigenvalue {vals[0]:.3e} below floor {EIGENVALUE_FLOOR:.0e}"
            )
        self.entries = m
        self.dim = m.shape[0]
        self._eig = (vals, vecs)

    @classmethod
    def from_eigensystem(cls, eigenvalues, eigenvectors) -> "DensityMatrix":
        """Build from a known spectral decomposition, reusing it as the cache."""
        vals = np.asarray(eigenvalues, dtype=np.float64)
        vecs = np.asarray(eigenvectors, dtype=np.complex128)
        order = np.argsort(vals)
        vals = vals[order]
        vecs = vecs[:, order]
        if vals[0] < EIGENVALUE_FLOOR:
            raise ValidationError(
                f"eigenvalue {vals[0]:.3e} below floor {EIGENVALUE_FLOOR:.0e}"
            )
        if abs(vals.sum() - 1.0) > TRACE_TOL:
            raise ValidationError(f"eigenvalues sum to {vals.sum():.15g}, must be 1")
        obj = cls.__new__(cls)
        entries = (vecs * vals) @ vecs.conj().T
        obj.entries = 0.5 * (entries + entries.conj().T)
        obj.dim = vecs.shape[0]
        obj._eig = (vals, vecs)
        return obj

    def eig(self):
        return self._eig

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eig[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eig[1]

    def is_full_rank(self) -> bool:
        """Strict positivity of the raw spectrum (pre-clip)."""
        return bool(self.eigenvalues[0] > POSITIVITY_FLOOR)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def _eig_of(h):
    if isinstance(h, (HermitianOperator, DensityMatrix)):
        return h.eig()
    m = _as_square_array(h)
    check_hermitian(m)
    return np.linalg.eigh(m)


def eig_decompose(h):
    """Eigendecomposition of a Hermitian operator.

    Returns (eigenvalues ascending, eigenvector matrix with eigenvectors as
    columns). Accepts HermitianOperator, DensityMatrix, or a raw ndarray;
    wrapper types cache the result.
    """
    return _eig_of(h)


def matrix_function(h, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar real function to a Hermitian matrix through its spectrum.

    Returns V diag(f(lambda)) V^dagger. Raises DomainError if f is undefined
    (non-finite) at some eigenvalue.
    """
    vals, vecs = _eig_of(h)
    with np.errstate(all="ignore"):
        fv = np.asarray(f(vals), dtype=np.float64)
    if fv.shape != vals.shape:
        raise ValidationError("f must map the eigenvalue vector elementwise")
    bad = ~np.isfinite(fv)
    if np.any(bad):
        ev = vals[bad][0]
        raise DomainError(f"scalar function undefined at eigenvalue {ev:.6g}")
    return (vecs * fv) @ vecs.conj().T


def matrix_power(h, exponent: float) -> np.ndarray:
    """Real matrix power via the spectrum.

    Non-integer or negative exponents require a strictly positive spectrum.
    """
    p = float(exponent)
    if p != round(p) or p < 0:
        vals, _ = _eig_of(h)
        if vals[0] <= POSITIVITY_FLOOR:
            raise DomainError(
                f"matrix power {p} needs a strictly positive spectrum; "
                f"smallest eigenvalue is {vals[0]:.3e}"
            )
    return matrix_function(h, lambda x: np.power(x, p))


def matrix_exp(h) -> np.ndarray:
    return matrix_function(h, np.exp)


def matrix_log(h) -> np.ndarray:
    vals, _ = _eig_of(h)
    if vals[0] <= POSITIVITY_FLOOR:
        raise DomainError(
            f"matrix log needs a strictly positive spectrum; smallest eigenvalue is {vals[0]:.3e}"
        )
    return matrix_function(h, np.log)


def kron(a, b) -> np.ndarray:
    """Kronecker product; unwraps the operator types."""
    am = a.entries if isinstance(a, (HermitianOperator, DensityMatrix, UnitaryPropagator)) else np.asarray(a)
    bm = b.entries if isinstance(b, (HermitianOperator, DensityMatrix, UnitaryPropagator)) else np.asarray(b)
    return np.kron(am, bm)


def gibbs_state(h, beta: float):
    """Thermal state exp(-beta H)/Z and its log partition function.

    Returns (DensityMatrix, log Z) with log Z = ln Tr exp(-beta H) computed
    with a max-shift so large spectra cannot overflow.
    """
    if not np.isfinite(beta) or beta <= 0:
        raise ConfigError(f"inverse temperature must be finite and positive, got {beta}")
    vals, vecs = _eig_of(h)
    shifted = -beta * (vals - vals[0])
    w = np.exp(shifted)
    total = float(w.sum())
    log_partition = float(np.log(total) - beta * vals[0])
    p = w / total
    # eigh orders energies ascending, so probabilities come out descending
    rho = DensityMatrix.from_eigensystem(p[::-1], vecs[:, ::-1])
    return rho, log_partition


def partial_trace(entries, dims, keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite operator on dims = (d_a, d_b).

    keep=0 returns the d_a x d_a reduction, keep=1 the d_b x d_b one.
    """
    da, db = dims
    m = np.asarray(entries, dtype=np.complex128)
    if m.shape != (da * db, da * db):
        raise ValidationError(f"operator shape {m.shape} does not match dims {dims}")
    t = m.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValidationError("keep must be 0 or 1")


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianOperator:
    """GUE-style random Hermitian matrix, for model catalogs and tests."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * 0.5 * (a + a.conj().T))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary from the QR decomposition of a complex Gaussian."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
