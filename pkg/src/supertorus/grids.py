"""Periodic-grid calculus for Grassmann-valued scalar fields.

A :class:`GridScalar` is a scalar field on a two-torus whose value at every
grid point lies in the exterior algebra of :mod:`grassmann`, stored as one
real array per generator monomial, plus an optional second bank of arrays
carrying the coefficient of an even deformation parameter ``eps`` with
``eps**2 = 0``.  All field algebra (products with graded signs, nilpotent
inversion, the Leibniz rule in the ``eps`` slot) and all derivative engines
act monomial-wise on these arrays.

Derivative engines
------------------
``spectral``
    Fourier differentiation; exact for trigonometric polynomials below the
    Nyquist frequency.  Spinor-type fields may be antiperiodic along either
    cycle, implemented by half-integer frequencies through a unit twist.
``fd2`` / ``fd4``
    Central differences of order 2/4; the discrete divergence theorem is
    exact by telescoping, the product rule only up to O(h^2)/O(h^4).

Aliasing guard
--------------
Pointwise products of sampled fields fold spectral content beyond the
Nyquist frequency back into the band.  Every field carries per-direction
spectral mass profiles (sums of absolute Fourier coefficients); a product is
legal when the convolution of the factors' profiles puts only a negligible
fraction of its mass outside the band, and raises
:class:`AliasingDetected` otherwise.  Profiles of transcendental results
(inversion, exponentials) are measured from the data; profiles of products
fold the out-of-band mass back in, so the bound stays valid along chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

from .grassmann import DualScalar, GrassmannElement, NoBody, mul_sign, parity_of


class ShapeMismatch(ValueError):
    """Fields over different grids (or phases) were combined."""


class AliasingDetected(ArithmeticError):
    """A product chain pushed significant spectral mass past Nyquist."""


_MODES = ("spectral", "fd2", "fd4")


@dataclass(frozen=True)
class TorusGrid:
    """Uniform periodic grid on the flat torus.

    ``spin_structure`` gives the boundary twist (0 periodic, 1 antiperiodic)
    used for spinor-valued fields along each cycle; plain scalars are always
    periodic.
    """

    shape: tuple[int, int]
    periods: tuple[float, float] = (1.0, 1.0)
    mode: str = "spectral"
    spin_structure: tuple[int, int] = (0, 0)
    alias_tol: float = 3e-9

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown derivative mode {self.mode!r}")
        for n in self.shape:
            if self.mode == "spectral" and (n < 8 or n % 2):
                raise ValueError(
                    f"spectral mode needs even grid sizes >= 8, got {self.shape}")
            if n < 4:
                raise ValueError(f"grid too small: {self.shape}")
        if any(p <= 0 for p in self.periods):
            raise ValueError(f"periods must be positive, got {self.periods}")

    @property
    def spacings(self) -> tuple[float, float]:
        return (self.periods[0] / self.shape[0], self.periods[1] / self.shape[1])

    @property
    def cell_volume(self) -> float:
        h = self.spacings
        return h[0] * h[1]

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        axes = [np.arange(n) * (p / n) for n, p in zip(self.shape, self.periods)]
        return tuple(np.meshgrid(*axes, indexing="ij"))


# -- low level engines ------------------------------------------------------


def _twist(n: int) -> np.ndarray:
    return np.exp(-1j * np.pi * np.arange(n) / n)


def _spectral_partial(arr: np.ndarray, axis: int, period: float, phase: int) -> np.ndarray:
    n = arr.shape[axis]
    k = np.fft.fftfreq(n, d=1.0 / n)
    shape = [1, 1]
    shape[axis] = n
    if phase:
        t = _twist(n).reshape(shape)
        work = arr * t
        k_eff = k + 0.5
    else:
        t = None
        work = arr
        k_eff = k.copy()
        k_eff[n // 2] = 0.0  # unpaired Nyquist mode carries no derivative
    spec = np.fft.fft(work, axis=axis)
    spec *= (2j * np.pi / period) * k_eff.reshape(shape)
    out = np.fft.ifft(spec, axis=axis)
    if phase:
        out = out * np.conj(t)
    return np.ascontiguousarray(out.real)


def _rolled(arr: np.ndarray, shift: int, axis: int, phase: int) -> np.ndarray:
    """Sample ``f[i + shift]`` with (anti)periodic wrap-around."""
    out = np.roll(arr, -shift, axis=axis)
    if phase and shift:
        out = out.copy()
        n = arr.shape[axis]
        sel = [slice(None), slice(None)]
        sel[axis] = slice(n - shift, n) if shift > 0 else slice(0, -shift)
        out[tuple(sel)] *= -1.0
    return out


def _fd_partial(arr, axis, period, phase, order) -> np.ndarray:
    h = period / arr.shape[axis]
    if order == 2:
        return (_rolled(arr, 1, axis, phase) - _rolled(arr, -1, axis, phase)) / (2 * h)
    return (-_rolled(arr, 2, axis, phase) + 8 * _rolled(arr, 1, axis, phase)
            - 8 * _rolled(arr, -1, axis, phase) + _rolled(arr, -2, axis, phase)) / (12 * h)


def _measure_profiles(arrays, shape, phases=(0, 0)) -> tuple[np.ndarray, np.ndarray]:
    p0 = np.zeros(shape[0])
    p1 = np.zeros(shape[1])
    norm = 1.0 / (shape[0] * shape[1])
    twist0 = _twist(shape[0]).reshape(-1, 1) if phases[0] else 1.0
    twist1 = _twist(shape[1]).reshape(1, -1) if phases[1] else 1.0
    for arr in arrays:
        mag = np.abs(np.fft.fft2(arr * twist0 * twist1)) * norm
        p0 += np.fft.fftshift(mag.sum(axis=1))
        p1 += np.fft.fftshift(mag.sum(axis=0))
    # drop the round-off floor of the transform; it is far below anything
    # the aliasing guard needs to see and would otherwise smear along
    # product chains
    for p in (p0, p1):
        p[p < 1e-13 * max(p.sum(), 1e-300)] = 0.0
    return p0, p1


def _profile_conv(pa: np.ndarray, pb: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Fold the convolution of two mass profiles back into the band.

    Returns (folded profile, out-of-band mass, total mass).  Profile index i
    represents integer frequency ``i - n//2``.
    """
    n = pa.shape[0]
    conv = np.convolve(pa, pb)
    ks = np.arange(conv.shape[0]) - n
    # the unpaired Nyquist bin itself is representable; only strictly
    # beyond-Nyquist content folds onto foreign frequencies
    in_band = np.abs(ks) <= n // 2
    total = float(conv.sum())
    wrapped = float(conv[~in_band].sum())
    folded = np.zeros(n)
    idx = ((ks + n // 2) % n)
    np.add.at(folded, idx, conv)
    return folded, wrapped, total


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _clean_bank(bank, shape) -> dict[int, np.ndarray]:
    out = {}
    for mask, arr in bank.items():
        arr = np.asarray(arr, dtype=np.float64)
        if arr.shape != shape:
            raise ShapeMismatch(f"array shape {arr.shape} != grid {shape}")
        if np.any(arr):
            out[mask] = _freeze(arr)
    return out


class GridScalar:
    """Grassmann-valued scalar field with an exact first-variation slot."""

    __slots__ = ("grid", "phases", "coeffs", "var", "profiles")

    def __init__(self, grid: TorusGrid, coeffs=None, var=None,
                 phases: tuple[int, int] = (0, 0), profiles=None):
        self.grid = grid
        self.phases = phases
        self.coeffs = _clean_bank(coeffs or {}, grid.shape)
        self.var = _clean_bank(var or {}, grid.shape)
        if not self.coeffs and not self.var:
            profiles = (np.zeros(grid.shape[0]), np.zeros(grid.shape[1]))
        elif profiles is None:
            profiles = _measure_profiles(
                list(self.coeffs.values()) + list(self.var.values()),
                grid.shape, phases)
        self.profiles = (np.asarray(profiles[0]), np.asarray(profiles[1]))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, grid: TorusGrid, phases=(0, 0)) -> "GridScalar":
        return cls(grid, {}, phases=phases,
                   profiles=(np.zeros(grid.shape[0]), np.zeros(grid.shape[1])))

    @classmethod
    def constant(cls, grid: TorusGrid, value) -> "GridScalar":
        """Spatially constant field from a number / element / dual scalar."""
        ones = np.ones(grid.shape)
        if isinstance(value, Number):
            value = DualScalar(GrassmannElement(0, {0: float(value)}))
        elif isinstance(value, GrassmannElement):
            value = DualScalar(value)
        coeffs = {m: float(c) * ones for m, c in value.value.coeffs.items()}
        var = {m: float(c) * ones for m, c in value.variation.coeffs.items()}
        return cls(grid, coeffs, var=var)

    @classmethod
    def dual(cls, value: "GridScalar", variation: "GridScalar") -> "GridScalar":
        """Seed ``value + eps * variation`` from two variation-free fields."""
        if value.var or variation.var:
            raise ValueError("dual seed expects variation-free inputs")
        value._check_compatible(variation)
        return cls(value.grid, value.coeffs, var=variation.coeffs,
                   phases=value.phases,
                   profiles=(value.profiles[0] + variation.profiles[0],
                             value.profiles[1] + variation.profiles[1]))

    # -- bookkeeping ---------------------------------------------------------

    def _check_compatible(self, other: "GridScalar"):
        if self.grid != other.grid:
            raise ShapeMismatch("fields live on different grids")
        if self.phases != other.phases:
            raise ShapeMismatch(
                f"boundary phases differ: {self.phases} vs {other.phases}")

    def is_zero(self) -> bool:
        return not self.coeffs and not self.var

    @property
    def parity(self) -> int | None:
        masks = set(self.coeffs) | set(self.var)
        if not masks:
            return 0
        parities = {parity_of(m) for m in masks}
        return parities.pop() if len(parities) == 1 else None

    def max_abs(self) -> float:
        banks = list(self.coeffs.values()) + list(self.var.values())
        return max((float(np.max(np.abs(a))) for a in banks), default=0.0)

    def remeasured(self) -> "GridScalar":
        """Copy with spectral mass profiles re-measured from the data.

        Useful after cancellations, where the algebraic profile bound can
        grossly overestimate the surviving content.
        """
        return GridScalar(self.grid, self.coeffs, var=self.var,
                          phases=self.phases)

    def value_part(self) -> "GridScalar":
        return GridScalar(self.grid, self.coeffs, phases=self.phases,
                          profiles=self.profiles)

    def variation_part(self) -> "GridScalar":
        return GridScalar(self.grid, self.var, phases=self.phases,
                          profiles=self.profiles)

    # -- linear structure ------------------------------------------------------

    @staticmethod
    def _bank_add(a, b, sign=1.0):
        out = dict(a)
        for m, arr in b.items():
            cur = out.get(m)
            out[m] = sign * arr if cur is None else cur + sign * arr
        return out

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_compatible(other)
        return GridScalar(
            self.grid,
            self._bank_add(self.coeffs, other.coeffs),
            var=self._bank_add(self.var, other.var),
            phases=self.phases,
            profiles=(self.profiles[0] + other.profiles[0],
                      self.profiles[1] + other.profiles[1]))

    __radd__ = __add__

    def __neg__(self):
        return GridScalar(self.grid,
                          {m: -a for m, a in self.coeffs.items()},
                          var={m: -a for m, a in self.var.items()},
                          phases=self.phases, profiles=self.profiles)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: float) -> "GridScalar":
        c = float(c)
        if c == 0.0:
            return GridScalar.zeros(self.grid, self.phases)
        return GridScalar(self.grid,
                          {m: c * a for m, a in self.coeffs.items()},
                          var={m: c * a for m, a in self.var.items()},
                          phases=self.phases,
                          profiles=(abs(c) * self.profiles[0],
                                    abs(c) * self.profiles[1]))

    def _lift(self, other):
        if isinstance(other, GridScalar):
            return other
        if isinstance(other, (Number, Fraction, GrassmannElement, DualScalar)):
            return GridScalar.constant(self.grid, other)
        return NotImplemented

    # -- graded product ----------------------------------------------------------

    @staticmethod
    def _bank_mul(da, db):
        out: dict[int, np.ndarray] = {}
        for ma, aa in da.items():
            for mb, ab in db.items():
                if ma & mb:
                    continue
                mask = ma | mb
                term = aa * ab
                if mul_sign(ma, mb) < 0:
                    term = -term
                cur = out.get(mask)
                out[mask] = term if cur is None else cur + term
        return out

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_grid_for_mul(other)
        profiles = []
        for axis in range(2):
            folded, wrapped, total = _profile_conv(
                self.profiles[axis], other.profiles[axis])
            # the absolute deadband ignores wrap in products whose entire
            # spectral mass is already at round-off level
            if (self.grid.mode == "spectral" and wrapped > 1e-14
                    and wrapped > self.grid.alias_tol * total):
                raise AliasingDetected(
                    f"product pushes {wrapped:.3e} of {total:.3e} spectral mass "
                    f"past Nyquist along axis {axis}")
            profiles.append(folded)
        value = self._bank_mul(self.coeffs, other.coeffs)
        var = self._bank_add(self._bank_mul(self.coeffs, other.var),
                             self._bank_mul(self.var, other.coeffs))
        phases = ((self.phases[0] + other.phases[0]) % 2,
                  (self.phases[1] + other.phases[1]) % 2)
        return GridScalar(self.grid, value, var=var, phases=phases,
                          profiles=tuple(profiles))

    def _check_same_grid_for_mul(self, other):
        if self.grid != other.grid:
            raise ShapeMismatch("fields live on different grids")

    def __rmul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __truediv__(self, other):
        if isinstance(other, (Number, Fraction)):
            return self.scale(1.0 / float(other))
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    # -- nonlinear maps ----------------------------------------------------------

    def inv(self) -> "GridScalar":
        """Pointwise inverse; needs an everywhere nonvanishing body."""
        if self.phases != (0, 0):
            raise ValueError("cannot invert a twisted field")
        body = self.coeffs.get(0)
        if body is None or np.min(np.abs(body)) < 1e-200:
            raise NoBody("field body vanishes somewhere; not invertible")
        binv = GridScalar(self.grid, {0: 1.0 / body})
        rest = (self * binv - 1.0).remeasured()
        acc = binv
        term = binv
        scale = max(binv.max_abs(), 1.0)
        for _ in range(24):
            term = -(term * rest)
            if term.max_abs() <= 1e-30 * scale:
                break
            acc = acc + term
        return acc

    def exp(self) -> "GridScalar":
        """Exponential of a body-only field (the Weyl factors)."""
        extra = [m for m in self.coeffs if m != 0]
        if extra:
            raise ValueError("exp is only supported for body-only fields")
        base = np.exp(self.coeffs.get(0, np.zeros(self.grid.shape)))
        out_var = {m: base * arr for m, arr in self.var.items()}
        return GridScalar(self.grid, {0: base}, var=out_var, phases=self.phases)

    # -- calculus ------------------------------------------------------------------

    def partial(self, axis: int) -> "GridScalar":
        """Partial derivative along a coordinate axis."""
        grid = self.grid
        period = grid.periods[axis]
        phase = self.phases[axis]
        if grid.mode == "spectral":
            engine = lambda arr: _spectral_partial(arr, axis, period, phase)
        else:
            order = 2 if grid.mode == "fd2" else 4
            engine = lambda arr: _fd_partial(arr, axis, period, phase, order)
        value = {m: engine(a) for m, a in self.coeffs.items()}
        var = {m: engine(a) for m, a in self.var.items()}
        n = grid.shape[axis]
        ks = np.abs(np.arange(n) - n // 2 + (0.5 if phase else 0.0))
        dprof = list(self.profiles)
        dprof[axis] = self.profiles[axis] * (2 * np.pi / period) * ks
        return GridScalar(grid, value, var=var, phases=self.phases,
                          profiles=tuple(dprof))

    def integral(self, gens: int = 8):
        """Plain quadrature sum times the cell volume.

        Returns a :class:`DualScalar` when the field carries a variation
        slot and a :class:`GrassmannElement` otherwise.  numpy's pairwise
        summation keeps the reduction deterministic for a fixed shape.
        """
        vol = self.grid.cell_volume
        value = GrassmannElement(
            gens, {m: float(a.sum()) * vol for m, a in self.coeffs.items()})
        if not self.var:
            return value
        var = GrassmannElement(
            gens, {m: float(a.sum()) * vol for m, a in self.var.items()})
        return DualScalar(value, var)

    # -- misc --------------------------------------------------------------------

    def restrict_even(self, where: str = "") -> "GridScalar":
        if self.parity != 0:
            raise ValueError(f"expected an even field {where}")
        return self

    def __repr__(self):
        return (f"GridScalar(shape={self.grid.shape}, monomials="
                f"{sorted(self.coeffs)}, var={sorted(self.var)}, "
                f"phases={self.phases})")
