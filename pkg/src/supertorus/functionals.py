"""Energy functionals over the discrete torus.

All integrands are assembled from frame evaluations, so every functional
accepts frames carrying an ``eps`` variation slot and returns dual-valued
results; that is the whole first-variation story.

Pairing conventions (fixed once, certified by the suites):

* the fiber pairing on twisted spinors is
  ``(z, w) = sum_a (z_0^a w_1^a - z_1^a w_0^a)`` -- the symplectic structure
  constant on the dual spinor frame with upper ``eps^{12} = +1``, target
  legs contracted with the flat metric.  It is symmetric on odd sections and
  antisymmetric on commuting ones, which is why the Dirac term survives
  exactly for anticommuting coefficients;
* the symplectic-target variant replaces the flat target contraction by the
  standard area form on a two-dimensional target;
* the gravitino self-pairing contracts the frame leg with the flat metric
  and the spinor legs with the spinor area form, the unique combination
  that is even and symmetric for odd gravitinos.

The gravitino enters the full action through its spin-3/2 part only; the
spin-1/2 shift direction is therefore a gauge direction of every term here,
which is the super-Weyl story of the :mod:`symmetry` module.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dataclass_fields

import numpy as np

from .clifford import GAMMAS
from .fields import (
    GravitinoField,
    MapField,
    ParityMismatch,
    TwistedSpinorField,
    gravitino_frame_values,
    quantize_frame_values,
    spinor_omega,
    theta_frame_values,
)
from .geometry import FrameField, dirac_apply, sum_fields
from .grassmann import DualScalar, GrassmannElement
from .grids import GridScalar, ShapeMismatch

# gamma^j gamma^i products, indexed [j][i][row][col]
GAMMA_PRODUCTS = tuple(tuple(
    tuple(tuple(sum(gj[r][m] * gi[m][c] for m in range(2)) for c in range(2))
          for r in range(2))
    for gi in GAMMAS) for gj in GAMMAS)

TARGET_AREA_FORM = ((0, 1), (-1, 0))


@dataclass
class ActionBreakdown:
    """Per-term values of a functional; entries are even ring scalars."""

    harmonic: object
    dirac: object
    quartic_coupling: object
    mixed_coupling: object
    f_squared: object
    scal_term: object

    def __post_init__(self):
        for f in dataclass_fields(self):
            entry = getattr(self, f.name)
            value = entry.value if isinstance(entry, DualScalar) else entry
            if any(m.bit_count() & 1 for m in value.coeffs):
                raise ParityMismatch(f"breakdown entry {f.name} is not even")

    @property
    def total(self):
        out = self.harmonic
        for name in ("dirac", "quartic_coupling", "mixed_coupling",
                     "f_squared", "scal_term"):
            out = out + getattr(self, name)
        return out

    def to_json_dict(self) -> dict:
        """``{term: {monomial key: coefficient}}`` with monomial keys given
        as comma-joined sorted generator indices ("" for the body)."""
        def encode(entry):
            element = entry.value if isinstance(entry, DualScalar) else entry
            out = {}
            for mask in sorted(element.coeffs):
                key = ",".join(str(i) for i in range(mask.bit_length())
                               if mask >> i & 1)
                out[key] = float(element.coeffs[mask])
            return out

        data = {f.name: encode(getattr(self, f.name)) for f in dataclass_fields(self)}
        data["total"] = encode(self.total)
        return data


def map_frame_differential(phi: MapField, e: FrameField):
    """``dphi(e_k)^a`` as a nested list [k][a]."""
    dphi = [[phi.comps[a].partial(mu) for a in range(phi.dim)] for mu in range(2)]
    return [[sum_fields(e.comps[k][mu] * dphi[mu][a] for mu in range(2))
             for a in range(phi.dim)] for k in range(2)]


def pairing_E_density(z, w) -> GridScalar:
    """Graded fiber pairing of two twisted-spinor component sets [k][a]."""
    dim = len(z[0])
    if len(w[0]) != dim:
        raise ShapeMismatch("target dimensions differ in the fiber pairing")
    return sum_fields(z[0][a] * w[1][a] - z[1][a] * w[0][a] for a in range(dim))


def pairing_E(z: TwistedSpinorField, w: TwistedSpinorField) -> GridScalar:
    return pairing_E_density(z.comps, w.comps)


def pairing_E_symplectic_density(z, w) -> GridScalar:
    """Fiber pairing with the target area form instead of the target metric."""
    if len(z[0]) != 2 or len(w[0]) != 2:
        raise ShapeMismatch("symplectic targets are two-dimensional")
    om = TARGET_AREA_FORM

    def target_pair(u, v):
        return sum_fields(u[a].scale(om[a][b]) * v[b]
                          for a in range(2) for b in range(2) if om[a][b])

    return (target_pair(z[0], w[1]) - target_pair(z[1], w[0]))


def harmonic_density(phi: MapField, e: FrameField) -> GridScalar:
    vals = map_frame_differential(phi, e)
    return sum_fields(vals[k][a] * vals[k][a]
                      for k in range(2) for a in range(phi.dim))


def harmonic_energy(phi: MapField, e: FrameField, gens: int = 8):
    return _integrate(harmonic_density(phi, e), e, gens)


def dirac_density(psi: TwistedSpinorField, e: FrameField, A=None) -> GridScalar:
    return pairing_E_density(psi.comps, dirac_apply(psi.comps, e, A))


def dirac_action(psi: TwistedSpinorField, e: FrameField, A=None, gens: int = 8):
    """Integrated graded Dirac pairing; independent of the torsion term."""
    return _integrate(dirac_density(psi, e, A), e, gens)


def gravitino_q_pairing_density(chi: GravitinoField, e: FrameField) -> GridScalar:
    """``sum_i omega(chi(e_i), (q chi)(e_i))``, the quartic-term spinor factor."""
    vals = gravitino_frame_values(chi, e)
    q = quantize_frame_values(vals)
    half = theta_frame_values(q)
    return sum_fields(
        spinor_omega(vals[i], [vals[i][0] - half[i][0], vals[i][1] - half[i][1]])
        for i in range(2))


def quartic_density(chi: GravitinoField, psi: TwistedSpinorField,
                    e: FrameField) -> GridScalar:
    return gravitino_q_pairing_density(chi, e) * pairing_E_density(psi.comps, psi.comps)


def coupling_quartic(chi: GravitinoField, psi: TwistedSpinorField,
                     e: FrameField, gens: int = 8):
    """Quartic conformal invariant in its index form
    ``sum_ij omega(chi_i, gamma^j gamma^i chi_j) (psi, psi)``; equals twice
    the quartic term of the full action."""
    vals = gravitino_frame_values(chi, e)
    acc = None
    for i in range(2):
        for j in range(2):
            mat = GAMMA_PRODUCTS[j][i]
            rotated = [
                sum_fields(vals[j][b].scale(mat[r][b]) for b in range(2) if mat[r][b])
                for r in range(2)]
            term = spinor_omega(vals[i], rotated)
            acc = term if acc is None else acc + term
    return _integrate(acc * pairing_E_density(psi.comps, psi.comps), e, gens)


def mixed_density(chi: GravitinoField, phi: MapField, psi: TwistedSpinorField,
                  e: FrameField) -> GridScalar:
    """``((q chi)(grad phi)~, psi)`` without the overall factor four."""
    vals = gravitino_frame_values(chi, e)
    q = quantize_frame_values(vals)
    half = theta_frame_values(q)
    qvals = [[vals[i][a] - half[i][a] for a in range(2)] for i in range(2)]
    dphi = map_frame_differential(phi, e)
    dim = phi.dim
    tilded = [[None] * dim for _ in range(2)]
    for a in range(dim):
        x0 = sum_fields(qvals[k][0] * dphi[k][a] for k in range(2))
        x1 = sum_fields(qvals[k][1] * dphi[k][a] for k in range(2))
        tilded[0][a] = -1.0 * x1
        tilded[1][a] = x0
    return pairing_E_density(tilded, psi.comps)


def coupling_mixed(chi: GravitinoField, phi: MapField, psi: TwistedSpinorField,
                   e: FrameField, gens: int = 8):
    return _integrate(mixed_density(chi, phi, psi, e), e, gens)


def coupling_ruled_out(chi: GravitinoField, psi: TwistedSpinorField,
                       e: FrameField, gens: int = 8):
    """Crossed quadratic gravitino-spinor invariant.

    Conformally invariant but not super-Weyl invariant; kept as the witness
    that the gravitino shift symmetry rejects it.
    """
    vals = gravitino_frame_values(chi, e)
    dim = psi.dim
    acc = None
    for a in range(dim):
        spinor_a = [psi.comps[0][a], psi.comps[1][a]]
        for i in range(2):
            for j in range(2):
                mat = GAMMA_PRODUCTS[j][i]
                rotated = [
                    sum_fields(spinor_a[b].scale(mat[r][b])
                               for b in range(2) if mat[r][b])
                    for r in range(2)]
                term = spinor_omega(vals[i], rotated) * spinor_omega(spinor_a, vals[j])
                acc = term if acc is None else acc + term
    return _integrate(acc, e, gens)


def super_action(phi: MapField, psi: TwistedSpinorField, chi: GravitinoField,
                 e: FrameField, A=None, gens: int = 8) -> ActionBreakdown:
    """Full action: harmonic + Dirac + gravitino couplings.

    The mixed entry carries its factor of four, so the breakdown sums
    exactly to the total.  The curvature-square and scalar entries belong to
    the torsion functionals and stay zero here.
    """
    zero = _zero_like(e, gens)
    return ActionBreakdown(
        harmonic=_integrate(harmonic_density(phi, e), e, gens),
        dirac=_integrate(dirac_density(psi, e, A), e, gens),
        quartic_coupling=_integrate(quartic_density(chi, psi, e), e, gens),
        mixed_coupling=_integrate(mixed_density(chi, phi, psi, e).scale(4.0), e, gens),
        f_squared=zero,
        scal_term=zero,
    )


def dym_dhym_action(phi: MapField, psi: TwistedSpinorField, e: FrameField,
                    A=None, gens: int = 8) -> ActionBreakdown:
    """Torsion functionals: Dirac term with torsion plus curvature square.

    The scalar-curvature entry is identically zero on the flat torus, where
    it would only contribute a topological constant.
    """
    from .geometry import curvature_of_torsion, torsion_zero

    A = A if A is not None else torsion_zero(e.grid)
    f12 = curvature_of_torsion(A)
    fsq_density = f12 * f12 * e.density.inv() * e.density.inv()
    zero = _zero_like(e, gens)
    return ActionBreakdown(
        harmonic=_integrate(harmonic_density(phi, e), e, gens),
        dirac=_integrate(dirac_density(psi, e, A), e, gens),
        quartic_coupling=zero,
        mixed_coupling=zero,
        f_squared=_integrate(fsq_density, e, gens),
        scal_term=zero,
    )


def symplectic_target_dirac_density(psi: TwistedSpinorField, e: FrameField,
                                    A=None) -> GridScalar:
    if psi.parity != 0:
        raise ParityMismatch("the symplectic-target mode expects commuting data")
    return pairing_E_symplectic_density(psi.comps, dirac_apply(psi.comps, e, A))


def symplectic_target_dirac_action(psi: TwistedSpinorField, e: FrameField,
                                   A=None, gens: int = 8) -> float:
    value = _integrate(symplectic_target_dirac_density(psi, e, A), e, gens)
    return float(value.coeffs.get(0, 0.0))


def _integrate(density: GridScalar, e: FrameField, gens: int):
    return (density * e.density).integral(gens)


def _zero_like(e: FrameField, gens: int):
    zero = GrassmannElement.zero(gens)
    if _frame_is_dual(e):
        return DualScalar(zero)
    return zero


def _frame_is_dual(e: FrameField) -> bool:
    return any(c.var for row in e.comps for c in row)
