from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from app.core.logging import get_logger
from app.core.rationals import to_fraction
from app.core.settings import settings
from app.lattice import Lattice
from app.qalg import Quat
from .exceptions import FrameMismatchError, InexactFrameError, InvalidUpperHalfPlanePointError
from .schemas import ArchFrame, ExactForms, Region

# Configure logging
logger = get_logger(__name__)


def hamilton_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternions stored as (..., 4) arrays (1, I, J, K)."""
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def _conj(q: np.ndarray) -> np.ndarray:
    return q * np.array([1.0, -1.0, -1.0, -1.0])


class ArchGeomService:
    """Archimedean coordinates [a,b,c]+d, the forms P, u, X and the regions Ω, Ψ."""

    @staticmethod
    def identity_frame(kind: str = "split") -> ArchFrame:
        if kind == "split":
            return ArchFrame(kind="split", matrix=((1.0, 0.0), (0.0, 1.0)),
                             exact_z=(Fraction(0), Fraction(1)))
        return ArchFrame(kind="definite", rotation=(1.0, 0.0, 0.0, 0.0))

    @staticmethod
    def sigma_z(z: complex, exact: Optional[Tuple] = None) -> ArchFrame:
        """
        σ_z = [[y^{1/2}, x y^{-1/2}], [0, y^{-1/2}]], taking i to z.

        Args:
            z: point of the upper half plane
            exact: optional rational (x, y) equal to z, kept for exact forms

        Returns:
            ArchFrame: split frame
        """
        z = complex(z)
        if not z.imag > 0:
            raise InvalidUpperHalfPlanePointError(z)
        x, y = z.real, z.imag
        if exact is None:
            fx, fy = to_fraction(x), to_fraction(y)
        else:
            fx, fy = to_fraction(exact[0]), to_fraction(exact[1])
        sy = np.sqrt(y)
        return ArchFrame(kind="split", matrix=((float(sy), float(x / sy)), (0.0, float(1 / sy))),
                         exact_z=(fx, fy))

    @staticmethod
    def definite_frame(rotation) -> ArchFrame:
        q = np.asarray(rotation, dtype=float)
        q = q / np.linalg.norm(q)
        return ArchFrame(kind="definite", rotation=tuple(float(t) for t in q))

    @staticmethod
    def random_rotation(seed: int) -> ArchFrame:
        """A definite frame from a uniformly random unit quaternion."""
        rng = np.random.default_rng(seed)
        return ArchGeomService.definite_frame(rng.normal(size=4))

    @staticmethod
    def _check_kind(gamma: Quat, frame: ArchFrame) -> None:
        if gamma.algebra.is_definite != (frame.kind == "definite"):
            raise FrameMismatchError(frame.kind, gamma.algebra.label())

    @staticmethod
    def embed_coords(gamma: Quat, frame: ArchFrame, right: Optional[ArchFrame] = None) -> np.ndarray:
        """
        Coordinates (a, b, c, d) of g₁⁻¹ γ g₂ (g₂ = g₁ unless `right` is given).

        split: with M = g₁⁻¹ γ g₂ = [[d+c, b+a], [b−a, d−c]].
        definite: i ↦ √|a| I, j ↦ √|b| J, then (a, b, c, d) are the K, J, I, 1
        coefficients of the rotated Hamilton quaternion.
        """
        ArchGeomService._check_kind(gamma, frame)
        right = right or frame
        w, x, y, z = (float(c) for c in gamma.coords())
        if frame.kind == "split":
            g1 = np.array(frame.matrix)
            g2 = np.array(right.matrix)
            m = np.array([[w + x, y + z], [y - z, w - x]])
            mp = np.linalg.inv(g1) @ m @ g2
            return np.array([
                (mp[0, 1] - mp[1, 0]) / 2,
                (mp[0, 1] + mp[1, 0]) / 2,
                (mp[0, 0] - mp[1, 1]) / 2,
                (mp[0, 0] + mp[1, 1]) / 2,
            ])
        sa = np.sqrt(abs(float(gamma.algebra.a)))
        sb = np.sqrt(abs(float(gamma.algebra.b)))
        h = np.array([w, x * sa, y * sb, z * sa * sb])
        q1 = np.array(frame.rotation)
        q2 = np.array(right.rotation)
        hp = hamilton_mul(hamilton_mul(_conj(q1), h), q2)
        return np.array([hp[3], hp[2], hp[1], hp[0]])

    @staticmethod
    def coordinate_matrix(L: Lattice, frame: ArchFrame, right: Optional[ArchFrame] = None) -> np.ndarray:
        """4×rank matrix C with (a,b,c,d) = C @ (lattice coordinates)."""
        return np.column_stack([ArchGeomService.embed_coords(q, frame, right) for q in L.basis])

    @staticmethod
    def forms(abcd: np.ndarray, kind: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        Vectorized P, u, X, det over (..., 4) coordinate arrays.

        Returns:
            tuple: (P, u, X complex, det) with det = |X|² − u (split) or |X|² + u
        """
        abcd = np.asarray(abcd, dtype=float)
        a, b, c, d = np.moveaxis(abcd, -1, 0)
        u = b * b + c * c
        X = d + 1j * a
        x2 = a * a + d * d
        det = x2 - u if kind == "split" else x2 + u
        return x2 + u, u, X, det

    @staticmethod
    def P(gamma: Quat, frame: ArchFrame) -> float:
        return float(ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), frame.kind)[0])

    @staticmethod
    def u(gamma: Quat, frame: ArchFrame) -> float:
        return float(ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), frame.kind)[1])

    @staticmethod
    def X(gamma: Quat, frame: ArchFrame) -> complex:
        return complex(ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), frame.kind)[2])

    @staticmethod
    def exact_forms(gamma: Quat, frame: ArchFrame) -> ExactForms:
        """
        Exact P, u, |X|², det on rational frames.

        split σ_z at rational z: conjugation only involves x and y rationally.
        definite identity frame: squares of the scaled coordinates are rational.
        """
        ArchGeomService._check_kind(gamma, frame)
        if not frame.is_exact:
            raise InexactFrameError(frame)
        w, x, y, z = gamma.coords()
        if frame.kind == "split":
            px, py = frame.exact_z
            m11, m12, m21, m22 = w + x, y + z, y - z, w - x
            n11 = m11 - px * m21
            n12 = (px * m11 + m12 - px * px * m21 - px * m22) / py
            n21 = py * m21
            n22 = px * m21 + m22
            a2 = ((n12 - n21) / 2) ** 2
            b2 = ((n12 + n21) / 2) ** 2
            c2 = ((n11 - n22) / 2) ** 2
            d2 = ((n11 + n22) / 2) ** 2
            u_val = b2 + c2
            return ExactForms(P=a2 + b2 + c2 + d2, u=u_val, abs_X2=a2 + d2, det=a2 + d2 - u_val)
        alg = gamma.algebra
        u_val = -alg.a * x * x - alg.b * y * y
        abs_x2 = w * w + alg.a * alg.b * z * z
        return ExactForms(P=abs_x2 + u_val, u=u_val, abs_X2=abs_x2, det=abs_x2 + u_val)

    @staticmethod
    def gauge_values(P, u, abs_X2, region: Region):
        """max(√P, √(u/δ)) for Ω and max(√P, √(|X|²/δ)) for Ψ, vectorized."""
        second = u if region.shape == "Omega" else abs_X2
        return np.sqrt(np.maximum(P, np.asarray(second) / region.delta))

    @staticmethod
    def gauge(gamma: Quat, frame: ArchFrame, region: Region) -> float:
        P, u, X, _ = ArchGeomService.forms(ArchGeomService.embed_coords(gamma, frame), frame.kind)
        return float(ArchGeomService.gauge_values(P, u, abs(X) ** 2, region))

    @staticmethod
    def in_region(gamma: Quat, frame: ArchFrame, region: Region, tolerance: Optional[float] = None) -> bool:
        """
        Closed membership γ ∈ Ω(δ,T) or Ψ(δ,T).

        Points within the float tolerance of the boundary are decided exactly
        when the frame is rational.
        """
        tolerance = settings.FLOAT_TOLERANCE if tolerance is None else tolerance
        g = ArchGeomService.gauge(gamma, frame, region)
        if abs(g - region.T) > tolerance * max(1.0, region.T) or not (
                settings.EXACT_FALLBACK and frame.is_exact):
            return g <= region.T
        forms = ArchGeomService.exact_forms(gamma, frame)
        T2 = to_fraction(region.T) ** 2
        delta = to_fraction(region.delta)
        second = forms.u if region.shape == "Omega" else forms.abs_X2
        return forms.P <= T2 and second <= delta * T2
