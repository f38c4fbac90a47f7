"""Current-voltage curves and their characteristic points."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["IVPoint", "IVCurve", "V_INT_DEFAULT"]

V_INT_DEFAULT = 19.3


@dataclass(frozen=True)
class IVPoint:
    """One bias point; ``P = J (V_int + V_diff)`` is negative when generating."""

    V_diff: float
    J: float
    V_int: float = V_INT_DEFAULT
    converged: bool = True
    iterations: int = 0

    @property
    def V_applied(self) -> float:
        return self.V_diff + self.V_int

    @property
    def P(self) -> float:
        return self.J * (self.V_int + self.V_diff)


@dataclass
class IVCurve:
    """Points ordered by ``V_diff`` with characteristic-point annotations.

    Annotations are computed from converged points only.  ``V_oc`` is the
    first sign change of J (linear interpolation), ``J_sc`` the current at
    ``V_diff = -V_int`` (interpolated if needed), and the fill factor is the
    largest generated power over ``|J_sc| (V_oc + V_int)``.
    """

    points: list[IVPoint]
    V_int: float = V_INT_DEFAULT
    label: str = ""
    skipped: list = field(default_factory=list)

    def __post_init__(self):
        self.points = sorted(self.points, key=lambda p: p.V_diff)
        v = [p.V_diff for p in self.points]
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("IV points must have distinct bias values")

    @property
    def V(self) -> np.ndarray:
        return np.array([p.V_diff for p in self.points])

    @property
    def J(self) -> np.ndarray:
        return np.array([p.J for p in self.points])

    @property
    def P(self) -> np.ndarray:
        return np.array([p.P for p in self.points])

    def _good(self):
        pts = [p for p in self.points if p.converged and np.isfinite(p.J)]
        return np.array([p.V_diff for p in pts]), np.array([p.J for p in pts])

    @property
    def J_sc(self) -> float:
        V, J = self._good()
        vs = -self.V_int
        if V.size == 0 or vs < V[0] - 1e-12 or vs > V[-1] + 1e-12:
            return float("nan")
        return float(np.interp(vs, V, J))

    @property
    def V_oc(self) -> float:
        V, J = self._good()
        s = np.sign(J)
        for i in range(J.size - 1):
            if J[i] == 0.0:
                return float(V[i])
            if s[i] < 0 < s[i + 1]:
                return float(V[i] - J[i] * (V[i + 1] - V[i]) / (J[i + 1] - J[i]))
        if J.size and J[-1] == 0.0:
            return float(V[-1])
        return float("nan")

    @property
    def optimal_power(self) -> tuple[float, float]:
        """``(V_opp, P_max)`` with ``P_max = max(-P)`` over the grid points."""
        V, J = self._good()
        if V.size == 0:
            return float("nan"), float("nan")
        gen = -J * (self.V_int + V)
        i = int(np.argmax(gen))
        return float(V[i]), float(gen[i])

    @property
    def fill_factor(self) -> float:
        voc, jsc = self.V_oc, self.J_sc
        _, pmax = self.optimal_power
        if not (np.isfinite(voc) and np.isfinite(jsc)) or jsc == 0:
            return float("nan")
        return float(pmax / (abs(jsc) * (voc + self.V_int)))

    def annotations(self) -> dict:
        vopp, pmax = self.optimal_power
        return {"V_int": self.V_int, "J_sc": self.J_sc, "V_oc": self.V_oc,
                "V_opp": vopp, "P_max": pmax, "fill_factor": self.fill_factor}

    def write_csv(self, path) -> None:
        """Write ``V_diff,V_applied,J,P,converged,iters`` rows."""
        with open(Path(path), "w", newline="\n") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        lines = ["V_diff,V_applied,J,P,converged,iters"]
        for p in self.points:
            lines.append(f"{p.V_diff:.10g},{p.V_applied:.10g},{p.J:.10g},{p.P + 0.0:.10g},"
                         f"{int(p.converged)},{p.iterations}")
        return "\n".join(lines) + "\n"

    def annotation_text(self) -> str:
        return "".join(f"{k} = {v:.10g}\n" for k, v in self.annotations().items())
