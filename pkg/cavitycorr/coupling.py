# time-windowed atom-field couplings
from enum import Enum
from typing import Any, Optional

import numpy as np
from monty.json import MSONable
from scipy.integrate import quad

from . import data
from .exceptions import InvalidSchedule, InvalidTime, InvalidWindow
from .util import dict_decode


class PulseShape(str, Enum):
    CONSTANT = 'constant'
    SINE_SQUARED = 'sine-squared'


class Model(str, Enum):
    DJC = 'djc'
    DD = 'dd'


def _same_time(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


class Pulse(MSONable):
    """Shape of a coupling strength gamma(t) within its window (hbar = 1,
    so strengths are angular frequencies).

    Constant pulses hold gamma = strength over the whole window. Sine-squared
    pulses rise as strength * sin^2 over the first `ramp` fraction of the
    window, hold, and fall symmetrically over the last `ramp` fraction.

    Attributes:
         shape (PulseShape): profile of the pulse
         strength (float): peak coupling, >= 0
         ramp (float): ramp fraction in (0, 0.5], only used by sine-squared pulses
    """

    def __init__(
        self,
        shape: PulseShape = PulseShape.CONSTANT,
        strength: float = 1.0,
        ramp: float = data.DEFAULT_RAMP,
    ):
        self.shape = PulseShape(shape)
        if not np.isfinite(strength) or strength < 0:
            raise InvalidWindow(f"pulse strength must be >= 0, got {strength}")
        if self.shape == PulseShape.SINE_SQUARED and not (0.0 < ramp <= 0.5):
            raise InvalidWindow(f"ramp fraction must lie in (0, 0.5], got {ramp}")
        self.strength = float(strength)
        self.ramp = float(ramp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pulse):
            return False
        same = self.shape == other.shape and self.strength == other.strength
        if self.shape == PulseShape.SINE_SQUARED:
            same = same and self.ramp == other.ramp
        return same

    def profile(self, u: float) -> float:
        """Value of the pulse at fractional position u in [0, 1] of its window"""
        if self.shape == PulseShape.CONSTANT:
            return self.strength
        if u < self.ramp:
            return self.strength * np.sin(0.5 * np.pi * u / self.ramp) ** 2
        if u > 1.0 - self.ramp:
            return self.strength * np.sin(0.5 * np.pi * (1.0 - u) / self.ramp) ** 2
        return self.strength

    def knots(self) -> list[float]:
        """Fractional positions where the profile is not smooth"""
        if self.shape == PulseShape.CONSTANT:
            return []
        return sorted({self.ramp, 1.0 - self.ramp})

    def area_fraction(self) -> float:
        """Integral of the profile over u in [0, 1], in units of strength"""
        if self.shape == PulseShape.CONSTANT:
            return 1.0
        return 1.0 - self.ramp

    def scaled(self, factor: float) -> 'Pulse':
        return Pulse(self.shape, self.strength * factor, self.ramp)

    def as_dict(self) -> dict[str, Any]:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "shape": self.shape.value,
            "strength": self.strength,
            "ramp": self.ramp,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        return cls(
            shape=d.get("shape", 'constant'),
            strength=d.get("strength", 1.0),
            ramp=d.get("ramp", data.DEFAULT_RAMP),
        )


class CouplingWindow(MSONable):
    """A pulse switched on over the half-open interval [t_i, t_i + tau_i)

    Attributes:
         inject_time (float): t_i, when the atom enters the cavity
         duration (float): tau_i > 0, how long it interacts
         pulse (Pulse): the coupling profile while inside
    """

    def __init__(self, inject_time: float = 0.0, duration: float = 1.0, pulse: Pulse = None):
        if not np.isfinite(duration) or duration <= 0:
            raise InvalidWindow(f"window duration must be > 0, got {duration}")
        self.inject_time = float(inject_time)
        self.duration = float(duration)
        self.pulse = pulse if pulse is not None else Pulse()

    @property
    def end(self) -> float:
        return self.inject_time + self.duration

    def contains(self, t: float) -> bool:
        return self.inject_time <= t < self.end

    def _inside(self, t: float) -> float:
        """Pulse value ignoring the window edges, for quadrature"""
        return self.pulse.profile((t - self.inject_time) / self.duration)

    def strength_at(self, t: float) -> float:
        if not self.contains(t):
            return 0.0
        return self._inside(t)

    def breakpoints(self) -> list[float]:
        """Times where gamma(t) is not smooth, including both edges"""
        inner = [self.inject_time + u * self.duration for u in self.pulse.knots()]
        return [self.inject_time] + inner + [self.end]

    def scaled(self, factor: float) -> 'CouplingWindow':
        return CouplingWindow(self.inject_time, self.duration, self.pulse.scaled(factor))

    def as_dict(self) -> dict[str, Any]:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "inject_time": self.inject_time,
            "duration": self.duration,
            "pulse": self.pulse.as_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        d = dict_decode(d)
        pulse = d.get("pulse", None)
        if isinstance(pulse, dict):
            pulse = Pulse.from_dict(pulse)
        return cls(d.get("inject_time", 0.0), d.get("duration", 1.0), pulse)


class CouplingSchedule(MSONable):
    """The pair of coupling windows for atoms 1 and 2.

    In the sequential (DJC) model atom 2 enters as atom 1 leaves,
    t2 = t1 + tau1. In the simultaneous (DD) model both windows coincide,
    and an optional fixed ratio r ties the couplings as gamma1(t) = r gamma2(t);
    window1 must then carry window2's pulse scaled by r.

    Attributes:
         window1, window2 (CouplingWindow): windows for atoms 1 and 2
         model (Model): DJC or DD
         ratio (float): r > 0, or None
    """

    def __init__(
        self,
        window1: CouplingWindow,
        window2: CouplingWindow,
        model: Model = Model.DJC,
        ratio: Optional[float] = None,
    ):
        self.window1 = window1
        self.window2 = window2
        self.model = Model(model)
        self.ratio = None if ratio is None else float(ratio)
        self._check()

    def _check(self):
        w1, w2 = self.window1, self.window2
        if self.model == Model.DJC:
            if not _same_time(w2.inject_time, w1.end):
                raise InvalidSchedule(
                    f"sequential model needs t2 = t1 + tau1, got t2={w2.inject_time}, "
                    f"t1 + tau1={w1.end}"
                )
            if self.ratio is not None:
                raise InvalidSchedule("a coupling ratio only applies to the simultaneous model")
            return

        same_start = _same_time(w1.inject_time, w2.inject_time)
        if not (same_start and _same_time(w1.duration, w2.duration)):
            raise InvalidSchedule("simultaneous model needs t1 = t2 and tau1 = tau2")
        if self.ratio is not None:
            if not np.isfinite(self.ratio) or self.ratio <= 0:
                raise InvalidSchedule(f"coupling ratio must be > 0, got {self.ratio}")
            expected = w2.pulse.scaled(self.ratio)
            p1 = w1.pulse
            if p1.shape != expected.shape or (
                p1.shape == PulseShape.SINE_SQUARED and p1.ramp != expected.ramp
            ):
                raise InvalidSchedule("both atoms need the same pulse shape for a fixed ratio")
            if not np.isclose(p1.strength, expected.strength, rtol=1e-12, atol=0.0):
                raise InvalidSchedule(
                    f"gamma1 = {p1.strength} is not r * gamma2 = {expected.strength}"
                )

    @classmethod
    def sequential(cls, window1: CouplingWindow, duration2: float, pulse2: Pulse) -> object:
        """Builds a DJC schedule where atom 2 enters as atom 1 leaves"""
        window2 = CouplingWindow(window1.end, duration2, pulse2)
        return cls(window1, window2, model=Model.DJC)

    @classmethod
    def simultaneous(cls, window: CouplingWindow, ratio: Optional[float] = None) -> object:
        """Builds a DD schedule; `window` is atom 2's window and atom 1
        couples r times more strongly
        """
        factor = 1.0 if ratio is None else ratio
        return cls(window.scaled(factor), window, model=Model.DD, ratio=ratio)

    @property
    def start(self) -> float:
        return min(self.window1.inject_time, self.window2.inject_time)

    @property
    def end(self) -> float:
        return max(self.window1.end, self.window2.end)

    @property
    def max_strength(self) -> float:
        return max(self.window1.pulse.strength, self.window2.pulse.strength)

    def breakpoints(self) -> list[float]:
        points = self.window1.breakpoints() + self.window2.breakpoints()
        return sorted(set(points))

    def as_dict(self) -> dict[str, Any]:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "window1": self.window1.as_dict(),
            "window2": self.window2.as_dict(),
            "model": self.model.value,
            "ratio": self.ratio,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        w1 = d.get("window1", {})
        w2 = d.get("window2", {})
        return cls(
            w1 if isinstance(w1, CouplingWindow) else CouplingWindow.from_dict(w1),
            w2 if isinstance(w2, CouplingWindow) else CouplingWindow.from_dict(w2),
            model=d.get("model", 'djc'),
            ratio=d.get("ratio", None),
        )


def evaluate(schedule: CouplingSchedule, t: float) -> tuple[float, float]:
    """Instantaneous couplings (gamma1(t), gamma2(t)), zero outside the windows"""
    g2 = schedule.window2.strength_at(t)
    if schedule.ratio is not None:
        return schedule.ratio * g2, g2
    return schedule.window1.strength_at(t), g2


def rabi_angle(window: CouplingWindow, t: float) -> float:
    """Integrated coupling theta_i(t) = int_{t_i}^{t} gamma_i(t') dt', held at
    its final value once the window has closed. Constant pulses are integrated
    analytically, anything else by adaptive quadrature.

    Raises:
         InvalidTime if t < t_i
    """
    if t < window.inject_time:
        raise InvalidTime(f"t = {t} precedes the injection time {window.inject_time}")
    upper = min(t, window.end)
    if upper == window.inject_time:
        return 0.0
    pulse = window.pulse
    if pulse.shape == PulseShape.CONSTANT:
        return pulse.strength * (upper - window.inject_time)
    points = [p for p in window.breakpoints() if window.inject_time < p < upper]
    value, _ = quad(
        window._inside,
        window.inject_time,
        upper,
        points=points or None,
        epsabs=data.QUAD_TOL,
        epsrel=1e-12,
        limit=200,
    )
    return value


def collective_angle(schedule: CouplingSchedule, t: float) -> float:
    """Effective vacuum Rabi angle theta(t) = int omega(t') dt' of the
    simultaneous model, omega^2 = gamma1^2 + gamma2^2

    Raises:
         InvalidSchedule for sequential schedules
    """
    if schedule.model != Model.DD:
        raise InvalidSchedule("the collective angle is only defined for the simultaneous model")
    if t <= schedule.start:
        return 0.0
    if schedule.ratio is not None:
        return np.sqrt(1.0 + schedule.ratio**2) * rabi_angle(schedule.window2, t)

    w1, w2 = schedule.window1, schedule.window2
    if w1.pulse.shape == PulseShape.CONSTANT and w2.pulse.shape == PulseShape.CONSTANT:
        omega = np.hypot(w1.pulse.strength, w2.pulse.strength)
        return omega * (min(t, schedule.end) - schedule.start)

    def omega(s):
        return np.hypot(w1._inside(s), w2._inside(s))

    upper = min(t, schedule.end)
    points = [p for p in schedule.breakpoints() if schedule.start < p < upper]
    value, _ = quad(
        omega, schedule.start, upper, points=points or None, epsabs=data.QUAD_TOL, limit=200
    )
    return value


def ratio_mean(r: float) -> float:
    """alpha = r / (1 + r^2)"""
    return r / (1.0 + r * r)


def coupling_mean(schedule: CouplingSchedule) -> float:
    """Relative geometric mean alpha = gamma1 gamma2 / omega^2 = r / (1 + r^2)
    of a fixed-ratio simultaneous schedule

    Raises:
         InvalidSchedule for sequential schedules or when no fixed ratio is set
    """
    if schedule.model != Model.DD:
        raise InvalidSchedule("alpha is only defined for the simultaneous model")
    if schedule.ratio is None:
        raise InvalidSchedule("alpha is time-dependent without a fixed coupling ratio")
    return ratio_mean(schedule.ratio)
