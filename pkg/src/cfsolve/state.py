"""The unit of work of the subdivision solver."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .homography import DomainBox, Homography, Step, apply_homography, for_box, transform
from .tensorpoly import TensorPoly
from .unicf import CFExpansion

__all__ = ["SystemState", "initial_state"]


@dataclass(frozen=True)
class SystemState:
    """Transformed system together with the map back to the input domain.

    ``polys[i]`` is ``H(originals[i])``; its zeros in the open positive
    orthant correspond to the zeros of ``originals[i]`` in the interior of
    ``H.box()``.  ``trace[k]`` holds the partial quotients produced on axis
    ``k`` by integer shifts and unit splits, or ``None`` once a non-unit
    step has been taken on that axis.
    """

    polys: tuple[TensorPoly, ...]
    H: Homography
    originals: tuple[TensorPoly, ...] = field(repr=False)
    depth: int = 0
    trace: tuple = ()
    jacobian: TensorPoly | None = field(default=None, repr=False)

    @property
    def nvars(self) -> int:
        return self.H.nvars

    @property
    def square(self) -> bool:
        return len(self.polys) == self.nvars

    def box(self) -> DomainBox:
        return self.H.box()

    @property
    def quotient_trace(self) -> tuple[CFExpansion | None, ...]:
        return tuple(
            None if t is None else CFExpansion.from_quotients(t) for t in self.trace
        )

    def with_steps(self, steps: Sequence[Step], trace=None, depth=None) -> "SystemState":
        polys, H = transform(steps, self.polys, self.H)
        return replace(
            self,
            polys=tuple(polys),
            H=H,
            trace=self.trace if trace is None else trace,
            depth=self.depth if depth is None else depth,
        )


def _push_shift(t, c: int):
    if t is None:
        return None
    return t[:-1] + (t[-1] + c,)


def _push_split(t):
    return None if t is None else t + (1,)


def initial_state(system: Sequence[TensorPoly], domain: DomainBox, jacobian=None) -> SystemState:
    if not system:
        raise ValueError("empty system")
    n = system[0].nvars
    if any(f.nvars != n for f in system):
        raise ValueError("inconsistent number of variables")
    if domain.nvars != n:
        raise ValueError("domain dimension does not match the system")
    H = for_box(domain)
    polys = tuple(apply_homography(f, H) for f in system)
    return SystemState(
        polys=polys,
        H=H,
        originals=tuple(system),
        trace=((0,),) * n,
        jacobian=jacobian,
    )
