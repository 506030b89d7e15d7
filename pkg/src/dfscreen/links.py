"""Link functions and the response transform for the four model families.

Supported links: identity (linear), logit (binary), log (counts), and the
power family g^{-1}(t) = t^alpha with alpha in {1/3, 1/5}. Each link pairs
with a projection that pulls raw responses into the domain of g before the
transform is applied, so the transformed response is always finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit as _logit

from .exceptions import DataError, ParameterError

IDENTITY = "identity"
LOGIT = "logit"
LOG = "log"
POWER = "power"

_KINDS = (IDENTITY, LOGIT, LOG, POWER)
_POWER_ALPHAS = (1.0 / 3.0, 1.0 / 5.0)


@dataclass(frozen=True)
class LinkSpec:
    """A link family; ``alpha`` is meaningful only for the power family."""

    kind: str
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown link kind {self.kind!r}; use one of {_KINDS}")
        if self.kind == POWER:
            if self.alpha not in _POWER_ALPHAS:
                raise ParameterError(
                    f"power link needs alpha in {{1/3, 1/5}}, got {self.alpha}"
                )
        elif self.alpha is not None:
            raise ParameterError(f"alpha is only valid for the power link, got kind={self.kind!r}")


@dataclass(frozen=True)
class TransformedResponse:
    """The transformed response vector plus the identity-transform flag."""

    ystar: np.ndarray
    identity_transform: bool


def parse_link(text: str) -> LinkSpec:
    """Parse the CLI/config link string: identity | logit | log | power:1/3 | power:1/5."""
    text = text.strip().lower()
    if text in (IDENTITY, LOGIT, LOG):
        return LinkSpec(kind=text)
    if text.startswith("power:"):
        frac = text.split(":", 1)[1]
        if frac == "1/3":
            return LinkSpec(kind=POWER, alpha=1.0 / 3.0)
        if frac == "1/5":
            return LinkSpec(kind=POWER, alpha=1.0 / 5.0)
        raise ParameterError(f"power link accepts 1/3 or 1/5, got {frac!r}")
    raise ParameterError(
        f"unknown link {text!r}; expected identity, logit, log, power:1/3 or power:1/5"
    )


def link_name(link: LinkSpec) -> str:
    """Inverse of parse_link."""
    if link.kind != POWER:
        return link.kind
    return "power:1/3" if link.alpha == 1.0 / 3.0 else "power:1/5"


def project_response(y: float, link: LinkSpec, n: int) -> float:
    """Pull a single raw response into the domain where the link is defined.

    Identity and power responses pass through. Binary responses move off the
    {0,1} boundary to {n^{-1/2}, 1-n^{-1/2}}; zero counts move up to n^{-1/2}.
    """
    if link.kind in (IDENTITY, POWER):
        return float(y)
    if link.kind == LOGIT:
        if n <= 4:
            raise ParameterError(
                f"logit projection needs n >= 5 so the interval "
                f"[n^-1/2, 1-n^-1/2] is non-empty, got n={n}"
            )
        if y == 0:
            return n**-0.5
        if y == 1:
            return 1.0 - n**-0.5
        raise DataError(f"logit link requires responses in {{0, 1}}, got {y!r}")
    # log link
    if y < 0:
        raise DataError(f"log link requires nonnegative counts, got {y!r}")
    return n**-0.5 if y == 0 else float(y)


def transform_response(y, link: LinkSpec) -> TransformedResponse:
    """Apply g to the projected response vector."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] < 1:
        raise DataError("y must be a non-empty vector")
    n = y.shape[0]
    if link.kind == IDENTITY:
        return TransformedResponse(ystar=y.copy(), identity_transform=True)
    if link.kind == POWER:
        # g is the inverse of t -> t^alpha, i.e. an odd integer power.
        power = round(1.0 / link.alpha)
        with np.errstate(over="ignore"):  # overflow is caught below
            ystar = y**power
    else:
        projected = np.array([project_response(v, link, n) for v in y])
        ystar = _logit(projected) if link.kind == LOGIT else np.log(projected)
    if not np.isfinite(ystar).all():
        bad = int(np.flatnonzero(~np.isfinite(ystar))[0])
        raise DataError(
            f"transformed response is not finite at position {bad} "
            f"(y={y[bad]!r}, link={link.kind})"
        )
    return TransformedResponse(ystar=ystar, identity_transform=False)


def inverse_link(t, link: LinkSpec):
    """Map a linear predictor back to the response scale (g^{-1})."""
    t = np.asarray(t, dtype=float)
    if link.kind == IDENTITY:
        out = t.copy()
    elif link.kind == LOGIT:
        out = expit(t)
    elif link.kind == LOG:
        out = np.exp(t)
    else:
        out = np.sign(t) * np.abs(t) ** link.alpha
    return float(out) if out.ndim == 0 else out
