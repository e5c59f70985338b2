"""Closed-form probability bounds for majority dynamics on G(n, p).

All functions return raw reals.  Failure probabilities may exceed 1 and
lower bounds may be negative; use :func:`clamp01` only when reporting.
``log`` is the natural logarithm throughout.
"""

from dataclasses import asdict, dataclass
from math import erf, exp, inf, isinf, log, sqrt

from .errors import InvalidParameter, PreconditionViolated

C0 = 0.56  # Berry-Esseen constant (Shevtsova)
C1 = sqrt(3 * log(2))

DAY1_CONDITION = "day-1 advantage: 2*sqrt(n-1)*Phi0(...) > C1/p + 2*eps2 + 1/sqrt(n)"
EPS1_CONDITION = "2*eps1*n > 1"
SIZE_CONDITION = "1 <= n/2 - c"

# P1 denominator term: C1/(2p) reproduces the reference P1 value; the
# alternative printing with C1/p is kept for comparison only.
P1_DAY1 = "day1"
P1_PREAMBLE = "preamble"


def _exp(x):
    return inf if x > 709.0 else exp(x)


def clamp01(x):
    return min(1.0, max(0.0, x))


def sigma(p):
    return sqrt(p * (1.0 - p))


def _one_minus_2var(p):
    # 1 - 2 p (1-p) written without cancellation
    q = 1.0 - p
    return p * p + q * q


def phi0(a):
    """Standard normal mass between 0 and ``a`` (odd in ``a``)."""
    if isinf(a):
        return 0.5 if a > 0 else -0.5
    return 0.5 * erf(a / sqrt(2.0))


def phi(a):
    """Standard normal CDF."""
    return 0.5 + phi0(a)


def berry_esseen_error(n, p):
    """Uniform CDF error of a centred sum of ``n`` signed Bernoulli(p) variables."""
    _check_p_open(p)
    if n < 1:
        raise InvalidParameter("n must be positive")
    return C0 * _one_minus_2var(p) / (sigma(p) * sqrt(n))


def _check_p_open(p):
    if not 0.0 < p < 1.0:
        raise InvalidParameter(f"p must lie in (0, 1), got {p}")


@dataclass(frozen=True)
class BoundParams:
    n: int
    p: float
    c: int
    eps1: float
    eps2: float
    r: float

    def __post_init__(self):
        if self.n < 3:
            raise InvalidParameter(f"n must be at least 3, got {self.n}")
        _check_p_open(self.p)
        if int(self.c) != self.c or self.c < 1:
            raise InvalidParameter(f"c must be a positive integer, got {self.c}")
        if not 0.0 < self.r < 0.5:
            raise InvalidParameter(f"r must lie in (0, 1/2), got {self.r}")
        if self.eps1 <= 0 or self.eps2 <= 0:
            raise InvalidParameter("eps1 and eps2 must be positive")

    @property
    def sigma(self):
        return sigma(self.p)

    C0 = C0
    C1 = C1


def _day1_bracket(n, p, c, d):
    s = sigma(p)
    arg = (2 * p * c + min(p, 1.0 - p)) / (s * sqrt(n - 1))
    return sqrt(n - 1) * phi0(arg) - C0 * _one_minus_2var(p) / s - d - 1.0 / (2.0 * sqrt(n))


def q_bound(n, p, c, d):
    """Chebyshev bound on Pr(|B_1| > (n-1)/2 - d*sqrt(n)) given |B_0| <= n/2 - c."""
    _check_p_open(p)
    if n < 3:
        raise InvalidParameter("n must be at least 3")
    bracket = _day1_bracket(n, p, c, d)
    if bracket <= 0:
        raise PreconditionViolated(
            "day-1 margin", f"day-1 margin sqrt(n-1)*Phi0(...) - C0(1-2s^2)/s - d - 1/(2 sqrt n) = {bracket:.6g} <= 0"
        )
    num = 0.25 + 4 * C0**2 * _one_minus_2var(p) ** 2 * (n - 1) / (n - 2)
    return num / bracket**2


def p1(params, variant=P1_DAY1):
    prm = params
    if variant == P1_DAY1:
        d = C1 / (2 * prm.p) + prm.eps2
    elif variant == P1_PREAMBLE:
        d = C1 / prm.p + prm.eps2
    else:
        raise InvalidParameter(f"unknown P1 variant {variant!r}")
    return q_bound(prm.n, prm.p, prm.c, d)


def day2_exponent(p, eps1, eps2):
    """The bracket (1-2 eps1) p eps2 (p eps2 + C1) - eps1 log 2 inside P2."""
    return (1 - 2 * eps1) * p * eps2 * (p * eps2 + C1) - eps1 * log(2)


def p2(params):
    a = day2_exponent(params.p, params.eps1, params.eps2)
    return _exp(-(8 * params.n / 3) * a) / params.n


def _day3_core(params):
    n, p, r, e1 = params.n, params.p, params.r, params.eps1
    if 2 * e1 * n <= 1:
        raise PreconditionViolated(EPS1_CONDITION)
    return 2 * r * p**3 * (2 * e1 * n - 1) ** 2 / (1 + r * p)


def p3(params):
    """Day-3 failure term with ``- 2n log 2`` in the exponent."""
    core = _day3_core(params)
    return _exp(-core - 2 * params.n * log(2)) / params.n


def day3_lemma_bound(params):
    """Day-3 failure term with ``+ 2n log 2`` (the union-bound form).

    Vacuous (far above 1) at desk-scale parameters; exposed for comparison
    with :func:`p3`.
    """
    core = _day3_core(params)
    return _exp(-core + 2 * params.n * log(2)) / params.n


def _degree_failure(n, p, s):
    if not 0.0 < s < 1.0:
        raise InvalidParameter(f"s must lie in (0, 1), got {s}")
    return n * _exp(-(1 - s + s * log(s)) * p * (n - 1))


def p4(params):
    return _degree_failure(params.n, params.p, 2 * params.r)


def degree_reduction_prob(n, p, s):
    """Lower bound on Pr(every degree exceeds s p (n-1)), i.e. G: s p (n-1)/2 -> 0."""
    return 1.0 - _degree_failure(n, p, s)


def milestones(params):
    n, p = params.n, params.p
    return (
        n / 2 - params.c,
        (n - 1) / 2 - (C1 / (2 * p) + params.eps2) * sqrt(n),
        (0.5 - params.eps1) * n,
        params.r * p * (n - 1),
        0.0,
    )


def check_conditions(params):
    n, p = params.n, params.p
    s = sigma(p)
    arg = (2 * p * params.c + min(p, 1.0 - p)) / (s * sqrt(n - 1))
    day1 = 2 * sqrt(n - 1) * phi0(arg) > C1 / p + 2 * params.eps2 + 1 / sqrt(n)
    return day1, 2 * params.eps1 * n > 1


@dataclass(frozen=True)
class BoundReport:
    params: BoundParams
    conditions_ok: tuple
    milestones: tuple
    p_values: tuple
    total_failure: float
    win_lower_bound: float

    def to_dict(self):
        d = asdict(self)
        d["conditions_ok"] = {"day1": self.conditions_ok[0], "eps1": self.conditions_ok[1]}
        d["milestones"] = list(self.milestones)
        d["p_values"] = dict(zip(("P1", "P2", "P3", "P4"), self.p_values))
        return d


def theorem_report(params, p1_variant=P1_DAY1):
    """Day-by-day failure bounds and the union-bound win probability."""
    day1, eps1 = check_conditions(params)
    if not day1:
        raise PreconditionViolated(DAY1_CONDITION)
    if not eps1:
        raise PreconditionViolated(EPS1_CONDITION)
    if params.n / 2 - params.c < 1:
        raise PreconditionViolated(SIZE_CONDITION)
    pv = (p1(params, p1_variant), p2(params), p3(params), p4(params))
    total = pv[0] + pv[1] + pv[2] + pv[3]
    return BoundReport(
        params=params,
        conditions_ok=(day1, eps1),
        milestones=milestones(params),
        p_values=pv,
        total_failure=total,
        win_lower_bound=max(0.0, min(1.0, 1.0 - total)),
    )


def dominance_lower_bound(n1, n2, p, d):
    """Lower bound on Pr(Y1 > Y2 + d), Y1 ~ Bin(n1, p), Y2 ~ Bin(n2, p)."""
    _check_p_open(p)
    if not n1 > n2:
        raise PreconditionViolated("n1 > n2")
    gap = p * (n1 - n2)
    if not d < gap:
        raise PreconditionViolated("d < p(n1 - n2)")
    s, m = sigma(p), n1 + n2
    return 0.5 + phi0((gap - d) / (s * sqrt(m))) - C0 * _one_minus_2var(p) / (s * sqrt(m))


def collision_upper_bound(n1, n2, p, d):
    """Upper bound on Pr(X1 = X2 + d), X1 ~ Bin(n1, p), X2 ~ Bin(n2, p)."""
    _check_p_open(p)
    if not 0 < d < (n1 + n2) / 2:
        raise PreconditionViolated("0 < d < (n1 + n2)/2")
    return 2 * C0 * _one_minus_2var(p) / (sigma(p) * sqrt(n1 + n2))


def bad_set_bound(n, n0, m, p):
    """Lower bound on Pr(G: n0 -> m - 1) from Hoeffding plus a union bound."""
    _check_p_open(p)
    if not n0 < n / 2:
        raise PreconditionViolated("n0 < n/2")
    if not 1 <= m <= n:
        raise PreconditionViolated("1 <= m <= n")
    if n + m - 2 <= 0:
        raise PreconditionViolated("n + m > 2")
    expo = n * log(4) - log(n) - 2 * p**2 * (n - 2 * n0 - 1) ** 2 * m / (n + m - 2)
    return 1.0 - _exp(expo)
