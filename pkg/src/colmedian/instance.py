"""Problem instances: distance matrices, metric validation, file I/O.

An instance bundles a metric over facilities and clients (facilities occupy
the first ``num_facilities`` rows of the matrix), the number ``ell`` of
facilities to close, and optional integer capacities.  Instances are
immutable after construction and safe to share across solver workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import FormatError, MetricViolationError, ParameterError

# Relative tolerance used to derive the default absolute slack for
# triangle-inequality checks (floating-point input needs some give).
DEFAULT_METRIC_RTOL = 1e-9


class MetricViolation(NamedTuple):
    """One failed metric axiom: kind is 'diagonal', 'asymmetry' or 'triangle'."""

    kind: str
    indices: tuple[int, ...]
    excess: float


@dataclass(frozen=True)
class Instance:
    """A facility-closing median instance.

    dist is the (m+n) x (m+n) matrix of the metric over facilities (first m
    indices) and clients (last n indices).  capacities is None for the
    uncapacitated problem, which behaves as if every capacity were n.
    """

    num_facilities: int
    num_clients: int
    dist: np.ndarray
    ell: int
    capacities: tuple[int, ...] | None = None

    def __post_init__(self):
        m, n = self.num_facilities, self.num_clients
        if m < 1:
            raise ParameterError("need at least one facility")
        if n < 0:
            raise ParameterError("negative client count")
        d = np.ascontiguousarray(np.asarray(self.dist, dtype=np.float64))
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ParameterError(f"distance matrix must be square, got {d.shape}")
        if d.shape[0] != m + n:
            raise ParameterError(
                f"distance matrix is {d.shape[0]}x{d.shape[0]}, expected {m + n}"
            )
        if not np.isfinite(d).all():
            raise ParameterError("distances must be finite")
        if (d < 0).any():
            raise ParameterError("distances must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if not 0 <= self.ell <= m:
            raise ParameterError(f"ell={self.ell} out of range [0, {m}]")
        if n > 0 and self.ell >= m:
            raise ParameterError(
                "ell must leave at least one facility open when clients exist"
            )
        if self.capacities is not None:
            caps = tuple(self.capacities)
            if len(caps) != m:
                raise ParameterError("capacity list length must equal facility count")
            for u in caps:
                if not isinstance(u, (int, np.integer)):
                    raise ParameterError("capacities must be integers")
                if u < 0:
                    raise ParameterError("capacities must be non-negative")
            object.__setattr__(self, "capacities", tuple(int(u) for u in caps))

    # -- index helpers ------------------------------------------------------

    @property
    def client_facility(self) -> np.ndarray:
        """(n, m) view: distance from each client to each facility."""
        m = self.num_facilities
        return self.dist[m:, :m]

    @property
    def facility_facility(self) -> np.ndarray:
        """(m, m) view: facility-to-facility distances."""
        m = self.num_facilities
        return self.dist[:m, :m]

    def effective_capacities(self) -> np.ndarray:
        """Capacities as an int64 array; uncapacitated means every slot is n."""
        if self.capacities is None:
            return np.full(self.num_facilities, self.num_clients, dtype=np.int64)
        return np.asarray(self.capacities, dtype=np.int64)

    @property
    def is_capacitated(self) -> bool:
        return self.capacities is not None


@dataclass(frozen=True)
class Solution:
    """A closed set, its client-to-facility assignment and the resulting cost."""

    closed: frozenset[int]
    assignment: dict[int, int] = field(default_factory=dict)
    cost: float = 0.0


def validate_metric(inst: Instance, tol: float | None = None) -> list[MetricViolation]:
    """Report every metric-axiom violation in the instance's matrix.

    Checks the zero diagonal, symmetry, and the triangle inequality with
    absolute slack ``tol`` (default: 1e-9 times the largest distance).
    An empty list means the matrix is a valid (pseudo)metric.
    """
    d = inst.dist
    size = d.shape[0]
    if size != inst.num_facilities + inst.num_clients:
        raise ParameterError("matrix size does not match facility+client count")
    if tol is None:
        tol = DEFAULT_METRIC_RTOL * float(d.max(initial=0.0))
    if tol < 0:
        raise ParameterError("tolerance must be non-negative")

    out: list[MetricViolation] = []
    diag = np.diagonal(d)
    for x in np.nonzero(diag != 0)[0]:
        out.append(MetricViolation("diagonal", (int(x),), float(abs(diag[x]))))
    asym = np.argwhere(d != d.T)
    for x, y in asym:
        if x < y:
            out.append(
                MetricViolation(
                    "asymmetry", (int(x), int(y)), float(abs(d[x, y] - d[y, x]))
                )
            )
    # d(x,z) <= d(x,y) + d(y,z): scan one midpoint at a time to keep memory flat.
    for y in range(size):
        through = d[:, y][:, None] + d[y, :][None, :]
        bad = np.argwhere(d > through + tol)
        for x, z in bad:
            if x != y and z != y and x < z:
                out.append(
                    MetricViolation(
                        "triangle",
                        (int(x), int(y), int(z)),
                        float(d[x, z] - through[x, z]),
                    )
                )
    return out


def from_euclidean_points(
    facility_points: Sequence[Sequence[float]],
    client_points: Sequence[Sequence[float]],
    ell: int,
) -> Instance:
    """Build an instance from point coordinates under the Euclidean metric."""
    fac = np.atleast_2d(np.asarray(facility_points, dtype=np.float64))
    if fac.size == 0:
        raise ParameterError("need at least one facility point")
    cli = np.asarray(client_points, dtype=np.float64)
    if cli.size == 0:
        cli = np.empty((0, fac.shape[1]))
    cli = np.atleast_2d(cli)
    if cli.shape[0] and cli.shape[1] != fac.shape[1]:
        raise ParameterError(
            f"dimension mismatch: facilities are {fac.shape[1]}-d, "
            f"clients are {cli.shape[1]}-d"
        )
    pts = np.vstack([fac, cli])
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=2))
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return Instance(fac.shape[0], cli.shape[0], d, ell)


# -- text format ------------------------------------------------------------
#
#   colmedian 1
#   facilities <m>
#   clients <n>
#   ell <l>
#   capacities u_0 ... u_{m-1}     (optional)
#   matrix                          | points <dim>
#   <m+n rows of m+n reals>         | <m facility rows, n client rows>
#
# '#' starts a comment; blank lines are ignored.


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _expect(tokens: list[str], keyword: str, lineno: int) -> list[str]:
    if not tokens or tokens[0] != keyword:
        raise FormatError(f"expected '{keyword}', got {tokens[:1] or 'nothing'}", lineno)
    return tokens[1:]


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {token!r}", lineno) from None


def parse_instance(text: str, check_metric: bool = True) -> Instance:
    """Parse the line-oriented instance format and validate the metric.

    Raises FormatError (with a line number) on syntax problems,
    ParameterError on inconsistent header values, and MetricViolationError
    when the matrix fails the metric axioms at the default tolerance
    (suppress the last check with check_metric=False, e.g. to report all
    violations instead of the first).
    """
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty input", 1)
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(lines):
            raise FormatError("unexpected end of input", lines[-1][0])
        item = lines[pos]
        pos += 1
        return item

    lineno, line = take()
    if line.split() != ["colmedian", "1"]:
        raise FormatError("missing 'colmedian 1' header", lineno)
    lineno, line = take()
    m = _parse_int(_expect(line.split(), "facilities", lineno)[0], "facility count", lineno)
    lineno, line = take()
    n = _parse_int(_expect(line.split(), "clients", lineno)[0], "client count", lineno)
    lineno, line = take()
    ell = _parse_int(_expect(line.split(), "ell", lineno)[0], "ell", lineno)
    if m < 1:
        raise ParameterError("facility count must be positive")
    if n < 0:
        raise ParameterError("client count must be non-negative")
    if ell > m or (n > 0 and ell >= m):
        raise ParameterError(
            f"ell={ell} must be < {m} facilities (<= {m} when there are no clients)"
        )

    lineno, line = take()
    tokens = line.split()
    capacities = None
    if tokens[0] == "capacities":
        if len(tokens) != m + 1:
            raise FormatError(f"expected {m} capacities, got {len(tokens) - 1}", lineno)
        caps = []
        for t in tokens[1:]:
            try:
                caps.append(int(t))
            except ValueError:
                raise FormatError(
                    f"capacities must be integers, got {t!r}", lineno
                ) from None
            if caps[-1] < 0:
                raise FormatError(f"negative capacity {t}", lineno)
        capacities = tuple(caps)
        lineno, line = take()
        tokens = line.split()

    size = m + n
    if tokens[0] == "matrix":
        if len(tokens) != 1:
            raise FormatError("'matrix' takes no arguments", lineno)
        rows = []
        for _ in range(size):
            rl, rline = take()
            vals = rline.split()
            if len(vals) != size:
                raise FormatError(f"expected {size} entries, got {len(vals)}", rl)
            row = []
            for j, v in enumerate(vals):
                try:
                    x = float(v)
                except ValueError:
                    raise FormatError(f"bad number {v!r}", rl) from None
                if not np.isfinite(x):
                    raise FormatError(f"non-finite distance {v!r}", rl)
                if x < 0:
                    raise FormatError(
                        f"negative distance {v} at column {j}", rl
                    )
                row.append(x)
            rows.append(row)
        dist = np.array(rows, dtype=np.float64)
    elif tokens[0] == "points":
        if len(tokens) != 2:
            raise FormatError("'points' needs a dimension", lineno)
        dim = _parse_int(tokens[1], "dimension", lineno)
        if dim < 1:
            raise FormatError("dimension must be positive", lineno)
        pts = []
        for _ in range(size):
            rl, rline = take()
            vals = rline.split()
            if len(vals) != dim:
                raise FormatError(f"expected {dim} coordinates, got {len(vals)}", rl)
            try:
                pts.append([float(v) for v in vals])
            except ValueError:
                raise FormatError(f"bad coordinate in {rline!r}", rl) from None
        inst = from_euclidean_points(pts[:m], pts[m:], ell)
        if capacities is not None:
            inst = Instance(m, n, inst.dist, ell, capacities)
        return inst
    else:
        raise FormatError(f"expected 'matrix' or 'points', got {tokens[0]!r}", lineno)

    if pos < len(lines):
        raise FormatError("trailing content after matrix", lines[pos][0])

    inst = Instance(m, n, dist, ell, capacities)
    if check_metric:
        violations = validate_metric(inst)
        if violations:
            v = violations[0]
            raise MetricViolationError(
                f"matrix is not a metric: first violation {v.kind} at {v.indices} "
                f"(excess {v.excess:g}); {len(violations)} total",
                v,
            )
    return inst


def serialize_instance(inst: Instance) -> str:
    """Render an instance in matrix form; distances round-trip bit-for-bit."""
    out = [
        "colmedian 1",
        f"facilities {inst.num_facilities}",
        f"clients {inst.num_clients}",
        f"ell {inst.ell}",
    ]
    if inst.capacities is not None:
        out.append("capacities " + " ".join(str(u) for u in inst.capacities))
    out.append("matrix")
    for row in inst.dist:
        out.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(out) + "\n"


def format_solution(inst: Instance, sol: Solution) -> str:
    """Solution text block: cost, closed set, one assignment line per client."""
    lines = [f"cost {repr(float(sol.cost))}"]
    lines.append("closed" + "".join(f" {f}" for f in sorted(sol.closed)))
    cf = inst.client_facility
    for c in sorted(sol.assignment):
        f = sol.assignment[c]
        lines.append(f"assign {c} {f} {repr(float(cf[c, f]))}")
    return "\n".join(lines) + "\n"
