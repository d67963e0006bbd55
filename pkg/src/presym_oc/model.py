"""Control problem data model and the Pontryagin phase-space construction.

A problem is the coordinate data (states q, controls u, dynamics F, running
cost L).  From it we build the control-parametrized Hamiltonian
H = sum_i p_i F^i - L on the phase space with coordinates (q, p, u), the
stationarity constraints chi_a = dH/du^a and the control Hessian
W_ab = dchi_a/du^b whose rank separates regular from singular problems.

The coordinate ordering (q, p, u) is canonical everywhere: it fixes the
pairing q^i <-> p_i, and with it the 2-form dq^i ^ dp_i whose kernel is the
u-directions.  That structure is carried implicitly by the ordering; nothing
else stores it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expr import (
    Binary,
    Constant,
    Expr,
    ExprError,
    Variable,
    VariableTable,
    diff,
    evaluate,
    free_variables,
    simplify,
)
from . import sampling
from .sampling import ConstraintSystem, SamplingError, sample_box, svd_rank

TIME_NAME = "t"
_COSTATE_RE = re.compile(r"^p\d+$")

REGULAR = "REGULAR"
SINGULAR_CONSTANT_RANK = "SINGULAR_CONSTANT_RANK"
MIXED = "MIXED"


class ModelError(Exception):
    """Invalid problem data (also raised when building from invalid input)."""


@dataclass(frozen=True)
class ControlProblem:
    """Optimal control problem in coordinates.

    ``holonomic_constraints`` are state-space conditions g(q) = 0 that hold
    on the admissible set (unit-sphere states and the like); they are not
    folded into the Hamiltonian construction, only monitored and used as
    projection targets.  ``control_constraints`` are the analogous
    conditions involving controls (e.g. unit-norm controls); they enter the
    level-set rank accounting and retraction, nothing else.
    """

    state_names: tuple
    control_names: tuple
    dynamics: tuple
    lagrangian: Expr
    holonomic_constraints: tuple = ()
    control_constraints: tuple = ()
    time_dependent: bool = False

    def __post_init__(self):
        object.__setattr__(self, "state_names", tuple(self.state_names))
        object.__setattr__(self, "control_names", tuple(self.control_names))
        object.__setattr__(self, "dynamics", tuple(self.dynamics))
        object.__setattr__(self, "holonomic_constraints", tuple(self.holonomic_constraints))
        object.__setattr__(self, "control_constraints", tuple(self.control_constraints))

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    @property
    def n_controls(self) -> int:
        return len(self.control_names)


def _allowed_dynamics_vars(problem: ControlProblem) -> set:
    allowed = set(problem.state_names) | set(problem.control_names)
    if problem.time_dependent:
        allowed.add(TIME_NAME)
    return allowed


def validate(problem: ControlProblem) -> list:
    """Collect invariant violations; an empty list means the problem is valid."""
    issues = []
    names = list(problem.state_names) + list(problem.control_names)
    seen = set()
    for name in names:
        if name in seen:
            issues.append(f"duplicate variable name '{name}'")
        seen.add(name)
    for name in names:
        if _COSTATE_RE.match(name):
            issues.append(f"name '{name}' collides with the reserved costate names p1..pm")
        if name == TIME_NAME:
            issues.append(f"name '{TIME_NAME}' is reserved for the time variable")
    if len(problem.dynamics) != problem.n_states:
        issues.append(
            f"{len(problem.dynamics)} dynamics entries for {problem.n_states} states"
        )
    allowed = _allowed_dynamics_vars(problem)
    for name, f in zip(problem.state_names, problem.dynamics):
        extra = free_variables(f) - allowed
        if extra:
            issues.append(f"dynamics of '{name}' mention unknown variables {sorted(extra)}")
    extra = free_variables(problem.lagrangian) - allowed
    if extra:
        issues.append(f"lagrangian mentions unknown variables {sorted(extra)}")
    states = set(problem.state_names)
    for g in problem.holonomic_constraints:
        extra = free_variables(g) - states
        if extra:
            issues.append(f"holonomic constraint '{g}' mentions non-state variables {sorted(extra)}")
    for g in problem.control_constraints:
        extra = free_variables(g) - states - set(problem.control_names)
        if extra:
            issues.append(f"control constraint '{g}' mentions unknown variables {sorted(extra)}")
    if problem.n_states == 0:
        issues.append("problem has no states")
    return issues


def autonomize(problem: ControlProblem) -> ControlProblem:
    """Append time as an ordinary state with unit velocity.

    The returned problem is autonomous; the extra state is named ``t`` and
    its conjugate momentum shows up in analyses like any other costate.
    """
    if not problem.time_dependent:
        raise ModelError("problem is already autonomous")
    return ControlProblem(
        state_names=problem.state_names + (TIME_NAME,),
        control_names=problem.control_names,
        dynamics=problem.dynamics + (Constant(1.0),),
        lagrangian=problem.lagrangian,
        holonomic_constraints=problem.holonomic_constraints,
        control_constraints=problem.control_constraints,
        time_dependent=False,
    )


@dataclass(frozen=True)
class PontryaginSystem:
    """Phase-space data: H, stationarity constraints chi, control Hessian W."""

    problem: ControlProblem
    costate_names: tuple
    hamiltonian: Expr
    chi: tuple
    W: tuple

    @property
    def state_names(self) -> tuple:
        return self.problem.state_names

    @property
    def control_names(self) -> tuple:
        return self.problem.control_names

    @property
    def coordinate_names(self) -> tuple:
        """Canonical (q, p, u) ordering used by every array layout."""
        return self.state_names + self.costate_names + self.control_names

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    @property
    def n_controls(self) -> int:
        return len(self.control_names)

    @property
    def n_coordinates(self) -> int:
        return 2 * self.n_states + self.n_controls

    def table(self, values: Sequence[float]) -> VariableTable:
        return VariableTable(zip(self.coordinate_names, values))

    def omega_matrix(self) -> np.ndarray:
        """Coordinate matrix of the 2-form dq^i ^ dp_i (kernel: u-directions)."""
        n, m = self.n_coordinates, self.n_states
        omega = np.zeros((n, n))
        for i in range(m):
            omega[i, m + i] = 1.0
            omega[m + i, i] = -1.0
        return omega


@dataclass(frozen=True)
class PhasePoint:
    """A point (q, p, u), stored in the canonical coordinate ordering."""

    q: tuple
    p: tuple
    u: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        object.__setattr__(self, "u", tuple(float(v) for v in self.u))

    def as_array(self) -> np.ndarray:
        return np.array(self.q + self.p + self.u, dtype=float)

    @classmethod
    def from_array(cls, sys: PontryaginSystem, z: Sequence[float]) -> "PhasePoint":
        z = np.asarray(z, dtype=float)
        if z.shape != (sys.n_coordinates,):
            raise ModelError(
                f"expected {sys.n_coordinates} coordinates, got shape {z.shape}"
            )
        m, k = sys.n_states, sys.n_controls
        return cls(q=tuple(z[:m]), p=tuple(z[m : 2 * m]), u=tuple(z[2 * m :]))


def costate_names_for(problem: ControlProblem) -> tuple:
    return tuple(f"p{i + 1}" for i in range(problem.n_states))


def build_pontryagin(problem: ControlProblem) -> PontryaginSystem:
    """Construct H = sum_i p_i F^i - L (normal multiplier fixed to one),
    chi_a = dH/du^a and W_ab = dchi_a/du^b.

    Time-dependent problems are autonomized first, so the result is always
    an autonomous system.
    """
    issues = validate(problem)
    if issues:
        raise ModelError("invalid problem: " + "; ".join(issues))
    if problem.time_dependent:
        problem = autonomize(problem)
    costates = costate_names_for(problem)
    h: Expr | None = None
    for p_name, f in zip(costates, problem.dynamics):
        term = Binary("*", Variable(p_name), f)
        h = term if h is None else Binary("+", h, term)
    hamiltonian = simplify(Binary("-", h, problem.lagrangian))
    chi = tuple(simplify(diff(hamiltonian, u)) for u in problem.control_names)
    w = tuple(
        tuple(simplify(diff(c, u)) for u in problem.control_names) for c in chi
    )
    return PontryaginSystem(
        problem=problem,
        costate_names=costates,
        hamiltonian=hamiltonian,
        chi=chi,
        W=w,
    )


@dataclass
class RegularityReport:
    """Sampled rank classification of the control Hessian W."""

    kind: str
    rank: "int | None"
    full_rank: int
    ranks: list = field(default_factory=list)
    sampled_on_constraints: bool = True
    warnings: list = field(default_factory=list)

    @property
    def is_regular(self) -> bool:
        return self.kind == REGULAR


def classify_regularity(
    sys: PontryaginSystem,
    domain=None,
    trials: int = 25,
    seed: int = 0,
    rank_tol: float = sampling.RANK_TOL,
) -> RegularityReport:
    """Classify by the rank of W at seeded samples.

    Points are Newton-projected onto the stationarity set {chi = 0} (plus
    any holonomic/control constraints) when that sampling succeeds;
    otherwise raw box points are used and the report says so.
    """
    if trials < 1:
        raise ModelError("trials must be >= 1")
    names = sys.coordinate_names
    n_u = sys.n_controls
    warnings = []
    if n_u == 0:
        return RegularityReport(kind=REGULAR, rank=0, full_rank=0, ranks=[])
    rng = np.random.default_rng(seed)
    constraints = (
        tuple(sys.chi)
        + sys.problem.holonomic_constraints
        + sys.problem.control_constraints
    )
    try:
        points = sampling.sample_constraint_set(
            constraints, names, domain, count=trials, rng=rng
        )
        on_constraints = True
    except SamplingError:
        points = sample_box(names, domain, trials, rng)
        on_constraints = False
        warnings.append(
            "stationarity-set sampling failed; W ranks were taken on raw box points"
        )
    w_fns = [
        [  # row-major compiled W entries
            __import__("presym_oc.expr", fromlist=["compile_expr"]).compile_expr(entry, names)
            for entry in row
        ]
        for row in sys.W
    ]
    ranks = []
    for z in points:
        w = np.array([[fn(z) for fn in row] for row in w_fns], dtype=float)
        ranks.append(svd_rank(w, rank_tol))
    distinct = sorted(set(ranks))
    if len(distinct) > 1:
        warnings.append(
            "rank of W varies across samples; the constant-rank assumption fails"
        )
        return RegularityReport(
            kind=MIXED,
            rank=None,
            full_rank=n_u,
            ranks=ranks,
            sampled_on_constraints=on_constraints,
            warnings=warnings,
        )
    rank = distinct[0]
    kind = REGULAR if rank == n_u else SINGULAR_CONSTANT_RANK
    return RegularityReport(
        kind=kind,
        rank=rank,
        full_rank=n_u,
        ranks=ranks,
        sampled_on_constraints=on_constraints,
        warnings=warnings,
    )
