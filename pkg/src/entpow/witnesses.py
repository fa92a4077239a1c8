"""Entanglement witnesses and optimization over the product-state manifold.

The central primitive is `min_over_products`: minimize ``<chi|O|chi>`` over
normalized product vectors ``|chi> = |chi_1> (x) ... (x) |chi_n>``. Because
separable states are convex mixtures of such vectors, the minimum over
product states equals the minimum over all separable states, which is what
every separability bound in this package rests on.

The optimizer is multi-start coordinate descent: with all parties but one
frozen, the objective is a Hermitian quadratic form in the free party, whose
exact minimizer is an extremal eigenvector. Sweeps are monotone, so each
restart converges; restarts guard against local minima. All restarts advance
in lockstep through batched einsum/eigh calls, which keeps grid scans cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.optimize

from .errors import (
    DimensionError,
    EntpowError,
    IncomparableWitnessError,
    NotAWitnessError,
)
from .states import ProductStateParam, PureState, bell_states, max_entangled, schmidt_rank
from .tensor import DimList, as_matrix, dagger, is_hermitian, partial_transpose

TOL_WITNESS = 1e-8  # minima above -TOL_WITNESS still count as a witness
TOL_ZERO = 1e-6     # minima below +TOL_ZERO count as touching zero (optimality)


@dataclass(frozen=True)
class Witness:
    """Hermitian operator with non-negative expectation on all separable states.

    `shifted` optionally records the form ``lambda * I - L`` with a PSD test
    operator L; only shifted witnesses sharing the same L can be compared.
    """

    operator: np.ndarray
    dims: DimList
    shifted: tuple[float, np.ndarray] | None = None
    label: str = ""

    def __post_init__(self):
        op = as_matrix(self.operator)
        dims = DimList.of(self.dims)
        dims.check_matrix(op)
        if not is_hermitian(op, 1e-12):
            raise DimensionError("witness operator must be Hermitian (to 1e-12)")
        if self.shifted is not None:
            lam, test = self.shifted
            test = as_matrix(test)
            if np.max(np.abs(op - (lam * np.eye(dims.total) - test))) > 1e-12:
                raise DimensionError("shifted form does not match operator")
            if np.linalg.eigvalsh(test)[0] < -1e-10:
                raise DimensionError("shifted test operator must be PSD")
            object.__setattr__(self, "shifted", (float(lam), test))
        object.__setattr__(self, "operator", op)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_shift(cls, lam: float, test_op, dims, label: str = "") -> "Witness":
        test_op = as_matrix(test_op)
        dims = DimList.of(dims)
        op = lam * np.eye(dims.total) - test_op
        return cls(op, dims, shifted=(float(lam), test_op), label=label)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    seed: int = 0
    tol: float = 1e-12
    max_sweeps: int = 500


DEFAULT_CONFIG = OptimizerConfig()


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    argument: ProductStateParam
    restarts_used: int
    converged: bool
    spread: float


def _coordinate_descent(obs: np.ndarray, dims: DimList, config: OptimizerConfig):
    """Minimize <chi|obs|chi> over product vectors; all restarts in lockstep.

    Returns (per-restart values, per-party stacked vectors, converged mask).
    """
    d = dims.dims
    n = dims.n
    r_count = max(1, int(config.restarts))
    tensor = obs.reshape(*d, *d)

    factors = [np.empty((r_count, di), dtype=complex) for di in d]
    for r in range(r_count):
        rng = np.random.default_rng(config.seed + r)
        for i, di in enumerate(d):
            v = rng.normal(size=di) + 1j * rng.normal(size=di)
            factors[i][r] = v / np.linalg.norm(v)

    rows = [chr(ord("a") + i) for i in range(n)]
    cols = [chr(ord("a") + n + i) for i in range(n)]
    t_sub = "".join(rows) + "".join(cols)

    values = np.full(r_count, np.inf)
    converged = np.zeros(r_count, dtype=bool)
    for _ in range(config.max_sweeps):
        for i in range(n):
            operands = [tensor]
            subs = [t_sub]
            for j in range(n):
                if j == i:
                    continue
                operands.append(np.conj(factors[j]))
                subs.append("z" + rows[j])
                operands.append(factors[j])
                subs.append("z" + cols[j])
            eff = np.einsum(
                ",".join(subs) + "->z" + rows[i] + cols[i], *operands, optimize=True
            )
            eff = (eff + np.conj(eff.transpose(0, 2, 1))) / 2.0
            evals, evecs = np.linalg.eigh(eff)
            factors[i] = evecs[..., :, 0]
            new_values = evals[:, 0]
        converged = np.abs(new_values - values) < config.tol
        values = new_values
        if np.all(converged):
            break
    return values, factors, converged


def _run(obs, dims, config: OptimizerConfig | None, sign: float) -> OptimizationResult:
    dims = DimList.of(dims)
    obs = as_matrix(obs)
    dims.check_matrix(obs)
    if not is_hermitian(obs, 1e-8):
        raise DimensionError("observable must be Hermitian")
    obs = (obs + dagger(obs)) / 2.0
    config = config or DEFAULT_CONFIG
    values, factors, converged = _coordinate_descent(sign * obs, dims, config)
    # lowest value wins; ties (within 1e-12) go to the earliest restart
    best = int(np.argmax(values <= values.min() + 1e-12))
    argument = ProductStateParam(tuple(f[best] for f in factors))
    return OptimizationResult(
        value=float(sign * values[best]),
        argument=argument,
        restarts_used=len(values),
        converged=bool(converged[best]),
        spread=float(values.max() - values.min()),
    )


def min_over_products(obs, dims, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Approximate min of <chi|obs|chi> over normalized product vectors.

    Deterministic for a fixed config; the reported value is attained by
    `argument`, hence an upper bound on the true minimum.
    """
    return _run(obs, dims, config, sign=+1.0)


def max_over_products(obs, dims, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Approximate max of <chi|obs|chi> over normalized product vectors."""
    return _run(obs, dims, config, sign=-1.0)


class WitnessCheck(NamedTuple):
    is_witness: bool
    result: OptimizationResult  # result.argument is the violating state when not


def is_witness(w: Witness, config: OptimizerConfig | None = None) -> WitnessCheck:
    """Check non-negativity over product (hence separable) states."""
    res = min_over_products(w.operator, w.dims, config)
    return WitnessCheck(res.value >= -TOL_WITNESS, res)


def is_trivial(w: Witness) -> bool:
    """A PSD witness detects nothing: non-negative on every state."""
    return bool(np.linalg.eigvalsh(w.operator)[0] >= -1e-10)


def lambda_min(test_op, dims, config: OptimizerConfig | None = None) -> float:
    """Smallest shift making ``lambda*I - test_op`` a witness.

    Equals the maximum of <test_op> over separable states; the witness
    shifted by exactly this value touches zero on a product state.
    """
    test_op = as_matrix(test_op)
    if np.linalg.eigvalsh((test_op + dagger(test_op)) / 2)[0] < -1e-10:
        raise DimensionError("test operator must be PSD")
    return max_over_products(test_op, dims, config).value


def compare_finer_shifted(
    w1: Witness, w2: Witness, config: OptimizerConfig | None = None
) -> str:
    """Order two shifted witnesses with the same test operator.

    The smaller shift detects strictly more states (provided both shifts stay
    above lambda_min, checked here). Returns "w1_finer", "w2_finer" or
    "equal"; witnesses with different test operators are incomparable.
    """
    if w1.shifted is None or w2.shifted is None:
        raise IncomparableWitnessError("both witnesses must carry a shifted form")
    lam1, test1 = w1.shifted
    lam2, test2 = w2.shifted
    if test1.shape != test2.shape or np.max(np.abs(test1 - test2)) > 1e-12:
        raise IncomparableWitnessError("shifted witnesses have different test operators")
    floor = lambda_min(test1, w1.dims, config)
    if min(lam1, lam2) < floor - TOL_WITNESS:
        raise NotAWitnessError(
            f"shift below lambda_min={floor}: not a witness, comparison is void"
        )
    if abs(lam1 - lam2) <= 1e-12:
        return "equal"
    return "w1_finer" if lam1 < lam2 else "w2_finer"


def is_optimal(w: Witness, config: OptimizerConfig | None = None) -> bool:
    """A witness is optimal here iff some product state brings it to zero."""
    check = is_witness(w, config)
    if not check.is_witness:
        raise NotAWitnessError(f"operator is not a witness (min {check.result.value})")
    return check.result.value <= TOL_ZERO


def ppt_witness_from_pure(psi: PureState) -> Witness:
    """Partial transpose of an entangled pure projector, as an optimal witness."""
    psi.dims.require_bipartite()
    if schmidt_rank(psi) < 2:
        raise DimensionError("product state gives a trivial (PSD) witness; refusing")
    op = partial_transpose(psi.projector(), psi.dims, 1)
    op = (op + dagger(op)) / 2.0
    return Witness(op, psi.dims, label="ppt_pure")


def schmidt_class_max(
    test_op, r: int, dims, config: OptimizerConfig | None = None
) -> float:
    """Max of <psi|test_op|psi> over pure states of Schmidt rank <= r.

    Multi-start power iteration with rank-r truncation after every step (the
    test operator is shifted to be PSD first, which leaves the maximizer
    unchanged). r = min(d1, d2) reduces to the largest eigenvalue; r = 1
    agrees with `max_over_products`.
    """
    dims = DimList.of(dims)
    dims.require_bipartite()
    test_op = as_matrix(test_op)
    dims.check_matrix(test_op)
    if not is_hermitian(test_op, 1e-8):
        raise DimensionError("test operator must be Hermitian")
    d1, d2 = dims.dims
    if not 1 <= r <= min(d1, d2):
        raise DimensionError(f"Schmidt class r={r} outside 1..{min(d1, d2)}")
    config = config or DEFAULT_CONFIG
    evals = np.linalg.eigvalsh(test_op)
    shift = max(0.0, -float(evals[0])) + 1.0
    lifted = test_op + shift * np.eye(dims.total)

    r_count = max(1, int(config.restarts))
    rng = np.random.default_rng(config.seed)
    psi = rng.normal(size=(r_count, d1, d2)) + 1j * rng.normal(size=(r_count, d1, d2))

    def truncate(stack):
        u, s, vh = np.linalg.svd(stack, full_matrices=False)
        s[:, r:] = 0.0
        out = np.einsum("zik,zk,zkj->zij", u, s, vh)
        norms = np.linalg.norm(out.reshape(r_count, -1), axis=1, keepdims=True)
        return out / norms.reshape(-1, 1, 1)

    psi = truncate(psi)
    prev = np.full(r_count, -np.inf)
    for _ in range(config.max_sweeps):
        vec = psi.reshape(r_count, -1)
        psi = truncate((vec @ lifted.T).reshape(r_count, d1, d2))
        vec = psi.reshape(r_count, -1)
        vals = np.real(np.einsum("zi,ij,zj->z", np.conj(vec), test_op, vec))
        if np.max(np.abs(vals - prev)) < 1e-13:
            prev = vals
            break
        prev = vals
    return float(prev.max())


# -- closed forms for the two benchmark scans --------------------------


def measurement_scan_min(p: float, q: float) -> float:
    """Exact product-state minimum of the dual swap witness for the
    two-outcome singlet-detector channel.

    The dual observable is a linear pencil in x = <singlet projector>, which
    ranges over [0, 1/2] on product states, so the minimum sits at an
    endpoint: min(1 - 2q, (1 - 3p)/4 + (1 - 2q)/2).
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise EntpowError(f"(p, q) = ({p}, {q}) outside the unit square")
    return min(1.0 - 2.0 * q, (1.0 - 3.0 * p) / 4.0 + (1.0 - 2.0 * q) / 2.0)


def _unitary_mix_gram(beta: np.ndarray, p: float, q: float):
    """2x2 quadratic form (in the first party's real amplitudes) whose top
    eigenvalue is the best expectation at fixed second-party angle beta."""
    b0, b1 = np.cos(beta), np.sin(beta)
    g00 = 0.5 * ((1 - p - q) * b0**2 + p * b0**2 + q * b1**2)
    g11 = 0.5 * ((1 - p - q) * b1**2 + p * b0**2 + q * b0**2)
    g01 = 0.5 * ((1 - p - q) * b0 * b1 + p * b0**2 + q * b0 * b1)
    return g00, g01, g11


def _unitary_mix_best(beta, p: float, q: float):
    g00, g01, g11 = _unitary_mix_gram(np.asarray(beta, dtype=float), p, q)
    tr = g00 + g11
    disc = np.sqrt(np.maximum((g00 - g11) ** 2 + 4.0 * g01**2, 0.0))
    return (tr + disc) / 2.0


def unitary_mix_scan_min(p: float, q: float, shift: float = 0.8) -> float:
    """Product-state minimum of ``shift*I - L`` pulled back through the
    identity/controlled-X/local-flip unitary mixture with weights
    (1-p-q, p, q).

    Real amplitudes suffice; maximizing over the first party analytically
    leaves a smooth single-angle problem, solved on a dense grid plus a
    bounded local refinement.
    """
    if not (0.0 <= p <= 1.0 + 1e-12 and 0.0 <= q <= 1.0 + 1e-12):
        raise EntpowError(f"(p, q) = ({p}, {q}) outside the unit square")
    if p + q > 1.0 + 1e-9:
        raise EntpowError(f"weights require p + q <= 1, got {p + q}")
    grid = np.linspace(0.0, np.pi, 721)
    best = _unitary_mix_best(grid, p, q)
    k = int(np.argmax(best))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = scipy.optimize.minimize_scalar(
        lambda b: -_unitary_mix_best(b, p, q),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    peak = max(float(best[k]), float(-res.fun))
    return shift - peak


class MixShiftResult(NamedTuple):
    lambda_prime: float
    witness: Witness  # the dual witness, rescaled by 1/p
    scale: float      # p: dual output equals scale * witness.operator


def mixing_shifted_dual(p: float, sigma, w: Witness) -> MixShiftResult:
    """Shifted form of the dual of a mixing channel on a shifted witness.

    For the channel ``rho -> p rho + (1-p) Tr(rho) sigma`` and W = lambda*I - L,
    the dual output is ``p * (lambda' I - L)`` with
    ``lambda' = lambda/p - ((1-p)/p) <L>_sigma``. Mixing with separable sigma
    can only raise the shift (never yields a finer witness).
    """
    if w.shifted is None:
        raise IncomparableWitnessError("witness must carry a shifted form")
    if not 0.0 < p <= 1.0:
        raise DimensionError(f"need 0 < p <= 1, got {p}")
    lam, test = w.shifted
    mean = float(np.real(np.trace(sigma.matrix @ test)))
    lam_prime = lam / p - (1.0 - p) / p * mean
    out = Witness.from_shift(lam_prime, test, w.dims, label="mixed_dual")
    return MixShiftResult(lam_prime, out, float(p))


def swap_witness(d: int) -> Witness:
    """The swap operator as a witness (zero on products, -1 on the singlet)."""
    from .tensor import swap_matrix

    return Witness(swap_matrix(d), DimList((d, d)), label="swap")


def default_witness_family(dims) -> list[Witness]:
    """Reference witnesses used by channel certification.

    Contains (in order): the swap witness for equal local dimensions, the
    fixed 4/5-shifted two-qubit benchmark, the lambda_min-shifted witnesses
    for each maximally entangled rank, and partial-transpose witnesses from
    maximally entangled (and, for two qubits, singlet) states.
    """
    dims = DimList.of(dims)
    dims.require_bipartite()
    d1, d2 = dims.dims
    dmin = min(d1, d2)
    family: list[Witness] = []
    if d1 == d2:
        family.append(swap_witness(d1))
    if (d1, d2) == (2, 2):
        phi = bell_states().phi_plus.projector()
        family.append(Witness.from_shift(0.8, phi, dims, label="benchmark_4/5"))
    for k in range(2, dmin + 1):
        if d1 == d2:
            proj = max_entangled(k, d1).projector()
        else:
            amps = np.zeros(d1 * d2, dtype=complex)
            for a in range(k):
                amps[a * d2 + a] = 1.0 / np.sqrt(k)
            proj = np.outer(amps, np.conj(amps))
        family.append(
            Witness.from_shift(1.0 / k, proj, dims, label=f"shifted_rank{k}")
        )
    if dmin >= 2:
        amps = np.zeros(d1 * d2, dtype=complex)
        for a in range(dmin):
            amps[a * d2 + a] = 1.0 / np.sqrt(dmin)
        family.append(ppt_witness_from_pure(PureState(amps, dims)))
    if (d1, d2) == (2, 2):
        family.append(ppt_witness_from_pure(bell_states().psi_minus))
    return family
