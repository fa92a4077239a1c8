"""Entangling-power analysis: Kraus structure, channel Schmidt measures,
and stochastic-non-entangling certificates.

A single Kraus operator preserves the set of product states exactly when it
has one of three structural forms: a simple tensor ``A (x) B``, a simple
tensor composed with a party permutation, or a rank-1 operator
``|chi_1, chi_2><Psi|`` whose column space is a product vector. Channels all
of whose Kraus operators (in some decomposition) take these forms cannot
create entanglement even stochastically; this module classifies operators,
searches decompositions, bounds the channel Schmidt number, and produces
replayable certificates.

Verdict semantics: "entangling" is backed either by a witness violation of
the full channel (a separable input provably maps to an entangled output) or
by a single Kraus operator of the *stored* decomposition mapping a product
input to an entangled conditional output. The latter speaks about the stored
decomposition; a different decomposition of the same channel may be free of
such operators. "stochastically_nonentangling" requires structural
classification of every operator in at least one decomposition; probe
evidence alone never certifies it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import KrausChannel, MeasurementChannel
from .errors import DimensionError, NotAWitnessError
from .states import ProductStateParam, PureState, schmidt_rank
from .tensor import DimList, as_matrix, numerical_rank, operator_schmidt
from .witnesses import (
    DEFAULT_CONFIG,
    TOL_WITNESS,
    OptimizerConfig,
    Witness,
    default_witness_family,
    is_witness,
    min_over_products,
)

FORM_TENSOR = "tensor_product"
FORM_PERMUTATION = "permutation_local"
FORM_RANK1 = "rank1_product"
FORM_UNKNOWN = "unknown"


@dataclass(frozen=True)
class ProbeConfig:
    """Knobs for the randomized searches in this module."""

    probes: int = 200
    refine_steps: int = 10
    remixings: int = 256
    seed: int = 0
    optimizer: OptimizerConfig = DEFAULT_CONFIG


DEFAULT_PROBES = ProbeConfig()


class ProbeViolation(NamedTuple):
    """A product input whose (normalized) image under one operator is entangled."""

    input: ProductStateParam
    image: PureState
    image_rank: int


@dataclass(frozen=True)
class KrausStructure:
    """Structural classification of a single Kraus operator.

    `factors` holds the per-party operators for the tensor and permutation
    forms, and the per-party *vectors* of the product column space for the
    rank-1 form (whose bra side is `right_vector`: M = |factors><right_vector|).
    """

    form: str
    factors: tuple[np.ndarray, ...] | None = None
    permutation: tuple[int, ...] | None = None
    right_vector: np.ndarray | None = None
    witness_violation: ProbeViolation | None = None

    @property
    def is_product_preserving(self) -> bool:
        return self.form in (FORM_TENSOR, FORM_PERMUTATION, FORM_RANK1)


def _unit_rows(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    v = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _image_svals(m: np.ndarray, a: np.ndarray, b: np.ndarray):
    """Singular values of the normalized images M(a (x) b), batched over rows."""
    d1, d2 = a.shape[1], b.shape[1]
    chi = np.einsum("pi,pj->pij", a, b).reshape(a.shape[0], -1)
    img = chi @ m.T
    norms = np.linalg.norm(img, axis=1)
    scale = max(float(np.linalg.norm(m)), 1.0)
    ok = norms > 1e-12 * scale
    svals = np.zeros((a.shape[0], min(d1, d2)))
    if np.any(ok):
        normalized = img[ok] / norms[ok, None]
        svals[ok] = np.linalg.svd(normalized.reshape(-1, d1, d2), compute_uv=False)
    return svals, img, norms


def _ascend_coefficient(m, d1, d2, a, b, target: int, steps: int, rng, eps0=0.3):
    """Local random ascent on the target-th Schmidt coefficient of the image."""
    def coeff(av, bv):
        s, _, norms = _image_svals(m, av[None, :], bv[None, :])
        return float(s[0, target]) if norms[0] > 0 else 0.0

    best = coeff(a, b)
    eps = eps0
    for _ in range(steps):
        da = rng.normal(size=d1) + 1j * rng.normal(size=d1)
        db = rng.normal(size=d2) + 1j * rng.normal(size=d2)
        a2 = a + eps * da
        a2 /= np.linalg.norm(a2)
        b2 = b + eps * db
        b2 /= np.linalg.norm(b2)
        val = coeff(a2, b2)
        if val > best:
            a, b, best = a2, b2, val
        else:
            eps *= 0.7
    return a, b, best


def _probe_bipartite(m, dims: DimList, config: ProbeConfig, stream: int):
    """Search product inputs for an entangled image; None when none found."""
    d1, d2 = dims.dims
    rng = np.random.default_rng((config.seed, stream))
    a = _unit_rows(rng, config.probes, d1)
    b = _unit_rows(rng, config.probes, d2)
    svals, img, norms = _image_svals(m, a, b)
    ranks = np.array([numerical_rank(s) for s in svals])
    best = int(np.argmax(ranks))
    if ranks[best] < 2 and config.refine_steps > 0:
        # push the second Schmidt coefficient of the most promising probe
        second = svals[:, 1] if svals.shape[1] > 1 else np.zeros(len(svals))
        cand = int(np.argmax(second))
        av, bv, _ = _ascend_coefficient(
            m, d1, d2, a[cand], b[cand], 1, config.refine_steps, rng
        )
        s, img1, n1 = _image_svals(m, av[None, :], bv[None, :])
        if n1[0] > 0 and numerical_rank(s[0]) >= 2:
            vec = img1[0] / n1[0]
            return ProbeViolation(
                ProductStateParam((av, bv)),
                PureState(vec, dims),
                numerical_rank(s[0]),
            )
        return None
    if ranks[best] < 2:
        return None
    vec = img[best] / norms[best]
    return ProbeViolation(
        ProductStateParam((a[best], b[best])),
        PureState(vec, dims),
        int(ranks[best]),
    )


def _probe_multiparty(m, dims: DimList, config: ProbeConfig, stream: int):
    """Probe-only product preservation test across all single-party cuts."""
    rng = np.random.default_rng((config.seed, stream))
    scale = max(float(np.linalg.norm(m)), 1.0)
    for _ in range(config.probes):
        param = ProductStateParam(
            tuple(_unit_rows(rng, 1, d)[0] for d in dims)
        )
        chi = param.assemble().amplitudes
        img = m @ chi
        nrm = np.linalg.norm(img)
        if nrm <= 1e-12 * scale:
            continue
        state = PureState(img / nrm, dims)
        worst = max(schmidt_rank(state, cut=(i,)) for i in range(dims.n))
        if worst >= 2:
            return ProbeViolation(param, state, worst)
    return None


def classify_kraus(m, dims, config: ProbeConfig | None = None) -> KrausStructure:
    """Classify one Kraus operator against the product-preserving forms.

    Bipartite operators get exact structural tests; with more than two
    parties only the randomized probe runs (with a warning). An `unknown`
    form with a stored `witness_violation` means the operator demonstrably
    creates entanglement from a product input.
    """
    config = config or DEFAULT_PROBES
    dims = DimList.of(dims)
    m = as_matrix(m)
    dims.check_matrix(m)
    if dims.n != 2:
        warnings.warn(
            "structural classification is bipartite-only; falling back to probes",
            stacklevel=2,
        )
        viol = _probe_multiparty(m, dims, config, stream=0)
        return KrausStructure(FORM_UNKNOWN, witness_violation=viol)

    d1, d2 = dims.dims
    dec = operator_schmidt(m, dims)
    if numerical_rank(dec.values) <= 1:
        s = float(dec.values[0]) if dec.values.size else 0.0
        factors = (np.sqrt(s) * dec.left[0], np.sqrt(s) * dec.right[0])
        return KrausStructure(FORM_TENSOR, factors=factors)

    if d1 == d2:
        from .tensor import swap_matrix

        cand = m @ swap_matrix(d1)
        dec2 = operator_schmidt(cand, dims)
        if numerical_rank(dec2.values) <= 1:
            s = float(dec2.values[0])
            factors = (np.sqrt(s) * dec2.left[0], np.sqrt(s) * dec2.right[0])
            return KrausStructure(FORM_PERMUTATION, factors=factors, permutation=(1, 0))

    u_m, s_m, vh_m = np.linalg.svd(m)
    if numerical_rank(s_m) == 1:
        left = u_m[:, 0]
        if schmidt_rank(PureState(left, dims)) == 1:
            amat = left.reshape(d1, d2)
            u2, s2, vh2 = np.linalg.svd(amat)
            factors = (s2[0] * u2[:, 0], vh2[0, :])
            right = float(s_m[0]) * np.conj(vh_m[0, :])
            return KrausStructure(FORM_RANK1, factors=factors, right_vector=right)

    viol = None
    if config.probes > 0:
        viol = _probe_bipartite(m, dims, config, stream=0)
    return KrausStructure(FORM_UNKNOWN, witness_violation=viol)


def _max_image_rank(m, dims: DimList, config: ProbeConfig, stream: int = 17):
    """Best product input found for maximizing the image Schmidt rank."""
    d1, d2 = dims.dims
    dmin = min(d1, d2)
    rng = np.random.default_rng((config.seed, stream))
    a = _unit_rows(rng, config.probes, d1)
    b = _unit_rows(rng, config.probes, d2)
    svals, img, norms = _image_svals(m, a, b)
    ranks = np.array([numerical_rank(s) for s in svals])
    best = int(np.argmax(ranks))
    rank = int(ranks[best])
    av, bv = a[best], b[best]
    while rank < dmin and config.refine_steps > 0:
        av2, bv2, gain = _ascend_coefficient(
            m, d1, d2, av, bv, rank, config.refine_steps, rng
        )
        s, _, n = _image_svals(m, av2[None, :], bv2[None, :])
        new_rank = numerical_rank(s[0]) if n[0] > 0 else 0
        if new_rank <= rank:
            break
        rank, av, bv = new_rank, av2, bv2
    return rank, ProductStateParam((av, bv))


def channel_schmidt_rank(m, dims, config: ProbeConfig | None = None) -> int:
    """Max Schmidt rank of ``M|chi>`` over product inputs, for one Kraus operator.

    Structurally product-preserving operators return 1 without search;
    otherwise the value is the best found by randomized probing with local
    refinement, hence a lower bound on the true maximum.
    """
    config = config or DEFAULT_PROBES
    dims = DimList.of(dims)
    dims.require_bipartite()
    m = as_matrix(m)
    dims.check_matrix(m)
    structure = classify_kraus(m, dims, ProbeConfig(probes=0, seed=config.seed))
    if structure.is_product_preserving:
        return 1
    rank, _ = _max_image_rank(m, dims, config)
    return max(1, rank)


@dataclass(frozen=True)
class ChannelSchmidtBounds:
    """Bracket on the channel Schmidt number (convex-roof over decompositions)."""

    lower: int
    upper: int
    method: str
    certificate: tuple[np.ndarray, ...] | None = None  # Kraus list achieving upper

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise DimensionError(
                f"invalid bounds: lower={self.lower}, upper={self.upper}"
            )


@dataclass(frozen=True)
class Violation:
    """One replayable piece of entangling evidence."""

    kind: str  # "witness" (full channel) | "stochastic" (single stored Kraus op)
    witness: Witness
    input: ProductStateParam
    value: float
    kraus_index: int | None = None


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "stochastically_nonentangling" | "entangling" | "inconclusive"
    violations: tuple[Violation, ...] = ()
    structures: tuple[KrausStructure, ...] | None = None
    note: str = ""


def replay_violations(cert: Certificate, ch: KrausChannel) -> list[float]:
    """Recompute each stored violation value from its stored witness and input."""
    out = []
    for v in cert.violations:
        chi = v.input.assemble().amplitudes
        if v.kind == "witness":
            dual = ch.dual_apply(v.witness.operator)
            out.append(float(np.real(np.conj(chi) @ dual @ chi)))
        else:
            img = ch.kraus[v.kraus_index] @ chi
            img = img / np.linalg.norm(img)
            out.append(float(np.real(np.conj(img) @ v.witness.operator @ img)))
    return out


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _remix_unitaries(n: int, count: int, rng: np.random.Generator):
    """Candidate unitaries on the Kraus index: DFT first, then Haar samples.

    The DFT un-mixes discrete interference patterns (e.g. sums/differences of
    product operators) that Haar sampling hits with probability zero.
    """
    jk = np.outer(np.arange(n), np.arange(n))
    yield np.exp(-2j * np.pi * jk / n) / np.sqrt(n)
    for _ in range(count):
        yield _haar_unitary(n, rng)


def _stochastic_violation(
    index: int, dims: DimList, probe: ProbeViolation
) -> Violation | None:
    """Package a probe hit as a replayable shifted-witness violation.

    The witness is ``c0^2 I - |image><image|`` whose separable maximum is
    exactly the largest squared Schmidt coefficient of the image; its value
    on the image, c0^2 - 1, is negative for any genuinely entangled image.
    """
    from .states import schmidt_decompose

    dec = schmidt_decompose(probe.image)
    c0sq = float(dec.coefficients[0] ** 2)
    value = c0sq - 1.0
    if value > -TOL_WITNESS:
        return None
    w = Witness.from_shift(
        c0sq, probe.image.projector(), dims, label=f"image_shift[{index}]"
    )
    return Violation(
        kind="stochastic", witness=w, input=probe.input, value=value, kraus_index=index
    )


def detect_entangling(
    ch: KrausChannel, w: Witness, config: ProbeConfig | None = None
) -> Certificate:
    """Witness test for entanglement generation by the full channel.

    Minimizes the pulled-back witness over product inputs. A value at or
    below -1e-8 certifies an entangling channel (with the violating input
    stored); otherwise the result is inconclusive — one witness proving
    nothing is expected, not exceptional.
    """
    config = config or DEFAULT_PROBES
    check = is_witness(w, config.optimizer)
    if not check.is_witness:
        raise NotAWitnessError(
            f"operator is not a witness (separable minimum {check.result.value})"
        )
    dual = ch.dual_apply(w.operator)
    res = min_over_products(dual, ch.dims, config.optimizer)
    if res.value <= -TOL_WITNESS:
        v = Violation(kind="witness", witness=w, input=res.argument, value=res.value)
        return Certificate("entangling", violations=(v,))
    return Certificate(
        "inconclusive",
        note="no violation for this witness; this proves nothing about the channel",
    )


def certify_kraus_channel(
    ch: KrausChannel,
    config: ProbeConfig | None = None,
    witnesses: list[Witness] | None = None,
) -> Certificate:
    """Three-way certificate: SNE / entangling / inconclusive.

    SNE requires every Kraus operator of the stored list — or of one of the
    sampled unitary remixings — to classify structurally. The entangling
    verdict needs replayable evidence: a witness violation of the full
    channel, or a stored Kraus operator probed into mapping a product input
    to an entangled conditional output. Precedence matters: probe evidence
    speaks only about the stored decomposition, and a channel whose stored
    operators entangle can still admit a product-preserving remixing, so the
    remixing search runs before probe-only evidence is allowed to decide.
    (A witness violation needs no such care — it certifies that the channel
    itself entangles some product input, which no decomposition can undo.)
    """
    config = config or DEFAULT_PROBES
    ch.dims.require_bipartite()
    no_probe = ProbeConfig(probes=0, seed=config.seed)
    structures = tuple(classify_kraus(m, ch.dims, no_probe) for m in ch.kraus)
    if all(s.is_product_preserving for s in structures):
        return Certificate(
            "stochastically_nonentangling",
            structures=structures,
            note="every stored Kraus operator is product-preserving",
        )

    def probe_evidence() -> list[Violation]:
        found = []
        for i, (m, s) in enumerate(zip(ch.kraus, structures)):
            if s.is_product_preserving:
                continue
            probe = _probe_bipartite(m, ch.dims, config, stream=i + 1)
            if probe is not None:
                v = _stochastic_violation(i, ch.dims, probe)
                if v is not None:
                    found.append(v)
        return found

    violations: list[Violation] = []
    family = default_witness_family(ch.dims) if witnesses is None else witnesses
    for w in family:
        dual = ch.dual_apply(w.operator)
        res = min_over_products(dual, ch.dims, config.optimizer)
        if res.value <= -TOL_WITNESS:
            violations.append(
                Violation(kind="witness", witness=w, input=res.argument, value=res.value)
            )
    if violations:
        violations.extend(probe_evidence())  # enrich the certificate
        return Certificate("entangling", violations=tuple(violations), structures=structures)

    rng = np.random.default_rng((config.seed, 999))
    stack = np.stack(ch.kraus)
    for u in _remix_unitaries(len(ch.kraus), config.remixings, rng):
        remixed = np.einsum("ij,jkl->ikl", u, stack)
        # classify lazily: generic remixes fail on their first operator
        if all(
            classify_kraus(mm, ch.dims, no_probe).is_product_preserving
            for mm in remixed
        ):
            rs = tuple(classify_kraus(mm, ch.dims, no_probe) for mm in remixed)
            return Certificate(
                "stochastically_nonentangling",
                structures=rs,
                note="a sampled remixing of the Kraus list is product-preserving",
            )

    violations = probe_evidence()
    if violations:
        return Certificate(
            "entangling",
            violations=tuple(violations),
            structures=structures,
            note="evidence is stochastic: a stored Kraus operator entangles a "
            "product input, and no product-preserving remixing was found",
        )
    return Certificate(
        "inconclusive",
        structures=structures,
        note="structural classification incomplete and no violation found",
    )


def _replacement_target(ch: KrausChannel):
    """The fixed output of a constant channel rho -> Tr(E rho) |phi><phi|, if any."""
    if isinstance(ch, MeasurementChannel) and len(ch.effects) == 1:
        out = ch.outputs[0]
        if abs(out.purity() - out.trace**2) < 1e-9:
            from .states import pure_from_density

            return pure_from_density(out)
        return None
    # structural fallback: every operator rank one with a common column space
    ref = None
    for m in ch.kraus:
        u, s, _ = np.linalg.svd(m)
        if numerical_rank(s) != 1:
            return None
        col = u[:, 0]
        if ref is None:
            ref = col
        elif abs(abs(np.vdot(ref, col)) - 1.0) > 1e-9:
            return None
    return PureState(ref, ch.dims) if ref is not None else None


def channel_schmidt_number_bounds(
    ch: KrausChannel, config: ProbeConfig | None = None
) -> ChannelSchmidtBounds:
    """Bracket the convex-roof channel Schmidt number.

    The upper bound is the best (smallest) max-over-operators image rank over
    sampled unitary remixings of the Kraus list — a heuristic search, reported
    as such. Replacement channels short-circuit to their exact value; an
    entangling certificate raises the lower bound to 2.
    """
    config = config or DEFAULT_PROBES
    ch.dims.require_bipartite()

    target = _replacement_target(ch)
    if target is not None:
        r = schmidt_rank(target)
        return ChannelSchmidtBounds(
            lower=r,
            upper=r,
            method="replacement channel: exact rank of the fixed output",
            certificate=tuple(ch.kraus),
        )

    def decomposition_rank(ops, stop_at: int | None = None) -> int:
        worst = 1
        for mm in ops:
            worst = max(worst, channel_schmidt_rank(mm, ch.dims, config))
            if stop_at is not None and worst >= stop_at:
                break  # cannot improve on the incumbent decomposition
        return worst

    upper = decomposition_rank(ch.kraus)
    best_ops = tuple(ch.kraus)
    method = "stored decomposition"
    if upper > 1:
        rng = np.random.default_rng((config.seed, 1000))
        stack = np.stack(ch.kraus)
        for u in _remix_unitaries(len(ch.kraus), config.remixings, rng):
            remixed = np.einsum("ij,jkl->ikl", u, stack)
            cand = decomposition_rank(remixed, stop_at=upper)
            if cand < upper:
                upper = cand
                best_ops = tuple(remixed)
                method = "best sampled unitary remixing (heuristic upper bound)"
                if upper == 1:
                    break

    lower = 1
    if upper > 1:
        cert = certify_kraus_channel(ch, config)
        if cert.verdict == "entangling":
            lower = 2
    upper = max(upper, lower)
    return ChannelSchmidtBounds(
        lower=lower, upper=upper, method=method, certificate=best_ops
    )


@dataclass(frozen=True)
class ThresholdReport:
    """Separability threshold for the rank-boost channel parameters."""

    verdict: str  # "nonentangling_certified" | "unknown"
    coeff_product: float
    bound: float
    p_max: float       # largest measurement weight compatible with separability
    effect_bound: float

    @property
    def certified(self) -> bool:
        return self.verdict == "nonentangling_certified"


def nonentangling_threshold(k: int, d: int, schmidt_coeffs) -> ThresholdReport:
    """Certify non-entanglement of the rank-boost channel by the coefficient test.

    The channel is provably non-entangling when the product of the two
    largest Schmidt coefficients of its pure output stays within
    ``(k - 1)/d^2``. Above the bound nothing is claimed ("unknown").
    """
    coeffs = np.asarray(schmidt_coeffs, dtype=float)
    if not 2 <= k <= d:
        raise DimensionError(f"need 2 <= k <= d, got k={k}, d={d}")
    if coeffs.shape != (d,) or np.any(coeffs <= 0) or np.any(np.diff(coeffs) > 1e-12):
        raise DimensionError("coefficients must be positive, non-increasing, length d")
    if abs(float(np.sum(coeffs**2)) - 1.0) > 1e-9:
        raise DimensionError("squared coefficients must sum to 1")
    product = float(coeffs[0] * coeffs[1])
    bound = (k - 1) / d**2
    verdict = "nonentangling_certified" if product <= bound + 1e-12 else "unknown"
    return ThresholdReport(
        verdict=verdict,
        coeff_product=product,
        bound=bound,
        p_max=1.0 / (1.0 + d**2 * product),
        effect_bound=1.0 / k,
    )


def entanglement_annihilating_check(
    ch: KrausChannel, witnesses: list[Witness], config: ProbeConfig | None = None
) -> bool:
    """PSD test of the dual on sampled witnesses.

    True means every sampled witness pulls back to a PSD operator — evidence
    (not proof) that every channel output is separable.
    """
    for w in witnesses:
        dual = ch.dual_apply(w.operator)
        dual = (dual + np.conj(dual.T)) / 2.0
        if np.linalg.eigvalsh(dual)[0] < -1e-10:
            return False
    return True
