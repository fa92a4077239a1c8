"""Quantum channels in Kraus form, their duals, and Choi matrices.

A channel acts as ``rho -> sum_j M_j rho M_j^dag``; its dual (Heisenberg
picture) acts on observables as ``O -> sum_j M_j^dag O M_j``, so that
``Tr(dual(O) rho) == Tr(O apply(rho))``. Input and output spaces are kept
equal: every channel here is square.

Besides raw Kraus lists, constructors are provided for the channel families
used throughout the package: measurement channels ``rho -> sum_j
Tr(E_j rho) rho_j``, random-unitary mixtures, mixing with a fixed state,
replacement channels, and the rank-boosting measurement channel whose single
selected outcome turns a maximally entangled input into a chosen pure state.

The Choi matrix follows the trace-1 state convention: one reference party per
system party, ``J = (id (x) channel)`` applied to the projector onto
``|Omega> = (1/sqrt(D)) sum_i |i>_R |i>_S``. Parties are ordered references
first, then systems: (R1..Rn, S1..Sn).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .states import DensityMatrix, PureState, pure_from_density
from .tensor import DimList, as_matrix, dagger, kron, swap_matrix

TP_ATOL = 1e-10
_EIG_CUTOFF = 1e-14


class KrausChannel:
    """A completely positive map given by an explicit Kraus operator list.

    Parameters
    ----------
    kraus : sequence of square complex matrices, all of shape (D, D) where
        D is the product of `dims`.
    dims : per-party dimensions of the (shared) input/output space.
    label : optional display name.
    """

    def __init__(self, kraus, dims, label: str = ""):
        dims = DimList.of(dims)
        ops = tuple(as_matrix(m) for m in kraus)
        if not ops:
            raise DimensionError("a channel needs at least one Kraus operator")
        for m in ops:
            dims.check_matrix(m)
        self.kraus = ops
        self.dims = dims
        self.label = label
        acc = sum(dagger(m) @ m for m in ops)
        self._tp_residual = float(np.max(np.abs(acc - np.eye(dims.total))))

    @property
    def is_trace_preserving(self) -> bool:
        return self._tp_residual <= TP_ATOL

    def __repr__(self):
        name = self.label or type(self).__name__
        return f"<{name}: {len(self.kraus)} Kraus ops on dims {self.dims.dims}>"

    # -- the three fundamental maps ------------------------------------

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        """Schroedinger action on a raw matrix (no state validation)."""
        rho = as_matrix(rho)
        self.dims.check_matrix(rho)
        out = np.zeros_like(rho)
        for m in self.kraus:
            out += m @ rho @ dagger(m)
        return out

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        """Apply the channel to a state.

        The output is flagged sub-normalized unless the channel is
        trace-preserving and the input was normalized.
        """
        if rho.dims.dims != self.dims.dims:
            raise DimensionError(
                f"state dims {rho.dims.dims} do not match channel dims {self.dims.dims}"
            )
        out = self.apply_matrix(rho.matrix)
        sub = rho.subnormalized or not self.is_trace_preserving
        return DensityMatrix(out, self.dims, subnormalized=sub)

    def dual_apply(self, obs: np.ndarray) -> np.ndarray:
        """Heisenberg action on an observable: sum_j M_j^dag obs M_j."""
        obs = as_matrix(obs)
        self.dims.check_matrix(obs)
        out = np.zeros_like(obs)
        for m in self.kraus:
            out += dagger(m) @ obs @ m
        return out

    def choi(self) -> "ChoiMatrix":
        """Choi state of the channel (references first, trace-1 convention)."""
        d = self.dims.total
        j = np.zeros((d * d, d * d), dtype=complex)
        for m in self.kraus:
            v = m.T.reshape(-1) / np.sqrt(d)  # (I (x) M)|Omega>
            j += np.outer(v, np.conj(v))
        # trace = Tr(sum M^dag M)/d, which is 1 exactly when trace-preserving
        state = DensityMatrix(
            j,
            DimList(self.dims.dims + self.dims.dims),
            subnormalized=not self.is_trace_preserving,
        )
        return ChoiMatrix(state, n_parties=self.dims.n)


class ChoiMatrix:
    """Choi state with its reference/system party bookkeeping."""

    def __init__(self, state: DensityMatrix, n_parties: int):
        if state.dims.n != 2 * n_parties:
            raise DimensionError("Choi state must have one reference per system party")
        self.state = state
        self.n_parties = n_parties

    @property
    def ref_parties(self) -> tuple[int, ...]:
        return tuple(range(self.n_parties))

    @property
    def sys_parties(self) -> tuple[int, ...]:
        return tuple(range(self.n_parties, 2 * self.n_parties))

    def pure_state(self) -> PureState:
        """The Choi vector, when the Choi matrix is rank one."""
        return pure_from_density(self.state)


def choi_apply(choi: ChoiMatrix, rho: np.ndarray) -> np.ndarray:
    """Reconstruct the channel action from the Choi state.

    Standard contraction: ``D * Tr_R[(rho^T (x) I) J]``.
    """
    from .tensor import partial_trace

    rho = as_matrix(rho)
    d = int(round(np.sqrt(choi.state.dims.total)))
    if rho.shape != (d, d):
        raise DimensionError(f"input shape {rho.shape} does not match Choi system dim {d}")
    big = kron(rho.T, np.eye(d)) @ choi.state.matrix
    return d * partial_trace(big, choi.state.dims, keep=choi.sys_parties)


def _eig_pairs(mat: np.ndarray, cutoff: float = _EIG_CUTOFF):
    """Eigenvalue/eigenvector pairs of a Hermitian matrix above a cutoff."""
    evals, evecs = np.linalg.eigh(mat)
    return [(float(w), evecs[:, i]) for i, w in enumerate(evals) if w > cutoff]


class MeasurementChannel(KrausChannel):
    """``rho -> sum_j Tr(E_j rho) rho_j`` for a POVM {E_j} and fixed outputs.

    The stored Kraus operators are ``sqrt(r_i e_m) |u_i><f_m|`` built from the
    eigenbases of the outputs and effects, which gives the structural analysis
    a concrete decomposition to classify; `apply`/`dual_apply` use the closed
    form directly for numerical stability.
    """

    def __init__(self, effects, outputs, dims=None, label: str = "measurement"):
        effects = [as_matrix(e) for e in effects]
        if not effects:
            raise DimensionError("need at least one effect")
        if dims is None:
            raise DimensionError("measurement_channel requires explicit dims")
        dims = DimList.of(dims)
        outs = []
        for o in outputs:
            if isinstance(o, DensityMatrix):
                outs.append(o)
            else:
                outs.append(DensityMatrix(as_matrix(o), dims))
        if len(effects) != len(outs):
            raise DimensionError(
                f"{len(effects)} effects but {len(outs)} outputs"
            )
        total = np.zeros((dims.total, dims.total), dtype=complex)
        for j, e in enumerate(effects):
            dims.check_matrix(e)
            if np.max(np.abs(e - dagger(e))) > 1e-10:
                raise DimensionError(f"effect {j} is not Hermitian")
            if np.linalg.eigvalsh(e)[0] < -1e-10:
                raise DimensionError(f"effect {j} is not positive semidefinite")
            total += e
        if np.max(np.abs(total - np.eye(dims.total))) > TP_ATOL:
            raise DimensionError("effects do not sum to the identity (POVM completeness)")
        kraus = []
        for e, out in zip(effects, outs):
            for r_i, u in _eig_pairs(out.matrix):
                for e_m, f in _eig_pairs(e):
                    kraus.append(np.sqrt(r_i * e_m) * np.outer(u, np.conj(f)))
        super().__init__(kraus, dims, label=label)
        self.effects = tuple(effects)
        self.outputs = tuple(outs)

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        rho = as_matrix(rho)
        self.dims.check_matrix(rho)
        out = np.zeros_like(rho)
        for e, o in zip(self.effects, self.outputs):
            out += np.trace(e @ rho) * o.matrix
        return out

    def dual_apply(self, obs: np.ndarray) -> np.ndarray:
        obs = as_matrix(obs)
        self.dims.check_matrix(obs)
        out = np.zeros_like(obs)
        for e, o in zip(self.effects, self.outputs):
            out += np.trace(o.matrix @ obs) * e
        return out


def measurement_channel(effects, outputs, dims) -> MeasurementChannel:
    """Build a measurement channel from a POVM and its per-outcome outputs."""
    return MeasurementChannel(effects, outputs, dims)


class RandomUnitaryChannel(KrausChannel):
    """Convex mixture of unitary conjugations: ``rho -> sum_a p_a U_a rho U_a^dag``."""

    def __init__(self, unitaries, probabilities, dims, label: str = "random_unitary"):
        unitaries = [as_matrix(u) for u in unitaries]
        probs = np.asarray(probabilities, dtype=float)
        if len(unitaries) != probs.shape[0]:
            raise DimensionError(
                f"{len(unitaries)} unitaries but {probs.shape[0]} probabilities"
            )
        if np.any(probs < -1e-12):
            raise DimensionError(f"negative probability in {probs.tolist()}")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise DimensionError(f"probabilities sum to {probs.sum()}, not 1")
        dims = DimList.of(dims)
        for a, u in enumerate(unitaries):
            dims.check_matrix(u)
            if np.max(np.abs(dagger(u) @ u - np.eye(dims.total))) > 1e-10:
                raise DimensionError(f"operator {a} is not unitary")
        kraus = [
            np.sqrt(p) * u for p, u in zip(probs, unitaries) if p > _EIG_CUTOFF
        ]
        super().__init__(kraus, dims, label=label)
        self.unitaries = tuple(unitaries)
        self.probabilities = tuple(float(p) for p in probs)


def random_unitary_channel(unitaries, probabilities, dims) -> RandomUnitaryChannel:
    """Build a random-unitary (mixed-unitary) channel."""
    return RandomUnitaryChannel(unitaries, probabilities, dims)


class MixingChannel(KrausChannel):
    """``rho -> p rho + (1-p) Tr(rho) sigma`` for a fixed state sigma."""

    def __init__(self, p: float, sigma: DensityMatrix, label: str = "mixing"):
        if not 0.0 <= p <= 1.0:
            raise DimensionError(f"mixing probability {p} outside [0, 1]")
        dims = sigma.dims
        kraus = []
        if p > _EIG_CUTOFF:
            kraus.append(np.sqrt(p) * np.eye(dims.total, dtype=complex))
        if 1.0 - p > _EIG_CUTOFF:
            basis = np.eye(dims.total, dtype=complex)
            for r_i, u in _eig_pairs(sigma.matrix):
                for m in range(dims.total):
                    kraus.append(
                        np.sqrt((1.0 - p) * r_i) * np.outer(u, np.conj(basis[:, m]))
                    )
        super().__init__(kraus, dims, label=label)
        self.p = float(p)
        self.sigma = sigma

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        rho = as_matrix(rho)
        self.dims.check_matrix(rho)
        return self.p * rho + (1.0 - self.p) * np.trace(rho) * self.sigma.matrix

    def dual_apply(self, obs: np.ndarray) -> np.ndarray:
        obs = as_matrix(obs)
        self.dims.check_matrix(obs)
        shift = np.trace(self.sigma.matrix @ obs)
        return self.p * obs + (1.0 - self.p) * shift * np.eye(self.dims.total)


def mixing_channel(p: float, sigma: DensityMatrix) -> MixingChannel:
    """Mix the identity channel with replacement by `sigma`."""
    return MixingChannel(p, sigma)


class RankBoostChannel(MeasurementChannel):
    """Two-outcome measurement channel that boosts Schmidt rank.

    Effects are the projector onto the rank-k maximally entangled state and
    its complement; the first outcome emits the pure state
    ``|psi> = sum_b c_b |bb>`` (all d coefficients positive), the second the
    maximally mixed state. Feeding in the rank-k maximally entangled state
    returns exactly ``|psi><psi|``, whose Schmidt rank is d.
    """

    def __init__(self, k: int, d: int, schmidt_coeffs):
        from .states import max_entangled

        coeffs = np.asarray(schmidt_coeffs, dtype=float)
        if not 2 <= k <= d:
            raise DimensionError(f"need 2 <= k <= d, got k={k}, d={d}")
        if coeffs.shape != (d,):
            raise DimensionError(
                f"need exactly d={d} Schmidt coefficients, got shape {coeffs.shape}"
            )
        if np.any(coeffs <= 0):
            raise DimensionError("all Schmidt coefficients must be positive")
        if np.any(np.diff(coeffs) > 1e-12):
            raise DimensionError("Schmidt coefficients must be non-increasing")
        if abs(float(np.sum(coeffs**2)) - 1.0) > 1e-9:
            raise DimensionError("squared Schmidt coefficients must sum to 1")
        dims = DimList((d, d))
        phi = max_entangled(k, d)
        psi = np.zeros(d * d, dtype=complex)
        for b in range(d):
            psi[b * d + b] = coeffs[b]
        e0 = phi.projector()
        effects = [e0, np.eye(d * d) - e0]
        outputs = [
            DensityMatrix(np.outer(psi, np.conj(psi)), dims),
            DensityMatrix(np.eye(d * d) / (d * d), dims),
        ]
        super().__init__(effects, outputs, dims, label="rank_boost")
        self.k = int(k)
        self.d = int(d)
        self.schmidt_coeffs = tuple(float(c) for c in coeffs)
        self.output_state = PureState(psi, dims)


def rank_boost_channel(k: int, d: int, schmidt_coeffs) -> RankBoostChannel:
    """Measurement channel with effects {phi+_k, 1 - phi+_k} and outputs
    {|psi><psi|, 1/d^2}; non-entangling iff the top two Schmidt coefficients
    of psi are small enough (see `entpow.power.nonentangling_threshold`)."""
    return RankBoostChannel(k, d, schmidt_coeffs)


def identity_channel(dims) -> KrausChannel:
    dims = DimList.of(dims)
    return KrausChannel([np.eye(dims.total, dtype=complex)], dims, label="identity")


def unitary_channel(u, dims, label: str = "unitary") -> RandomUnitaryChannel:
    return RandomUnitaryChannel([u], [1.0], dims, label=label)


def swap_channel(d: int) -> RandomUnitaryChannel:
    """Unitary channel conjugating by the swap of two d-dimensional parties."""
    return unitary_channel(swap_matrix(d), (d, d), label="swap")


def replacement_channel(target: DensityMatrix | PureState) -> MeasurementChannel:
    """Constant channel ``rho -> Tr(rho) target``."""
    if isinstance(target, PureState):
        target = target.density()
    dims = target.dims
    ch = MeasurementChannel(
        [np.eye(dims.total, dtype=complex)], [target], dims, label="replacement"
    )
    return ch
