"""Two-state experiments: co-evolved distance/correlator pairs and the
echo under a perturbed kick strength.

Each partner evolves under its own density-dependent kick (the map is
nonlinear, so the two states see different one-period operators), and the
overlap-type observables are recorded from independently evolved data at
every kick.
"""

from __future__ import annotations

from dataclasses import replace

from .evolution import (
    DEFAULT_GUARDS,
    EvolutionGuards,
    NormOverflowError,
    Trajectory,
    TruncationError,
    floquet_step,
)
from .grid import ModelParams
from .observables import _clamp_unit, distance, fidelity, fotoc, measure
from .state import WaveState, translate


def _run_pair(
    psi: WaveState,
    phi: WaveState,
    params_psi: ModelParams,
    params_phi: ModelParams,
    n_kicks: int,
    guards: EvolutionGuards,
    record_pair,
) -> Trajectory:
    """Step two states in lockstep; record_pair(psi, phi, kick, flag) builds rows."""
    if n_kicks < 0:
        raise ValueError(f"n_kicks must be >= 0, got {n_kicks}")
    records = [record_pair(psi, phi, 0, None)]
    for kick in range(1, n_kicks + 1):
        reason = None
        try:
            psi_new = floquet_step(psi, params_psi, guards)
        except TruncationError as err:
            psi_new, reason = err.state, "truncation"
        except NormOverflowError:
            psi_new, reason = None, "overflow"
        phi_new = None
        if reason != "overflow":
            try:
                phi_new = floquet_step(phi, params_phi, guards)
            except TruncationError as err:
                phi_new, reason = err.state, "truncation"
            except NormOverflowError:
                phi_new, reason = None, "overflow"
        if reason == "overflow":
            records[-1] = replace(records[-1], terminated="overflow")
            return Trajectory(
                params_psi, guards, tuple(records), psi, partner_state=phi,
                terminated="overflow", terminated_at=kick,
            )
        psi, phi = psi_new, phi_new
        records.append(record_pair(psi, phi, kick, reason))
        if reason is not None:
            return Trajectory(
                params_psi, guards, tuple(records), psi, partner_state=phi,
                terminated=reason, terminated_at=kick,
            )
    return Trajectory(params_psi, guards, tuple(records), psi, partner_state=phi)


def run_pair_experiment(
    initial: WaveState,
    params: ModelParams,
    epsilon: float,
    n_kicks: int,
    guards: EvolutionGuards = DEFAULT_GUARDS,
) -> Trajectory:
    """Co-evolve a state and its translate, recording distance and correlator.

    The partner starts as the back-translated initial state; per kick the
    records carry both the two-state distance and 1 minus the correlator
    of the primary state, computed along independent code paths (partner
    evolution versus direct translation of the evolved state).
    """
    if epsilon == 0.0:
        raise ValueError("epsilon must be nonzero for a meaningful distance")
    phi0 = translate(initial, -epsilon)

    def record_pair(psi, phi, kick, flag):
        return measure(
            psi, params, kick,
            distance=distance(psi, phi),
            one_minus_fotoc=_clamp_unit(1.0 - fotoc(psi, epsilon)),
            terminated=flag,
        )

    return _run_pair(initial, phi0, params, params, n_kicks, guards, record_pair)


def run_loschmidt_experiment(
    initial: WaveState,
    params: ModelParams,
    g_perturbation: float,
    n_kicks: int,
    guards: EvolutionGuards = DEFAULT_GUARDS,
) -> Trajectory:
    """Evolve the same initial state under g and g + g_perturbation.

    Records 1 minus the echo (the normalised squared overlap of the two
    branches) per kick.  A zero perturbation is allowed and yields a
    trivially constant echo of 1.
    """
    params_pert = replace(params, g=params.g + g_perturbation)

    def record_pair(psi, phi, kick, flag):
        return measure(
            psi, params, kick,
            one_minus_le=_clamp_unit(1.0 - fidelity(phi, psi)),
            terminated=flag,
        )

    return _run_pair(initial, initial, params, params_pert, n_kicks, guards, record_pair)
