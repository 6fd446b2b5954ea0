"""Ready-made simulations from the canonical initial states.

``run_full`` starts the bosonic model with every particle in the lower band;
``run_spin`` starts the spin chain with every spin down. Both return a
``TimeSeries`` whose metadata carries the parameters needed to rerun it.
"""

from __future__ import annotations

import math

from .fock import initial_state_lower_band
from .hamiltonian import BosonicHamiltonian, SpinHamiltonian
from .params import ModelParams, derive_parameters
from .propagate import TimeSeries, default_dt, evolve
from .spin import predict_revival_time, revival_time_from_interaction
from .states import all_down_state

__all__ = ["run_full", "run_spin", "spin_samples_per_resonance", "DEFAULT_SPAN"]

# runs cover this multiple of the predicted revival time by default
DEFAULT_SPAN = 1.3
spin_samples_per_resonance = 32


def _default_t_final(t_rev: float) -> float:
    if not math.isfinite(t_rev):
        raise ValueError("predicted revival time is infinite; pass t_final explicitly")
    return DEFAULT_SPAN * t_rev


def _whole_samples(t_final: float, dt: float, sample_every: int) -> float:
    # extend to the next sample so the series really reaches t_final
    block = dt * sample_every
    return math.ceil(t_final / block - 1e-9) * block


def run_full(
    params: ModelParams,
    t_final: float | None = None,
    dt: float | None = None,
    sample_every: int | None = None,
    **kwargs,
) -> TimeSeries:
    """Full two-band model; by default sampled once per Bloch period."""
    h = BosonicHamiltonian(params)
    t_rev = predict_revival_time(params)
    if t_final is None:
        t_final = _default_t_final(t_rev)
    if dt is None:
        dt = default_dt(h)
    if sample_every is None:
        sample_every = max(1, round(h.period / dt))
    t_final = _whole_samples(t_final, dt, sample_every)
    ts, _ = evolve(h, initial_state_lower_band(h.basis), t_final, dt, sample_every, **kwargs)
    rule = "uniform" if params.N % params.L == 0 else "left_aligned"
    ts.meta.update(model="full", t_rev_predicted=t_rev, initial_state=f"lower_band_{rule}")
    ts.meta.update({f"param.{k}": v for k, v in params.as_dict().items()})
    return ts


def run_spin(
    params: ModelParams | None = None,
    *,
    L: int | None = None,
    m: int | None = None,
    V_m: float | None = None,
    U: float | None = None,
    t_final: float | None = None,
    dt: float | None = None,
    sample_every: int | None = None,
    **kwargs,
) -> TimeSeries:
    """Spin chain from ``params`` (couplings derived) or explicit couplings.

    Keyword values override the ones derived from ``params``. The default
    sampling interval is about T_res / 32.
    """
    if params is not None:
        d = derive_parameters(params)
        L = params.L if L is None else L
        m = params.m if m is None else m
        V_m = d.V_m if V_m is None else V_m
        U = d.U if U is None else U
    if L is None or V_m is None or U is None:
        raise ValueError("run_spin needs params or explicit L, V_m and U")
    m = 1 if m is None else m
    h = SpinHamiltonian(L, m, V_m, U)
    t_rev = revival_time_from_interaction(L, U)
    if t_final is None:
        t_final = _default_t_final(t_rev)
    if dt is None:
        dt = default_dt(h)
    if sample_every is None:
        t_res = math.pi / abs(V_m)
        sample_every = max(1, round(t_res / spin_samples_per_resonance / dt))
    t_final = _whole_samples(t_final, dt, sample_every)
    ts, _ = evolve(h, all_down_state(L), t_final, dt, sample_every, **kwargs)
    ts.meta.update(model="spin", t_rev_predicted=t_rev, L=L, m=m, V_m=V_m, U=U)
    if params is not None:
        ts.meta.update({f"param.{k}": v for k, v in params.as_dict().items()})
    return ts
