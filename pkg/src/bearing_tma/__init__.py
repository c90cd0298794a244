"""Bearing-only target motion analysis with recursive total least squares."""
from .batch_tls import EivBatch, gtls_correction, solve_gtls, solve_wls
from .circumnav import CircumnavConfig, bearing_directions, control
from .exceptions import (DegenerateGeometryError, InvalidWeightError, NonUniqueSolutionError,
                         PivotDegenerateError, RankDeficientError, SaturationError, TmaError)
from .harness import (EnsembleSummary, SweepResult, TrialConfig, TrialRecord, run_monte_carlo,
                      run_noise_sweep, run_trial)
from .model import (NoiseConfig, NoiseStreams, ObserverState, SimClock, TmaParams,
                    measure_bearing, measure_observer_position, observer_step,
                    target_position, true_bearing)
from .plkf import PlkfConfig, PlkfState, plkf_init, plkf_predict, plkf_update
from .pseudo_linear import PseudoRow, basis_M, build_row, make_row, row_covariances
from .rtls import RtlsConfig, RtlsState, rtls_init, rtls_recover, rtls_update

__version__ = "0.1.0"
