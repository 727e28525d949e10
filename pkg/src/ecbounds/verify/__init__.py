"""Finite-dimensional numerics used to test the bounds on random instances."""

from .channels import (KrausChannel, channel_ci, channel_ci_purified, channel_mi,
                       channel_mi_purified, complementary, erasure_channel, identity_channel,
                       purification, random_channel)
from .ensembles import DiscreteEnsemble, d0_distance, holevo, kantorovich, privacy, qc_state
from .states import (basis_state, check_state, cond_entropy, energy_cap, entropy,
                     maximally_entangled, mutual_information, partial_trace, perturb,
                     pure_state, qcmi, random_state, trace_distance)
from .suites import SuiteConfig, SuiteReport, run_suite, tightness_report
from .transport import transport_min_cost
