"""Kraus error channels and Bell-state error models"""

from .bell import (
    BELL_LABELS,
    ErrorParams,
    bell_decomposition,
    bell_state,
    canonical_bell_label,
    combined_error_bell,
    combined_error_matrix,
    combined_error_min_eigenvalue,
    one_sided_bell_error,
)
from .idle import (
    damping_probability,
    dephasing_probability,
    idle_channels,
    quasi_static_dephasing_probability,
    storage_decay,
)
from .kraus import (
    ChannelKind,
    ChannelReport,
    KrausChannel,
    apply_channel,
    apply_channel_matrix,
    channel_validate,
    make_channel,
)

__all__ = [
    "BELL_LABELS",
    "ChannelKind",
    "ChannelReport",
    "ErrorParams",
    "KrausChannel",
    "apply_channel",
    "apply_channel_matrix",
    "bell_decomposition",
    "bell_state",
    "canonical_bell_label",
    "channel_validate",
    "combined_error_bell",
    "combined_error_matrix",
    "combined_error_min_eigenvalue",
    "damping_probability",
    "dephasing_probability",
    "idle_channels",
    "make_channel",
    "one_sided_bell_error",
    "quasi_static_dephasing_probability",
    "storage_decay",
]
