"""POD-Galerkin reduced-order models for 2D incompressible flow with time-dependent inflow."""

from ._romns import (
    ArtifactError,
    Case,
    RomnsError,
    SimConfig,
    UsageError,
    parse_report,
    read_container,
    run_all,
    run_stage,
    stage_names,
)

__all__ = [
    "ArtifactError",
    "Case",
    "RomnsError",
    "SimConfig",
    "UsageError",
    "parse_report",
    "read_container",
    "run_all",
    "run_stage",
    "stage_names",
]
