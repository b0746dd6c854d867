"""Python bindings for the dynamic-domain semi-Lagrangian solver."""

from ._core import (
    ConfigError,
    DomainPolicy,
    FieldCase,
    FieldKind,
    InitialKind,
    IntegratorKind,
    NumericalError,
    Reconstruction,
    SigmaKind,
    SigmaSpec,
    SimulationConfig,
    coarsen_path,
    config_hash,
    config_text,
    initial_density_landau,
    initial_density_two_stream,
    initial_field,
    load_config,
    monte_carlo,
    parse_config,
    read_snapshot,
    run,
    sample_path,
    solve_field,
    write_snapshot,
)

__all__ = [name for name in dir() if not name.startswith("_")]
