"""Meshless 2D acoustic wave simulation on scattered nodes."""

try:
    from meshwave._core import (  # type: ignore[import-not-found]
        IoError,
        NumericalError,
        ScenarioConfig,
        ValidationError,
        convergence_study,
        generate_nodes,
        laplacian_weights,
        load_config,
        parse_config,
        ricker,
        run,
        serialize_config,
    )
except ImportError:  # development layout: extension sits next to the package
    from _core import (  # type: ignore[import-not-found]
        IoError,
        NumericalError,
        ScenarioConfig,
        ValidationError,
        convergence_study,
        generate_nodes,
        laplacian_weights,
        load_config,
        parse_config,
        ricker,
        run,
        serialize_config,
    )

__all__ = [
    "IoError",
    "NumericalError",
    "ScenarioConfig",
    "ValidationError",
    "convergence_study",
    "generate_nodes",
    "laplacian_weights",
    "load_config",
    "parse_config",
    "ricker",
    "run",
    "serialize_config",
]
