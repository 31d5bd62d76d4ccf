"""Ion-cavity single photon source simulator (C++ core bindings)."""

from ._core import (  # noqa: F401
    ConfigError,
    NumericsError,
    SchemeConfig,
    CorrelationGrid,
    CoincidenceDensity,
    __version__,
    analyze_hom_files,
    canonical_config,
    coincidence_density,
    config_from_file,
    config_from_toml,
    correlations,
    dd_paper_config,
    dipole_weight,
    emission_probability,
    hbt_g2_zero,
    lande_g,
    pulse_envelope,
    run_scheme,
    sd_paper_config,
    synth_to_file,
    tau_histogram,
    visibility,
    windowed_visibility_curve,
    zeeman_shift,
)
