"""Python bindings for the ddk C++ core. Grids are float64 arrays of shape (W, H)."""

from ._ddk import (
    ConvRestorer,
    ProcessConfig,
    blur,
    corrupt,
    dct2,
    heat_eigenvalues,
    hf_energy,
    idct2,
    make_synthetic_dataset,
    noising,
    read_grid,
    rmse,
    run_cli,
    sample,
    sample_oracle,
    train,
    write_grid,
)

__all__ = [
    "ConvRestorer",
    "ProcessConfig",
    "blur",
    "corrupt",
    "dct2",
    "heat_eigenvalues",
    "hf_energy",
    "idct2",
    "make_synthetic_dataset",
    "noising",
    "read_grid",
    "rmse",
    "run_cli",
    "sample",
    "sample_oracle",
    "train",
    "write_grid",
]
