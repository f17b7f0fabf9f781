"""Supervised single-channel source separation by complex matrix factorization."""

from ._core import (
    BasisSet,
    DataError,
    StftConfig,
    cmf_factorize,
    dft,
    evaluate,
    istft,
    load_bases,
    nmf,
    read_wav,
    save_bases,
    separate,
    split_complex,
    stft,
    train_bases,
    write_wav,
)

__all__ = [
    "BasisSet",
    "DataError",
    "StftConfig",
    "cmf_factorize",
    "dft",
    "evaluate",
    "istft",
    "load_bases",
    "nmf",
    "read_wav",
    "save_bases",
    "separate",
    "split_complex",
    "stft",
    "train_bases",
    "write_wav",
]
