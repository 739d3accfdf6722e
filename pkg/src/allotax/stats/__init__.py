from ._adf import GENERATORS, AdfResult, adf_test, random_walk, register_generator, rejection_rate, schwert_maxlag, white_noise
from ._bootstrap import BootstrapResult, bootstrap_means
from ._ks import KsResult, ks_two_sample
from ._mackinnon import mackinnon_crit, mackinnon_p

__all__ = [
    "GENERATORS",
    "AdfResult",
    "BootstrapResult",
    "KsResult",
    "adf_test",
    "bootstrap_means",
    "ks_two_sample",
    "mackinnon_crit",
    "mackinnon_p",
    "random_walk",
    "register_generator",
    "rejection_rate",
    "schwert_maxlag",
    "white_noise",
]
